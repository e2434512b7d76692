#pragma once

#include <cstdint>
#include <random>
#include <string>
#include <vector>

#include "plumbcat/exact_linalg.hpp"
#include "plumbcat/homology.hpp"
#include "plumbcat/l3cat.hpp"
#include "plumbcat/seifert_graph.hpp"

#ifndef PLUMBCAT_DATA
#define PLUMBCAT_DATA "data"
#endif

namespace plumbcat::testing {

using Rng = std::mt19937_64;

inline std::string data_path(const std::string &name) { return std::string(PLUMBCAT_DATA) + "/" + name; }

inline long uniform(Rng &rng, long lo, long hi) { return std::uniform_int_distribution<long>(lo, hi)(rng); }

inline IntMatrix random_matrix(Rng &rng, std::size_t r, std::size_t c, long lo = -9, long hi = 9) {
  IntMatrix m(r, c);
  for (std::size_t i = 0; i < r; ++i)
    for (std::size_t j = 0; j < c; ++j) m(i, j) = uniform(rng, lo, hi);
  return m;
}

/// Product of random elementary operations and sign flips.
inline IntMatrix random_unimodular(Rng &rng, std::size_t n, int steps = 12) {
  IntMatrix P = IntMatrix::identity(n);
  if (n < 2) {
    if (n == 1 && uniform(rng, 0, 1)) P(0, 0) = -1;
    return P;
  }
  for (int s = 0; s < steps; ++s) {
    std::size_t a = uniform(rng, 0, n - 1), b = uniform(rng, 0, n - 2);
    if (b >= a) ++b;
    switch (uniform(rng, 0, 2)) {
      case 0:
        P.add_row(a, b, Int(uniform(rng, -2, 2)));
        break;
      case 1:
        P.swap_rows(a, b);
        break;
      default:
        P.negate_row(a);
    }
  }
  return P;
}

inline RatMatrix random_symmetric(Rng &rng, std::size_t n) {
  RatMatrix A(n, n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i; j < n; ++j) {
      Rat x(uniform(rng, -6, 6), uniform(rng, 1, 3));
      x.canonicalize();
      A(i, j) = A(j, i) = x;
    }
  // Occasionally force zero diagonals to exercise hyperbolic pivots.
  if (uniform(rng, 0, 3) == 0)
    for (std::size_t i = 0; i < n; ++i) A(i, i) = 0;
  return A;
}

/// Tree of up to max_vertices vertices; genus <= max_genus, cone orders <= 9.
inline SeifertGraph random_tree_graph(Rng &rng, std::size_t max_vertices = 4, long max_genus = 1) {
  SeifertGraph g;
  g.name = "R";
  const std::size_t nv = uniform(rng, 1, static_cast<long>(max_vertices));
  for (std::size_t v = 0; v < nv; ++v) {
    Vertex x;
    x.name = "v" + std::to_string(v + 1);
    x.inv.genus = uniform(rng, 0, max_genus);
    const long ncones = uniform(rng, 0, 3);
    for (long c = 0; c < ncones; ++c) {
      Int a = uniform(rng, 1, 9), b;
      do b = uniform(rng, -12, 12);
      while (b == 0 || gcd(a, b) != 1);
      x.inv.cones.push_back({a, b});
    }
    if (x.inv.cones.empty()) x.inv.cones.push_back({1, uniform(rng, -3, 3)});
    g.vertices.push_back(x);
    if (v > 0) g.edges.emplace_back(uniform(rng, 0, v - 1), v);
  }
  return g;
}

/// Boundary homology of a torsion-free plumbing with the given genera.
inline BoundaryHomology free_homology(const std::vector<std::size_t> &genus) {
  BoundaryHomology h;
  h.genus = genus;
  for (std::size_t v = 0; v < genus.size(); ++v)
    for (std::size_t j = 0; j < 2 * genus[v]; ++j) {
      h.lambda_basis.push_back(alpha_label(v, j));
      h.theta_basis.push_back(theta_label(v, j));
    }
  const std::size_t n = h.lambda_basis.size();
  h.graded.components = {FgAb::free(1), FgAb::free(n), FgAb::free(n), FgAb::free(1)};
  h.graded.labels = {{"pt"}, h.lambda_basis, h.theta_basis, {"mu"}};
  return h;
}

inline L3Object random_free_object(Rng &rng, long max_vertices = 2, long max_genus = 1) {
  std::vector<std::size_t> genus(uniform(rng, 1, max_vertices));
  for (auto &g : genus) g = uniform(rng, 0, max_genus);
  return ring_object(free_homology(genus));
}

/// Rows d.. of U with U B V = SNF(B): a surjection whose kernel is the saturated span of B.
inline IntMatrix quotient_map(const IntMatrix &B) {
  SnfResult s = smith_normal_form(B);
  for (std::size_t i = 0; i < s.rank; ++i)
    if (s.D(i, i) != 1) throw InvariantViolation("lattice is not saturated");
  return submatrix(s.U, s.rank, s.U.rows(), 0, s.U.cols());
}

inline IntMatrix columns(std::size_t rows, const std::vector<Vec> &cols) { return from_columns(rows, cols); }

/// A random morphism H -> H' between torsion-free objects. R_2 is the kernel K of
/// a random integer matrix, R_3 its annihilator under x.y - x'.y', and L_k the quotients.
inline L3Morphism random_free_morphism(Rng &rng, const L3Object &H, const L3Object &Hp) {
  L3Morphism f;
  f.source = H;
  f.target = Hp;
  const std::size_t n = H.H[1].ngens(), np = Hp.H[1].ngens(), N = n + np;

  std::vector<Vec> K1;
  if (N > 0) {
    const std::size_t r = uniform(rng, 0, static_cast<long>(N));
    K1 = int_kernel_basis(random_matrix(rng, r, N, -3, 3));
  }
  IntMatrix B1 = columns(N, K1);
  // Annihilator of K1 in H2 (+) H2' under w(b,c) - w'(b',c').
  const Pairing &w = *H.table(1, 2), &wp = *Hp.table(1, 2);
  IntMatrix G(K1.size(), N);
  for (std::size_t r = 0; r < K1.size(); ++r) {
    for (std::size_t c = 0; c < n; ++c)
      for (std::size_t b = 0; b < n; ++b) G(r, c) += K1[r][b] * w.table[b][c][0];
    for (std::size_t c = 0; c < np; ++c)
      for (std::size_t b = 0; b < np; ++b) G(r, n + c) -= K1[r][n + b] * wp.table[b][c][0];
  }
  std::vector<Vec> K2 = K1.empty() ? std::vector<Vec>{} : int_kernel_basis(G);
  if (K1.empty())
    for (std::size_t j = 0; j < N; ++j) K2.push_back(unit_vector(N, j));
  IntMatrix B2 = columns(N, K2);

  auto degree_maps = [&](const IntMatrix &j, std::size_t k) {
    const std::size_t rows = j.rows();
    IntMatrix a = submatrix(j, 0, rows, 0, n), b = submatrix(j, 0, rows, n, N);
    for (std::size_t r = 0; r < rows; ++r)
      for (std::size_t c = 0; c < np; ++c) b(r, c) = -b(r, c);
    f.L.components[k] = FgAb::free(rows);
    f.i[k] = make_hom(H.H[k], f.L[k], a);
    f.ip[k] = make_hom(Hp.H[k], f.L[k], b);
  };
  f.L.components.assign(5, FgAb{});
  f.L.labels.resize(5);
  f.i.resize(4);
  f.ip.resize(4);
  for (int k : {0, 3}) {
    f.L.components[k] = FgAb::free(1);
    f.i[k] = make_hom(H.H[k], f.L[k], IntMatrix{{1}});
    f.ip[k] = make_hom(Hp.H[k], f.L[k], IntMatrix{{1}});
  }
  degree_maps(K1.empty() ? IntMatrix::identity(N) : quotient_map(B1), 1);
  degree_maps(K2.empty() ? IntMatrix::identity(N) : quotient_map(B2), 2);
  f.R.resize(5);
  for (int k = 1; k <= 4; ++k) set_r_group(f, k);
  complete_pairings(f);
  return f;
}

}  // namespace plumbcat::testing
