#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "plumbcat/exact_linalg.hpp"
#include "plumbcat/fgab.hpp"
#include "plumbcat/l3cat.hpp"
#include "plumbcat/seifert_graph.hpp"

namespace plumbcat {

/// H_*(M(Gamma)) with the lambda basis of free H_1 and the theta basis of H_2.
struct BoundaryHomology {
  GradedFgAb graded;
  std::vector<std::string> lambda_basis;
  std::vector<std::string> theta_basis;
  std::vector<std::size_t> genus;  // per graph vertex
  bool corank_adjusted = false;
  std::vector<std::string> flags;

  std::size_t free_rank() const { return lambda_basis.size(); }
};

inline std::string alpha_label(std::size_t v, std::size_t j) {
  return "alpha[" + std::to_string(v + 1) + "," + std::to_string(j + 1) + "]";
}

inline std::string theta_label(std::size_t v, std::size_t j) {
  return "theta[" + std::to_string(v + 1) + "," + std::to_string(j + 1) + "]";
}

/// Standard symplectic form on the lambda basis: alpha_{v,2k-1}.alpha_{v,2k} = 1.
inline Int symplectic(const std::vector<std::size_t> &genus, std::size_t a, std::size_t b) {
  std::size_t off = 0;
  for (std::size_t g : genus) {
    const std::size_t end = off + 2 * g;
    if (a >= off && a < end) {
      if (b < off || b >= end || (a - off) / 2 != (b - off) / 2) return 0;
      if ((a - off) % 2 == 0 && b == a + 1) return 1;
      if ((b - off) % 2 == 0 && a == b + 1) return -1;
      return 0;
    }
    off = end;
  }
  return 0;
}

inline BoundaryHomology boundary_homology(const SeifertGraph &g) {
  if (!g.is_tree()) throw InputError("homology requires a connected tree graph");
  BoundaryHomology h;
  std::size_t free = 0;
  for (std::size_t v = 0; v < g.size(); ++v) {
    const std::size_t gv = static_cast<std::size_t>(g.vertices[v].inv.genus);
    h.genus.push_back(gv);
    for (std::size_t j = 0; j < 2 * gv; ++j) {
      h.lambda_basis.push_back(alpha_label(v, j));
      h.theta_basis.push_back(theta_label(v, j));
    }
    free += 2 * gv;
  }
  IntegralTree t = resolve_integral(g);
  FgAb coker = normalize_group(t.matrix(), t.size());
  FgAb H1{free + coker.free_rank, coker.torsion};
  FgAb H2 = FgAb::free(free + coker.free_rank);
  if (coker.free_rank != 0) {
    h.corank_adjusted = true;
    h.flags.push_back("corank adjustment applied");
    for (std::size_t j = 0; j < coker.free_rank; ++j) {
      h.lambda_basis.push_back("kappa[" + std::to_string(j + 1) + "]");
      h.theta_basis.push_back("theta_kappa[" + std::to_string(j + 1) + "]");
    }
  }
  h.graded.components = {FgAb::free(1), H1, H2, FgAb::free(1)};
  std::vector<std::string> l1 = h.lambda_basis;
  for (std::size_t j = 0; j < H1.torsion.size(); ++j) l1.push_back("tor[" + H1.torsion[j].get_str() + "]");
  h.graded.labels = {{"pt"}, l1, h.theta_basis, {"mu"}};
  return h;
}

/// |det A(Gamma)| * prod a_vi, or nullopt when A(Gamma) is singular.
inline std::optional<Int> torsion_order(const SeifertGraph &g) {
  Rat det = det_q(intersection_matrix(g));
  if (det == 0) return std::nullopt;
  Rat v = abs(det) * Rat(cone_order_product(g));
  if (v.get_den() != 1) throw InvariantViolation("torsion order " + v.get_str() + " is not an integer");
  return Int(v.get_num());
}

inline std::string render(const BoundaryHomology &h) {
  return "H1 = " + h.graded[1].str() + "; H2 = " + h.graded[2].str();
}

/// The L3 object of M(Gamma): unit tables, the symplectic duality H1 (x) H2 -> H0 and
/// its transpose. Products not determined by the graph come from extra or stay absent.
inline L3Object ring_object(const BoundaryHomology &h, const std::map<Degrees, Pairing> &extra = {}) {
  L3Object o;
  o.H = h.graded;
  o.mu = Vec{1};
  o.epsilon = Vec{1};
  const FgAb &H0 = o.H[0], &H1 = o.H[1], &H2 = o.H[2], &H3 = o.H[3];
  for (int k = 0; k <= 3; ++k) {
    Pairing u = unit_pairing(H3, o.mu, o.H[k], k);
    o.products[{3, k}] = u;
    if (k != 3) o.products[{k, 3}] = transpose_pairing(u, 3);
  }
  Pairing d = Pairing::zero(H1, H2, H0, 1, 2);
  const std::size_t n = h.free_rank();
  for (std::size_t a = 0; a < n; ++a)
    for (std::size_t b = 0; b < n; ++b) d.table[a][b] = Vec{symplectic(h.genus, a, b)};
  o.products[{1, 2}] = d;
  o.products[{2, 1}] = transpose_pairing(d, 3);

  for (const auto &[kl, p] : extra) {
    auto errs = validate_pairing(p);
    if (!errs.empty()) throw InputError("supplied product H" + std::to_string(kl.first) + " (x) H" +
                                        std::to_string(kl.second) + ": " + errs.front());
    o.products[kl] = p;
  }
  o.partial = !o.table(2, 2) && H2.ngens() > 0;
  return o;
}

inline L3Object ring_object(const SeifertGraph &g, const std::map<Degrees, Pairing> &extra = {}) {
  return ring_object(boundary_homology(g), extra);
}

}  // namespace plumbcat
