#pragma once

#include <cstddef>
#include <sstream>
#include <string>
#include <vector>

#include "plumbcat/exact_linalg.hpp"

namespace plumbcat {

/// Z^free_rank (+) Z/d_1 (+) ... with d_1 | d_2 | ..., every d_i >= 2.
/// Generators are ordered free first, then torsion by ascending divisor.
struct FgAb {
  std::size_t free_rank = 0;
  Vec torsion;

  static FgAb free(std::size_t n) { return FgAb{n, {}}; }

  std::size_t ngens() const { return free_rank + torsion.size(); }
  bool trivial() const { return ngens() == 0; }
  /// Order of generator j: 0 for free generators.
  Int order(std::size_t j) const { return j < free_rank ? Int(0) : torsion[j - free_rank]; }
  Int torsion_order() const {
    Int o = 1;
    for (const auto &d : torsion) o *= d;
    return o;
  }

  std::string str() const {
    if (trivial()) return "0";
    std::ostringstream os;
    bool first = true;
    if (free_rank) {
      os << "Z";
      if (free_rank > 1) os << "^" << free_rank;
      first = false;
    }
    for (const auto &d : torsion) {
      if (!first) os << " (+) ";
      os << "Z/" << d.get_str();
      first = false;
    }
    return os.str();
  }

  friend bool operator==(const FgAb &a, const FgAb &b) {
    return a.free_rank == b.free_rank && a.torsion == b.torsion;
  }
};

/// Canonical representative: torsion coordinates reduced into [0, d).
inline Vec reduce(const FgAb &G, Vec x) {
  if (x.size() != G.ngens()) throw InputError("element has wrong number of coordinates for " + G.str());
  for (std::size_t j = 0; j < G.torsion.size(); ++j) {
    Int &c = x[G.free_rank + j];
    mpz_fdiv_r(c.get_mpz_t(), c.get_mpz_t(), G.torsion[j].get_mpz_t());
  }
  return x;
}

inline bool is_zero(const FgAb &G, const Vec &x) {
  for (const auto &c : reduce(G, x))
    if (c != 0) return false;
  return true;
}

/// Columns d_j e_{free+j}: generators of the relation lattice.
inline IntMatrix relation_matrix(const FgAb &G) {
  IntMatrix E(G.ngens(), G.torsion.size());
  for (std::size_t j = 0; j < G.torsion.size(); ++j) E(G.free_rank + j, j) = G.torsion[j];
  return E;
}

/// Check that torsion entries lie in [0, d).
inline bool is_reduced(const FgAb &G, const Vec &x) {
  if (x.size() != G.ngens()) return false;
  for (std::size_t j = 0; j < G.torsion.size(); ++j) {
    const Int &c = x[G.free_rank + j];
    if (c < 0 || c >= G.torsion[j]) return false;
  }
  return true;
}

/// Graded group in degrees 0..n-1 with generator labels.
struct GradedFgAb {
  std::vector<FgAb> components;
  std::vector<std::vector<std::string>> labels;

  std::size_t degrees() const { return components.size(); }
  const FgAb &operator[](std::size_t k) const { return components.at(k); }
  std::string label(std::size_t k, std::size_t j) const {
    if (k < labels.size() && j < labels[k].size()) return labels[k][j];
    return "g" + std::to_string(k) + "_" + std::to_string(j + 1);
  }
  friend bool operator==(const GradedFgAb &a, const GradedFgAb &b) { return a.components == b.components; }
};

// ---------------------------------------------------------------------------
// Subquotients of lattices

/// N/D for lattices D <= N <= Z^n, in canonical form.
struct Subquotient {
  FgAb group;
  IntMatrix inclusion;  // n x ngens: lattice representative of each canonical generator
  RatMatrix coords;     // ngens x n: canonical coordinates of points of N (before reduction)

  /// Canonical coordinates of a point of N; throws if x is not in N.
  Vec coordinates(const Vec &x) const {
    RVec r = coords * to_rat(x);
    Vec c(r.size());
    for (std::size_t i = 0; i < r.size(); ++i) {
      if (r[i].get_den() != 1) throw InvariantViolation("vector is not in the numerator lattice");
      c[i] = r[i].get_num();
    }
    return reduce(group, c);
  }
};

/// Canonical form of span(numerator)/span(denominator). Requires span(denominator)
/// inside span(numerator); columns of both matrices are lattice generators in Z^n.
inline Subquotient subquotient(const IntMatrix &numerator, const IntMatrix &denominator) {
  const std::size_t n = numerator.rows();
  if (denominator.rows() != n) throw InputError("subquotient ambient mismatch");

  // Basis B of span(N): with U N V = D, span(N) = span(U^{-1} D).
  SnfResult sn = smith_normal_form(numerator);
  const std::size_t k = sn.rank;
  IntMatrix Uinv = unimodular_inverse(sn.U);
  IntMatrix B(n, k);
  for (std::size_t j = 0; j < k; ++j)
    for (std::size_t i = 0; i < n; ++i) B(i, j) = Uinv(i, j) * sn.D(j, j);
  // Left inverse on span(N): c_i = (U x)_i / d_i.
  RatMatrix Binv(k, n);
  for (std::size_t i = 0; i < k; ++i)
    for (std::size_t j = 0; j < n; ++j) Binv(i, j) = Rat(sn.U(i, j), sn.D(i, i));
  for (std::size_t i = 0; i < k; ++i)
    for (std::size_t j = 0; j < n; ++j) Binv(i, j).canonicalize();

  // Denominator in B-coordinates, then its SNF.
  IntMatrix C = to_int(Binv * to_rat(denominator));
  if (!(to_rat(B) * to_rat(C) == to_rat(denominator)))
    throw InvariantViolation("denominator lattice is not contained in numerator lattice");
  SnfResult sc = smith_normal_form(C);
  IntMatrix Up_inv = unimodular_inverse(sc.U);

  std::vector<std::size_t> order;
  Subquotient q;
  for (std::size_t i = sc.rank; i < k; ++i) order.push_back(i);
  q.group.free_rank = order.size();
  for (std::size_t i = 0; i < sc.rank; ++i)
    if (sc.D(i, i) != 1) {
      order.push_back(i);
      q.group.torsion.push_back(sc.D(i, i));
    }

  IntMatrix BU = B * Up_inv;
  RatMatrix UB = to_rat(sc.U) * Binv;
  q.inclusion = IntMatrix(n, order.size());
  q.coords = RatMatrix(order.size(), n);
  for (std::size_t g = 0; g < order.size(); ++g) {
    for (std::size_t i = 0; i < n; ++i) q.inclusion(i, g) = BU(i, order[g]);
    for (std::size_t j = 0; j < n; ++j) q.coords(g, j) = UB(order[g], j);
  }
  return q;
}

/// Z^n / row-span(presentation).
inline FgAb normalize_group(const IntMatrix &presentation, std::size_t ambient_rank) {
  if (presentation.cols() != ambient_rank) throw InputError("presentation width differs from ambient rank");
  SnfResult s = smith_normal_form(presentation);
  FgAb G;
  G.free_rank = ambient_rank - s.rank;
  for (std::size_t i = 0; i < s.rank; ++i)
    if (s.D(i, i) != 1) G.torsion.push_back(s.D(i, i));
  return G;
}

/// Points x of the source lattice with F x in span(target_rel); columns generate the lattice.
inline IntMatrix preimage_lattice(const IntMatrix &F, const IntMatrix &target_rel) {
  const std::size_t n = F.cols();
  IntMatrix negrel(target_rel.rows(), target_rel.cols());
  for (std::size_t i = 0; i < target_rel.rows(); ++i)
    for (std::size_t j = 0; j < target_rel.cols(); ++j) negrel(i, j) = -target_rel(i, j);
  std::vector<Vec> ker = int_kernel_basis(hstack(F, negrel));
  IntMatrix K(n, ker.size());
  for (std::size_t j = 0; j < ker.size(); ++j)
    for (std::size_t i = 0; i < n; ++i) K(i, j) = ker[j][i];
  return K;
}

/// Kernel of the lattice map F : Z^n/src_rel -> Z^m/tgt_rel.
inline Subquotient kernel_subquotient(const IntMatrix &F, const IntMatrix &src_rel, const IntMatrix &tgt_rel) {
  return subquotient(hstack(preimage_lattice(F, tgt_rel), src_rel), src_rel);
}

// ---------------------------------------------------------------------------
// Homomorphisms

struct Hom {
  FgAb source, target;
  IntMatrix matrix;  // target.ngens x source.ngens

  Vec apply(const Vec &x) const { return reduce(target, matrix * x); }
  Vec image_of(std::size_t j) const { return reduce(target, matrix.col(j)); }
};

inline Hom make_hom(const FgAb &source, const FgAb &target, IntMatrix m) {
  if (m.rows() != target.ngens() || m.cols() != source.ngens())
    throw InputError("hom matrix is " + std::to_string(m.rows()) + "x" + std::to_string(m.cols()) + ", expected " +
                     std::to_string(target.ngens()) + "x" + std::to_string(source.ngens()));
  for (std::size_t j = 0; j < m.cols(); ++j) m.set_col(j, reduce(target, m.col(j)));
  return Hom{source, target, std::move(m)};
}

inline Hom identity_hom(const FgAb &G) { return Hom{G, G, IntMatrix::identity(G.ngens())}; }

inline Hom zero_hom(const FgAb &s, const FgAb &t) { return Hom{s, t, IntMatrix(t.ngens(), s.ngens())}; }

/// g after f.
inline Hom compose(const Hom &g, const Hom &f) {
  if (!(f.target == g.source)) throw InputError("hom composition: groups do not match");
  return make_hom(f.source, g.target, g.matrix * f.matrix);
}

/// Diagnostics; empty means the map is well defined.
inline std::vector<std::string> validate_hom(const Hom &f) {
  std::vector<std::string> out;
  if (f.matrix.rows() != f.target.ngens() || f.matrix.cols() != f.source.ngens()) {
    out.push_back("matrix shape does not match source/target");
    return out;
  }
  for (std::size_t j = f.source.free_rank; j < f.source.ngens(); ++j) {
    const Int d = f.source.order(j);
    Vec img = f.matrix.col(j);
    for (auto &c : img) c *= d;
    if (!is_zero(f.target, img))
      out.push_back("source generator " + std::to_string(j + 1) + " of order " + d.get_str() +
                    " maps to an element not annihilated by " + d.get_str());
  }
  return out;
}

struct SubQuot {
  Subquotient kernel, image, cokernel;
  Hom kernel_inclusion, image_inclusion, cokernel_projection;
  Hom corestriction;  // source -> image
};

inline SubQuot sub_quot(const Hom &f) {
  const IntMatrix Es = relation_matrix(f.source), Et = relation_matrix(f.target);
  const IntMatrix &F = f.matrix;
  SubQuot r;
  r.kernel = kernel_subquotient(F, Es, Et);
  r.image = subquotient(hstack(F, Et), Et);
  r.cokernel = subquotient(IntMatrix::identity(f.target.ngens()), hstack(F, Et));

  r.kernel_inclusion = make_hom(r.kernel.group, f.source, r.kernel.inclusion);
  r.image_inclusion = make_hom(r.image.group, f.target, r.image.inclusion);
  r.cokernel_projection = make_hom(f.target, r.cokernel.group, to_int(r.cokernel.coords));
  IntMatrix co(r.image.group.ngens(), f.source.ngens());
  for (std::size_t j = 0; j < f.source.ngens(); ++j) {
    Vec y = F.col(j);
    co.set_col(j, r.image.coordinates(y));
  }
  r.corestriction = make_hom(f.source, r.image.group, co);
  return r;
}

inline bool is_isomorphism(const Hom &f) {
  SubQuot s = sub_quot(f);
  return s.kernel.group.trivial() && s.cokernel.group.trivial();
}

/// Solves f(x) = y; returns some preimage or nullopt.
inline std::optional<Vec> preimage(const Hom &f, const Vec &y) {
  IntMatrix A = hstack(f.matrix, relation_matrix(f.target));
  auto sol = int_solve(A, y);
  if (!sol) return std::nullopt;
  Vec x(sol->x.begin(), sol->x.begin() + f.source.ngens());
  return reduce(f.source, x);
}

// ---------------------------------------------------------------------------
// Pairings

/// Bilinear map left (x) right -> target given on generators.
struct Pairing {
  FgAb left, right, target;
  std::vector<std::vector<Vec>> table;  // [i][j] = image of (left gen i, right gen j)
  int k = 0, l = 0;

  static Pairing zero(const FgAb &left, const FgAb &right, const FgAb &target, int k = 0, int l = 0) {
    Pairing p{left, right, target, {}, k, l};
    p.table.assign(left.ngens(), std::vector<Vec>(right.ngens(), Vec(target.ngens())));
    return p;
  }

  Vec apply(const Vec &x, const Vec &y) const {
    Vec out(target.ngens());
    for (std::size_t i = 0; i < x.size(); ++i) {
      if (x[i] == 0) continue;
      for (std::size_t j = 0; j < y.size(); ++j) {
        if (y[j] == 0) continue;
        Int s = x[i] * y[j];
        const Vec &e = table[i][j];
        for (std::size_t t = 0; t < out.size(); ++t) out[t] += s * e[t];
      }
    }
    return reduce(target, out);
  }

  friend bool operator==(const Pairing &a, const Pairing &b) {
    return a.left == b.left && a.right == b.right && a.target == b.target && a.table == b.table;
  }
};

inline std::vector<std::string> validate_pairing(const Pairing &B) {
  std::vector<std::string> out;
  if (B.table.size() != B.left.ngens()) {
    out.push_back("pairing table has " + std::to_string(B.table.size()) + " rows, expected " +
                  std::to_string(B.left.ngens()));
    return out;
  }
  for (std::size_t i = 0; i < B.table.size(); ++i) {
    if (B.table[i].size() != B.right.ngens()) {
      out.push_back("pairing table row " + std::to_string(i + 1) + " has wrong length");
      return out;
    }
    for (std::size_t j = 0; j < B.table[i].size(); ++j)
      if (B.table[i][j].size() != B.target.ngens()) {
        out.push_back("pairing entry (" + std::to_string(i + 1) + "," + std::to_string(j + 1) +
                      ") has wrong dimension");
        return out;
      }
  }
  auto annihilated = [&](const Int &d, const Vec &e) {
    Vec s = e;
    for (auto &c : s) c *= d;
    return is_zero(B.target, s);
  };
  for (std::size_t i = 0; i < B.left.ngens(); ++i)
    for (std::size_t j = 0; j < B.right.ngens(); ++j) {
      const Vec &e = B.table[i][j];
      Int di = B.left.order(i), dj = B.right.order(j);
      if (di != 0 && !annihilated(di, e))
        out.push_back("entry (" + std::to_string(i + 1) + "," + std::to_string(j + 1) + ") is not annihilated by the order " +
                      di.get_str() + " of left generator " + std::to_string(i + 1));
      if (dj != 0 && !annihilated(dj, e))
        out.push_back("entry (" + std::to_string(i + 1) + "," + std::to_string(j + 1) + ") is not annihilated by the order " +
                      dj.get_str() + " of right generator " + std::to_string(j + 1));
    }
  return out;
}

/// Checks x.y = (-1)^{(dim-k)(dim-l)} y.x on generators, for ab : A(x)B and ba : B(x)A.
inline std::vector<std::string> check_graded_commutativity(const Pairing &ab, const Pairing &ba, int dim) {
  std::vector<std::string> out;
  if (!(ab.left == ba.right && ab.right == ba.left && ab.target == ba.target)) {
    out.push_back("graded commutativity: tables have incompatible shapes");
    return out;
  }
  const int sign = (((dim - ab.k) * (dim - ab.l)) % 2 == 0) ? 1 : -1;
  for (std::size_t i = 0; i < ab.left.ngens(); ++i)
    for (std::size_t j = 0; j < ab.right.ngens(); ++j) {
      Vec rhs = ba.table[j][i];
      for (auto &c : rhs) c *= sign;
      Vec diff = ab.table[i][j];
      for (std::size_t t = 0; t < diff.size(); ++t) diff[t] -= rhs[t];
      if (!is_zero(ab.target, diff))
        out.push_back("graded commutativity fails on generators (" + std::to_string(i + 1) + "," +
                      std::to_string(j + 1) + ") in degrees (" + std::to_string(ab.k) + "," + std::to_string(ab.l) + ")");
    }
  return out;
}

struct PairingRank {
  std::size_t rank = 0;
  bool nondegenerate = false;
};

/// Rank over Q after composing the target with the weights epsilon on its free part.
inline PairingRank pairing_rank_q(const Pairing &B, const Vec &epsilon) {
  if (epsilon.size() != B.target.free_rank) throw InputError("epsilon weights do not match target free rank");
  RatMatrix M(B.left.free_rank, B.right.free_rank);
  for (std::size_t i = 0; i < B.left.free_rank; ++i)
    for (std::size_t j = 0; j < B.right.free_rank; ++j) {
      Int s = 0;
      for (std::size_t t = 0; t < epsilon.size(); ++t) s += epsilon[t] * B.table[i][j][t];
      M(i, j) = Rat(s);
    }
  PairingRank r;
  r.rank = rank_q(M);
  r.nondegenerate = r.rank == B.left.free_rank && r.rank == B.right.free_rank;
  return r;
}

inline Vec ones(std::size_t n) { return Vec(n, Int(1)); }

}  // namespace plumbcat
