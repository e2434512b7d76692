#pragma once

#include <cstddef>
#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "plumbcat/exact_linalg.hpp"
#include "plumbcat/fgab.hpp"

namespace plumbcat {

using Degrees = std::pair<int, int>;

struct Report {
  std::vector<std::string> errors, notes;
  bool ok() const { return errors.empty(); }
  void error(std::string s) { errors.push_back(std::move(s)); }
  void note(std::string s) { notes.push_back(std::move(s)); }
  void merge(const std::vector<std::string> &es, const std::string &prefix) {
    for (const auto &e : es) errors.push_back(prefix + e);
  }
};

inline Vec unit_vector(std::size_t n, std::size_t j) {
  Vec e(n);
  e[j] = 1;
  return e;
}

inline Vec concat(const Vec &a, const Vec &b) {
  Vec c = a;
  c.insert(c.end(), b.begin(), b.end());
  return c;
}

inline std::string vec_str(const Vec &v) {
  std::string s = "(";
  for (std::size_t i = 0; i < v.size(); ++i) s += (i ? "," : "") + v[i].get_str();
  return s + ")";
}

/// Graded commutative ring H_0..H_3 with products H_k (x) H_l -> H_{k+l-3}.
struct L3Object {
  GradedFgAb H;
  std::map<Degrees, Pairing> products;
  Vec mu;
  Vec epsilon;
  bool partial = false;

  const Pairing *table(int k, int l) const {
    auto it = products.find({k, l});
    return it == products.end() ? nullptr : &it->second;
  }

  friend bool operator==(const L3Object &a, const L3Object &b) {
    return a.H == b.H && a.products == b.products && a.mu == b.mu && a.epsilon == b.epsilon;
  }
};

/// Table for the unit: mu . x = x (left factor H_3 with generator mu).
inline Pairing unit_pairing(const FgAb &H3, const Vec &mu, const FgAb &Hk, int k) {
  Pairing p = Pairing::zero(H3, Hk, Hk, 3, k);
  for (std::size_t a = 0; a < H3.ngens(); ++a)
    if (mu[a] != 0)
      for (std::size_t j = 0; j < Hk.ngens(); ++j) p.table[a][j] = reduce(Hk, unit_vector(Hk.ngens(), j));
  return p;
}

/// Transposed table with the graded commutativity sign for dimension dim.
inline Pairing transpose_pairing(const Pairing &p, int dim) {
  const int sign = (((dim - p.k) * (dim - p.l)) % 2 == 0) ? 1 : -1;
  Pairing t = Pairing::zero(p.right, p.left, p.target, p.l, p.k);
  for (std::size_t i = 0; i < p.left.ngens(); ++i)
    for (std::size_t j = 0; j < p.right.ngens(); ++j) {
      Vec e = p.table[i][j];
      for (auto &c : e) c *= sign;
      t.table[j][i] = reduce(p.target, e);
    }
  return t;
}

inline Report validate_object(const L3Object &H) {
  Report r;
  if (H.H.degrees() != 4) {
    r.error("object must have degrees 0..3");
    return r;
  }
  if (H.mu.size() != H.H[3].ngens()) r.error("unit mu has wrong dimension");
  if (H.epsilon.size() != H.H[0].free_rank) r.error("epsilon weights have wrong dimension");
  if (!r.ok()) return r;

  for (const auto &[kl, p] : H.products) {
    auto [k, l] = kl;
    std::string where = "product H" + std::to_string(k) + " (x) H" + std::to_string(l) + ": ";
    if (k < 0 || l < 0 || k > 3 || l > 3 || k + l < 3) {
      r.error(where + "degrees out of range");
      continue;
    }
    if (!(p.left == H.H[k]) || !(p.right == H.H[l]) || !(p.target == H.H[k + l - 3])) {
      r.error(where + "groups do not match the object");
      continue;
    }
    r.merge(validate_pairing(p), where);
  }
  if (!r.ok()) return r;

  for (const auto &[kl, p] : H.products) {
    auto [k, l] = kl;
    if (k > l) continue;
    const Pairing *q = H.table(l, k);
    if (!q) continue;
    r.merge(check_graded_commutativity(p, *q, 3), "");
  }

  for (int k = 0; k <= 3; ++k) {
    const Pairing *left = H.table(3, k);
    if (!left) {
      r.error("unit axiom: product H3 (x) H" + std::to_string(k) + " is missing");
      continue;
    }
    for (std::size_t j = 0; j < H.H[k].ngens(); ++j) {
      Vec e = unit_vector(H.H[k].ngens(), j);
      if (left->apply(H.mu, e) != reduce(H.H[k], e))
        r.error("unit axiom: mu . x != x for generator " + H.H.label(k, j) + " of H" + std::to_string(k));
      if (const Pairing *right = H.table(k, 3); right && right->apply(e, H.mu) != reduce(H.H[k], e))
        r.error("unit axiom: x . mu != x for generator " + H.H.label(k, j) + " of H" + std::to_string(k));
    }
  }

  for (int k = 0; k <= 3; ++k) {
    const Pairing *d = H.table(k, 3 - k);
    if (!d) {
      r.error("duality: product H" + std::to_string(k) + " (x) H" + std::to_string(3 - k) + " is missing");
      continue;
    }
    PairingRank pr = pairing_rank_q(*d, H.epsilon);
    if (!pr.nondegenerate)
      r.error("duality: H" + std::to_string(k) + " (x) H" + std::to_string(3 - k) + " -> Z has rank " +
              std::to_string(pr.rank) + " but free ranks are " + std::to_string(H.H[k].free_rank) + " and " +
              std::to_string(H.H[3 - k].free_rank));
  }
  return r;
}

// ---------------------------------------------------------------------------
// Morphisms

/// R_k with declared generators, ambient coordinates H_{k-1} (+) H'_{k-1}.
struct RGroup {
  IntMatrix gens;  // ambient x ngens, columns are generators
  FgAb group;
  std::vector<std::string> labels;
  Subquotient canon;      // the kernel in its own canonical form
  IntMatrix to_declared;  // declared coordinates of canonical generators

  /// Declared coordinates of an ambient kernel element.
  Vec coordinates(const Vec &x) const { return reduce(group, to_declared * canon.coordinates(x)); }
  Vec generator(std::size_t j) const { return gens.col(j); }
};

struct L3Morphism {
  L3Object source, target;
  GradedFgAb L;                      // degrees 0..4
  std::vector<Hom> i, ip;            // degrees 0..3
  std::vector<RGroup> R;             // index 1..4 used
  std::map<Degrees, Pairing> pairings;  // R_k (x) L_l -> L_{k+l-4}

  const Pairing *table(int k, int l) const {
    auto it = pairings.find({k, l});
    return it == pairings.end() ? nullptr : &it->second;
  }
  std::size_t h_dim(int k) const { return source.H[k].ngens(); }
};

namespace detail {

inline IntMatrix r_map(const L3Morphism &f, int k) {
  const Hom &a = f.i[k - 1], &b = f.ip[k - 1];
  IntMatrix nb(b.matrix.rows(), b.matrix.cols());
  for (std::size_t r = 0; r < nb.rows(); ++r)
    for (std::size_t c = 0; c < nb.cols(); ++c) nb(r, c) = -b.matrix(r, c);
  return hstack(a.matrix, nb);
}

inline IntMatrix r_ambient_rel(const L3Morphism &f, int k) {
  return block_diag(relation_matrix(f.source.H[k - 1]), relation_matrix(f.target.H[k - 1]));
}

}  // namespace detail

/// Ker(H_{k-1} (+) H'_{k-1} -> L_{k-1}, (x,x') -> i(x) - i'(x')).
inline Subquotient r_kernel(const L3Morphism &f, int k) {
  return kernel_subquotient(detail::r_map(f, k), detail::r_ambient_rel(f, k), relation_matrix(f.L[k - 1]));
}

/// Installs R_k. Declared generators (columns) must be a canonical basis of the
/// kernel: free generators then torsion generators of the kernel's divisor chain.
inline void set_r_group(L3Morphism &f, int k, std::optional<IntMatrix> declared = std::nullopt,
                        std::vector<std::string> labels = {}) {
  if (f.R.size() < 5) f.R.resize(5);
  RGroup g;
  g.canon = r_kernel(f, k);
  g.group = g.canon.group;
  const std::size_t n = g.canon.inclusion.rows();
  if (!declared) {
    g.gens = g.canon.inclusion;
    g.to_declared = IntMatrix::identity(g.group.ngens());
  } else {
    if (declared->rows() != n)
      throw InputError("R" + std::to_string(k) + ": generators need " + std::to_string(n) + " coordinates");
    if (declared->cols() != g.group.ngens())
      throw InputError("R" + std::to_string(k) + " is " + g.group.str() + " with " + std::to_string(g.group.ngens()) +
                       " generators, but " + std::to_string(declared->cols()) + " were declared");
    IntMatrix P(g.group.ngens(), declared->cols());
    for (std::size_t j = 0; j < declared->cols(); ++j) {
      Vec x = declared->col(j);
      Vec img = detail::r_map(f, k) * x;
      if (!is_zero(f.L[k - 1], img))
        throw InputError("R" + std::to_string(k) + ": declared generator " + std::to_string(j + 1) +
                         " is not in Ker(i - i')");
      P.set_col(j, g.canon.coordinates(x));
    }
    Hom h = make_hom(g.group, g.group, P);
    if (!validate_hom(h).empty() || !is_isomorphism(h))
      throw InputError("R" + std::to_string(k) + ": declared generators do not form a canonical basis of " +
                       g.group.str());
    g.to_declared = IntMatrix(g.group.ngens(), g.group.ngens());
    for (std::size_t j = 0; j < g.group.ngens(); ++j) {
      auto pre = preimage(h, unit_vector(g.group.ngens(), j));
      if (!pre) throw InvariantViolation("isomorphism without preimage");
      g.to_declared.set_col(j, *pre);
    }
    g.gens = *declared;
  }
  if (labels.empty())
    for (std::size_t j = 0; j < g.group.ngens(); ++j)
      labels.push_back("r" + std::to_string(k) + "_" + std::to_string(j + 1));
  g.labels = std::move(labels);
  f.R[k] = std::move(g);
}

/// Components of an R_k generator: (del eta, del' eta).
inline std::pair<Vec, Vec> boundary_parts(const L3Morphism &f, int k, const Vec &eta) {
  const std::size_t n = f.source.H[k - 1].ngens();
  Vec a(eta.begin(), eta.begin() + n), b(eta.begin() + n, eta.end());
  return {reduce(f.source.H[k - 1], a), reduce(f.target.H[k - 1], b)};
}

inline Vec apply_product(const L3Object &H, int k, int l, const Vec &x, const Vec &y) {
  const Pairing *p = H.table(k, l);
  if (!p) throw InputError("product H" + std::to_string(k) + " (x) H" + std::to_string(l) + " is absent");
  return p->apply(x, y);
}

/// eta . l computed from the ladder on l = i(a) + i'(a'); nullopt when an object product is absent.
inline std::optional<Pairing> ladder_pairing(const L3Morphism &f, int k, int l) {
  const int m = k + l - 4;
  if (k < 1 || k > 4 || l < 0 || l > 3 || m < 0) return std::nullopt;
  if (!f.source.table(k - 1, l) || !f.target.table(k - 1, l)) return std::nullopt;
  const RGroup &R = f.R[k];
  Pairing p = Pairing::zero(R.group, f.L[l], f.L[m], k, l);
  IntMatrix A = hstack(hstack(f.i[l].matrix, f.ip[l].matrix), relation_matrix(f.L[l]));
  const std::size_t n = f.source.H[l].ngens(), np = f.target.H[l].ngens();
  for (std::size_t t = 0; t < f.L[l].ngens(); ++t) {
    auto sol = int_solve(A, unit_vector(f.L[l].ngens(), t));
    if (!sol) throw InputError("L" + std::to_string(l) + " is not the image of i + i'");
    Vec a(sol->x.begin(), sol->x.begin() + n), ap(sol->x.begin() + n, sol->x.begin() + n + np);
    for (std::size_t j = 0; j < R.group.ngens(); ++j) {
      auto [d, dp] = boundary_parts(f, k, R.generator(j));
      Vec v1 = f.i[m].apply(apply_product(f.source, k - 1, l, d, reduce(f.source.H[l], a)));
      Vec v2 = f.ip[m].apply(apply_product(f.target, k - 1, l, dp, reduce(f.target.H[l], ap)));
      for (std::size_t s = 0; s < v1.size(); ++s) v1[s] += v2[s];
      p.table[j][t] = reduce(f.L[m], v1);
    }
  }
  return p;
}

/// Fills every absent R_k (x) L_l table that the ladder determines.
inline void complete_pairings(L3Morphism &f) {
  for (int k = 1; k <= 4; ++k)
    for (int l = 0; l <= 3; ++l)
      if (k + l >= 4 && !f.table(k, l))
        if (auto p = ladder_pairing(f, k, l)) f.pairings[{k, l}] = std::move(*p);
}

inline Report validate_morphism(const L3Morphism &f) {
  Report r;
  if (f.source.H.degrees() != 4 || f.target.H.degrees() != 4 || f.L.degrees() != 5 || f.i.size() != 4 ||
      f.ip.size() != 4 || f.R.size() != 5) {
    r.error("morphism must have L in degrees 0..4 and maps i, i' in degrees 0..3");
    return r;
  }
  for (int k = 0; k <= 3; ++k) {
    const std::string d = std::to_string(k);
    if (!(f.i[k].source == f.source.H[k]) || !(f.i[k].target == f.L[k]))
      r.error("i" + d + " does not map H" + d + " to L" + d);
    if (!(f.ip[k].source == f.target.H[k]) || !(f.ip[k].target == f.L[k]))
      r.error("i'" + d + " does not map H'" + d + " to L" + d);
  }
  if (!r.ok()) return r;
  for (int k = 0; k <= 3; ++k) {
    r.merge(validate_hom(f.i[k]), "i" + std::to_string(k) + ": ");
    r.merge(validate_hom(f.ip[k]), "i'" + std::to_string(k) + ": ");
  }
  if (!f.L[4].trivial()) r.error("L4 must be 0 (it is the image of H4 (+) H'4 = 0)");
  if (!r.ok()) return r;

  for (int k = 0; k <= 3; ++k) {
    IntMatrix gens = hstack(hstack(f.i[k].matrix, f.ip[k].matrix), relation_matrix(f.L[k]));
    Subquotient q = subquotient(IntMatrix::identity(f.L[k].ngens()), gens);
    if (!q.group.trivial())
      r.error("L" + std::to_string(k) + " is not the image of i + i' (cokernel " + q.group.str() + ")");
  }

  for (int k = 1; k <= 4; ++k) {
    const RGroup &R = f.R[k];
    const std::string d = std::to_string(k);
    Subquotient canon = r_kernel(f, k);
    if (!(canon.group == R.group)) {
      r.error("R" + d + " should be " + canon.group.str() + " but is recorded as " + R.group.str());
      continue;
    }
    if (R.gens.cols() != R.group.ngens() || R.gens.rows() != canon.inclusion.rows()) {
      r.error("R" + d + " generator matrix has the wrong shape");
      continue;
    }
    IntMatrix P(R.group.ngens(), R.gens.cols());
    bool in_kernel = true;
    for (std::size_t j = 0; j < R.gens.cols(); ++j) {
      Vec x = R.gens.col(j);
      if (!is_zero(f.L[k - 1], detail::r_map(f, k) * x)) {
        r.error("R" + d + ": generator " + R.labels[j] + " is not in Ker(i - i')");
        in_kernel = false;
        continue;
      }
      P.set_col(j, canon.coordinates(x));
    }
    if (!in_kernel) continue;
    Hom h = make_hom(R.group, R.group, P);
    if (!validate_hom(h).empty() || !is_isomorphism(h))
      r.error("R" + d + ": generators do not form a canonical basis of " + R.group.str());
  }
  if (!r.ok()) return r;

  for (const auto &[kl, p] : f.pairings) {
    auto [k, l] = kl;
    const int m = k + l - 4;
    std::string where = "pairing R" + std::to_string(k) + " (x) L" + std::to_string(l) + ": ";
    if (k < 1 || k > 4 || l < 0 || l > 4 || m < 0 || m > 4) {
      r.error(where + "degrees out of range");
      continue;
    }
    if (!(p.left == f.R[k].group) || !(p.right == f.L[l]) || !(p.target == f.L[m])) {
      r.error(where + "groups do not match R and L");
      continue;
    }
    r.merge(validate_pairing(p), where);
  }
  if (!r.ok()) return r;

  // Unit nu: the sum of the free generators of R_4.
  Vec nu(f.R[4].group.ngens());
  for (std::size_t j = 0; j < f.R[4].group.free_rank; ++j) nu[j] = 1;
  bool unit_checked = false;
  for (int l = 0; l <= 3; ++l) {
    const Pairing *p = f.table(4, l);
    if (!p) continue;
    unit_checked = true;
    for (std::size_t t = 0; t < f.L[l].ngens(); ++t) {
      Vec e = unit_vector(f.L[l].ngens(), t);
      if (p->apply(nu, e) != reduce(f.L[l], e))
        r.error("unit: nu . x != x for generator " + f.L.label(l, t) + " of L" + std::to_string(l));
    }
  }
  if (!unit_checked) r.note("unit nu not checked: no R4 pairings present");

  // Ladder: i(del(eta).theta) = eta.i(theta), and the primed branch.
  for (const auto &[kl, p] : f.pairings) {
    auto [k1, l] = kl;
    const int k = k1 - 1, m = k1 + l - 4;
    if (l > 3) continue;
    const std::string d = "R" + std::to_string(k1) + " (x) L" + std::to_string(l);
    const Pairing *ps = f.source.table(k, l), *pt = f.target.table(k, l);
    if (!ps || !pt) {
      r.note("ladder for " + d + " skipped: product H" + std::to_string(k) + " (x) H" + std::to_string(l) + " is absent");
      continue;
    }
    const RGroup &R = f.R[k1];
    for (std::size_t j = 0; j < R.group.ngens(); ++j) {
      auto [del, delp] = boundary_parts(f, k1, R.generator(j));
      Vec ej = unit_vector(R.group.ngens(), j);
      for (std::size_t t = 0; t < f.source.H[l].ngens(); ++t) {
        Vec th = unit_vector(f.source.H[l].ngens(), t);
        Vec lhs = f.i[m].apply(ps->apply(del, th));
        Vec rhs = p.apply(ej, f.i[l].apply(th));
        if (lhs != rhs)
          r.error("ladder (unprimed) fails for " + d + " at " + R.labels[j] + " and " + f.source.H.label(l, t) +
                  ": i(del eta . theta) = " + vec_str(lhs) + ", eta . i(theta) = " + vec_str(rhs));
      }
      for (std::size_t t = 0; t < f.target.H[l].ngens(); ++t) {
        Vec th = unit_vector(f.target.H[l].ngens(), t);
        Vec lhs = f.ip[m].apply(pt->apply(delp, th));
        Vec rhs = p.apply(ej, f.ip[l].apply(th));
        if (lhs != rhs)
          r.error("ladder (primed) fails for " + d + " at " + R.labels[j] + " and " + f.target.H.label(l, t) +
                  ": i'(del' eta . theta') = " + vec_str(lhs) + ", eta . i'(theta') = " + vec_str(rhs));
      }
    }
  }

  Vec eps = ones(f.L[0].free_rank);
  for (int k = 1; k <= 4; ++k) {
    const Pairing *p = f.table(k, 4 - k);
    const std::string d = "R" + std::to_string(k) + " (x) L" + std::to_string(4 - k);
    if (!p) {
      r.note("duality for " + d + " skipped: table absent");
      continue;
    }
    PairingRank pr = pairing_rank_q(*p, eps);
    if (!pr.nondegenerate)
      r.error("duality: " + d + " -> Z has rank " + std::to_string(pr.rank) + " but free ranks are " +
              std::to_string(p->left.free_rank) + " and " + std::to_string(p->right.free_rank));
  }
  return r;
}

/// The unit morphism H -> H <- H.
inline L3Morphism identity_morphism(const L3Object &H) {
  L3Morphism f;
  f.source = f.target = H;
  f.L = H.H;
  f.L.components.push_back(FgAb{});
  f.L.labels.resize(5);
  for (int k = 0; k <= 3; ++k) {
    f.i.push_back(identity_hom(H.H[k]));
    f.ip.push_back(identity_hom(H.H[k]));
  }
  f.R.resize(5);
  for (int k = 1; k <= 4; ++k) set_r_group(f, k);
  complete_pairings(f);
  return f;
}

// ---------------------------------------------------------------------------
// Composition

namespace detail {

struct GlueDegree {
  Subquotient coker;  // of H'_k -> L_k (+) L'_k, x -> (i'(x), -i''(x))
  Subquotient image;  // of H_k (+) H''_k inside the cokernel
  std::size_t n1 = 0;
};

inline Vec split_first(const Vec &v, std::size_t n) { return Vec(v.begin(), v.begin() + n); }
inline Vec split_rest(const Vec &v, std::size_t n) { return Vec(v.begin() + n, v.end()); }

}  // namespace detail

/// phi2 after phi1, for phi1 : H -> H' and phi2 : H' -> H''.
inline L3Morphism compose(const L3Morphism &f1, const L3Morphism &f2) {
  if (!(f1.target == f2.source)) throw InputError("composition mismatch: middle objects differ");
  L3Morphism c;
  c.source = f1.source;
  c.target = f2.target;
  c.L.components.resize(5);
  c.L.labels.resize(5);
  std::vector<detail::GlueDegree> glue(4);

  for (int k = 0; k <= 3; ++k) {
    const Hom &a = f1.i[k], &b = f1.ip[k], &bb = f2.i[k], &d = f2.ip[k];
    const std::size_t n1 = f1.L[k].ngens(), n2 = f2.L[k].ngens();
    IntMatrix rel = block_diag(relation_matrix(f1.L[k]), relation_matrix(f2.L[k]));
    IntMatrix gl(n1 + n2, b.source.ngens());
    for (std::size_t x = 0; x < b.source.ngens(); ++x) {
      Vec neg = bb.matrix.col(x);
      for (auto &v : neg) v = -v;
      gl.set_col(x, concat(b.matrix.col(x), neg));
    }
    auto &G = glue[k];
    G.n1 = n1;
    G.coker = subquotient(IntMatrix::identity(n1 + n2), hstack(gl, rel));
    const std::size_t nc = G.coker.group.ngens();
    IntMatrix J(nc, a.source.ngens()), Jpp(nc, d.source.ngens());
    for (std::size_t h = 0; h < a.source.ngens(); ++h) J.set_col(h, G.coker.coordinates(concat(a.matrix.col(h), Vec(n2))));
    for (std::size_t h = 0; h < d.source.ngens(); ++h) Jpp.set_col(h, G.coker.coordinates(concat(Vec(n1), d.matrix.col(h))));
    IntMatrix crel = relation_matrix(G.coker.group);
    G.image = subquotient(hstack(hstack(J, Jpp), crel), crel);
    c.L.components[k] = G.image.group;
    IntMatrix ci(G.image.group.ngens(), J.cols()), cpp(G.image.group.ngens(), Jpp.cols());
    for (std::size_t h = 0; h < J.cols(); ++h) ci.set_col(h, G.image.coordinates(J.col(h)));
    for (std::size_t h = 0; h < Jpp.cols(); ++h) cpp.set_col(h, G.image.coordinates(Jpp.col(h)));
    c.i.push_back(make_hom(c.source.H[k], G.image.group, ci));
    c.ip.push_back(make_hom(c.target.H[k], G.image.group, cpp));
  }
  c.R.resize(5);
  for (int k = 1; k <= 4; ++k) set_r_group(c, k);

  // Pairings on lifts: eta = (h, h'') lifts to (h, x) in R and (x, h'') in R'.
  for (const auto &[kl, p1] : f1.pairings) {
    auto [k, l] = kl;
    const int m = k + l - 4;
    if (l > 3 || m > 3) continue;
    const Pairing *p2 = f2.table(k, l);
    if (!p2) continue;
    const int e = k - 1;
    const std::size_t hn = c.source.H[e].ngens(), hpn = f1.target.H[e].ngens();
    IntMatrix A = hstack(vstack(f1.ip[e].matrix, f2.i[e].matrix),
                         block_diag(relation_matrix(f1.L[e]), relation_matrix(f2.L[e])));
    Pairing out = Pairing::zero(c.R[k].group, c.L[l], c.L[m], k, l);

    auto evaluate = [&](const Vec &h, const Vec &hpp, const Vec &x, std::size_t t) {
      Vec rho1 = f1.R[k].coordinates(concat(h, x));
      Vec rho2 = f2.R[k].coordinates(concat(x, hpp));
      const auto &Gl = glue[l];
      Vec in_coker = Gl.image.inclusion.col(t);
      Vec amb = Gl.coker.inclusion * in_coker;
      Vec l1 = reduce(f1.L[l], detail::split_first(amb, Gl.n1)), l2 = reduce(f2.L[l], detail::split_rest(amb, Gl.n1));
      Vec v = concat(p1.apply(rho1, l1), p2->apply(rho2, l2));
      const auto &Gm = glue[m];
      return Gm.image.coordinates(Gm.coker.coordinates(v));
    };

    for (std::size_t j = 0; j < c.R[k].group.ngens(); ++j) {
      Vec eta = c.R[k].generator(j);
      Vec h = reduce(c.source.H[e], detail::split_first(eta, hn));
      Vec hpp = reduce(c.target.H[e], detail::split_rest(eta, hn));
      Vec rhs = concat(f1.i[e].matrix * h, f2.ip[e].matrix * hpp);
      auto sol = int_solve(A, rhs);
      if (!sol) throw InvariantViolation("composite R" + std::to_string(k) + " generator has no lift to H'");
      Vec x = reduce(f1.target.H[e], detail::split_first(sol->x, hpn));
      std::optional<Vec> x2;
      for (const auto &kv : sol->kernel) {
        Vec dx = detail::split_first(kv, hpn);
        Vec alt = x;
        for (std::size_t s = 0; s < hpn; ++s) alt[s] += dx[s];
        alt = reduce(f1.target.H[e], alt);
        if (alt != x) {
          x2 = alt;
          break;
        }
      }
      for (std::size_t t = 0; t < c.L[l].ngens(); ++t) {
        out.table[j][t] = evaluate(h, hpp, x, t);
        if (x2 && evaluate(h, hpp, *x2, t) != out.table[j][t])
          throw InvariantViolation("composite pairing depends on the choice of lift");
      }
    }
    c.pairings[{k, l}] = std::move(out);
  }
  return c;
}

// ---------------------------------------------------------------------------
// Equivalence witnesses

struct EquivalenceResult {
  bool ok = true;
  std::string failing_square;
  std::string detail;
};

/// f : H1 -> H2, fp : H1' -> H2' (degrees 0..3), g : L1 -> L2 (degrees 0..4).
inline EquivalenceResult verify_equivalence(const L3Morphism &p1, const L3Morphism &p2, const std::vector<Hom> &f,
                                            const std::vector<Hom> &fp, const std::vector<Hom> &g) {
  if (f.size() != 4 || fp.size() != 4 || g.size() != 5) throw InputError("witnesses have the wrong number of degrees");
  auto check_iso = [](const Hom &h, const std::string &name) {
    if (!validate_hom(h).empty() || !is_isomorphism(h)) throw InputError("witness " + name + " is not invertible");
  };
  for (int k = 0; k <= 3; ++k) {
    check_iso(f[k], "f" + std::to_string(k));
    check_iso(fp[k], "f'" + std::to_string(k));
  }
  for (int k = 0; k <= 4; ++k) check_iso(g[k], "g" + std::to_string(k));

  auto fail = [](std::string sq, std::string d) { return EquivalenceResult{false, std::move(sq), std::move(d)}; };

  for (int k = 0; k <= 3; ++k) {
    if (compose(g[k], p1.i[k]).matrix != compose(p2.i[k], f[k]).matrix)
      return fail("i-square", "g o i != i o f in degree " + std::to_string(k));
    if (compose(g[k], p1.ip[k]).matrix != compose(p2.ip[k], fp[k]).matrix)
      return fail("i-square", "g o i' != i' o f' in degree " + std::to_string(k));
  }

  for (const auto &[kl, q1] : p1.pairings) {
    auto [k, l] = kl;
    const int m = k + l - 4;
    const Pairing *q2 = p2.table(k, l);
    if (!q2) return fail("pairing-square", "R" + std::to_string(k) + " (x) L" + std::to_string(l) + " missing in target");
    const std::size_t n = p1.source.H[k - 1].ngens();
    for (std::size_t j = 0; j < p1.R[k].group.ngens(); ++j) {
      Vec eta = p1.R[k].generator(j);
      Vec a = f[k - 1].apply(detail::split_first(eta, n)), b = fp[k - 1].apply(detail::split_rest(eta, n));
      Vec eta2 = p2.R[k].coordinates(concat(a, b));
      Vec ej = unit_vector(p1.R[k].group.ngens(), j);
      for (std::size_t t = 0; t < p1.L[l].ngens(); ++t) {
        Vec th = unit_vector(p1.L[l].ngens(), t);
        Vec lhs = g[m].apply(q1.apply(ej, th));
        Vec rhs = q2->apply(eta2, g[l].apply(th));
        if (lhs != rhs)
          return fail("pairing-square", "R" + std::to_string(k) + " (x) L" + std::to_string(l) + " at " +
                                            p1.R[k].labels[j] + ", " + p1.L.label(l, t));
      }
    }
  }
  return {};
}

}  // namespace plumbcat
