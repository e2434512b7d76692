#pragma once

#include <gmpxx.h>

#include <algorithm>
#include <cstddef>
#include <initializer_list>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "plumbcat/error.hpp"

namespace plumbcat {

using Int = mpz_class;
using Rat = mpq_class;
using Vec = std::vector<Int>;
using RVec = std::vector<Rat>;

/// Dense row-major matrix with exact entries.
template <class T>
class Matrix {
 public:
  Matrix() = default;
  Matrix(std::size_t rows, std::size_t cols) : rows_(rows), cols_(cols), data_(rows * cols) {}
  Matrix(std::initializer_list<std::initializer_list<T>> init) {
    rows_ = init.size();
    cols_ = rows_ ? init.begin()->size() : 0;
    data_.reserve(rows_ * cols_);
    for (const auto &row : init) {
      if (row.size() != cols_) throw InputError("ragged matrix literal");
      for (const auto &x : row) data_.push_back(x);
    }
  }

  static Matrix identity(std::size_t n) {
    Matrix m(n, n);
    for (std::size_t i = 0; i < n; ++i) m(i, i) = 1;
    return m;
  }

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }
  bool empty() const { return rows_ == 0 || cols_ == 0; }

  T &operator()(std::size_t i, std::size_t j) { return data_[i * cols_ + j]; }
  const T &operator()(std::size_t i, std::size_t j) const { return data_[i * cols_ + j]; }

  std::vector<T> row(std::size_t i) const {
    return std::vector<T>(data_.begin() + i * cols_, data_.begin() + (i + 1) * cols_);
  }
  std::vector<T> col(std::size_t j) const {
    std::vector<T> c(rows_);
    for (std::size_t i = 0; i < rows_; ++i) c[i] = (*this)(i, j);
    return c;
  }
  void set_col(std::size_t j, const std::vector<T> &c) {
    for (std::size_t i = 0; i < rows_; ++i) (*this)(i, j) = c[i];
  }

  void swap_rows(std::size_t a, std::size_t b) {
    if (a == b) return;
    for (std::size_t j = 0; j < cols_; ++j) std::swap((*this)(a, j), (*this)(b, j));
  }
  void swap_cols(std::size_t a, std::size_t b) {
    if (a == b) return;
    for (std::size_t i = 0; i < rows_; ++i) std::swap((*this)(i, a), (*this)(i, b));
  }
  // row[dst] += k * row[src]
  void add_row(std::size_t dst, std::size_t src, const T &k) {
    for (std::size_t j = 0; j < cols_; ++j) (*this)(dst, j) += k * (*this)(src, j);
  }
  void add_col(std::size_t dst, std::size_t src, const T &k) {
    for (std::size_t i = 0; i < rows_; ++i) (*this)(i, dst) += k * (*this)(i, src);
  }
  void negate_row(std::size_t i) {
    for (std::size_t j = 0; j < cols_; ++j) (*this)(i, j) = -(*this)(i, j);
  }

  Matrix transpose() const {
    Matrix t(cols_, rows_);
    for (std::size_t i = 0; i < rows_; ++i)
      for (std::size_t j = 0; j < cols_; ++j) t(j, i) = (*this)(i, j);
    return t;
  }

  bool is_zero() const {
    return std::all_of(data_.begin(), data_.end(), [](const T &x) { return x == 0; });
  }

  friend bool operator==(const Matrix &a, const Matrix &b) {
    return a.rows_ == b.rows_ && a.cols_ == b.cols_ && a.data_ == b.data_;
  }

  friend Matrix operator*(const Matrix &a, const Matrix &b) {
    if (a.cols_ != b.rows_) throw InputError("matrix product dimension mismatch");
    Matrix c(a.rows_, b.cols_);
    for (std::size_t i = 0; i < a.rows_; ++i)
      for (std::size_t k = 0; k < a.cols_; ++k) {
        const T &x = a(i, k);
        if (x == 0) continue;
        for (std::size_t j = 0; j < b.cols_; ++j) c(i, j) += x * b(k, j);
      }
    return c;
  }

  friend std::vector<T> operator*(const Matrix &a, const std::vector<T> &v) {
    if (a.cols_ != v.size()) throw InputError("matrix-vector dimension mismatch");
    std::vector<T> r(a.rows_);
    for (std::size_t i = 0; i < a.rows_; ++i)
      for (std::size_t k = 0; k < a.cols_; ++k) r[i] += a(i, k) * v[k];
    return r;
  }

  friend Matrix operator+(Matrix a, const Matrix &b) {
    for (std::size_t i = 0; i < a.data_.size(); ++i) a.data_[i] += b.data_[i];
    return a;
  }
  friend Matrix operator-(Matrix a, const Matrix &b) {
    for (std::size_t i = 0; i < a.data_.size(); ++i) a.data_[i] -= b.data_[i];
    return a;
  }

 private:
  std::size_t rows_ = 0, cols_ = 0;
  std::vector<T> data_;
};

using IntMatrix = Matrix<Int>;
using RatMatrix = Matrix<Rat>;

inline RatMatrix to_rat(const IntMatrix &m) {
  RatMatrix r(m.rows(), m.cols());
  for (std::size_t i = 0; i < m.rows(); ++i)
    for (std::size_t j = 0; j < m.cols(); ++j) r(i, j) = Rat(m(i, j));
  return r;
}

inline RVec to_rat(const Vec &v) {
  RVec r(v.size());
  for (std::size_t i = 0; i < v.size(); ++i) r[i] = Rat(v[i]);
  return r;
}

/// Converts a rational matrix whose entries are all integers; throws otherwise.
inline IntMatrix to_int(const RatMatrix &m) {
  IntMatrix r(m.rows(), m.cols());
  for (std::size_t i = 0; i < m.rows(); ++i)
    for (std::size_t j = 0; j < m.cols(); ++j) {
      if (m(i, j).get_den() != 1) throw InvariantViolation("expected an integral matrix");
      r(i, j) = m(i, j).get_num();
    }
  return r;
}

inline Vec to_int(const RVec &v) {
  Vec r(v.size());
  for (std::size_t i = 0; i < v.size(); ++i) {
    if (v[i].get_den() != 1) throw InvariantViolation("expected an integral vector");
    r[i] = v[i].get_num();
  }
  return r;
}

/// Horizontal concatenation [a | b]; row counts must agree.
template <class T>
Matrix<T> hstack(const Matrix<T> &a, const Matrix<T> &b) {
  if (a.rows() != b.rows()) throw InputError("hstack row mismatch");
  Matrix<T> c(a.rows(), a.cols() + b.cols());
  for (std::size_t i = 0; i < a.rows(); ++i) {
    for (std::size_t j = 0; j < a.cols(); ++j) c(i, j) = a(i, j);
    for (std::size_t j = 0; j < b.cols(); ++j) c(i, a.cols() + j) = b(i, j);
  }
  return c;
}

template <class T>
Matrix<T> vstack(const Matrix<T> &a, const Matrix<T> &b) {
  if (a.cols() != b.cols()) throw InputError("vstack column mismatch");
  Matrix<T> c(a.rows() + b.rows(), a.cols());
  for (std::size_t j = 0; j < a.cols(); ++j) {
    for (std::size_t i = 0; i < a.rows(); ++i) c(i, j) = a(i, j);
    for (std::size_t i = 0; i < b.rows(); ++i) c(a.rows() + i, j) = b(i, j);
  }
  return c;
}

template <class T>
Matrix<T> block_diag(const Matrix<T> &a, const Matrix<T> &b) {
  Matrix<T> c(a.rows() + b.rows(), a.cols() + b.cols());
  for (std::size_t i = 0; i < a.rows(); ++i)
    for (std::size_t j = 0; j < a.cols(); ++j) c(i, j) = a(i, j);
  for (std::size_t i = 0; i < b.rows(); ++i)
    for (std::size_t j = 0; j < b.cols(); ++j) c(a.rows() + i, a.cols() + j) = b(i, j);
  return c;
}

template <class T>
Matrix<T> from_columns(std::size_t rows, const std::vector<std::vector<T>> &cols) {
  Matrix<T> m(rows, cols.size());
  for (std::size_t j = 0; j < cols.size(); ++j) m.set_col(j, cols[j]);
  return m;
}

template <class T>
Matrix<T> submatrix(const Matrix<T> &m, std::size_t r0, std::size_t r1, std::size_t c0, std::size_t c1) {
  Matrix<T> s(r1 - r0, c1 - c0);
  for (std::size_t i = r0; i < r1; ++i)
    for (std::size_t j = c0; j < c1; ++j) s(i - r0, j - c0) = m(i, j);
  return s;
}

// ---------------------------------------------------------------------------
// Smith normal form

struct SnfResult {
  IntMatrix U, D, V;
  std::size_t rank = 0;
  /// Nonzero diagonal entries d_1 | d_2 | ... | d_rank.
  Vec divisors() const {
    Vec d(rank);
    for (std::size_t i = 0; i < rank; ++i) d[i] = D(i, i);
    return d;
  }
};

/// U·M·V = D with U, V unimodular and D a divisor chain. Pivots on the
/// smallest nonzero magnitude, ties broken by lowest (row, col).
inline SnfResult smith_normal_form(const IntMatrix &M) {
  const std::size_t m = M.rows(), n = M.cols();
  SnfResult r{IntMatrix::identity(m), M, IntMatrix::identity(n), 0};
  IntMatrix &D = r.D, &U = r.U, &V = r.V;
  Int q;
  std::size_t t = 0;
  for (; t < std::min(m, n); ++t) {
    bool found = false;
    while (true) {
      std::size_t pi = 0, pj = 0;
      found = false;
      for (std::size_t i = t; i < m; ++i)
        for (std::size_t j = t; j < n; ++j) {
          if (D(i, j) == 0) continue;
          if (!found || mpz_cmpabs(D(i, j).get_mpz_t(), D(pi, pj).get_mpz_t()) < 0) {
            pi = i;
            pj = j;
            found = true;
          }
        }
      if (!found) break;
      D.swap_rows(t, pi);
      U.swap_rows(t, pi);
      D.swap_cols(t, pj);
      V.swap_cols(t, pj);

      bool clean = true;
      for (std::size_t i = t + 1; i < m; ++i) {
        if (D(i, t) == 0) continue;
        mpz_fdiv_q(q.get_mpz_t(), D(i, t).get_mpz_t(), D(t, t).get_mpz_t());
        D.add_row(i, t, -q);
        U.add_row(i, t, -q);
        if (D(i, t) != 0) clean = false;
      }
      for (std::size_t j = t + 1; j < n; ++j) {
        if (D(t, j) == 0) continue;
        mpz_fdiv_q(q.get_mpz_t(), D(t, j).get_mpz_t(), D(t, t).get_mpz_t());
        D.add_col(j, t, -q);
        V.add_col(j, t, -q);
        if (D(t, j) != 0) clean = false;
      }
      if (!clean) continue;

      bool divides = true;
      for (std::size_t i = t + 1; i < m && divides; ++i)
        for (std::size_t j = t + 1; j < n; ++j)
          if (!mpz_divisible_p(D(i, j).get_mpz_t(), D(t, t).get_mpz_t())) {
            D.add_row(t, i, 1);
            U.add_row(t, i, 1);
            divides = false;
            break;
          }
      if (divides) break;
    }
    if (!found) break;
    if (D(t, t) < 0) {
      D.negate_row(t);
      U.negate_row(t);
    }
  }
  r.rank = t;
  return r;
}

/// Inverse of a unimodular integer matrix (Gauss-Jordan over Q, then checked).
inline IntMatrix unimodular_inverse(const IntMatrix &M);

// ---------------------------------------------------------------------------
// Rational elimination

/// Row echelon form over Q; returns rank and fills pivot columns.
inline std::size_t rank_q(RatMatrix A, std::vector<std::size_t> *pivots = nullptr) {
  std::size_t r = 0;
  for (std::size_t c = 0; c < A.cols() && r < A.rows(); ++c) {
    std::size_t p = r;
    while (p < A.rows() && A(p, c) == 0) ++p;
    if (p == A.rows()) continue;
    A.swap_rows(r, p);
    for (std::size_t i = r + 1; i < A.rows(); ++i) {
      if (A(i, c) == 0) continue;
      Rat f = A(i, c) / A(r, c);
      A.add_row(i, r, -f);
    }
    if (pivots) pivots->push_back(c);
    ++r;
  }
  return r;
}

inline std::size_t rank_q(const IntMatrix &A) { return rank_q(to_rat(A)); }

inline Rat det_q(RatMatrix A) {
  if (A.rows() != A.cols()) throw InputError("determinant of a non-square matrix");
  Rat det = 1;
  const std::size_t n = A.rows();
  for (std::size_t c = 0; c < n; ++c) {
    std::size_t p = c;
    while (p < n && A(p, c) == 0) ++p;
    if (p == n) return 0;
    if (p != c) {
      A.swap_rows(c, p);
      det = -det;
    }
    det *= A(c, c);
    for (std::size_t i = c + 1; i < n; ++i) {
      if (A(i, c) == 0) continue;
      Rat f = A(i, c) / A(c, c);
      A.add_row(i, c, -f);
    }
  }
  return det;
}

/// Exact inverse; throws Singular.
inline RatMatrix rat_inverse(const RatMatrix &A) {
  if (A.rows() != A.cols()) throw InputError("inverse of a non-square matrix");
  const std::size_t n = A.rows();
  RatMatrix M = hstack(A, RatMatrix::identity(n));
  for (std::size_t c = 0; c < n; ++c) {
    std::size_t p = c;
    while (p < n && M(p, c) == 0) ++p;
    if (p == n) throw Singular();
    M.swap_rows(c, p);
    Rat inv = 1 / M(c, c);
    for (std::size_t j = 0; j < 2 * n; ++j) M(c, j) *= inv;
    for (std::size_t i = 0; i < n; ++i) {
      if (i == c || M(i, c) == 0) continue;
      Rat f = M(i, c);
      M.add_row(i, c, -f);
    }
  }
  return submatrix(M, 0, n, n, 2 * n);
}

inline IntMatrix unimodular_inverse(const IntMatrix &M) { return to_int(rat_inverse(to_rat(M))); }

// ---------------------------------------------------------------------------
// Integer lattices

/// Primitive basis of {x in Z^n : Mx = 0}: the trailing columns of V.
inline std::vector<Vec> int_kernel_basis(const IntMatrix &M) {
  SnfResult s = smith_normal_form(M);
  std::vector<Vec> basis;
  for (std::size_t j = s.rank; j < M.cols(); ++j) basis.push_back(s.V.col(j));
  return basis;
}

struct IntSolution {
  Vec x;
  std::vector<Vec> kernel;
};

/// Some integer x with Ax = b, plus a kernel basis; nullopt when no integer solution exists.
inline std::optional<IntSolution> int_solve(const IntMatrix &A, const Vec &b) {
  SnfResult s = smith_normal_form(A);
  Vec c = s.U * b;
  Vec y(A.cols());
  for (std::size_t i = 0; i < c.size(); ++i) {
    if (i < s.rank) {
      if (!mpz_divisible_p(c[i].get_mpz_t(), s.D(i, i).get_mpz_t())) return std::nullopt;
      y[i] = c[i] / s.D(i, i);
    } else if (c[i] != 0) {
      return std::nullopt;
    }
  }
  IntSolution sol{s.V * y, {}};
  for (std::size_t j = s.rank; j < A.cols(); ++j) sol.kernel.push_back(s.V.col(j));
  return sol;
}

// ---------------------------------------------------------------------------
// Signature

struct Inertia {
  std::size_t pos = 0, neg = 0, zero = 0;
  friend bool operator==(const Inertia &, const Inertia &) = default;
};

inline bool is_symmetric(const RatMatrix &A) {
  if (A.rows() != A.cols()) return false;
  for (std::size_t i = 0; i < A.rows(); ++i)
    for (std::size_t j = i + 1; j < A.cols(); ++j)
      if (A(i, j) != A(j, i)) return false;
  return true;
}

/// (n+, n-, n0) by symmetric elimination. Diagonal pivots are used when
/// available; otherwise a hyperbolic 2x2 block [[0,a],[a,0]] contributes (1,1).
inline Inertia inertia_signature(RatMatrix A) {
  if (!is_symmetric(A)) throw NotSymmetric();
  Inertia in;
  std::size_t n = A.rows();
  std::vector<std::size_t> live(n);
  for (std::size_t i = 0; i < n; ++i) live[i] = i;

  auto eliminate = [&](std::size_t p) {
    for (std::size_t i : live)
      if (A(i, p) != 0) {
        Rat f = A(i, p) / A(p, p);
        for (std::size_t j : live) A(i, j) -= f * A(p, j);
      }
  };

  while (!live.empty()) {
    auto diag = std::find_if(live.begin(), live.end(), [&](std::size_t i) { return A(i, i) != 0; });
    if (diag != live.end()) {
      std::size_t p = *diag;
      (A(p, p) > 0 ? in.pos : in.neg)++;
      live.erase(diag);
      eliminate(p);
      continue;
    }
    std::size_t p = n, q = n;
    for (std::size_t i : live) {
      for (std::size_t j : live)
        if (A(i, j) != 0) {
          p = i;
          q = j;
          break;
        }
      if (p != n) break;
    }
    if (p == n) {
      in.zero += live.size();
      break;
    }
    // Block [[0,a],[a,0]]: Schur complement S = A - C B^{-1} C^T with B^{-1} = [[0,1/a],[1/a,0]].
    Rat a = A(p, q);
    in.pos++;
    in.neg++;
    live.erase(std::find(live.begin(), live.end(), p));
    live.erase(std::find(live.begin(), live.end(), q));
    std::vector<Rat> cp(n), cq(n);
    for (std::size_t i : live) {
      cp[i] = A(i, p);
      cq[i] = A(i, q);
    }
    for (std::size_t i : live)
      for (std::size_t j : live) A(i, j) -= (cp[i] * cq[j] + cq[i] * cp[j]) / a;
  }
  return in;
}

// ---------------------------------------------------------------------------
// GF(2)

using BitMatrix = std::vector<std::vector<int>>;

struct Gf2Solution {
  std::vector<int> x;
  std::size_t nullity = 0;
};

/// Solves Ax = b over GF(2); nullopt iff inconsistent. Free variables are set to 0.
inline std::optional<Gf2Solution> solve_gf2(BitMatrix A, std::vector<int> b) {
  const std::size_t m = A.size();
  const std::size_t n = m ? A[0].size() : 0;
  for (auto &row : A)
    for (auto &e : row) e &= 1;
  for (auto &e : b) e &= 1;
  std::vector<std::size_t> pivot_col;
  std::size_t r = 0;
  for (std::size_t c = 0; c < n && r < m; ++c) {
    std::size_t p = r;
    while (p < m && !A[p][c]) ++p;
    if (p == m) continue;
    std::swap(A[p], A[r]);
    std::swap(b[p], b[r]);
    for (std::size_t i = 0; i < m; ++i)
      if (i != r && A[i][c]) {
        for (std::size_t j = 0; j < n; ++j) A[i][j] ^= A[r][j];
        b[i] ^= b[r];
      }
    pivot_col.push_back(c);
    ++r;
  }
  for (std::size_t i = r; i < m; ++i)
    if (b[i]) return std::nullopt;
  Gf2Solution s{std::vector<int>(n, 0), n - r};
  for (std::size_t i = 0; i < r; ++i) s.x[pivot_col[i]] = b[i];
  return s;
}

// ---------------------------------------------------------------------------
// Formatting

inline std::string to_string(const Int &x) { return x.get_str(); }
inline std::string to_string(const Rat &x) { return x.get_str(); }

}  // namespace plumbcat
