#pragma once

#include <algorithm>
#include <cstddef>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "plumbcat/exact_linalg.hpp"
#include "plumbcat/seifert_graph.hpp"

namespace plumbcat {

struct WuData {
  IntegralTree tree;
  std::vector<int> wu;
  Int w_sq;
  long sign = 0;
  Inertia inertia;
  std::size_t nullity = 0;  // dimension of the GF(2) solution space minus the chosen point
};

/// Solves A x = diag(A) mod 2 and lifts x to an integral characteristic vector.
inline WuData wu_class(const IntegralTree &t) {
  const IntMatrix A = t.matrix();
  const std::size_t n = A.rows();
  BitMatrix B(n, std::vector<int>(n));
  std::vector<int> d(n);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) B[i][j] = mpz_odd_p(A(i, j).get_mpz_t()) ? 1 : 0;
    d[i] = mpz_odd_p(A(i, i).get_mpz_t()) ? 1 : 0;
  }
  auto sol = solve_gf2(B, d);
  if (!sol) throw InvariantViolation("parity system A x = diag(A) mod 2 is inconsistent");
  WuData w;
  w.tree = t;
  w.wu = sol->x;
  w.nullity = sol->nullity;
  Rat det = det_q(to_rat(A));
  if (det.get_den() == 1 && mpz_odd_p(det.get_num_mpz_t()) && w.nullity != 0)
    throw InvariantViolation("Wu class is not unique although det A is odd");
  Vec x(n);
  for (std::size_t i = 0; i < n; ++i) x[i] = w.wu[i];
  Vec Ax = A * x;
  w.w_sq = 0;
  for (std::size_t i = 0; i < n; ++i) w.w_sq += x[i] * Ax[i];
  w.inertia = inertia_signature(to_rat(A));
  w.sign = static_cast<long>(w.inertia.pos) - static_cast<long>(w.inertia.neg);
  return w;
}

/// (sign(A) - w_sq) / 8; throws if not integral.
inline Int mu_bar(const WuData &w) {
  Int num = Int(w.sign) - w.w_sq;
  if (!mpz_divisible_ui_p(num.get_mpz_t(), 8))
    throw InvariantViolation("sign - w.w = " + num.get_str() + " is not divisible by 8");
  return num / 8;
}

inline Int mu_bar(const IntegralTree &t) { return mu_bar(wu_class(t)); }

// ---------------------------------------------------------------------------
// w-ledger

struct YClass {
  std::size_t kplus = 0, kminus = 0, r = 0;
  friend bool operator==(const YClass &, const YClass &) = default;
};

enum class Provenance { ComputedFromTree, UserSupplied, Sum };

inline std::string to_string(Provenance p) {
  switch (p) {
    case Provenance::ComputedFromTree:
      return "computed-from-tree";
    case Provenance::UserSupplied:
      return "user-supplied";
    default:
      return "sum";
  }
}

inline Provenance parse_provenance(const std::string &s) {
  if (s == "computed-from-tree") return Provenance::ComputedFromTree;
  if (s == "user-supplied") return Provenance::UserSupplied;
  if (s == "sum") return Provenance::Sum;
  throw InputError("unknown provenance '" + s + "'");
}

struct WEntry {
  std::string name;
  Int w;
  YClass y;
  std::string spin = "-";
  Provenance provenance = Provenance::UserSupplied;

  friend bool operator==(const WEntry &a, const WEntry &b) {
    return a.name == b.name && a.w == b.w && a.y == b.y && a.spin == b.spin && a.provenance == b.provenance;
  }
};

/// w = -8 mu_bar with class (b+, b-, 0).
inline WEntry w_invariant_tree(const IntegralTree &t, std::string name = "tree") {
  WuData d = wu_class(t);
  WEntry e;
  e.name = std::move(name);
  e.w = -8 * mu_bar(d);
  e.y = {d.inertia.pos, d.inertia.neg, 0};
  e.provenance = Provenance::ComputedFromTree;
  return e;
}

/// Connected sum: w adds, k's add, r takes the minimum.
inline WEntry ledger_sum(const WEntry &a, const WEntry &b, std::string name = {}) {
  WEntry e;
  e.name = name.empty() ? a.name + "#" + b.name : std::move(name);
  e.w = a.w + b.w;
  e.y = {a.y.kplus + b.y.kplus, a.y.kminus + b.y.kminus, std::min(a.y.r, b.y.r)};
  e.spin = "-";
  e.provenance = Provenance::Sum;
  return e;
}

/// w agrees with minus the Rochlin invariant mod 16.
inline bool rochlin_consistent(const Int &w, const Int &mu) {
  Int s = w + mu;
  return mpz_divisible_ui_p(s.get_mpz_t(), 16) != 0;
}

struct InertiaVerdict {
  bool gate = false;
  bool excluded = false;  // sigma is not in the inertia group
  std::size_t gate_sum = 0;
  std::string text;
};

inline InertiaVerdict inertia_test(const WEntry &sigma, const WEntry &target) {
  if (sigma.y.r != 0) throw InputError("inertia test needs sigma with r = 0");
  InertiaVerdict v;
  v.gate_sum = target.y.kplus + sigma.y.kplus + target.y.kminus + sigma.y.kminus + target.y.r;
  v.gate = v.gate_sum <= 2;
  if (!v.gate) {
    v.text = "inconclusive: gate k+ + l+ + k- + l- + r = " + std::to_string(v.gate_sum) + " exceeds 2";
  } else if (sigma.w != 0) {
    v.excluded = true;
    v.text = "not in inertia group: w(" + sigma.name + ") = " + sigma.w.get_str() + " != 0";
  } else {
    v.text = "inconclusive: w(" + sigma.name + ") = 0";
  }
  return v;
}

inline std::string serialize(const WEntry &e) {
  return "name=" + e.name + " w=" + e.w.get_str() + " kplus=" + std::to_string(e.y.kplus) +
         " kminus=" + std::to_string(e.y.kminus) + " r=" + std::to_string(e.y.r) + " spin=" + e.spin +
         " provenance=" + to_string(e.provenance);
}

inline bool valid_token(const std::string &s) {
  return !s.empty() && std::none_of(s.begin(), s.end(), [](char c) { return c == ' ' || c == '\t' || c == '=' || c == '\n'; });
}

/// One record per line; '#' starts a comment line.
inline std::vector<WEntry> parse_ledger(const std::string &text, const std::string &where = "ledger") {
  std::vector<WEntry> out;
  std::istringstream in(text);
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.empty() || line[0] == '#') continue;
    std::istringstream ls(line);
    std::string field;
    WEntry e;
    bool has[7] = {};
    const char *keys[7] = {"name", "w", "kplus", "kminus", "r", "spin", "provenance"};
    auto fail = [&](const std::string &m) { throw InputError(where + ": line " + std::to_string(lineno) + ": " + m); };
    while (ls >> field) {
      auto eq = field.find('=');
      if (eq == std::string::npos) fail("expected key=value, found '" + field + "'");
      std::string k = field.substr(0, eq), v = field.substr(eq + 1);
      auto idx = std::find_if(std::begin(keys), std::end(keys), [&](const char *s) { return k == s; }) - std::begin(keys);
      if (idx == 7) fail("unknown key '" + k + "'");
      has[idx] = true;
      if (idx >= 2 && idx <= 4 && (v.empty() || v[0] == '-')) fail("bad value for " + k + ": '" + v + "'");
      try {
        switch (idx) {
          case 0:
            e.name = v;
            break;
          case 1:
            e.w = Int(v);
            break;
          case 2:
            e.y.kplus = std::stoul(v);
            break;
          case 3:
            e.y.kminus = std::stoul(v);
            break;
          case 4:
            e.y.r = std::stoul(v);
            break;
          case 5:
            e.spin = v;
            break;
          default:
            e.provenance = parse_provenance(v);
        }
      } catch (const InputError &) {
        throw;
      } catch (...) {
        fail("bad value for " + k + ": '" + v + "'");
      }
    }
    for (int i = 0; i < 7; ++i)
      if (!has[i]) fail(std::string("missing key ") + keys[i]);
    if (!valid_token(e.name)) fail("empty name");
    out.push_back(e);
  }
  return out;
}

inline std::string serialize(const std::vector<WEntry> &es) {
  std::string s;
  for (const auto &e : es) s += serialize(e) + "\n";
  return s;
}

inline const WEntry &find_entry(const std::vector<WEntry> &es, const std::string &name) {
  for (const auto &e : es)
    if (e.name == name) return e;
  throw InputError("no ledger entry named '" + name + "'");
}

}  // namespace plumbcat
