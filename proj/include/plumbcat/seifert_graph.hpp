#pragma once

#include <cctype>
#include <cstddef>
#include <map>
#include <numeric>
#include <optional>
#include <sstream>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "plumbcat/exact_linalg.hpp"
#include "plumbcat/fgab.hpp"

namespace plumbcat {

struct ConePoint {
  Int a, b;
  friend bool operator==(const ConePoint &, const ConePoint &) = default;
};

/// {g; (a_1,b_1), ..., (a_n,b_n)}
struct SeifertInvariant {
  long genus = 0;
  std::vector<ConePoint> cones;
  friend bool operator==(const SeifertInvariant &, const SeifertInvariant &) = default;
};

struct Vertex {
  std::string name;
  SeifertInvariant inv;
  std::optional<std::vector<long>> spin;
  friend bool operator==(const Vertex &, const Vertex &) = default;
};

struct SeifertGraph {
  std::string name;
  std::vector<Vertex> vertices;
  std::vector<std::pair<std::size_t, std::size_t>> edges;

  std::size_t size() const { return vertices.size(); }

  std::optional<std::size_t> index_of(std::string_view v) const {
    for (std::size_t i = 0; i < vertices.size(); ++i)
      if (vertices[i].name == v) return i;
    return std::nullopt;
  }

  /// Component id per vertex.
  std::vector<std::size_t> components() const {
    std::vector<std::size_t> parent(size());
    std::iota(parent.begin(), parent.end(), 0);
    auto find = [&](std::size_t x) {
      while (parent[x] != x) x = parent[x] = parent[parent[x]];
      return x;
    };
    for (auto [a, b] : edges) parent[find(a)] = find(b);
    std::vector<std::size_t> comp(size());
    for (std::size_t i = 0; i < size(); ++i) comp[i] = find(i);
    return comp;
  }

  std::size_t component_count() const {
    auto c = components();
    std::sort(c.begin(), c.end());
    return std::unique(c.begin(), c.end()) - c.begin();
  }

  bool is_connected() const { return component_count() <= 1; }
  bool is_forest() const { return edges.size() + component_count() == size(); }
  bool is_tree() const { return size() > 0 && is_connected() && is_forest(); }

  long total_genus() const {
    long g = 0;
    for (const auto &v : vertices) g += v.inv.genus;
    return g;
  }

  friend bool operator==(const SeifertGraph &, const SeifertGraph &) = default;
};

struct ParseError : InputError {
  std::size_t line, column;
  ParseError(std::size_t line, std::size_t column, const std::string &msg)
      : InputError("line " + std::to_string(line) + ", column " + std::to_string(column) + ": " + msg),
        line(line),
        column(column) {}
};

namespace detail {

struct Token {
  enum Kind { Name, Integer, Symbol, End } kind;
  std::string text;
  std::size_t line, column;
};

inline std::vector<Token> tokenize(std::string_view s) {
  std::vector<Token> out;
  std::size_t line = 1, col = 1, i = 0;
  auto advance = [&](std::size_t n) {
    for (std::size_t k = 0; k < n; ++k, ++i) {
      if (s[i] == '\n') {
        ++line;
        col = 1;
      } else {
        ++col;
      }
    }
  };
  while (i < s.size()) {
    char c = s[i];
    if (c == '#') {
      while (i < s.size() && s[i] != '\n') advance(1);
      continue;
    }
    if (std::isspace(static_cast<unsigned char>(c))) {
      advance(1);
      continue;
    }
    std::size_t l = line, cc = col;
    if (c == '-' && i + 1 < s.size() && s[i + 1] == '-') {
      out.push_back({Token::Symbol, "--", l, cc});
      advance(2);
    } else if (std::isdigit(static_cast<unsigned char>(c)) ||
               (c == '-' && i + 1 < s.size() && std::isdigit(static_cast<unsigned char>(s[i + 1])))) {
      std::size_t j = i + 1;
      while (j < s.size() && std::isdigit(static_cast<unsigned char>(s[j]))) ++j;
      out.push_back({Token::Integer, std::string(s.substr(i, j - i)), l, cc});
      advance(j - i);
    } else if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
      std::size_t j = i + 1;
      while (j < s.size() && (std::isalnum(static_cast<unsigned char>(s[j])) || s[j] == '_' || s[j] == '\'' || s[j] == '.'))
        ++j;
      out.push_back({Token::Name, std::string(s.substr(i, j - i)), l, cc});
      advance(j - i);
    } else if (std::string_view("{}(),;=").find(c) != std::string_view::npos) {
      out.push_back({Token::Symbol, std::string(1, c), l, cc});
      advance(1);
    } else {
      throw ParseError(l, cc, std::string("unexpected character '") + c + "'");
    }
  }
  out.push_back({Token::End, "", line, col});
  return out;
}

class Parser {
 public:
  explicit Parser(std::vector<Token> toks) : t_(std::move(toks)) {}

  std::vector<SeifertGraph> file() {
    std::vector<SeifertGraph> gs;
    do gs.push_back(graph());
    while (peek().kind != Token::End);
    return gs;
  }

 private:
  std::vector<Token> t_;
  std::size_t p_ = 0;

  const Token &peek() const { return t_[p_]; }
  [[noreturn]] void fail(const Token &t, const std::string &what) const {
    std::string got = t.kind == Token::End ? "end of input" : "'" + t.text + "'";
    throw ParseError(t.line, t.column, "expected " + what + ", found " + got);
  }
  const Token &expect_symbol(const char *sym) {
    const Token &t = peek();
    if (t.kind != Token::Symbol || t.text != sym) fail(t, std::string("'") + sym + "'");
    ++p_;
    return t;
  }
  const Token &expect_keyword(const char *kw) {
    const Token &t = peek();
    if (t.kind != Token::Name || t.text != kw) fail(t, std::string("'") + kw + "'");
    ++p_;
    return t;
  }
  const Token &name() {
    const Token &t = peek();
    if (t.kind != Token::Name) fail(t, "a name");
    ++p_;
    return t;
  }
  Int integer() {
    const Token &t = peek();
    if (t.kind != Token::Integer) fail(t, "an integer");
    ++p_;
    return Int(t.text);
  }
  bool at_symbol(const char *sym) const { return peek().kind == Token::Symbol && peek().text == sym; }
  bool at_keyword(const char *kw) const { return peek().kind == Token::Name && peek().text == kw; }

  SeifertGraph graph() {
    expect_keyword("graph");
    SeifertGraph g;
    g.name = name().text;
    expect_symbol("{");
    if (!at_keyword("vertex")) fail(peek(), "'vertex'");
    while (at_keyword("vertex")) vertex(g);
    while (at_keyword("edge")) edge(g);
    expect_symbol("}");
    return g;
  }

  void vertex(SeifertGraph &g) {
    expect_keyword("vertex");
    const Token &nt = name();
    if (g.index_of(nt.text)) throw ParseError(nt.line, nt.column, "duplicate vertex '" + nt.text + "'");
    Vertex v{nt.text, {}, std::nullopt};
    expect_symbol("{");
    expect_keyword("genus");
    expect_symbol("=");
    const Token &gt = peek();
    Int genus = integer();
    if (genus < 0 || !genus.fits_slong_p()) throw ParseError(gt.line, gt.column, "genus must be a nonnegative integer");
    v.inv.genus = genus.get_si();
    expect_symbol(";");
    if (at_keyword("cone")) {
      ++p_;
      expect_symbol("=");
      do {
        const Token &pt = expect_symbol("(");
        Int a = integer();
        expect_symbol(",");
        Int b = integer();
        expect_symbol(")");
        if (a < 1) throw ParseError(pt.line, pt.column, "cone point order must be at least 1");
        v.inv.cones.push_back({a, b});
      } while (at_symbol("("));
      expect_symbol(";");
    }
    if (at_keyword("spin")) {
      ++p_;
      expect_symbol("=");
      expect_symbol("(");
      std::vector<long> lab;
      while (true) {
        const Token &it = peek();
        Int x = integer();
        if (!x.fits_slong_p()) throw ParseError(it.line, it.column, "spin label entry out of range");
        lab.push_back(x.get_si());
        if (at_symbol(")")) break;
        expect_symbol(",");
      }
      expect_symbol(")");
      expect_symbol(";");
      v.spin = lab;
    }
    expect_symbol("}");
    g.vertices.push_back(std::move(v));
  }

  void edge(SeifertGraph &g) {
    const Token &et = expect_keyword("edge");
    const Token &a = name();
    expect_symbol("--");
    const Token &b = name();
    expect_symbol(";");
    auto ia = g.index_of(a.text), ib = g.index_of(b.text);
    if (!ia) throw ParseError(a.line, a.column, "edge to unknown vertex '" + a.text + "'");
    if (!ib) throw ParseError(b.line, b.column, "edge to unknown vertex '" + b.text + "'");
    if (*ia == *ib) throw ParseError(et.line, et.column, "loop at vertex '" + a.text + "'");
    for (auto [x, y] : g.edges)
      if ((x == *ia && y == *ib) || (x == *ib && y == *ia))
        throw ParseError(et.line, et.column, "repeated edge " + a.text + " -- " + b.text);
    g.edges.emplace_back(*ia, *ib);
  }
};

}  // namespace detail

inline std::vector<SeifertGraph> parse_graphs(std::string_view text) {
  return detail::Parser(detail::tokenize(text)).file();
}

/// Parses a file expected to hold a single graph (or picks one by name).
inline SeifertGraph parse_graph(std::string_view text, std::string_view which = {}) {
  auto gs = parse_graphs(text);
  if (which.empty()) {
    if (gs.size() != 1) throw InputError("file holds " + std::to_string(gs.size()) + " graphs; select one by name");
    return gs.front();
  }
  for (auto &g : gs)
    if (g.name == which) return g;
  throw InputError("no graph named '" + std::string(which) + "'");
}

inline std::string serialize(const SeifertGraph &g) {
  std::ostringstream os;
  os << "graph " << g.name << " {\n";
  for (const auto &v : g.vertices) {
    os << "  vertex " << v.name << " { genus = " << v.inv.genus << ";";
    if (!v.inv.cones.empty()) {
      os << " cone =";
      for (const auto &c : v.inv.cones) os << " (" << c.a.get_str() << "," << c.b.get_str() << ")";
      os << ";";
    }
    if (v.spin) {
      os << " spin = (";
      for (std::size_t i = 0; i < v.spin->size(); ++i) os << (i ? "," : "") << (*v.spin)[i];
      os << ");";
    }
    os << " }\n";
  }
  for (auto [a, b] : g.edges) os << "  edge " << g.vertices[a].name << " -- " << g.vertices[b].name << ";\n";
  os << "}\n";
  return os.str();
}

inline std::string serialize(const std::vector<SeifertGraph> &gs) {
  std::string out;
  for (std::size_t i = 0; i < gs.size(); ++i) out += (i ? "\n" : "") + serialize(gs[i]);
  return out;
}

// ---------------------------------------------------------------------------
// Invariants

inline Rat euler_number(const SeifertInvariant &w) {
  Rat e = 0;
  for (const auto &c : w.cones) e += Rat(c.b, c.a);
  e.canonicalize();
  return e;
}

/// Diagonal e_v, +1 on edges.
inline RatMatrix intersection_matrix(const SeifertGraph &g) {
  RatMatrix A(g.size(), g.size());
  for (std::size_t v = 0; v < g.size(); ++v) A(v, v) = euler_number(g.vertices[v].inv);
  for (auto [a, b] : g.edges) A(a, b) = A(b, a) = 1;
  return A;
}

/// alpha_v = product of the cone orders at v.
inline Int alpha(const SeifertInvariant &w) {
  Int p = 1;
  for (const auto &c : w.cones) p *= c.a;
  return p;
}

inline Int cone_order_product(const SeifertGraph &g) {
  Int p = 1;
  for (const auto &v : g.vertices) p *= alpha(v.inv);
  return p;
}

struct Conditions {
  bool hs = false, sp = false, ndeg = false;
  Rat det;
  std::vector<std::string> diagnostics;
};

inline Conditions check_conditions(const SeifertGraph &g) {
  Conditions c;
  RatMatrix A = intersection_matrix(g);
  c.det = det_q(A);

  bool genus0 = true, coprime = true;
  for (const auto &v : g.vertices) {
    if (v.inv.genus != 0) {
      genus0 = false;
      c.diagnostics.push_back("HS: vertex " + v.name + " has genus " + std::to_string(v.inv.genus));
    }
    for (std::size_t i = 0; i < v.inv.cones.size(); ++i)
      for (std::size_t j = i + 1; j < v.inv.cones.size(); ++j) {
        Int d = gcd(v.inv.cones[i].a, v.inv.cones[j].a);
        if (d != 1) {
          coprime = false;
          c.diagnostics.push_back("HS: vertex " + v.name + " has cone orders " + v.inv.cones[i].a.get_str() + " and " +
                                  v.inv.cones[j].a.get_str() + " with common factor " + d.get_str());
        }
      }
  }
  bool tree = g.is_tree();
  if (!tree) c.diagnostics.push_back("HS: graph is not a tree");
  Rat target(1, 1);
  target /= Rat(cone_order_product(g));
  bool det_ok = c.det == target || c.det == -target;
  if (!det_ok) c.diagnostics.push_back("HS: det A = " + c.det.get_str() + " is not +-" + target.get_str());
  c.hs = tree && genus0 && coprime && det_ok;

  c.sp = true;
  for (const auto &v : g.vertices) {
    bool some_even = false;
    Int bsum = 0;
    for (const auto &cp : v.inv.cones) {
      if (mpz_even_p(cp.a.get_mpz_t())) some_even = true;
      bsum += cp.b;
    }
    if (!some_even && mpz_odd_p(bsum.get_mpz_t())) {
      c.sp = false;
      c.diagnostics.push_back("SP: vertex " + v.name + " has all cone orders odd and odd sum of b (" + bsum.get_str() + ")");
    }
  }

  c.ndeg = c.det != 0;
  if (c.det == 0) c.diagnostics.push_back("Ndeg: det A = 0");
  for (std::size_t v = 0; v < g.size(); ++v)
    if (A(v, v) == 0) {
      c.ndeg = false;
      c.diagnostics.push_back("Ndeg: vertex " + g.vertices[v].name + " has Euler number 0");
    }
  return c;
}

inline std::pair<std::size_t, std::size_t> betti_pm(const SeifertGraph &g) {
  Inertia in = inertia_signature(intersection_matrix(g));
  return {in.pos, in.neg};
}

// ---------------------------------------------------------------------------
// Resolution to an integral plumbing tree

struct IntegralTree {
  Vec weights;
  std::vector<std::pair<std::size_t, std::size_t>> edges;
  std::vector<std::size_t> central;  // tree vertex of each graph vertex

  std::size_t size() const { return weights.size(); }
  IntMatrix matrix() const {
    IntMatrix A(size(), size());
    for (std::size_t i = 0; i < size(); ++i) A(i, i) = weights[i];
    for (auto [a, b] : edges) A(a, b) = A(b, a) = 1;
    return A;
  }
};

/// a/b = c_1 - 1/(c_2 - ...), c_i >= 2, for 0 < b < a.
inline Vec negative_continued_fraction(Int a, Int b) {
  if (!(b > 0 && b < a)) throw InputError("continued fraction needs 0 < b < a");
  Vec cs;
  while (b != 0) {
    Int c;
    mpz_cdiv_q(c.get_mpz_t(), a.get_mpz_t(), b.get_mpz_t());
    cs.push_back(c);
    Int r = c * b - a;
    a = b;
    b = r;
  }
  return cs;
}

/// Each cone (a,b) becomes a chain with weights -c_i from the negative continued
/// fraction of a/(b mod a); floor(b/a) is added to the central weight. The Schur
/// complement onto the central vertices then equals A(Gamma).
inline IntegralTree resolve_integral(const SeifertGraph &g) {
  if (!g.is_tree()) throw InputError("resolution requires a connected tree");
  IntegralTree t;
  for (std::size_t v = 0; v < g.size(); ++v) {
    t.central.push_back(t.weights.size());
    t.weights.push_back(0);
  }
  for (std::size_t v = 0; v < g.size(); ++v) {
    const std::size_t c = t.central[v];
    for (const auto &cp : g.vertices[v].inv.cones) {
      if (gcd(cp.a, cp.b) != 1)
        throw InputError("cone point (" + cp.a.get_str() + "," + cp.b.get_str() + ") at vertex " + g.vertices[v].name +
                         " is not reduced");
      Int q, r;
      mpz_fdiv_qr(q.get_mpz_t(), r.get_mpz_t(), cp.b.get_mpz_t(), cp.a.get_mpz_t());
      t.weights[c] += q;
      if (r == 0) continue;
      std::size_t prev = c;
      for (const auto &ci : negative_continued_fraction(cp.a, r)) {
        t.weights.push_back(-ci);
        t.edges.emplace_back(prev, t.weights.size() - 1);
        prev = t.weights.size() - 1;
      }
    }
  }
  for (auto [a, b] : g.edges) t.edges.emplace_back(t.central[a], t.central[b]);

  Rat det = det_q(intersection_matrix(g));
  if (det != 0) {
    FgAb coker = normalize_group(t.matrix(), t.size());
    Rat expect = abs(det) * Rat(cone_order_product(g));
    if (coker.free_rank != 0 || Rat(coker.torsion_order()) != expect)
      throw InvariantViolation("resolution torsion " + coker.str() + " does not match |det A|*prod a = " + expect.get_str());
  }
  return t;
}

/// Sigma(a,b,c) as a one-vertex graph with Euler number -1/(abc).
inline SeifertGraph brieskorn_graph(const Int &a, const Int &b, const Int &c) {
  if (a < 2 || b < 2 || c < 2 || gcd(a, b) != 1 || gcd(a, c) != 1 || gcd(b, c) != 1)
    throw InputError("Brieskorn exponents must be pairwise coprime and at least 2");
  // Solve b1*bc + b2*ac + b3*ab = -1.
  Int bc = b * c, ac = a * c, ab = a * b;
  Int g1, s, t;
  mpz_gcdext(g1.get_mpz_t(), s.get_mpz_t(), t.get_mpz_t(), bc.get_mpz_t(), ac.get_mpz_t());
  // g1 = gcd(bc, ac) = c; s*bc + t*ac = c.
  Int g2, u, w;
  mpz_gcdext(g2.get_mpz_t(), u.get_mpz_t(), w.get_mpz_t(), g1.get_mpz_t(), ab.get_mpz_t());
  // u*c + w*ab = 1, so -(u*s)*bc - (u*t)*ac - w*ab = -1.
  SeifertGraph gr;
  gr.name = "Sigma_" + a.get_str() + "_" + b.get_str() + "_" + c.get_str();
  Vertex v{"v", {0, {{a, -u * s}, {b, -u * t}, {c, -w}}}, std::nullopt};
  gr.vertices.push_back(v);
  return gr;
}

}  // namespace plumbcat
