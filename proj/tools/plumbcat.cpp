// plumbcat command-line front end.
#include <CLI11.hpp>

#include <filesystem>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "plumbcat/homology.hpp"
#include "plumbcat/l3cat.hpp"
#include "plumbcat/l3m_io.hpp"
#include "plumbcat/plumb_algebra.hpp"
#include "plumbcat/seifert_graph.hpp"
#include "plumbcat/winv.hpp"

using namespace plumbcat;
namespace fs = std::filesystem;

namespace {

enum Exit { Ok = 0, Obstruction = 1, Bad = 2 };

struct Output {
  bool json_mode = false;
  json j = json::object();
  std::ostringstream text;

  int finish(int code) {
    if (json_mode)
      std::cout << j.dump(2) << "\n";
    else
      std::cout << text.str();
    return code;
  }
};

std::string rat_row(const RVec &r) {
  std::string s;
  for (std::size_t i = 0; i < r.size(); ++i) s += (i ? " " : "") + r[i].get_str();
  return s;
}

/// Rows separated by " / ".
std::string render_matrix(const RatMatrix &m) {
  std::string s;
  for (std::size_t i = 0; i < m.rows(); ++i) s += (i ? " / " : "") + rat_row(m.row(i));
  return s;
}

std::string render_vec(const Vec &v) {
  std::string s;
  for (std::size_t i = 0; i < v.size(); ++i) s += (i ? " " : "") + v[i].get_str();
  return s;
}

std::string yes_no(bool b) { return b ? "yes" : "no"; }

std::string invariant_str(const SeifertInvariant &w) {
  std::string s = "{" + std::to_string(w.genus) + ";";
  for (std::size_t i = 0; i < w.cones.size(); ++i)
    s += (i ? "," : " ") + std::string("(") + w.cones[i].a.get_str() + "," + w.cones[i].b.get_str() + ")";
  return s + "}";
}

std::vector<SeifertGraph> graphs_of(const std::string &path, const std::string &which) {
  if (!which.empty()) return {load_graph(path, which)};
  return load_graphs(path);
}

bool is_morphism_file(const std::string &path) { return fs::path(path).extension() == ".l3m"; }

// ---------------------------------------------------------------------------

int cmd_validate(Output &out, const std::string &path, const std::string &which) {
  if (is_morphism_file(path)) {
    L3Morphism f = load_morphism(path);
    Report r = validate_morphism(f);
    out.j["file"] = path;
    out.j["kind"] = "morphism";
    out.j["valid"] = r.ok();
    out.j["errors"] = r.errors;
    out.j["notes"] = r.notes;
    out.text << path << ": morphism " << (r.ok() ? "valid" : "INVALID") << "\n";
    for (const auto &e : r.errors) out.text << "  error: " << e << "\n";
    for (const auto &n : r.notes) out.text << "  note: " << n << "\n";
    return r.ok() ? Ok : Bad;
  }
  auto gs = graphs_of(path, which);
  std::string round = serialize(gs);
  if (serialize(parse_graphs(round)) != round) throw InvariantViolation("graph serialization is not stable");
  out.j["file"] = path;
  out.j["kind"] = "graphs";
  json arr = json::array();
  for (const auto &g : gs) {
    Conditions c = check_conditions(g);
    arr.push_back({{"name", g.name},
                   {"vertices", g.size()},
                   {"edges", g.edges.size()},
                   {"tree", g.is_tree()},
                   {"HS", c.hs},
                   {"SP", c.sp},
                   {"Ndeg", c.ndeg},
                   {"diagnostics", c.diagnostics}});
    out.text << path << ": graph " << g.name << ": " << g.size() << " vertices, " << g.edges.size() << " edges, "
             << (g.is_tree() ? "tree" : "not a tree") << "; HS " << yes_no(c.hs) << ", SP " << yes_no(c.sp)
             << ", Ndeg " << yes_no(c.ndeg) << "\n";
    for (const auto &d : c.diagnostics) out.text << "  " << d << "\n";
  }
  out.j["graphs"] = arr;
  return Ok;
}

int cmd_invariants(Output &out, const std::string &path, const std::string &which) {
  json arr = json::array();
  for (const auto &g : graphs_of(path, which)) {
    RatMatrix A = intersection_matrix(g);
    Conditions c = check_conditions(g);
    json o = {{"name", g.name}};
    out.text << "graph " << g.name << "\n";
    json verts = json::array();
    for (const auto &v : g.vertices) {
      Rat e = euler_number(v.inv);
      verts.push_back({{"name", v.name}, {"invariant", invariant_str(v.inv)}, {"euler", rat_json(e)}});
      out.text << "  vertex " << v.name << " " << invariant_str(v.inv) << "  e = " << e.get_str() << "\n";
    }
    o["vertices"] = verts;
    o["A"] = rat_matrix_json(A);
    out.text << "  A = " << render_matrix(A) << "\n";
    o["det"] = rat_json(c.det);
    out.text << "  det A = " << c.det.get_str() << "\n";
    if (c.det != 0) {
      RatMatrix Ai = rat_inverse(A);
      o["A_inverse"] = rat_matrix_json(Ai);
      out.text << "  A^-1 = " << render_matrix(Ai) << "\n";
      Inertia in = inertia_signature(A);
      o["b_plus"] = in.pos;
      o["b_minus"] = in.neg;
      out.text << "  b+ = " << in.pos << ", b- = " << in.neg << "\n";
    } else {
      o["A_inverse"] = nullptr;
      out.text << "  A^-1: singular\n";
    }
    o["HS"] = c.hs;
    o["SP"] = c.sp;
    o["Ndeg"] = c.ndeg;
    o["diagnostics"] = c.diagnostics;
    out.text << "  HS " << yes_no(c.hs) << ", SP " << yes_no(c.sp) << ", Ndeg " << yes_no(c.ndeg) << "\n";
    for (const auto &d : c.diagnostics) out.text << "    " << d << "\n";
    if (g.is_tree()) {
      auto t = torsion_order(g);
      o["torsion_order"] = t ? int_json(*t) : json(nullptr);
      if (t) out.text << "  |Tor H1| = " << t->get_str() << "\n";
      IntegralTree it = resolve_integral(g);
      o["integral_weights"] = vec_json(it.weights);
      out.text << "  integral tree weights: " << render_vec(it.weights) << "\n";
    }
    arr.push_back(o);
  }
  out.j["graphs"] = arr;
  return Ok;
}

int cmd_homology(Output &out, const std::string &path, const std::string &which) {
  json arr = json::array();
  for (const auto &g : graphs_of(path, which)) {
    BoundaryHomology h = boundary_homology(g);
    json o = {{"name", g.name},
              {"H1", group_json(h.graded[1], h.graded.labels[1])},
              {"H2", group_json(h.graded[2], h.graded.labels[2])},
              {"text", render(h)},
              {"flags", h.flags}};
    arr.push_back(o);
    out.text << render(h) << "\n";
    for (const auto &f : h.flags) out.text << "  flag: " << f << "\n";
  }
  out.j["graphs"] = arr;
  return Ok;
}

int cmd_object(Output &out, const std::string &path, const std::string &which) {
  json arr = json::array();
  int code = Ok;
  for (const auto &g : graphs_of(path, which)) {
    L3Object o = ring_object(g);
    Report r = validate_object(o);
    json x = object_json(o);
    x["name"] = g.name;
    x["valid"] = r.ok();
    x["errors"] = r.errors;
    x["notes"] = r.notes;
    arr.push_back(x);
    out.text << "object H_*(M(" << g.name << ")): " << (r.ok() ? "valid" : "INVALID") << (o.partial ? " (partial)" : "")
             << "\n";
    for (int k = 0; k <= 3; ++k) out.text << "  H" << k << " = " << o.H[k].str() << "\n";
    out.text << "  products:";
    for (const auto &[kl, p] : o.products) out.text << " (" << kl.first << "," << kl.second << ")";
    out.text << "\n";
    for (const auto &e : r.errors) out.text << "  error: " << e << "\n";
    for (const auto &n : r.notes) out.text << "  note: " << n << "\n";
    if (!r.ok()) code = Bad;
  }
  out.j["objects"] = arr;
  return code;
}

int cmd_morphism_check(Output &out, const std::string &path) {
  L3Morphism f = load_morphism(path);
  Report r = validate_morphism(f);
  out.j["file"] = path;
  out.j["valid"] = r.ok();
  json R = json::object();
  for (int k = 1; k <= 4; ++k) R[std::to_string(k)] = f.R[k].group.str();
  out.j["R"] = R;
  json ranks = json::array();
  out.text << path << ": " << (r.ok() ? "valid" : "INVALID") << "\n";
  for (int k = 1; k <= 4; ++k) out.text << "  R" << k << " = " << f.R[k].group.str() << "\n";
  if (r.ok())
    for (int k = 1; k <= 4; ++k)
      if (const Pairing *p = f.table(k, 4 - k)) {
        PairingRank pr = pairing_rank_q(*p, ones(f.L[0].free_rank));
        ranks.push_back({{"k", k}, {"l", 4 - k}, {"rank", pr.rank}, {"nondegenerate", pr.nondegenerate}});
        out.text << "  duality R" << k << " (x) L" << 4 - k << ": rank " << pr.rank
                 << (pr.nondegenerate ? " (nondegenerate)" : " (degenerate)") << "\n";
      }
  out.j["duality"] = ranks;
  out.j["errors"] = r.errors;
  out.j["notes"] = r.notes;
  for (const auto &e : r.errors) out.text << "  error: " << e << "\n";
  for (const auto &n : r.notes) out.text << "  note: " << n << "\n";
  return r.ok() ? Ok : Bad;
}

int cmd_compose(Output &out, const std::string &a, const std::string &b, const std::string &dest) {
  L3Morphism f1 = load_morphism(a), f2 = load_morphism(b);
  for (auto [f, p] : {std::pair{&f1, &a}, std::pair{&f2, &b}}) {
    Report r = validate_morphism(*f);
    if (!r.ok()) throw InputError(*p + ": morphism is invalid: " + r.errors.front());
  }
  L3Morphism c = compose(f1, f2);
  Report r = validate_morphism(c);
  json doc = morphism_json(c);
  if (!dest.empty()) write_file(dest, doc.dump(2) + "\n");
  out.j["valid"] = r.ok();
  out.j["errors"] = r.errors;
  if (dest.empty())
    out.j["morphism"] = doc;
  else
    out.j["written"] = dest;
  if (dest.empty() && !out.json_mode) out.text << doc.dump(2) << "\n";
  out.text << "composite: " << (r.ok() ? "valid" : "INVALID");
  for (int k = 1; k <= 4; ++k) out.text << (k == 1 ? "; " : ", ") << "R" << k << " = " << c.R[k].group.str();
  out.text << "\n";
  for (const auto &e : r.errors) out.text << "  error: " << e << "\n";
  return r.ok() ? Ok : Bad;
}

struct AlgebraInputs {
  SeifertGraph g, gp;
  L3Morphism phi;
  PlumbAlgebra alg;
};

AlgebraInputs load_algebra(const std::string &g, const std::string &gp, const std::string &phi) {
  AlgebraInputs in{load_graph(g), load_graph(gp), load_morphism(phi), {}};
  Report r = validate_morphism(in.phi);
  if (!r.ok()) throw InputError(phi + ": morphism is invalid: " + r.errors.front());
  in.alg = build_algebra(in.g, in.gp, in.phi);
  return in;
}

int cmd_algebra(Output &out, const AlgebraInputs &in) {
  const PlumbAlgebra &alg = in.alg;
  json dims = json::array();
  for (int k = 0; k <= 4; ++k) dims.push_back(alg.dim(k));
  out.j["dimensions"] = dims;
  out.j["grade3_basis"] = alg.r3_labels;
  out.j["A_inverse"] = rat_matrix_json(alg.Ainv);
  out.j["A_prime_inverse"] = rat_matrix_json(alg.Apinv);
  out.text << "R_*(" << in.g.name << ", " << in.gp.name << ", phi): dimensions";
  for (int k = 0; k <= 4; ++k) out.text << " " << alg.dim(k);
  out.text << "\n  A^-1 = " << render_matrix(alg.Ainv) << "\n  A'^-1 = " << render_matrix(alg.Apinv) << "\n";
  out.text << "  grade 3 basis:\n";
  for (std::size_t j = 0; j < alg.r3_labels.size(); ++j) out.text << "    [" << j + 1 << "] " << alg.r3_labels[j] << "\n";
  json prods = json::array();
  out.text << "  nonzero products of grade-3 basis elements:\n";
  const std::size_t n = alg.dim(3);
  for (std::size_t a = 0; a < n; ++a)
    for (std::size_t b = 0; b < n; ++b) {
      AlgebraElement p = alg.multiply(alg.basis(3, a), alg.basis(3, b));
      if (is_zero(p.c)) continue;
      prods.push_back({{"a", a + 1}, {"b", b + 1}, {"value", rvec_json(p.c)}, {"text", alg.render(p)}});
      out.text << "    [" << a + 1 << "].[" << b + 1 << "] = " << alg.render(p) << "\n";
    }
  out.j["products"] = prods;
  return Ok;
}

int cmd_obstruct_assoc(Output &out, const AlgebraInputs &in) {
  const PlumbAlgebra &alg = in.alg;
  auto ws = associativity_obstruction(alg);
  json arr = json::array();
  for (const auto &w : ws) {
    AlgebraElement t = alg.triple_product(alg.basis(3, w.a), alg.basis(3, w.b), alg.basis(3, w.c));
    arr.push_back({{"triple", {w.a + 1, w.b + 1, w.c + 1}},
                   {"labels", {alg.r3_labels[w.a], alg.r3_labels[w.b], alg.r3_labels[w.c]}},
                   {"value", rvec_json(w.value)},
                   {"text", alg.render_l1(w.value)},
                   {"formal", alg.render(t)}});
  }
  out.j["obstructed"] = !ws.empty();
  out.j["witnesses"] = arr;
  if (ws.empty()) {
    out.text << "no associativity obstruction found (necessary condition passed)\n";
    return Ok;
  }
  out.text << "associativity obstruction: " << ws.size() << " basis triples with nonzero triple product\n";
  for (const auto &w : ws) {
    AlgebraElement t = alg.triple_product(alg.basis(3, w.a), alg.basis(3, w.b), alg.basis(3, w.c));
    out.text << "  t(" << alg.r3_labels[w.a] << ", " << alg.r3_labels[w.b] << ", " << alg.r3_labels[w.c]
             << ") = " << alg.render(t) << " |-> " << alg.render_l1(w.value) << "\n";
  }
  return Obstruction;
}

IntMatrix parse_h(const std::string &spec, std::size_t rows, std::size_t m) {
  const std::size_t g = 4 * m;
  if (!spec.empty() && spec[0] == '[') {
    json j;
    try {
      j = json::parse(spec);
    } catch (const json::parse_error &e) {
      throw InputError("--h: JSON syntax error at byte " + std::to_string(e.byte));
    }
    detail::JsonReader rd{"--h"};
    // Accept either generator columns listed as rows (4m x n) or the n x 4m matrix itself.
    if (j.size() == g && (j.empty() || j[0].size() == rows)) return rd.matrix(j, "h", g, rows).transpose();
    return rd.matrix(j, "h", rows, g);
  }
  IntMatrix h(rows, g);
  std::stringstream ss(spec);
  std::string tok;
  std::size_t col = 0;
  while (std::getline(ss, tok, ',')) {
    std::size_t idx = 0;
    try {
      std::size_t used = 0;
      idx = std::stoul(tok, &used);
      if (used != tok.size()) throw std::invalid_argument(tok);
    } catch (...) {
      throw InputError("--h: '" + tok + "' is not a basis index");
    }
    if (idx < 1 || idx > rows) throw InputError("--h: index " + tok + " out of range 1.." + std::to_string(rows));
    if (col >= g) throw InputError("--h: more than 4m = " + std::to_string(g) + " indices");
    h(idx - 1, col++) = 1;
  }
  if (col != g) throw InputError("--h: expected 4m = " + std::to_string(g) + " indices, got " + std::to_string(col));
  return h;
}

int cmd_ten_eighths(Output &out, const AlgebraInputs &in, std::size_t m, const std::string &hspec, bool search,
                    const std::string &w, const std::string &wp, std::size_t s, const std::string &mode_s) {
  TenEighthsMode mode = mode_s == "strict" ? TenEighthsMode::Strict : TenEighthsMode::Paper;
  if (m == 0) throw InputError("--m must be positive");
  IntMatrix h;
  if (search) {
    auto found = search_h(in.alg, m, mode);
    if (!found) {
      out.j["verdict"] = to_string(Verdict::HypothesisNotMet);
      out.j["search"] = "no injection satisfies the parity condition";
      out.text << "verdict: HypothesisNotMet\n  search: no injection of Z^" << 4 * m
               << " onto basis vectors satisfies the parity condition\n";
      return Ok;
    }
    h = *found;
  } else {
    if (hspec.empty()) throw InputError("obstruct-ten-eighths needs --h or --search");
    h = parse_h(hspec, in.alg.dim(3), m);
  }
  Int wi, wpi;
  try {
    wi = Int(w);
    wpi = Int(wp);
  } catch (...) {
    throw InputError("--w and --wp must be integers");
  }
  TenEighthsReport r = ten_eighths_verdict(in.alg, in.g, in.gp, m, h, wi, wpi, s, mode);

  json hcols = json::array();
  for (std::size_t j = 0; j < h.cols(); ++j) hcols.push_back(vec_json(h.col(j)));
  json par = json::array();
  for (const auto &e : r.parity)
    par.push_back({{"tuple", {e.x[0] + 1, e.x[1] + 1, e.x[2] + 1, e.x[3] + 1}},
                   {"q", rat_json(e.q)},
                   {"required", e.expected},
                   {"ok", e.ok}});
  out.j["verdict"] = to_string(r.verdict);
  out.j["mode"] = mode_s;
  out.j["m"] = m;
  out.j["s"] = s;
  out.j["h"] = hcols;
  out.j["b_plus"] = r.bplus;
  out.j["b_minus"] = r.bminus;
  out.j["b_plus_prime"] = r.bplus_p;
  out.j["b_minus_prime"] = r.bminus_p;
  out.j["bound"] = r.bound;
  out.j["rank_ok"] = r.rank_ok;
  out.j["parity_ok"] = r.parity_ok;
  out.j["tuples_checked"] = r.tuples_checked;
  out.j["parity"] = par;
  out.j["w"] = int_json(r.w);
  out.j["w_prime"] = int_json(r.wp);
  out.j["difference"] = int_json(r.difference);
  out.j["flags"] = r.flags;
  out.j["audit"] = r.audit;

  out.text << "verdict: " << to_string(r.verdict) << "\n";
  out.text << "  h:";
  for (std::size_t j = 0; j < h.cols(); ++j) {
    AlgebraElement e{3, to_rat(h.col(j)), false};
    out.text << (j ? ", " : " ") << in.alg.render(e);
  }
  out.text << "\n";
  for (const auto &a : r.audit) out.text << "  " << a << "\n";
  out.text << "  parity table:\n";
  for (const auto &e : r.parity)
    out.text << "    q(" << e.x[0] + 1 << "," << e.x[1] + 1 << "," << e.x[2] + 1 << "," << e.x[3] + 1
             << ") = " << e.q.get_str() << ", required " << (e.expected == 1 ? "odd" : "even")
             << (e.ok ? "" : "  MISMATCH") << "\n";
  out.text << "  w = " << r.w.get_str() << ", w' = " << r.wp.get_str() << ", difference = " << r.difference.get_str()
           << "\n";
  for (const auto &f : r.flags) out.text << "  flag: " << f << "\n";
  return r.verdict == Verdict::Obstructed ? Obstruction : Ok;
}

int cmd_mubar(Output &out, const std::string &path, const std::string &which, const std::string &rochlin) {
  json arr = json::array();
  for (const auto &g : graphs_of(path, which)) {
    IntegralTree t = resolve_integral(g);
    WuData d = wu_class(t);
    Int mb = mu_bar(d);
    Int w = -8 * mb;
    json o = {{"name", g.name},
              {"weights", vec_json(t.weights)},
              {"wu", d.wu},
              {"w_sq", int_json(d.w_sq)},
              {"signature", d.sign},
              {"mu_bar", int_json(mb)},
              {"w", int_json(w)},
              {"HS", check_conditions(g).hs}};
    out.text << "graph " << g.name << "\n  integral tree weights: " << render_vec(t.weights) << "\n  Wu set:";
    for (std::size_t i = 0; i < d.wu.size(); ++i)
      if (d.wu[i]) out.text << " " << i + 1;
    out.text << "\n  w.w = " << d.w_sq.get_str() << ", sign = " << d.sign << "\n  mu_bar = " << mb.get_str()
             << ", w = " << w.get_str() << "\n";
    if (!rochlin.empty()) {
      Int mu;
      try {
        mu = Int(rochlin);
      } catch (...) {
        throw InputError("--rochlin must be an integer");
      }
      bool ok = rochlin_consistent(w, mu);
      o["rochlin"] = int_json(mu);
      o["rochlin_consistent"] = ok;
      out.text << "  Rochlin reference " << mu.get_str() << ": "
               << (ok ? "consistent (w = -mu mod 16)" : "INCONSISTENT") << "\n";
      if (!ok) throw InvariantViolation("w = " + w.get_str() + " disagrees with Rochlin reference " + mu.get_str());
    }
    arr.push_back(o);
  }
  out.j["graphs"] = arr;
  return Ok;
}

std::vector<WEntry> read_ledger(const std::string &path, bool may_be_missing) {
  if (may_be_missing && !fs::exists(path)) return {};
  return parse_ledger(read_file(path), path);
}

void append_entry(const std::string &path, const WEntry &e) {
  auto es = read_ledger(path, true);
  for (const auto &x : es)
    if (x.name == e.name) throw InputError(path + ": entry '" + e.name + "' already exists");
  es.push_back(e);
  write_file(path, serialize(es));
}

json entry_json(const WEntry &e) {
  return {{"name", e.name},     {"w", int_json(e.w)}, {"kplus", e.y.kplus},
          {"kminus", e.y.kminus}, {"r", e.y.r},         {"spin", e.spin},
          {"provenance", to_string(e.provenance)}};
}

}  // namespace

int main(int argc, char **argv) {
  CLI::App app{"plumbcat: plumbed 3-manifolds, L3 morphisms and cobordism obstructions"};
  app.require_subcommand(1);
  std::string format = "text";
  app.add_option("--format", format, "Output format")->check(CLI::IsMember({"text", "json"}));

  std::string file, which, file2, file3, dest;
  auto graph_verb = [&](const char *name, const char *desc) {
    auto *c = app.add_subcommand(name, desc)->fallthrough();
    c->add_option("file", file, "Graph file (.pg)")->required();
    c->add_option("--graph", which, "Graph name within the file");
    return c;
  };

  auto *validate = app.add_subcommand("validate", "Validate a graph (.pg) or morphism (.l3m) file")->fallthrough();
  validate->add_option("file", file)->required();
  validate->add_option("--graph", which, "Graph name within the file");
  auto *invariants = graph_verb("invariants", "Intersection matrix, conditions and resolution");
  auto *homology = graph_verb("homology", "Homology of the boundary 3-manifold");
  auto *object = graph_verb("object", "L3 object of the boundary homology ring");
  auto *mcheck = app.add_subcommand("morphism-check", "Check the L3 morphism axioms")->fallthrough();
  mcheck->add_option("file", file, "Morphism file (.l3m)")->required();
  auto *compose_c = app.add_subcommand("compose", "Compose two L3 morphisms")->fallthrough();
  compose_c->add_option("first", file, "H -> H'")->required();
  compose_c->add_option("second", file2, "H' -> H''")->required();
  compose_c->add_option("-o,--output", dest, "Write the composite here");

  auto triple_args = [&](CLI::App *c) {
    c->add_option("graph", file, "Source graph (.pg)")->required();
    c->add_option("graph2", file2, "Target graph (.pg)")->required();
    c->add_option("morphism", file3, "Morphism (.l3m)")->required();
  };
  auto *algebra = app.add_subcommand("algebra", "Distributive algebra of a pair of graphs")->fallthrough();
  triple_args(algebra);
  auto *assoc = app.add_subcommand("obstruct-assoc", "Scan triple products for an associativity obstruction")->fallthrough();
  triple_args(assoc);
  auto *ten = app.add_subcommand("obstruct-ten-eighths", "10/8 obstruction for a morphism")->fallthrough();
  ten->set_help_flag("--help", "Print this help message and exit");
  triple_args(ten);
  std::size_t m = 1, s = 0;
  std::string hspec, w, wp, mode = "paper";
  bool search = false;
  ten->add_option("--m", m, "Rank parameter m");
  ten->add_option("--h", hspec, "Images of the 4m generators: 1-based basis indices \"1,2,3,4\" or a JSON matrix");
  ten->add_flag("--search", search, "Search for a parity-compatible injection");
  ten->add_option("--w", w, "w of the source")->required();
  ten->add_option("--wp", wp, "w of the target")->required();
  ten->add_option("--s", s, "Budget s");
  ten->add_option("--mode", mode)->check(CLI::IsMember({"paper", "strict"}));

  auto *mubar = graph_verb("mubar", "Neumann-Siebenmann invariant and w of a plumbing tree");
  std::string rochlin;
  mubar->add_option("--rochlin", rochlin, "Reference Rochlin invariant");

  auto *ledger = app.add_subcommand("ledger", "w-invariant ledger")->fallthrough();
  ledger->require_subcommand(1);
  std::string lfile, name, spin = "-", a_name, b_name;
  std::string lw;
  std::size_t kplus = 0, kminus = 0, r = 0;
  auto *llist = ledger->add_subcommand("list", "List entries")->fallthrough();
  llist->add_option("ledger", lfile)->required();
  auto *ladd = ledger->add_subcommand("add", "Add a user-supplied entry")->fallthrough();
  ladd->add_option("ledger", lfile)->required();
  ladd->add_option("--name", name)->required();
  ladd->add_option("--w", lw)->required();
  ladd->add_option("--kplus", kplus);
  ladd->add_option("--kminus", kminus);
  ladd->add_option("--r", r);
  ladd->add_option("--spin", spin);
  auto *ltree = ledger->add_subcommand("add-tree", "Add an entry computed from a homology-sphere graph")->fallthrough();
  ltree->add_option("ledger", lfile)->required();
  ltree->add_option("file", file, "Graph file (.pg)")->required();
  ltree->add_option("--graph", which);
  ltree->add_option("--name", name);
  auto *lsum = ledger->add_subcommand("sum", "Add the connected sum of two entries")->fallthrough();
  lsum->add_option("ledger", lfile)->required();
  lsum->add_option("a", a_name)->required();
  lsum->add_option("b", b_name)->required();
  lsum->add_option("--name", name);
  auto *linert = ledger->add_subcommand("inertia", "Inertia test of sigma against a target")->fallthrough();
  linert->add_option("ledger", lfile)->required();
  linert->add_option("sigma", a_name)->required();
  linert->add_option("target", b_name)->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp &e) {
    return app.exit(e);
  } catch (const CLI::ParseError &e) {
    app.exit(e);
    std::cerr << app.help();
    return Bad;
  }

  Output out;
  out.json_mode = format == "json";
  try {
    if (*validate) {
      out.j["command"] = "validate";
      return out.finish(cmd_validate(out, file, which));
    }
    if (*invariants) {
      out.j["command"] = "invariants";
      return out.finish(cmd_invariants(out, file, which));
    }
    if (*homology) {
      out.j["command"] = "homology";
      return out.finish(cmd_homology(out, file, which));
    }
    if (*object) {
      out.j["command"] = "object";
      return out.finish(cmd_object(out, file, which));
    }
    if (*mcheck) {
      out.j["command"] = "morphism-check";
      return out.finish(cmd_morphism_check(out, file));
    }
    if (*compose_c) {
      out.j["command"] = "compose";
      return out.finish(cmd_compose(out, file, file2, dest));
    }
    if (*algebra) {
      out.j["command"] = "algebra";
      return out.finish(cmd_algebra(out, load_algebra(file, file2, file3)));
    }
    if (*assoc) {
      out.j["command"] = "obstruct-assoc";
      return out.finish(cmd_obstruct_assoc(out, load_algebra(file, file2, file3)));
    }
    if (*ten) {
      out.j["command"] = "obstruct-ten-eighths";
      return out.finish(cmd_ten_eighths(out, load_algebra(file, file2, file3), m, hspec, search, w, wp, s, mode));
    }
    if (*mubar) {
      out.j["command"] = "mubar";
      return out.finish(cmd_mubar(out, file, which, rochlin));
    }
    if (*ledger) {
      out.j["command"] = "ledger";
      if (*llist) {
        json arr = json::array();
        for (const auto &e : read_ledger(lfile, false)) {
          arr.push_back(entry_json(e));
          out.text << serialize(e) << "\n";
        }
        out.j["entries"] = arr;
        return out.finish(Ok);
      }
      if (*ladd) {
        WEntry e;
        e.name = name;
        if (!valid_token(name)) throw InputError("--name must be a nonempty token without spaces or '='");
        if (!valid_token(spin)) throw InputError("--spin must be a nonempty token without spaces or '='");
        try {
          e.w = Int(lw);
        } catch (...) {
          throw InputError("--w must be an integer");
        }
        e.y = {kplus, kminus, r};
        e.spin = spin;
        e.provenance = Provenance::UserSupplied;
        append_entry(lfile, e);
        out.j["added"] = entry_json(e);
        out.text << "added " << serialize(e) << "\n";
        return out.finish(Ok);
      }
      if (*ltree) {
        SeifertGraph g = load_graph(file, which);
        Conditions c = check_conditions(g);
        if (!c.hs) throw InputError(file + ": graph " + g.name + " does not satisfy HS; w is only defined here for homology spheres");
        WEntry e = w_invariant_tree(resolve_integral(g), name.empty() ? g.name : name);
        if (!valid_token(e.name)) throw InputError("entry name must be a token without spaces or '='");
        append_entry(lfile, e);
        out.j["added"] = entry_json(e);
        out.text << "added " << serialize(e) << "\n";
        return out.finish(Ok);
      }
      if (*lsum) {
        auto es = read_ledger(lfile, false);
        WEntry e = ledger_sum(find_entry(es, a_name), find_entry(es, b_name), name);
        if (!valid_token(e.name)) throw InputError("entry name must be a token without spaces or '='");
        append_entry(lfile, e);
        out.j["added"] = entry_json(e);
        out.text << "added " << serialize(e) << "\n";
        return out.finish(Ok);
      }
      if (*linert) {
        auto es = read_ledger(lfile, false);
        InertiaVerdict v = inertia_test(find_entry(es, a_name), find_entry(es, b_name));
        out.j["gate"] = v.gate;
        out.j["gate_sum"] = v.gate_sum;
        out.j["excluded"] = v.excluded;
        out.j["verdict"] = v.text;
        out.text << v.text << "\n";
        return out.finish(Ok);
      }
    }
  } catch (const InvariantViolation &e) {
    std::cerr << "plumbcat: internal invariant violated: " << e.what() << "\n";
    return Bad;
  } catch (const Error &e) {
    std::cerr << "plumbcat: " << e.what() << "\n";
    return Bad;
  } catch (const json::exception &e) {
    std::cerr << "plumbcat: " << e.what() << "\n";
    return Bad;
  }
  std::cerr << app.help();
  return Bad;
}
