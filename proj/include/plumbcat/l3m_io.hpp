#pragma once

#include <filesystem>
#include <fstream>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "plumbcat/homology.hpp"
#include "plumbcat/l3cat.hpp"
#include "plumbcat/seifert_graph.hpp"

namespace plumbcat {

using json = nlohmann::ordered_json;

inline std::string read_file(const std::filesystem::path &p) {
  std::ifstream in(p, std::ios::binary);
  if (!in) throw InputError(p.string() + ": cannot open file");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

inline void write_file(const std::filesystem::path &p, const std::string &text) {
  std::ofstream out(p, std::ios::binary);
  if (!out) throw InputError(p.string() + ": cannot write file");
  out << text;
}

/// Reads a .pg file; parse errors carry the file name.
inline std::vector<SeifertGraph> load_graphs(const std::filesystem::path &p) {
  std::string text = read_file(p);
  try {
    return parse_graphs(text);
  } catch (const ParseError &e) {
    throw InputError(p.string() + ": " + e.what());
  }
}

inline SeifertGraph load_graph(const std::filesystem::path &p, const std::string &which = {}) {
  std::string text = read_file(p);
  try {
    return parse_graph(text, which);
  } catch (const ParseError &e) {
    throw InputError(p.string() + ": " + e.what());
  }
}

// ---------------------------------------------------------------------------
// JSON values

inline json int_json(const Int &x) {
  if (x.fits_slong_p()) return json(x.get_si());
  return json(x.get_str());
}

inline json rat_json(const Rat &x) {
  if (x.get_den() == 1) return int_json(x.get_num());
  return json(x.get_str());
}

inline json vec_json(const Vec &v) {
  json a = json::array();
  for (const auto &x : v) a.push_back(int_json(x));
  return a;
}

inline json rvec_json(const RVec &v) {
  json a = json::array();
  for (const auto &x : v) a.push_back(rat_json(x));
  return a;
}

inline json matrix_json(const IntMatrix &m) {
  json a = json::array();
  for (std::size_t i = 0; i < m.rows(); ++i) a.push_back(vec_json(m.row(i)));
  return a;
}

inline json rat_matrix_json(const RatMatrix &m) {
  json a = json::array();
  for (std::size_t i = 0; i < m.rows(); ++i) a.push_back(rvec_json(m.row(i)));
  return a;
}

inline json group_json(const FgAb &g, const std::vector<std::string> &labels = {}) {
  json o = json::object();
  o["free"] = g.free_rank;
  json t = json::array();
  for (const auto &d : g.torsion) t.push_back(int_json(d));
  o["torsion"] = t;
  if (!labels.empty()) o["labels"] = labels;
  return o;
}

namespace detail {

struct JsonReader {
  std::string where;

  [[noreturn]] void fail(const std::string &path, const std::string &msg) const {
    throw InputError(where + ": " + path + ": " + msg);
  }

  Int integer(const json &j, const std::string &path) const {
    if (j.is_number_integer()) return Int(std::to_string(j.get<long long>()));
    if (j.is_string()) {
      try {
        return Int(j.get<std::string>());
      } catch (...) {
        fail(path, "not an integer");
      }
    }
    fail(path, "expected an integer");
  }

  Vec vec(const json &j, const std::string &path, std::optional<std::size_t> n = std::nullopt) const {
    if (!j.is_array()) fail(path, "expected an array");
    if (n && j.size() != *n) fail(path, "expected " + std::to_string(*n) + " entries, found " + std::to_string(j.size()));
    Vec v;
    for (std::size_t i = 0; i < j.size(); ++i) v.push_back(integer(j[i], path + "[" + std::to_string(i) + "]"));
    return v;
  }

  IntMatrix matrix(const json &j, const std::string &path, std::size_t rows, std::size_t cols) const {
    if (!j.is_array()) fail(path, "expected an array of rows");
    if (j.size() != rows) fail(path, "expected " + std::to_string(rows) + " rows, found " + std::to_string(j.size()));
    IntMatrix m(rows, cols);
    for (std::size_t r = 0; r < rows; ++r) {
      Vec row = vec(j[r], path + "[" + std::to_string(r) + "]", cols);
      for (std::size_t c = 0; c < cols; ++c) m(r, c) = row[c];
    }
    return m;
  }

  FgAb group(const json &j, const std::string &path, std::vector<std::string> *labels = nullptr) const {
    if (!j.is_object()) fail(path, "expected a group object {\"free\": n, \"torsion\": [...]}");
    FgAb g;
    if (j.contains("free")) {
      if (!j["free"].is_number_unsigned()) fail(path + ".free", "expected a nonnegative integer");
      g.free_rank = j["free"].get<std::size_t>();
    }
    if (j.contains("torsion")) {
      Vec t = vec(j["torsion"], path + ".torsion");
      for (std::size_t i = 0; i < t.size(); ++i) {
        if (t[i] < 2) fail(path + ".torsion", "torsion orders must be at least 2");
        if (i > 0 && !mpz_divisible_p(t[i].get_mpz_t(), t[i - 1].get_mpz_t()))
          fail(path + ".torsion", "torsion orders must form a divisor chain");
      }
      g.torsion = t;
    }
    if (labels) {
      labels->clear();
      if (j.contains("labels")) {
        if (!j["labels"].is_array() || j["labels"].size() != g.ngens())
          fail(path + ".labels", "expected " + std::to_string(g.ngens()) + " labels");
        for (const auto &s : j["labels"]) labels->push_back(s.get<std::string>());
      }
    }
    return g;
  }

  GradedFgAb graded(const json &j, const std::string &path, std::size_t degrees) const {
    if (!j.is_array() || j.size() != degrees)
      fail(path, "expected " + std::to_string(degrees) + " groups (degrees 0.." + std::to_string(degrees - 1) + ")");
    GradedFgAb g;
    for (std::size_t k = 0; k < degrees; ++k) {
      std::vector<std::string> labels;
      g.components.push_back(group(j[k], path + "[" + std::to_string(k) + "]", &labels));
      g.labels.push_back(labels);
    }
    return g;
  }

  /// Table from "table" (dense rows of target vectors) or sparse "entries" [[row, col, vec], ...] (0-based).
  Pairing pairing(const json &j, const std::string &path, const FgAb &left, const FgAb &right, const FgAb &target,
                  int k, int l) const {
    Pairing p = Pairing::zero(left, right, target, k, l);
    const std::size_t nt = target.ngens();
    if (j.contains("table")) {
      const json &t = j["table"];
      if (!t.is_array() || t.size() != left.ngens()) fail(path + ".table", "expected " + std::to_string(left.ngens()) + " rows");
      for (std::size_t a = 0; a < left.ngens(); ++a) {
        const std::string pa = path + ".table[" + std::to_string(a) + "]";
        if (!t[a].is_array() || t[a].size() != right.ngens()) fail(pa, "expected " + std::to_string(right.ngens()) + " entries");
        for (std::size_t b = 0; b < right.ngens(); ++b)
          p.table[a][b] = reduce(target, vec(t[a][b], pa + "[" + std::to_string(b) + "]", nt));
      }
    }
    if (j.contains("entries")) {
      const json &e = j["entries"];
      if (!e.is_array()) fail(path + ".entries", "expected an array");
      for (std::size_t x = 0; x < e.size(); ++x) {
        const std::string px = path + ".entries[" + std::to_string(x) + "]";
        if (!e[x].is_array() || e[x].size() != 3) fail(px, "expected [row, col, vector]");
        if (!e[x][0].is_number_unsigned() || !e[x][1].is_number_unsigned()) fail(px, "row and col must be indices");
        std::size_t a = e[x][0].get<std::size_t>(), b = e[x][1].get<std::size_t>();
        if (a >= left.ngens() || b >= right.ngens()) fail(px, "index out of range");
        p.table[a][b] = reduce(target, vec(e[x][2], px + "[2]", nt));
      }
    }
    return p;
  }
};

inline int degree_field(const detail::JsonReader &rd, const json &j, const char *key, const std::string &path) {
  if (!j.contains(key) || !j[key].is_number_integer()) rd.fail(path, std::string("missing integer field \"") + key + "\"");
  return j[key].get<int>();
}

}  // namespace detail

// ---------------------------------------------------------------------------
// Objects

inline json pairing_json(const Pairing &p) {
  json o = json::object();
  o["k"] = p.k;
  o["l"] = p.l;
  json e = json::array();
  for (std::size_t a = 0; a < p.table.size(); ++a)
    for (std::size_t b = 0; b < p.table[a].size(); ++b) {
      bool zero = true;
      for (const auto &x : p.table[a][b])
        if (x != 0) zero = false;
      if (!zero) e.push_back(json::array({a, b, vec_json(p.table[a][b])}));
    }
  o["entries"] = e;
  return o;
}

inline json object_json(const L3Object &o) {
  json j = json::object();
  json H = json::array();
  for (std::size_t k = 0; k < o.H.degrees(); ++k)
    H.push_back(group_json(o.H[k], k < o.H.labels.size() ? o.H.labels[k] : std::vector<std::string>{}));
  j["H"] = H;
  json P = json::array();
  for (const auto &[kl, p] : o.products) P.push_back(pairing_json(p));
  j["products"] = P;
  j["mu"] = vec_json(o.mu);
  j["epsilon"] = vec_json(o.epsilon);
  if (o.partial) j["partial"] = true;
  return j;
}

inline L3Object parse_object(const json &j, const std::string &path, const detail::JsonReader &rd,
                             const std::filesystem::path &base) {
  if (!j.is_object()) rd.fail(path, "expected an object description");
  std::map<Degrees, Pairing> extra;
  auto read_products = [&](const GradedFgAb &H, std::map<Degrees, Pairing> &out) {
    if (!j.contains("products")) return;
    const json &P = j["products"];
    if (!P.is_array()) rd.fail(path + ".products", "expected an array");
    for (std::size_t x = 0; x < P.size(); ++x) {
      const std::string px = path + ".products[" + std::to_string(x) + "]";
      int k = detail::degree_field(rd, P[x], "k", px), l = detail::degree_field(rd, P[x], "l", px);
      if (k < 0 || l < 0 || k > 3 || l > 3 || k + l < 3) rd.fail(px, "degrees out of range");
      out[{k, l}] = rd.pairing(P[x], px, H[k], H[l], H[k + l - 3], k, l);
    }
  };
  if (j.contains("graph")) {
    std::filesystem::path gp = base / j["graph"].get<std::string>();
    SeifertGraph g = load_graph(gp, j.value("name", std::string{}));
    BoundaryHomology bh = boundary_homology(g);
    read_products(bh.graded, extra);
    return ring_object(bh, extra);
  }
  L3Object o;
  o.H = rd.graded(j.value("H", json()), path + ".H", 4);
  read_products(o.H, o.products);
  o.mu = j.contains("mu") ? rd.vec(j["mu"], path + ".mu", o.H[3].ngens()) : Vec(o.H[3].ngens(), Int(1));
  o.epsilon =
      j.contains("epsilon") ? rd.vec(j["epsilon"], path + ".epsilon", o.H[0].free_rank) : ones(o.H[0].free_rank);
  o.partial = j.value("partial", false);
  return o;
}

// ---------------------------------------------------------------------------
// Morphisms

/// Parses a morphism description; graph references resolve relative to base.
inline L3Morphism parse_morphism(const json &j, const std::string &where, const std::filesystem::path &base) {
  detail::JsonReader rd{where};
  if (!j.is_object()) rd.fail("(top)", "expected a JSON object");
  if (!j.contains("objects") || !j["objects"].contains("source") || !j["objects"].contains("target"))
    rd.fail("objects", "needs \"source\" and \"target\"");
  L3Morphism f;
  f.source = parse_object(j["objects"]["source"], "objects.source", rd, base);
  f.target = parse_object(j["objects"]["target"], "objects.target", rd, base);
  if (!j.contains("L")) rd.fail("L", "missing");
  f.L = rd.graded(j["L"], "L", 5);
  for (const char *key : {"i", "i'"}) {
    if (!j.contains(key) || !j[key].is_array() || j[key].size() != 4)
      rd.fail(key, "expected 4 matrices (degrees 0..3)");
    const L3Object &obj = std::string(key) == "i" ? f.source : f.target;
    auto &maps = std::string(key) == "i" ? f.i : f.ip;
    for (int k = 0; k < 4; ++k) {
      const std::string p = std::string(key) + "[" + std::to_string(k) + "]";
      maps.push_back(make_hom(obj.H[k], f.L[k], rd.matrix(j[key][k], p, f.L[k].ngens(), obj.H[k].ngens())));
    }
  }
  f.R.resize(5);
  for (int k = 1; k <= 4; ++k) {
    const std::string key = std::to_string(k);
    if (j.contains("R") && j["R"].contains(key)) {
      const json &r = j["R"][key];
      const json &gens = r.is_object() ? r.value("generators", json::array()) : r;
      const std::string p = "R." + key;
      const std::size_t amb = f.source.H[k - 1].ngens() + f.target.H[k - 1].ngens();
      if (!gens.is_array()) rd.fail(p, "expected a list of generator vectors");
      IntMatrix G(amb, gens.size());
      for (std::size_t c = 0; c < gens.size(); ++c) G.set_col(c, rd.vec(gens[c], p + "[" + std::to_string(c) + "]", amb));
      std::vector<std::string> labels;
      if (r.is_object() && r.contains("labels"))
        for (const auto &s : r["labels"]) labels.push_back(s.get<std::string>());
      if (!labels.empty() && labels.size() != gens.size()) rd.fail(p + ".labels", "one label per generator expected");
      try {
        set_r_group(f, k, G, labels);
      } catch (const InputError &e) {
        rd.fail(p, e.what());
      }
    } else {
      set_r_group(f, k);
    }
  }
  if (j.contains("R_pairings")) {
    const json &P = j["R_pairings"];
    if (!P.is_array()) rd.fail("R_pairings", "expected an array");
    for (std::size_t x = 0; x < P.size(); ++x) {
      const std::string px = "R_pairings[" + std::to_string(x) + "]";
      int k = detail::degree_field(rd, P[x], "k", px), l = detail::degree_field(rd, P[x], "l", px);
      if (k < 1 || k > 4 || l < 0 || l > 4 || k + l < 4) rd.fail(px, "degrees out of range");
      f.pairings[{k, l}] = rd.pairing(P[x], px, f.R[k].group, f.L[l], f.L[k + l - 4], k, l);
    }
  }
  if (j.value("complete", false)) complete_pairings(f);
  return f;
}

inline L3Morphism load_morphism(const std::filesystem::path &p) {
  std::string text = read_file(p);
  json j;
  try {
    j = json::parse(text);
  } catch (const json::parse_error &e) {
    throw InputError(p.string() + ": JSON syntax error at byte " + std::to_string(e.byte));
  }
  try {
    return parse_morphism(j, p.string(), p.parent_path());
  } catch (const json::exception &e) {
    throw InputError(p.string() + ": " + e.what());
  }
}

inline json morphism_json(const L3Morphism &f) {
  json j = json::object();
  j["objects"] = {{"source", object_json(f.source)}, {"target", object_json(f.target)}};
  json L = json::array();
  for (std::size_t k = 0; k < f.L.degrees(); ++k)
    L.push_back(group_json(f.L[k], k < f.L.labels.size() ? f.L.labels[k] : std::vector<std::string>{}));
  j["L"] = L;
  json I = json::array(), Ip = json::array();
  for (int k = 0; k < 4; ++k) {
    I.push_back(matrix_json(f.i[k].matrix));
    Ip.push_back(matrix_json(f.ip[k].matrix));
  }
  j["i"] = I;
  j["i'"] = Ip;
  json R = json::object();
  for (int k = 1; k <= 4; ++k) {
    json gens = json::array();
    for (std::size_t c = 0; c < f.R[k].gens.cols(); ++c) gens.push_back(vec_json(f.R[k].gens.col(c)));
    R[std::to_string(k)] = {{"generators", gens}, {"labels", f.R[k].labels}, {"group", f.R[k].group.str()}};
  }
  j["R"] = R;
  json P = json::array();
  for (const auto &[kl, p] : f.pairings) P.push_back(pairing_json(p));
  j["R_pairings"] = P;
  return j;
}

}  // namespace plumbcat
