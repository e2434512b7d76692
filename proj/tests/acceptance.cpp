// Acceptance checks: one PASS/FAIL line per criterion.
#include <sys/wait.h>

#include <chrono>
#include <cstdio>
#include <functional>
#include <iostream>
#include <sstream>
#include <string>

#include "plumbcat/homology.hpp"
#include "plumbcat/l3cat.hpp"
#include "plumbcat/l3m_io.hpp"
#include "plumbcat/plumb_algebra.hpp"
#include "plumbcat/winv.hpp"
#include "support.hpp"

#ifndef PLUMBCAT_CLI
#define PLUMBCAT_CLI "plumbcat"
#endif

using namespace plumbcat;
using namespace plumbcat::testing;

namespace {

int failures = 0;

void criterion(int id, const std::string &name, const std::function<std::string()> &body) {
  std::string why;
  const auto t0 = std::chrono::steady_clock::now();
  try {
    why = body();
  } catch (const std::exception &e) {
    why = std::string("exception: ") + e.what();
  }
  const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  std::ostringstream os;
  os.precision(3);
  os << (why.empty() ? "PASS" : "FAIL") << " " << id << " " << name << " (" << std::fixed << secs << " s)";
  if (!why.empty()) {
    os << ": " << why;
    ++failures;
  }
  std::cout << os.str() << std::endl;
}

struct Run {
  int code = -1;
  std::string out;
};

Run run_cli(const std::string &args) {
  Run r;
  std::string cmd = std::string("\"") + PLUMBCAT_CLI + "\" " + args + " 2>/dev/null";
  FILE *p = popen(cmd.c_str(), "r");
  if (!p) return r;
  char buf[4096];
  while (std::fgets(buf, sizeof buf, p)) r.out += buf;
  int st = pclose(p);
  r.code = WIFEXITED(st) ? WEXITSTATUS(st) : -1;
  return r;
}

RatMatrix rat(std::initializer_list<std::initializer_list<Rat>> rows) { return RatMatrix(rows); }

struct Example {
  SeifertGraph g, gp;
  L3Morphism phi;
  PlumbAlgebra alg;
};

const Example &example() {
  static Example ex = [] {
    Example e{load_graph(data_path("gamma.pg")), load_graph(data_path("gammap.pg")),
              load_morphism(data_path("phi.l3m")), {}};
    e.alg = build_algebra(e.g, e.gp, e.phi);
    return e;
  }();
  return ex;
}

std::string fixtures() {
  return data_path("gamma.pg") + " " + data_path("gammap.pg") + " " + data_path("phi.l3m");
}

// Independent double product: -A^{-1} s on Sigma, +A'^{-1} s' on Sigma'.
RVec double_closed(const PlumbAlgebra &alg, const RVec &a, const RVec &b) {
  RVec out(alg.nv + alg.nvp);
  auto sym = [](const std::vector<std::size_t> &vmap, std::size_t nv, const RVec &x, const RVec &y, std::size_t off) {
    RVec s(nv);
    for (std::size_t j = 0; j + 1 < vmap.size(); j += 2)
      s[vmap[j]] += x[off + j] * y[off + j + 1] - x[off + j + 1] * y[off + j];
    return s;
  };
  RVec s = sym(alg.vmap, alg.nv, a, b, 0), sp = sym(alg.vmapp, alg.nvp, a, b, alg.n);
  for (std::size_t v = 0; v < alg.nv; ++v)
    for (std::size_t w = 0; w < alg.nv; ++w) out[v] -= alg.Ainv(v, w) * s[w];
  for (std::size_t v = 0; v < alg.nvp; ++v)
    for (std::size_t w = 0; w < alg.nvp; ++w) out[alg.nv + v] += alg.Apinv(v, w) * sp[w];
  return out;
}

}  // namespace

int main() {
  criterion(1, "intersection matrices and inverses of Gamma, Gamma'", [] {
    const auto &ex = example();
    const RatMatrix A = rat({{2, 1}, {1, Rat(2, 3)}}), Ai = rat({{2, -3}, {-3, 6}});
    for (const SeifertGraph *g : {&ex.g, &ex.gp}) {
      RatMatrix M = intersection_matrix(*g);
      if (!(M == A)) return g->name + ": A differs";
      if (!(rat_inverse(M) == Ai)) return g->name + ": inverse differs";
    }
    return std::string();
  });

  criterion(2, "boundary homology of Gamma, Gamma'", [] {
    const auto &ex = example();
    BoundaryHomology h = boundary_homology(ex.g), hp = boundary_homology(ex.gp);
    const FgAb H1{8, {45, 675}}, H1p{6, {45, 675}};
    if (!(h.graded[1] == H1) || !(h.graded[2] == FgAb::free(8))) return "Gamma: " + render(h);
    if (!(hp.graded[1] == H1p) || !(hp.graded[2] == FgAb::free(6))) return "Gamma': " + render(hp);
    return std::string();
  });

  criterion(3, "torsion order = |det A| * prod a on 60 random trees", [] {
    Rng rng(20240603);
    std::size_t tested = 0, attempts = 0;
    while (tested < 60 && attempts < 5000) {
      ++attempts;
      SeifertGraph g = random_tree_graph(rng, 4);
      Rat det = det_q(intersection_matrix(g));
      if (det == 0) continue;
      ++tested;
      IntegralTree t = resolve_integral(g);
      SnfResult s = smith_normal_form(t.matrix());
      Int snf = 1;
      for (const auto &d : s.divisors()) snf *= d;
      if (s.rank != t.size()) return serialize(g) + ": resolved matrix is singular";
      Int expect = *torsion_order(g);
      Int homology = boundary_homology(g).graded[1].torsion_order();
      if (snf != expect || homology != expect)
        return serialize(g) + ": SNF " + snf.get_str() + ", homology " + homology.get_str() + ", |det|*prod a " +
               expect.get_str();
    }
    return tested < 60 ? std::string("only ") + std::to_string(tested) + " nonsingular samples" : std::string();
  });

  criterion(4, "quadruple product q(th11,th12,th13,th14) = -5, odd", [] {
    const auto &alg = example().alg;
    auto e = [&](std::size_t j) { return alg.basis(3, j); };
    Rat q = alg.quadruple_product(e(0), e(1), e(2), e(3));
    Rat qc = alg.quadruple_closed(e(0), e(1), e(2), e(3));
    if (q != -5 || qc != -5) return "q = " + q.get_str() + ", closed form " + qc.get_str();
    if (!mpz_odd_p(q.get_num_mpz_t())) return std::string("q is even");
    return std::string();
  });

  criterion(5, "triple product t(th11,th12,th13) = 5 delta3; obstruct-assoc exits 1", [] {
    const auto &alg = example().alg;
    AlgebraElement t = alg.triple_product(alg.basis(3, 0), alg.basis(3, 1), alg.basis(3, 2));
    RVec v = alg.project(t);
    RVec want(v.size());
    want[2] = 5;
    if (v != want) return "t = " + alg.render_l1(v);
    Run r = run_cli("obstruct-assoc " + fixtures());
    if (r.code != 1) return "obstruct-assoc exit code " + std::to_string(r.code);
    if (r.out.find("|-> 5*delta3") == std::string::npos) return std::string("report lacks 5*delta3");
    return std::string();
  });

  criterion(6, "closed forms and the four rearrangement identities on all basis tuples", [] {
    const auto &alg = example().alg;
    const std::size_t n = alg.dim(3);
    auto e = [&](std::size_t j) { return alg.basis(3, j); };
    auto mul = [&](const AlgebraElement &x, const AlgebraElement &y) { return alg.multiply(x, y); };
    for (std::size_t a = 0; a < n; ++a)
      for (std::size_t b = 0; b < n; ++b) {
        AlgebraElement ab = mul(e(a), e(b));
        if (ab.c != double_closed(alg, alg.r3[a], alg.r3[b])) return "double product at " + std::to_string(a);
        for (std::size_t c = 0; c < n; ++c) {
          if (!(alg.triple_product(e(a), e(b), e(c)) == alg.triple_closed(e(a), e(b), e(c))))
            return "triple product at (" + std::to_string(a) + "," + std::to_string(b) + "," + std::to_string(c) + ")";
          for (std::size_t d = 0; d < n; ++d) {
            auto Q = [&](std::size_t x, std::size_t y, std::size_t z, std::size_t w) {
              return alg.quadruple_closed(e(x), e(y), e(z), e(w));
            };
            const std::string at = " at (" + std::to_string(a) + "," + std::to_string(b) + "," + std::to_string(c) +
                                   "," + std::to_string(d) + ")";
            if (mul(mul(ab, e(c)), e(d)).c[0] != Q(a, b, c, d)) return "((ab)c)d" + at;
            if (mul(mul(e(a), mul(e(b), e(c))), e(d)).c[0] != Q(b, c, a, d)) return "(a(bc))d" + at;
            if (mul(e(a), mul(mul(e(b), e(c)), e(d))).c[0] != Q(b, c, a, d)) return "a((bc)d)" + at;
            if (mul(e(a), mul(e(b), mul(e(c), e(d)))).c[0] != Q(c, d, a, b)) return "a(b(cd))" + at;
            if (mul(ab, mul(e(c), e(d))).c[0] != Q(a, b, c, d)) return "(ab)(cd)" + at;
          }
        }
      }
    return std::string();
  });

  criterion(7, "10/8 verdict: Obstructed, difference 16, invisible to Rochlin", [] {
    const auto &ex = example();
    IntMatrix h(ex.alg.dim(3), 4);
    for (std::size_t j = 0; j < 4; ++j) h(j, j) = 1;
    TenEighthsReport r = ten_eighths_verdict(ex.alg, ex.g, ex.gp, 1, h, 12, -4, 0, TenEighthsMode::Paper);
    if (r.verdict != Verdict::Obstructed) return "verdict " + to_string(r.verdict);
    if (r.difference != 16) return "difference " + r.difference.get_str();
    bool flagged = false;
    for (const auto &f : r.flags) flagged |= f == "invisible to Rochlin (divisible by 16)";
    if (!flagged) return std::string("missing Rochlin flag");
    Run cli = run_cli("obstruct-ten-eighths " + fixtures() + " --m 1 --h 1,2,3,4 --w 12 --wp -4");
    if (cli.code != 1) return "CLI exit code " + std::to_string(cli.code);
    if (cli.out.find("difference = 16") == std::string::npos || cli.out.find("invisible to Rochlin") == std::string::npos)
      return std::string("CLI report lacks the audit");
    return std::string();
  });

  criterion(8, "Example morphism: axioms, duality ranks 6 and 8, ladder", [] {
    const auto &phi = example().phi;
    Report r = validate_morphism(phi);
    if (!r.ok()) return r.errors.front();
    const Vec eps = ones(phi.L[0].free_rank);
    PairingRank r22 = pairing_rank_q(*phi.table(2, 2), eps), r31 = pairing_rank_q(*phi.table(3, 1), eps);
    if (r22.rank != 6 || !r22.nondegenerate) return "R2 (x) L2 rank " + std::to_string(r22.rank);
    if (r31.rank != 8 || !r31.nondegenerate) return "R3 (x) L1 rank " + std::to_string(r31.rank);
    // The supplied tables must agree with the ladder wherever the ladder determines them.
    for (auto [k, l] : {std::pair{2, 2}, std::pair{3, 1}})
      if (!(*ladder_pairing(phi, k, l) == *phi.table(k, l)))
        return "R" + std::to_string(k) + " (x) L" + std::to_string(l) + " disagrees with the ladder";
    return std::string();
  });

  criterion(9, "composition of 20 random pairs: valid, dualities nondegenerate", [] {
    Rng rng(977);
    for (int trial = 0; trial < 20; ++trial) {
      L3Object H = random_free_object(rng), Hp = random_free_object(rng), Hpp = random_free_object(rng);
      L3Morphism f1 = random_free_morphism(rng, H, Hp), f2 = random_free_morphism(rng, Hp, Hpp);
      for (const auto *f : {&f1, &f2}) {
        Report r = validate_morphism(*f);
        if (!r.ok()) return "trial " + std::to_string(trial) + ": generated morphism invalid: " + r.errors.front();
      }
      L3Morphism c = compose(f1, f2);
      Report r = validate_morphism(c);
      if (!r.ok()) return "trial " + std::to_string(trial) + ": composite invalid: " + r.errors.front();
      const Vec eps = ones(c.L[0].free_rank);
      for (int k = 1; k <= 4; ++k) {
        const Pairing *p = c.table(k, 4 - k);
        if (!p) return "trial " + std::to_string(trial) + ": composite lacks R" + std::to_string(k) + " table";
        if (!pairing_rank_q(*p, eps).nondegenerate)
          return "trial " + std::to_string(trial) + ": R" + std::to_string(k) + " duality degenerate";
      }
    }
    return std::string();
  });

  criterion(10, "mu-bar and w: E8, unit vertices, inertia test", [] {
    IntegralTree e8 = resolve_integral(load_graph(data_path("e8.pg")));
    Int mb = mu_bar(e8);
    WEntry w = w_invariant_tree(e8, "E8");
    if (mb != -1 || w.w != 8) return "E8: mu_bar " + mb.get_str() + ", w " + w.w.get_str();
    if (!mpz_divisible_ui_p(Int(w.w - 8).get_mpz_t(), 16) || !rochlin_consistent(w.w, 8))
      return std::string("E8: Rochlin mismatch");
    for (const char *name : {"Minus1", "Plus1"}) {
      WEntry u = w_invariant_tree(resolve_integral(load_graph(data_path("unit.pg"), name)), name);
      if (u.w != 0) return std::string(name) + ": w " + u.w.get_str();
    }
    WEntry sigma{"Sigma", 8, {1, 1, 0}}, target{"M", 12, {0, 0, 0}};
    InertiaVerdict v = inertia_test(sigma, target);
    if (!v.excluded || v.text.rfind("not in inertia group", 0) != 0) return "inertia: " + v.text;
    return std::string();
  });

  criterion(11, "SNF on 200 random matrices; inertia under 50 unimodular congruences", [] {
    Rng rng(31337);
    const auto t0 = std::chrono::steady_clock::now();
    for (int trial = 0; trial < 200; ++trial) {
      const std::size_t r = uniform(rng, 1, 8), c = uniform(rng, 1, 8);
      IntMatrix M = random_matrix(rng, r, c, -20, 20);
      if (trial % 5 == 0 && r > 1)  // rank-deficient cases
        for (std::size_t j = 0; j < c; ++j) M(r - 1, j) = 2 * M(0, j);
      SnfResult s = smith_normal_form(M);
      if (!(s.U * M * s.V == s.D)) return "U M V != D at trial " + std::to_string(trial);
      Rat du = det_q(to_rat(s.U)), dv = det_q(to_rat(s.V));
      if ((du != 1 && du != -1) || (dv != 1 && dv != -1)) return "U or V not unimodular at trial " + std::to_string(trial);
      for (std::size_t i = 0; i < r; ++i)
        for (std::size_t j = 0; j < c; ++j)
          if (i != j && s.D(i, j) != 0) return "D not diagonal at trial " + std::to_string(trial);
      Vec d = s.divisors();
      if (s.rank != rank_q(M)) return "rank mismatch at trial " + std::to_string(trial);
      for (std::size_t i = 0; i < d.size(); ++i) {
        if (d[i] <= 0) return "nonpositive divisor at trial " + std::to_string(trial);
        if (i + 1 < d.size() && !mpz_divisible_p(d[i + 1].get_mpz_t(), d[i].get_mpz_t()))
          return "divisor chain broken at trial " + std::to_string(trial);
      }
      for (std::size_t i = s.rank; i < std::min(r, c); ++i)
        if (s.D(i, i) != 0) return "nonzero entry past the rank at trial " + std::to_string(trial);
    }
    for (int trial = 0; trial < 50; ++trial) {
      const std::size_t n = uniform(rng, 1, 7);
      RatMatrix A = random_symmetric(rng, n);
      RatMatrix P = to_rat(random_unimodular(rng, n));
      RatMatrix B = P.transpose() * A * P;
      Inertia a = inertia_signature(A), b = inertia_signature(B);
      if (!(a == b)) return "inertia changed under congruence at trial " + std::to_string(trial);
      if (a.pos + a.neg + a.zero != n || a.pos + a.neg != rank_q(A)) return std::string("inertia/rank mismatch");
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    if (secs >= 10) return "took " + std::to_string(secs) + " s";
    return std::string();
  });

  std::cout << (failures ? "acceptance: " + std::to_string(failures) + " criteria failed" : std::string("acceptance: all criteria passed"))
            << std::endl;
  return failures ? 1 : 0;
}
