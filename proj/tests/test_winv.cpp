#include <gtest/gtest.h>

#include <numeric>
#include <tuple>

#include "plumbcat/l3m_io.hpp"
#include "plumbcat/winv.hpp"
#include "support.hpp"

using namespace plumbcat;
using namespace plumbcat::testing;

TEST(MuBar, E8) {
  IntegralTree t = resolve_integral(load_graph(data_path("e8.pg")));
  WuData d = wu_class(t);
  EXPECT_EQ(d.sign, -8);
  EXPECT_EQ(d.w_sq, 0);
  EXPECT_EQ(mu_bar(d), -1);
  WEntry w = w_invariant_tree(t, "E8");
  EXPECT_EQ(w.w, 8);
  EXPECT_EQ(w.y, (YClass{0, 8, 0}));
  EXPECT_EQ(w.provenance, Provenance::ComputedFromTree);
  EXPECT_TRUE(rochlin_consistent(w.w, 8));
}

TEST(MuBar, BrieskornSphere) {
  WEntry w = w_invariant_tree(resolve_integral(brieskorn_graph(2, 3, 5)));
  EXPECT_EQ(w.w, 8);
  EXPECT_TRUE(rochlin_consistent(w.w, 8));
  // Mirror orientation.
  WEntry m = w_invariant_tree(resolve_integral(load_graph(data_path("sigma235.pg"))));
  EXPECT_EQ(m.w, -8);
}

TEST(MuBar, UnitVertices) {
  for (const char *name : {"Minus1", "Plus1"})
    EXPECT_EQ(w_invariant_tree(resolve_integral(load_graph(data_path("unit.pg"), name))).w, 0) << name;
}

namespace {

/// Blow up a vertex (new leaf) or an edge (new middle vertex) with a sphere of weight eps.
IntegralTree blow_up(Rng &rng, IntegralTree t) {
  const Int eps = uniform(rng, 0, 1) ? 1 : -1;
  const std::size_t fresh = t.size();
  if (t.edges.empty() || uniform(rng, 0, 1)) {
    const std::size_t v = uniform(rng, 0, static_cast<long>(t.size()) - 1);
    t.weights[v] += eps;
    t.edges.emplace_back(v, fresh);
  } else {
    const std::size_t e = uniform(rng, 0, static_cast<long>(t.edges.size()) - 1);
    auto [a, b] = t.edges[e];
    t.weights[a] += eps;
    t.weights[b] += eps;
    t.edges[e] = {a, fresh};
    t.edges.emplace_back(fresh, b);
  }
  t.weights.push_back(eps);
  return t;
}

std::vector<std::tuple<long, long, long>> coprime_triples() {
  std::vector<std::tuple<long, long, long>> out;
  for (long p = 2; p <= 7; ++p)
    for (long q = p + 1; q <= 11; ++q)
      for (long r = q + 1; r <= 13; ++r)
        if (std::gcd(p, q) == 1 && std::gcd(p, r) == 1 && std::gcd(q, r) == 1) out.emplace_back(p, q, r);
  return out;
}

}  // namespace

TEST(MuBar, NonUnimodularTreesNeedNotBeIntegral) {
  // Boundary L(3,1): sign - w.w = 2, so mu-bar is undefined and the computation aborts.
  IntegralTree t{{-3}, {}, {0}};
  EXPECT_THROW(mu_bar(t), InvariantViolation);
}

TEST(MuBar, BlowUpInvariance) {
  Rng rng(51);
  IntegralTree e8 = resolve_integral(load_graph(data_path("e8.pg")));
  for (int trial = 0; trial < 40; ++trial) {
    IntegralTree t = e8;
    const int steps = uniform(rng, 1, 6);
    for (int s = 0; s < steps; ++s) t = blow_up(rng, t);
    WuData d = wu_class(t);
    EXPECT_EQ(d.nullity, 0u);
    EXPECT_TRUE(mpz_divisible_ui_p(Int(Int(d.sign) - d.w_sq).get_mpz_t(), 8));
    EXPECT_EQ(mu_bar(d), -1) << trial;
  }
}

TEST(MuBar, BrieskornFamily) {
  // Sigma(p,q,r) bounds a unimodular tree; mu-bar is integral, and shifting the
  // Seifert normalization (or blowing up) does not change it.
  Rng rng(52);
  int tested = 0;
  for (auto [p, q, r] : coprime_triples()) {
    SeifertGraph g = brieskorn_graph(p, q, r);
    IntegralTree t = resolve_integral(g);
    ASSERT_EQ(abs(det_q(to_rat(t.matrix()))), 1);
    Int mb = mu_bar(t);
    SeifertGraph h = g;
    auto &cones = h.vertices[0].inv.cones;
    cones[0].b += cones[0].a;
    cones[1].b -= cones[1].a;
    EXPECT_EQ(mu_bar(resolve_integral(h)), mb) << p << "," << q << "," << r;
    EXPECT_EQ(mu_bar(blow_up(rng, blow_up(rng, t))), mb) << p << "," << q << "," << r;
    ++tested;
  }
  EXPECT_GE(tested, 40);
}

TEST(MuBar, WuClassIsCharacteristic) {
  Rng rng(53);
  IntegralTree base = resolve_integral(brieskorn_graph(2, 3, 7));
  for (int trial = 0; trial < 50; ++trial) {
    IntegralTree t = base;
    for (int s = uniform(rng, 0, 5); s > 0; --s) t = blow_up(rng, t);
    WuData d = wu_class(t);
    IntMatrix A = t.matrix();
    for (std::size_t i = 0; i < t.size(); ++i) {
      Int s = 0;
      for (std::size_t j = 0; j < t.size(); ++j) s += A(i, j) * d.wu[j];
      EXPECT_EQ(mpz_odd_p(Int(s - A(i, i)).get_mpz_t()), 0);
    }
  }
}

TEST(Ledger, SumProperties) {
  Rng rng(54);
  auto random_entry = [&](const std::string &name) {
    return WEntry{name, Int(uniform(rng, -40, 40)),
                  {std::size_t(uniform(rng, 0, 3)), std::size_t(uniform(rng, 0, 3)), std::size_t(uniform(rng, 0, 3))},
                  "-", Provenance::UserSupplied};
  };
  for (int trial = 0; trial < 50; ++trial) {
    WEntry a = random_entry("a"), b = random_entry("b"), c = random_entry("c");
    WEntry ab = ledger_sum(a, b), ba = ledger_sum(b, a);
    EXPECT_EQ(ab.w, ba.w);
    EXPECT_EQ(ab.y, ba.y);
    WEntry l = ledger_sum(ledger_sum(a, b), c), r = ledger_sum(a, ledger_sum(b, c));
    EXPECT_EQ(l.w, r.w);
    EXPECT_EQ(l.y, r.y);
    EXPECT_EQ(ab.w, a.w + b.w);
    EXPECT_EQ(ab.y.r, std::min(a.y.r, b.y.r));
    EXPECT_EQ(ab.provenance, Provenance::Sum);
    EXPECT_EQ(ab.name, "a#b");
  }
}

TEST(Ledger, RoundTrip) {
  std::vector<WEntry> es{{"E8", 8, {0, 8, 0}, "-", Provenance::ComputedFromTree},
                         {"M", -4, {1, 2, 3}, "s1", Provenance::UserSupplied},
                         {"E8#M", 4, {1, 10, 0}, "-", Provenance::Sum}};
  std::string text = "# comment\n" + serialize(es);
  EXPECT_EQ(parse_ledger(text), es);
  EXPECT_EQ(find_entry(es, "M").w, -4);
  EXPECT_THROW(find_entry(es, "N"), InputError);
}

TEST(Ledger, ParseErrors) {
  EXPECT_THROW(parse_ledger("name=a w=1 kplus=0 kminus=0 r=0 spin=-\n"), InputError);
  EXPECT_THROW(parse_ledger("name=a w=1 kplus=-1 kminus=0 r=0 spin=- provenance=sum\n"), InputError);
  EXPECT_THROW(parse_ledger("name=a w=x kplus=0 kminus=0 r=0 spin=- provenance=sum\n"), InputError);
  EXPECT_THROW(parse_ledger("name=a w=1 kplus=0 kminus=0 r=0 spin=- provenance=magic\n"), InputError);
  EXPECT_THROW(parse_ledger("name=a w=1 colour=red kplus=0 kminus=0 r=0 spin=- provenance=sum\n"), InputError);
  EXPECT_THROW(parse_ledger("garbage\n"), InputError);
}

TEST(Rochlin, Consistency) {
  EXPECT_TRUE(rochlin_consistent(8, 8));
  EXPECT_TRUE(rochlin_consistent(-8, 8));
  EXPECT_TRUE(rochlin_consistent(0, 0));
  EXPECT_FALSE(rochlin_consistent(8, 0));
}

TEST(Inertia, GateAndVerdicts) {
  WEntry sigma{"Sigma", 8, {1, 1, 0}}, target{"M", 12, {0, 0, 0}};
  InertiaVerdict v = inertia_test(sigma, target);
  EXPECT_TRUE(v.gate);
  EXPECT_TRUE(v.excluded);
  EXPECT_EQ(v.text.rfind("not in inertia group", 0), 0u);

  WEntry big{"N", 0, {1, 0, 0}};
  InertiaVerdict g = inertia_test(sigma, big);
  EXPECT_FALSE(g.gate);
  EXPECT_FALSE(g.excluded);
  EXPECT_EQ(g.gate_sum, 3u);

  WEntry zero{"Z", 0, {0, 0, 0}};
  EXPECT_FALSE(inertia_test(zero, target).excluded);
  WEntry bad{"B", 8, {0, 0, 1}};
  EXPECT_THROW(inertia_test(bad, target), InputError);
}
