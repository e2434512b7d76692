#include <gtest/gtest.h>

#include "plumbcat/l3m_io.hpp"
#include "plumbcat/seifert_graph.hpp"
#include "support.hpp"

using namespace plumbcat;
using namespace plumbcat::testing;

TEST(Parse, ExampleGraph) {
  SeifertGraph g = load_graph(data_path("gamma.pg"));
  ASSERT_EQ(g.size(), 2u);
  EXPECT_EQ(g.name, "Gamma");
  EXPECT_EQ(g.vertices[0].inv.genus, 2);
  EXPECT_EQ(g.vertices[0].inv.cones.size(), 3u);
  EXPECT_EQ(g.vertices[1].inv.cones[2], (ConePoint{9, 4}));
  ASSERT_TRUE(g.vertices[0].spin.has_value());
  EXPECT_TRUE(g.is_tree());
}

TEST(Parse, ErrorsCarryPosition) {
  try {
    parse_graph("graph G {\n  vertex v { genus = x; }\n}\n");
    FAIL() << "expected a parse error";
  } catch (const ParseError &e) {
    EXPECT_EQ(e.line, 2u);
  }
  EXPECT_THROW(parse_graph("graph G { }"), InputError);
  EXPECT_THROW(parse_graph("graph G { vertex v { genus = 0; } edge v -- w; }"), InputError);
}

TEST(Parse, SelectByName) {
  std::string text = read_file(data_path("unit.pg"));
  EXPECT_THROW(parse_graph(text), InputError);
  EXPECT_EQ(parse_graph(text, "Plus1").vertices[0].inv.cones[0], (ConePoint{1, 1}));
  EXPECT_THROW(parse_graph(text, "Nope"), InputError);
}

TEST(Parse, RoundTrip) {
  Rng rng(21);
  for (int trial = 0; trial < 50; ++trial) {
    SeifertGraph g = random_tree_graph(rng, 5, 3);
    SeifertGraph h = parse_graph(serialize(g));
    EXPECT_EQ(h.vertices, g.vertices);
    EXPECT_EQ(h.edges, g.edges);
    EXPECT_EQ(serialize(h), serialize(g));
  }
  SeifertGraph g = load_graph(data_path("gamma.pg"));
  EXPECT_EQ(serialize(parse_graph(serialize(g))), serialize(g));
}

TEST(Invariants, ExampleMatrices) {
  RatMatrix A{{2, 1}, {1, Rat(2, 3)}};
  for (const char *f : {"gamma.pg", "gammap.pg"}) {
    SeifertGraph g = load_graph(data_path(f));
    EXPECT_EQ(intersection_matrix(g), A) << f;
    EXPECT_EQ(rat_inverse(intersection_matrix(g)), (RatMatrix{{2, -3}, {-3, 6}})) << f;
    EXPECT_EQ(det_q(intersection_matrix(g)), Rat(1, 3));
  }
}

TEST(Invariants, EulerNumber) {
  EXPECT_EQ(euler_number(SeifertInvariant{0, {{5, 3}, {5, 3}, {5, 4}}}), 2);
  EXPECT_EQ(euler_number(SeifertInvariant{0, {{9, 1}, {9, 1}, {9, 4}}}), Rat(2, 3));
}

TEST(Conditions, ExampleGraphFailsHsOnly) {
  Conditions c = check_conditions(load_graph(data_path("gamma.pg")));
  EXPECT_FALSE(c.hs);
  EXPECT_TRUE(c.ndeg);
  EXPECT_EQ(c.det, Rat(1, 3));
}

TEST(Conditions, BrieskornSphereIsHomologySphere) {
  SeifertGraph g = brieskorn_graph(2, 3, 5);
  Conditions c = check_conditions(g);
  EXPECT_TRUE(c.hs);
  EXPECT_TRUE(c.ndeg);
  EXPECT_EQ(c.det, Rat(-1, 30));
  EXPECT_EQ(torsion_order(g), Int(1));
}

TEST(Conditions, NdegFlagsZeroEuler) {
  SeifertGraph g = parse_graph("graph Z { vertex v { genus = 0; cone = (2,1) (2,-1); } }");
  Conditions c = check_conditions(g);
  EXPECT_FALSE(c.ndeg);
}

TEST(Conditions, BrieskornRejectsBadExponents) {
  EXPECT_THROW(brieskorn_graph(2, 4, 5), InputError);
  EXPECT_THROW(brieskorn_graph(1, 3, 5), InputError);
}

TEST(Betti, SignatureSplit) {
  auto [bp, bm] = betti_pm(load_graph(data_path("gamma.pg")));
  EXPECT_EQ(bp, 2u);
  EXPECT_EQ(bm, 0u);
}

TEST(Resolve, ContinuedFraction) {
  EXPECT_EQ(negative_continued_fraction(5, 3), (Vec{2, 3}));
  EXPECT_EQ(negative_continued_fraction(7, 1), (Vec{7}));
  EXPECT_THROW(negative_continued_fraction(3, 3), InputError);
}

TEST(Resolve, SchurComplementRecoversEuler) {
  // The resolved tree's form, restricted to the central vertices after inverting, agrees with A.
  Rng rng(22);
  int tested = 0;
  for (int trial = 0; trial < 400 && tested < 50; ++trial) {
    SeifertGraph g = random_tree_graph(rng);
    RatMatrix A = intersection_matrix(g);
    if (det_q(A) == 0) continue;
    IntegralTree t = resolve_integral(g);
    RatMatrix M = to_rat(t.matrix());
    if (det_q(M) == 0) continue;
    RatMatrix Minv = rat_inverse(M);
    RatMatrix S(g.size(), g.size());
    for (std::size_t a = 0; a < g.size(); ++a)
      for (std::size_t b = 0; b < g.size(); ++b) S(a, b) = Minv(t.central[a], t.central[b]);
    EXPECT_EQ(S, rat_inverse(A)) << serialize(g);
    ++tested;
  }
  EXPECT_GE(tested, 50);
}

TEST(Resolve, TorsionIdentityOnRandomTrees) {
  Rng rng(23);
  int tested = 0;
  for (int trial = 0; trial < 1000 && tested < 60; ++trial) {
    SeifertGraph g = random_tree_graph(rng);
    auto order = torsion_order(g);
    if (!order) continue;
    IntegralTree t = resolve_integral(g);
    FgAb coker = normalize_group(t.matrix(), t.size());
    EXPECT_EQ(coker.free_rank, 0u);
    EXPECT_EQ(coker.torsion_order(), *order) << serialize(g);
    ++tested;
  }
  EXPECT_GE(tested, 60);
}

TEST(Resolve, RejectsCycles) {
  SeifertGraph g = parse_graph(
      "graph C { vertex a { genus = 0; cone = (1,1); } vertex b { genus = 0; cone = (1,1); } "
      "vertex c { genus = 0; cone = (1,1); } edge a -- b; edge b -- c; edge c -- a; }");
  EXPECT_FALSE(g.is_tree());
  EXPECT_THROW(resolve_integral(g), InputError);
}
