#include <gtest/gtest.h>

#include "plumbcat/homology.hpp"
#include "plumbcat/l3m_io.hpp"
#include "support.hpp"

using namespace plumbcat;
using namespace plumbcat::testing;

TEST(Homology, ExampleGraphs) {
  BoundaryHomology h = boundary_homology(load_graph(data_path("gamma.pg")));
  EXPECT_EQ(h.graded[0], FgAb::free(1));
  EXPECT_EQ(h.graded[1], (FgAb{8, {45, 675}}));
  EXPECT_EQ(h.graded[2], FgAb::free(8));
  EXPECT_EQ(h.graded[3], FgAb::free(1));
  EXPECT_EQ(render(h), "H1 = Z^8 (+) Z/45 (+) Z/675; H2 = Z^8");
  EXPECT_FALSE(h.corank_adjusted);
  EXPECT_EQ(h.lambda_basis.front(), "alpha[1,1]");
  EXPECT_EQ(h.theta_basis.back(), "theta[2,4]");

  BoundaryHomology hp = boundary_homology(load_graph(data_path("gammap.pg")));
  EXPECT_EQ(hp.graded[1], (FgAb{6, {45, 675}}));
  EXPECT_EQ(hp.graded[2], FgAb::free(6));
}

TEST(Homology, TorsionOrderMatchesDeterminant) {
  EXPECT_EQ(torsion_order(load_graph(data_path("gamma.pg"))), Int(45 * 675));
}

TEST(Homology, PoincareSphere) {
  BoundaryHomology h = boundary_homology(brieskorn_graph(2, 3, 5));
  EXPECT_TRUE(h.graded[1].trivial());
  EXPECT_TRUE(h.graded[2].trivial());
}

TEST(Homology, CorankAdjustment) {
  // e = 0 with genus 1: H1 picks up one extra free summand.
  SeifertGraph g = parse_graph("graph T { vertex v { genus = 1; cone = (1,0); } }");
  BoundaryHomology h = boundary_homology(g);
  EXPECT_TRUE(h.corank_adjusted);
  EXPECT_EQ(h.graded[1].free_rank, 3u);
  EXPECT_EQ(h.graded[2].free_rank, 3u);
}

TEST(Homology, RandomTreesTorsion) {
  Rng rng(31);
  int tested = 0;
  for (int trial = 0; trial < 1000 && tested < 60; ++trial) {
    SeifertGraph g = random_tree_graph(rng, 4, 2);
    auto order = torsion_order(g);
    if (!order) continue;
    BoundaryHomology h = boundary_homology(g);
    EXPECT_EQ(h.graded[1].torsion_order(), *order) << serialize(g);
    EXPECT_EQ(h.graded[1].free_rank, static_cast<std::size_t>(2 * g.total_genus()));
    EXPECT_EQ(h.graded[2].free_rank, h.graded[1].free_rank);
    ++tested;
  }
  EXPECT_GE(tested, 60);
}

TEST(Homology, SymplecticForm) {
  std::vector<std::size_t> genus{1, 2};
  EXPECT_EQ(symplectic(genus, 0, 1), 1);
  EXPECT_EQ(symplectic(genus, 1, 0), -1);
  EXPECT_EQ(symplectic(genus, 2, 3), 1);
  EXPECT_EQ(symplectic(genus, 1, 2), 0);
  EXPECT_EQ(symplectic(genus, 3, 4), 0);
  EXPECT_EQ(symplectic(genus, 4, 5), 1);
}

TEST(RingObject, ValidAndPartial) {
  L3Object o = ring_object(load_graph(data_path("gamma.pg")));
  Report r = validate_object(o);
  EXPECT_TRUE(r.ok()) << (r.errors.empty() ? "" : r.errors.front());
  EXPECT_TRUE(o.partial);
  ASSERT_NE(o.table(1, 2), nullptr);
  EXPECT_EQ(o.table(2, 2), nullptr);
  PairingRank d = pairing_rank_q(*o.table(1, 2), ones(1));
  EXPECT_EQ(d.rank, 8u);
}

TEST(RingObject, RandomFreeObjectsValidate) {
  Rng rng(32);
  for (int trial = 0; trial < 20; ++trial) {
    L3Object o = random_free_object(rng, 3, 2);
    Report r = validate_object(o);
    EXPECT_TRUE(r.ok()) << (r.errors.empty() ? "" : r.errors.front());
  }
}
