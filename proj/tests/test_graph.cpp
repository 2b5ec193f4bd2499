#include <gtest/gtest.h>

#include <random>
#include <set>

#include "support.hpp"

namespace lc = loopcorrect;
namespace gr = loopcorrect::graphs;
using testing_support::naive_loop_masks;

namespace {

lc::EdgeSubset ids(std::initializer_list<lc::EdgeId> e) { return lc::EdgeSubset::from_ids(e); }

std::vector<std::uint64_t> masks(const std::vector<lc::EdgeSubset>& v) {
  std::vector<std::uint64_t> out;
  for (auto s : v) out.push_back(s.mask());
  return out;
}

lc::Multigraph random_multigraph(std::mt19937_64& rng, std::size_t n, std::size_t m, bool loops) {
  std::uniform_int_distribution<std::size_t> node(0, n - 1);
  std::vector<lc::Edge> e;
  while (e.size() < m) {
    const auto a = node(rng), b = node(rng);
    if (a == b && !loops) continue;
    e.push_back({a, b});
  }
  return lc::Multigraph(n, e);
}

}  // namespace

TEST(Multigraph, RejectsBadInput) {
  EXPECT_THROW(lc::Multigraph(0), lc::ArgumentError);
  EXPECT_THROW(lc::Multigraph(2, {{0, 2}}), lc::ArgumentError);
  const auto g = gr::cycle(3);
  EXPECT_THROW(g.check_edge(3), lc::ArgumentError);
  EXPECT_THROW((void)g.degree(3), lc::ArgumentError);
}

TEST(Multigraph, SimplicityFlags) {
  EXPECT_TRUE(gr::complete(4).is_simple());
  EXPECT_FALSE(gr::bouquet(1).is_simple());
  EXPECT_FALSE(lc::Multigraph(2, {{0, 1}, {1, 0}}).is_simple());
  EXPECT_TRUE(gr::bouquet(2).has_self_loop());
}

TEST(DegreeInSubset, TriangleFullSubset) {
  const auto g = gr::cycle(3);
  EXPECT_EQ(lc::degree_in_subset(g, lc::EdgeSubset::all(3), 0), 2u);
}

TEST(DegreeInSubset, EmptySubsetIsZero) {
  const auto g = gr::two_triangles();
  for (lc::NodeId i = 0; i < g.node_count(); ++i) EXPECT_EQ(lc::degree_in_subset(g, lc::EdgeSubset(), i), 0u);
}

TEST(DegreeInSubset, BouquetCountsLoopsTwice) {
  EXPECT_EQ(lc::degree_in_subset(gr::bouquet(2), lc::EdgeSubset::all(2), 0), 4u);
}

TEST(DegreeInSubset, InvalidNodeAndForeignSubset) {
  const auto g = gr::cycle(3);
  EXPECT_THROW(lc::degree_in_subset(g, lc::EdgeSubset(), 5), lc::ArgumentError);
  EXPECT_THROW(lc::degree_in_subset(g, ids({4}), 0), lc::ArgumentError);
}

TEST(DegreeInSubset, HandshakeProperty) {
  std::mt19937_64 rng(11);
  for (int trial = 0; trial < 50; ++trial) {
    const auto g = random_multigraph(rng, 5, 9, true);
    for (std::uint64_t m = 0; m < (1U << 9); m += 7) {
      std::size_t sum = 0;
      for (lc::NodeId i = 0; i < 5; ++i) sum += lc::degree_in_subset(g, lc::EdgeSubset(m), i);
      EXPECT_EQ(sum, 2 * lc::EdgeSubset(m).size());
    }
  }
}

TEST(CycleRank, Examples) {
  EXPECT_EQ(lc::cycle_rank(gr::path(7)), 0u);
  EXPECT_EQ(lc::cycle_rank(gr::two_triangles()), 2u);
  for (std::size_t l = 1; l <= 4; ++l) EXPECT_EQ(lc::cycle_rank(gr::bouquet(l)), l);
  EXPECT_THROW(lc::cycle_rank(lc::Multigraph(2)), lc::DomainError);
}

TEST(GeneralizedLoops, TreeHasOnlyEmptySet) {
  const auto loops = lc::enumerate_generalized_loops(gr::path(6));
  ASSERT_EQ(loops.size(), 1u);
  EXPECT_TRUE(loops[0].empty());
}

TEST(GeneralizedLoops, Triangle) {
  EXPECT_EQ(masks(lc::enumerate_generalized_loops(gr::cycle(3))), (std::vector<std::uint64_t>{0, 0b111}));
}

TEST(GeneralizedLoops, TwoTrianglesHasFive) {
  // edges 01,12,02 | 23 | 34,45,35
  const std::vector<std::uint64_t> expected = {0, 0b0000111, 0b1110000, 0b1110111, 0b1111111};
  EXPECT_EQ(masks(lc::enumerate_generalized_loops(gr::two_triangles())), expected);
}

TEST(GeneralizedLoops, MatchesNaiveFilter) {
  std::mt19937_64 rng(5);
  for (int trial = 0; trial < 60; ++trial) {
    const std::size_t n = 2 + trial % 6, m = 3 + trial % 12;
    const auto g = random_multigraph(rng, n, m, trial % 3 == 0);
    EXPECT_EQ(masks(lc::enumerate_generalized_loops(g)), naive_loop_masks(g)) << "trial " << trial;
    EXPECT_EQ(masks(lc::enumerate_generalized_loops_naive(g)), naive_loop_masks(g));
  }
}

TEST(GeneralizedLoops, K4And16EdgeGraphMatchNaive) {
  EXPECT_EQ(masks(lc::enumerate_generalized_loops(gr::complete(4))), naive_loop_masks(gr::complete(4)));
  const auto g = gr::grid(3, 4);  // 17 edges
  EXPECT_EQ(masks(lc::enumerate_generalized_loops(g)), naive_loop_masks(g));
}

TEST(GeneralizedLoops, ExemptNodeMayHaveDegreeOne) {
  EXPECT_EQ(masks(lc::enumerate_generalized_loops(gr::path(2), 0)), (std::vector<std::uint64_t>{0}));
  // triangle 01,12,02 with pendant 23; node 3 still forbids the pendant edge
  const lc::Multigraph lolli(4, {{0, 1}, {1, 2}, {0, 2}, {2, 3}});
  EXPECT_EQ(masks(lc::enumerate_generalized_loops(lolli, 2)), (std::vector<std::uint64_t>{0, 0b0111}));
  // double edge 01 plus 12; with node 2 exempt the full set survives
  const lc::Multigraph pan(3, {{0, 1}, {0, 1}, {1, 2}});
  EXPECT_EQ(masks(lc::enumerate_generalized_loops(pan, 2)), (std::vector<std::uint64_t>{0, 0b011, 0b111}));
  EXPECT_EQ(masks(lc::enumerate_generalized_loops(pan)), (std::vector<std::uint64_t>{0, 0b011}));
}

TEST(Contract, TriangleEdge) {
  const auto c = lc::contract(gr::cycle(3), 0);  // edges 01,12,20
  EXPECT_EQ(c.node_count(), 2u);
  ASSERT_EQ(c.edge_count(), 2u);
  for (const auto& e : c.edges()) EXPECT_EQ(std::minmax(e.a, e.b), std::minmax<lc::NodeId>(0, 1));
}

TEST(Contract, SingleEdgeAndParallelPair) {
  const auto p = lc::contract(gr::path(2), 0);
  EXPECT_EQ(p.node_count(), 1u);
  EXPECT_EQ(p.edge_count(), 0u);
  const auto b = lc::contract(lc::Multigraph(2, {{0, 1}, {0, 1}}), 0);
  EXPECT_EQ(b, gr::bouquet(1));
}

TEST(Contract, RelabelsAndKeepsOrder) {
  // contract 1-3: node 3 merges into 1, node 4 becomes 3
  const lc::Multigraph g(5, {{0, 1}, {1, 3}, {3, 4}, {2, 3}, {0, 4}});
  const auto c = lc::contract(g, 1);
  EXPECT_EQ(c, lc::Multigraph(4, {{0, 1}, {1, 3}, {2, 1}, {0, 3}}));
}

TEST(Contract, RejectsSelfLoop) { EXPECT_THROW(lc::contract(gr::bouquet(1), 0), lc::DomainError); }

TEST(Contract, CountsAndCycleRankInvariance) {
  std::mt19937_64 rng(3);
  for (int trial = 0; trial < 40; ++trial) {
    const auto g = random_multigraph(rng, 6, 10, true);
    for (lc::EdgeId e = 0; e < g.edge_count(); ++e) {
      if (g.edges()[e].is_loop()) continue;
      const auto c = lc::contract(g, e);
      EXPECT_EQ(c.node_count(), g.node_count() - 1);
      EXPECT_EQ(c.edge_count(), g.edge_count() - 1);
      if (lc::is_connected(g).connected) {
        EXPECT_EQ(lc::cycle_rank(c), lc::cycle_rank(g));
      }
    }
  }
}

TEST(Delete, Examples) {
  const auto d = lc::delete_edge(gr::cycle(3), 0);
  EXPECT_EQ(d, lc::Multigraph(3, {{1, 2}, {2, 0}}));
  EXPECT_EQ(lc::delete_edge(gr::bouquet(1), 0), lc::Multigraph(1));
  const auto split = lc::delete_edge(gr::two_triangles(), 3);
  const auto conn = lc::is_connected(split);
  EXPECT_FALSE(conn.connected);
  EXPECT_EQ(conn.components, 2u);
  EXPECT_THROW(lc::delete_edge(gr::cycle(3), 3), lc::ArgumentError);
}

TEST(Delete, CycleEdgeDropsRank) {
  const auto g = gr::two_triangles();
  for (lc::EdgeId e : {0, 1, 2, 4, 5, 6}) EXPECT_EQ(lc::cycle_rank(lc::delete_edge(g, e)), 1u);
}

TEST(DisjointCycles, Triangle) {
  const auto c = lc::enumerate_disjoint_cycles(gr::cycle(3));
  ASSERT_EQ(c.size(), 2u);
  EXPECT_EQ(c[0].edges.mask(), 0u);
  EXPECT_EQ(c[0].components, 0u);
  EXPECT_EQ(c[1].edges.mask(), 0b111u);
  EXPECT_EQ(c[1].components, 1u);
}

TEST(DisjointCycles, TwoTriangles) {
  const auto c = lc::enumerate_disjoint_cycles(gr::two_triangles());
  ASSERT_EQ(c.size(), 4u);
  const std::vector<std::pair<std::uint64_t, std::size_t>> expected = {
      {0, 0}, {0b0000111, 1}, {0b1110000, 1}, {0b1110111, 2}};
  for (std::size_t k = 0; k < 4; ++k) {
    EXPECT_EQ(c[k].edges.mask(), expected[k].first);
    EXPECT_EQ(c[k].components, expected[k].second);
  }
}

TEST(DisjointCycles, TreeAndK4) {
  EXPECT_EQ(lc::enumerate_disjoint_cycles(gr::path(5)).size(), 1u);
  // K4: empty, four triangles, three 4-cycles
  EXPECT_EQ(lc::enumerate_disjoint_cycles(gr::complete(4)).size(), 8u);
}

TEST(DisjointCycles, AgreesWithTwoRegularFilter) {
  std::mt19937_64 rng(8);
  for (int trial = 0; trial < 30; ++trial) {
    const auto g = random_multigraph(rng, 6, 9, false);
    std::set<std::uint64_t> expect;
    for (std::uint64_t m = 0; m < (1U << 9); ++m) {
      const auto d = lc::subset_degrees(g, lc::EdgeSubset(m));
      if (std::all_of(d.begin(), d.end(), [](std::size_t x) { return x == 0 || x == 2; })) expect.insert(m);
    }
    std::set<std::uint64_t> got;
    for (const auto& c : lc::enumerate_disjoint_cycles(g)) got.insert(c.edges.mask());
    EXPECT_EQ(got, expect);
  }
}

TEST(Matchings, Examples) {
  EXPECT_EQ(lc::enumerate_matchings(gr::path(3)), (std::vector<std::uint64_t>{1, 2}));
  EXPECT_EQ(lc::enumerate_matchings(gr::cycle(3)), (std::vector<std::uint64_t>{1, 3}));
  EXPECT_EQ(lc::enumerate_matchings(gr::complete(4)), (std::vector<std::uint64_t>{1, 6, 3}));
  // values frozen from tests/oracle/derive_constants.py
  EXPECT_EQ(lc::enumerate_matchings(gr::cycle(6)), (std::vector<std::uint64_t>{1, 6, 9, 2}));
  EXPECT_EQ(lc::enumerate_matchings(gr::grid(2, 3)), (std::vector<std::uint64_t>{1, 7, 11, 3}));
  EXPECT_EQ(lc::enumerate_matchings(gr::two_triangles()), (std::vector<std::uint64_t>{1, 7, 11, 1}));
  EXPECT_THROW(lc::enumerate_matchings(gr::bouquet(1)), lc::DomainError);
}

TEST(Connectivity, Examples) {
  EXPECT_TRUE(lc::is_connected(lc::Multigraph(1)).connected);
  const auto two = lc::is_connected(lc::Multigraph(2));
  EXPECT_FALSE(two.connected);
  EXPECT_EQ(two.components, 2u);
}

TEST(EdgeList, ParseAndRender) {
  const auto g = lc::parse_edge_list("3 4\n0 1\n1 2\n2 0\n1 1\n");
  EXPECT_EQ(g, lc::Multigraph(3, {{0, 1}, {1, 2}, {2, 0}, {1, 1}}));
  EXPECT_EQ(lc::parse_edge_list(lc::render_edge_list(g)), g);
  EXPECT_THROW(lc::parse_edge_list("3\n"), lc::ArgumentError);
  EXPECT_THROW(lc::parse_edge_list("3 2\n0 1\n"), lc::ArgumentError);
  EXPECT_THROW(lc::parse_edge_list("3 1\n0 5\n"), lc::ArgumentError);
  EXPECT_THROW(lc::parse_edge_list("3 1\n0 1\n2 2\n"), lc::ArgumentError);
}
