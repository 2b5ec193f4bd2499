#include <gtest/gtest.h>

#include <bit>
#include <random>

#include "support.hpp"

namespace lc = loopcorrect;
namespace gr = loopcorrect::graphs;
using testing_support::naive_exact;
using testing_support::rel_err;

namespace {

const lc::PairTable kOnes = {{{1, 1}, {1, 1}}};

lc::PairTable coupling(double j) { return {{{std::exp(j), std::exp(-j)}, {std::exp(-j), std::exp(j)}}}; }

// Right side of the subset expansion, summed over every subset with the
// scalar recurrences; weighted form divides by xi_w + 1/xi_w.
double subset_sum(const lc::Multigraph& g, const std::vector<double>& beta, const std::vector<double>& xi,
                  std::optional<lc::NodeId> w = std::nullopt) {
  long double total = 0;
  for (std::uint64_t s = 0; s < (std::uint64_t{1} << g.edge_count()); ++s) {
    std::vector<std::size_t> d(g.node_count(), 0);
    long double r = 1;
    for (std::size_t e = 0; e < g.edge_count(); ++e)
      if (s >> e & 1U) {
        r *= beta[e];
        ++d[g.edges()[e].a];
        ++d[g.edges()[e].b];
      }
    for (std::size_t i = 0; i < g.node_count(); ++i) {
      const double gam = xi[i] - 1 / xi[i];
      r *= (w && *w == i) ? testing_support::g_ref(d[i], gam) : testing_support::f_ref(d[i], gam);
    }
    total += r;
  }
  if (w) total /= xi[*w] + 1 / xi[*w];
  return static_cast<double>(total);
}

}  // namespace

TEST(BruteForce, SingleEdgeAllOnes) {
  const auto r = lc::brute_force(lc::PairwiseModel(gr::path(2), {kOnes}));
  EXPECT_NEAR(r.log_z, std::log(4.0), 1e-15);
  for (const auto& p : r.marginals) {
    EXPECT_NEAR(p[0], 0.5, 1e-15);
    EXPECT_NEAR(p[1], 0.5, 1e-15);
  }
}

TEST(BruteForce, SingleEdgeCoupling) {
  const auto r = lc::brute_force(lc::PairwiseModel(gr::path(2), {coupling(0.5)}));
  EXPECT_NEAR(r.log_z, std::log(2 * std::exp(0.5) + 2 * std::exp(-0.5)), 1e-14);
  EXPECT_NEAR(r.log_z, 1.506408868078168, 1e-14);  // frozen from tests/oracle/derive_constants.py
}

TEST(BruteForce, ThreeFactorModelAllOnes) {
  const lc::FactorModel fm(3, {{{0, 1}, std::vector<double>(4, 1.0)},
                               {{0, 1, 2}, std::vector<double>(8, 1.0)},
                               {{1}, std::vector<double>(2, 1.0)}});
  EXPECT_NEAR(lc::brute_force(fm).log_z, std::log(8.0), 1e-15);
}

TEST(BruteForce, TwoTrianglesUniformCouplings) {
  const auto g = gr::two_triangles();
  const lc::PairwiseModel m3(g, std::vector<lc::PairTable>(7, coupling(0.3)));
  const lc::PairwiseModel m1(g, std::vector<lc::PairTable>(7, coupling(0.1)));
  // frozen from tests/oracle/derive_constants.py
  EXPECT_NEAR(lc::brute_force(m3).log_z, 4.518110547887097, 1e-13);
  EXPECT_NEAR(lc::brute_force(m1).log_z, 4.195804071254284, 1e-13);
}

TEST(BruteForce, MatchesNaiveEnumeration) {
  std::mt19937_64 rng(12);
  for (int t = 0; t < 30; ++t) {
    lc::Rng lrng(static_cast<std::uint64_t>(t));
    const auto g = lc::topology::random_connected(4 + t % 7, 3 + t % 7 + t % 3, lrng);
    const auto m = testing_support::random_positive(g, rng);
    const auto fast = lc::brute_force(m);
    const auto ref = naive_exact(m);
    EXPECT_LE(std::abs(fast.log_z - std::log(static_cast<double>(ref.z))), 1e-12);
    for (std::size_t i = 0; i < g.node_count(); ++i)
      EXPECT_NEAR(fast.marginals[i][1], static_cast<double>(ref.marginals[i][1]), 1e-12);
    for (std::size_t e = 0; e < g.edge_count(); ++e)
      for (int a = 0; a < 2; ++a)
        for (int b = 0; b < 2; ++b)
          EXPECT_NEAR(fast.pair_marginals[e][a][b], static_cast<double>(ref.pair[e][a][b]), 1e-12);
  }
}

TEST(BruteForce, GrayCodeMatchesPlainCounter) {
  std::mt19937_64 rng(13);
  for (int t = 0; t < 10; ++t) {
    const auto m = testing_support::random_ising(gr::grid(3, 4), rng, 1.5, 0.7);
    const auto a = lc::brute_force(m), b = lc::brute_force_reference(m);
    EXPECT_NEAR(a.log_z, b.log_z, 1e-12);
    for (std::size_t i = 0; i < 12; ++i) EXPECT_NEAR(a.marginals[i][0], b.marginals[i][0], 1e-12);
  }
}

TEST(BruteForce, ThreadCountDoesNotChangeBits) {
  std::mt19937_64 rng(14);
  const auto m = testing_support::random_ising(gr::grid(3, 5), rng, 1.0, 0.5);
  const auto one = lc::brute_force(m, {25, 1});
  for (std::size_t th : {2, 3, 8}) {
    const auto many = lc::brute_force(m, {25, th});
    EXPECT_EQ(one.log_z, many.log_z);
    EXPECT_EQ(one.marginals, many.marginals);
    EXPECT_EQ(one.pair_marginals, many.pair_marginals);
  }
}

TEST(BruteForce, MarginalConsistency) {
  std::mt19937_64 rng(15);
  for (int t = 0; t < 10; ++t) {
    const auto m = testing_support::random_positive(gr::two_triangles(), rng);
    const auto r = lc::brute_force(m);
    for (const auto& p : r.marginals) EXPECT_NEAR(p[0] + p[1], 1.0, 1e-12);
    for (std::size_t e = 0; e < m.edge_count(); ++e) {
      const auto& ed = m.graph().edges()[e];
      const auto& pm = r.pair_marginals[e];
      for (int x = 0; x < 2; ++x) {
        EXPECT_NEAR(pm[x][0] + pm[x][1], r.marginals[ed.a][x], 1e-12);
        EXPECT_NEAR(pm[0][x] + pm[1][x], r.marginals[ed.b][x], 1e-12);
      }
    }
  }
}

TEST(BruteForce, FactorMarginalsMatchNaive) {
  lc::Rng rng(16);
  for (int t = 0; t < 20; ++t) {
    const auto fm = lc::random_factor_model({6, 3, 14, 1.0}, rng);
    const auto r = lc::brute_force(fm);
    const auto ref = naive_exact(fm);
    EXPECT_NEAR(r.log_z, std::log(static_cast<double>(ref.z)), 1e-12);
    for (std::size_t i = 0; i < 6; ++i) EXPECT_NEAR(r.marginals[i][1], static_cast<double>(ref.marginals[i][1]), 1e-12);
    ASSERT_EQ(r.factor_marginals.size(), fm.factors().size());
    for (const auto& fmarg : r.factor_marginals) {
      double s = 0;
      for (double v : fmarg) s += v;
      EXPECT_NEAR(s, 1.0, 1e-12);
    }
  }
}

TEST(BruteForce, ExtremeCouplingsStayFinite) {
  // Z = 2 (2 cosh J)^(n-1) on a path; e^{4000} is far outside double range
  const std::size_t n = 11;
  const double j = 400;
  const lc::PairwiseModel m(gr::path(n), std::vector<lc::PairTable>(n - 1, coupling(j)));
  const auto r = lc::brute_force(m);
  EXPECT_LE(rel_err(r.log_z, std::log(2.0) + (n - 1) * (j + std::log1p(std::exp(-2 * j)))), 1e-14);
  EXPECT_NEAR(r.marginals[3][0], 0.5, 1e-12);
}

TEST(BruteForce, SizeCap) {
  std::mt19937_64 rng(17);
  const auto m = testing_support::random_positive(gr::path(6), rng);
  EXPECT_THROW(lc::brute_force(m, {5, 1}), lc::SizeError);
  EXPECT_NO_THROW(lc::brute_force(m, {6, 1}));
}

TEST(BeliefRatioSum, IndependentModelGivesOne) {
  const auto g = gr::two_triangles();
  lc::PairwiseBeliefs b;
  std::mt19937_64 rng(18);
  std::uniform_real_distribution<double> u(0.1, 0.9);
  for (std::size_t i = 0; i < g.node_count(); ++i) {
    const double p = u(rng);
    b.node.push_back({1 - p, p});
  }
  for (const auto& e : g.edges()) {
    lc::PairTable t;
    for (int x = 0; x < 2; ++x)
      for (int y = 0; y < 2; ++y) t[x][y] = b.node[e.a][x] * b.node[e.b][y];
    b.edge.push_back(t);
  }
  EXPECT_NEAR(lc::lemma1_rhs(g, b), 1.0, 1e-14);
}

TEST(BeliefRatioSum, TreeFixedPointGivesOne) {
  std::mt19937_64 rng(19);
  for (int t = 0; t < 10; ++t) {
    lc::Rng lrng(static_cast<std::uint64_t>(t));
    const auto m = testing_support::random_ising(lc::topology::random_tree(9, lrng), rng, 1.0, 0.5);
    const auto res = lc::run_lbp(m);
    ASSERT_TRUE(res.converged);
    EXPECT_NEAR(lc::lemma1_rhs(m.graph(), res.beliefs), 1.0, 1e-9);
  }
}

TEST(BeliefRatioSum, EqualsZOverZB) {
  std::mt19937_64 rng(20);
  int checked = 0;
  for (int t = 0; t < 20; ++t) {
    lc::Rng lrng(static_cast<std::uint64_t>(100 + t));
    const auto m = testing_support::random_ising(lc::topology::random_connected(8, 11, lrng), rng, 0.8, 0.4);
    const auto res = lc::run_lbp(m);
    if (!res.converged) continue;
    ++checked;
    const double ratio = std::exp(lc::brute_force(m).log_z - res.log_z_bethe);
    EXPECT_LE(rel_err(lc::lemma1_rhs(m.graph(), res.beliefs), ratio), 1e-8);
  }
  EXPECT_GE(checked, 10);
}

TEST(BeliefRatioSum, RejectsZeroBelief) {
  lc::PairwiseBeliefs b{{{0.5, 0.5}, {1.0, 0.0}}, {{{{0.5, 0.0}, {0.5, 0.0}}}}};
  EXPECT_THROW(lc::lemma1_rhs(gr::path(2), b), lc::DomainError);
}

TEST(SubsetIdentity, ZeroBetaGivesOne) {
  const auto g = gr::grid(2, 3);
  std::vector<double> xi = {0.3, 1.0, 2.0, 4.0, 0.7, 1.3};
  EXPECT_NEAR(lc::theorem1_lhs(g, std::vector<double>(g.edge_count(), 0.0), xi), 1.0, 1e-14);
}

TEST(SubsetIdentity, TriangleClosedForm) {
  for (double beta : {-0.6, 0.25, 0.9})
    for (double xi : {0.5, 1.0, 3.0}) {
      const double lhs = lc::theorem1_lhs(gr::cycle(3), {beta, beta, beta}, {xi, xi, xi});
      EXPECT_NEAR(lhs, 1 + beta * beta * beta, 1e-13);
    }
}

TEST(SubsetIdentity, RandomParametersOnTwoTriangles) {
  std::mt19937_64 rng(21);
  std::uniform_real_distribution<double> ub(-1, 1), ux(0.2, 5);
  const auto g = gr::two_triangles();
  for (int t = 0; t < 50; ++t) {
    std::vector<double> beta(7), xi(6);
    for (auto& v : beta) v = ub(rng);
    for (auto& v : xi) v = ux(rng);
    EXPECT_LE(rel_err(lc::theorem1_lhs(g, beta, xi), subset_sum(g, beta, xi)), 1e-10);
    for (lc::NodeId w : {0, 3})
      EXPECT_LE(std::abs(lc::theorem1_lhs(g, beta, xi, w) - subset_sum(g, beta, xi, w)),
                1e-10 * std::max(1.0, std::abs(subset_sum(g, beta, xi, w))));
  }
}

TEST(SubsetIdentity, SubsetExpansionOverLoopsOnly) {
  std::mt19937_64 rng(22);
  std::uniform_real_distribution<double> ub(-1, 1), ux(0.2, 5);
  const auto g = gr::complete(4);
  for (int t = 0; t < 20; ++t) {
    std::vector<double> beta(6), xi(4);
    for (auto& v : beta) v = ub(rng);
    for (auto& v : xi) v = ux(rng);
    EXPECT_LE(rel_err(lc::subset_expansion(g, beta, xi), subset_sum(g, beta, xi)), 1e-12);
    EXPECT_LE(std::abs(lc::subset_expansion(g, beta, xi, 2) - subset_sum(g, beta, xi, 2)), 1e-12);
  }
}

TEST(SubsetIdentity, Validation) {
  EXPECT_THROW(lc::theorem1_lhs(gr::cycle(3), {0, 0}, {1, 1, 1}), lc::ArgumentError);
  EXPECT_THROW(lc::theorem1_lhs(gr::cycle(3), {0, 0, 0}, {1, -1, 1}), lc::DomainError);
}

TEST(FactorIdentity, MatchesIncidenceSubsetSum) {
  lc::Rng rng(23);
  std::mt19937_64 eng(23);
  std::uniform_real_distribution<double> ub(-1, 1), ux(0.2, 5);
  for (int t = 0; t < 20; ++t) {
    const auto fm = lc::random_factor_model({5, 3, 12, 1.0}, rng);
    std::vector<std::vector<double>> beta;
    for (const auto& f : fm.factors()) {
      std::vector<double> row(std::size_t{1} << f.arity());
      for (auto& v : row) v = ub(eng);
      beta.push_back(row);
    }
    std::vector<double> xi(5);
    for (auto& v : xi) v = ux(eng);
    // subset sum over incidence edges: (-1)^|s| prod_f beta^f_{I_f(s)} prod_i f_{d_i}(gamma_i)
    const auto h = lc::factor_incidence_graph(fm);
    std::vector<std::pair<std::size_t, std::size_t>> where;  // (factor, scope position) per incidence edge
    for (std::size_t f = 0; f < fm.factors().size(); ++f)
      for (std::size_t k = 0; k < fm.factors()[f].arity(); ++k) where.emplace_back(f, k);
    long double rhs = 0;
    for (std::uint64_t s = 0; s < (std::uint64_t{1} << h.edge_count()); ++s) {
      std::vector<std::size_t> mask(fm.factors().size(), 0), d(5, 0);
      for (std::size_t e = 0; e < h.edge_count(); ++e)
        if (s >> e & 1U) {
          mask[where[e].first] |= std::size_t{1} << where[e].second;
          ++d[h.edges()[e].a];
        }
      long double r = (std::popcount(s) % 2) ? -1 : 1;
      for (std::size_t f = 0; f < mask.size(); ++f) r *= beta[f][mask[f]];
      for (std::size_t i = 0; i < 5; ++i) r *= testing_support::f_ref(d[i], xi[i] - 1 / xi[i]);
      rhs += r;
    }
    const double lhs = lc::factor_identity_lhs(fm, beta, xi);
    EXPECT_LE(std::abs(lhs - static_cast<double>(rhs)), 1e-10 * std::max(1.0, std::abs(lhs)));
  }
}
