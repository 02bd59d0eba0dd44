#include <gtest/gtest.h>

#include <cmath>
#include <random>
#include <string>
#include <vector>

#include "mcmcprec/chain_ingest.hpp"
#include "mcmcprec/markov_posterior.hpp"
#include "oracles.hpp"

using namespace mcmcprec;

namespace {

TransitionCounts make_counts(const CountMatrix& n, std::vector<std::string> labels = {}) {
  TransitionCounts c;
  c.counts = n;
  for (Eigen::Index i = 0; i < n.rows(); ++i)
    c.dictionary.intern(labels.empty() ? "m" + std::to_string(i) : labels[static_cast<std::size_t>(i)]);
  c.visits.resize(static_cast<std::size_t>(n.rows()));
  for (Eigen::Index i = 0; i < n.rows(); ++i) c.visits[static_cast<std::size_t>(i)] = n.row(i).sum();
  c.total_transitions = n.sum();
  c.iterations = n.sum() + 1;
  c.chains = 1;
  return c;
}

CountMatrix cm(std::initializer_list<std::initializer_list<std::int64_t>> rows) {
  CountMatrix m(static_cast<Eigen::Index>(rows.size()), static_cast<Eigen::Index>(rows.begin()->size()));
  Eigen::Index i = 0;
  for (const auto& r : rows) {
    Eigen::Index j = 0;
    for (auto v : r) m(i, j++) = v;
    ++i;
  }
  return m;
}

Eigen::VectorXd column_sd(const DrawMatrix& d) {
  const Eigen::RowVectorXd mean = d.colwise().mean();
  return ((d.rowwise() - mean).array().square().colwise().sum() / static_cast<double>(d.rows() - 1))
      .sqrt()
      .transpose();
}

}  // namespace

TEST(PriorSpec, ResolveAndWeight) {
  const auto d = PriorSpec::default_reduced();
  EXPECT_DOUBLE_EQ(d.resolve(4)(2, 3), 0.25);
  EXPECT_DOUBLE_EQ(d.total_weight(4), 4.0);
  EXPECT_DOUBLE_EQ(PriorSpec::uniform_fixed(0.5).total_weight(3), 4.5);
  EXPECT_THROW(PriorSpec::uniform_fixed(-1.0), Error);
  Eigen::MatrixXd m(2, 2);
  m << 0.1, 0.2, 0.3, 0.4;
  EXPECT_DOUBLE_EQ(PriorSpec::matrix(m).total_weight(2), 1.0);
  EXPECT_THROW(PriorSpec::matrix(m).resolve(3), Error);
}

TEST(SampleRows, SymmetricDirichletMean) {
  const auto counts = make_counts(cm({{0, 0}, {3, 4}}));
  const auto prior = PriorSpec::uniform_fixed(1.0);
  double sum = 0.0;
  const int R = 100000;
  for (int r = 0; r < R; ++r) {
    const auto P = sample_transition_rows(counts, prior, 17, static_cast<std::size_t>(r));
    ASSERT_NEAR(P.row(0).sum(), 1.0, 1e-12);
    ASSERT_NEAR(P.row(1).sum(), 1.0, 1e-12);
    sum += P(0, 0);
  }
  EXPECT_NEAR(sum / R, 0.5, 0.01);
}

TEST(SampleRows, DirichletMeanFormula) {
  const auto counts = make_counts(cm({{1000, 0}, {1, 1}}));
  const auto prior = PriorSpec::uniform_fixed(0.5);
  const auto m = oracle::beta_moments(1000.5, 0.5);
  double sum = 0.0;
  const int R = 20000;
  for (int r = 0; r < R; ++r) sum += sample_transition_rows(counts, prior, 3, static_cast<std::size_t>(r))(0, 0);
  EXPECT_NEAR(sum / R, 1000.5 / 1001.0, 4 * std::sqrt(m.var / R));
}

TEST(SampleRows, BitIdenticalForSameSeed) {
  const auto counts = make_counts(cm({{5, 2, 0}, {1, 7, 3}, {0, 2, 9}}));
  const auto prior = PriorSpec::default_reduced();
  for (std::size_t r : {0u, 1u, 999u}) {
    const auto a = sample_transition_rows(counts, prior, 42, r);
    const auto b = sample_transition_rows(counts, prior, 42, r);
    EXPECT_EQ(a, b);
  }
  EXPECT_NE(sample_transition_rows(counts, prior, 42, 0), sample_transition_rows(counts, prior, 43, 0));
}

TEST(SampleRows, DegenerateRowNamesModel) {
  const auto counts = make_counts(cm({{3, 1}, {0, 0}}), {"alpha", "omega"});
  try {
    sample_transition_rows(counts, PriorSpec::uniform_fixed(0.0), 1, 0);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::DegenerateRow);
    EXPECT_NE(std::string(e.what()).find("omega"), std::string::npos);
  }
}

TEST(DrawPosterior, TwoModelChainNearFrequencies) {
  const auto counts = make_counts(cm({{500, 10}, {10, 480}}));
  const auto d = draw_posterior(counts, PriorSpec::uniform_fixed(0.5), 1000, 5);
  ASSERT_EQ(d.draw_count(), 1000u);
  for (Eigen::Index r = 0; r < d.draws.rows(); ++r) {
    ASSERT_GE(d.draws.row(r).minCoeff(), 0.0);
    ASSERT_NEAR(d.draws.row(r).sum(), 1.0, 1e-10);
  }
  const auto pe = point_estimate(d);
  EXPECT_NEAR(pe.values[0], 510.0 / 1000.0, 0.05);
  EXPECT_NEAR(pe.values[1], 490.0 / 1000.0, 0.05);
  EXPECT_NEAR(pe.values.sum(), 1.0, 1e-10);
}

TEST(DrawPosterior, SingleModel) {
  const auto counts = count_transitions(index_chain(std::vector<int>{4, 4, 4}));
  const auto d = draw_posterior(counts, PriorSpec::default_reduced(), 50, 1);
  EXPECT_TRUE((d.draws.array() == 1.0).all());
}

TEST(DrawPosterior, IndependentOfThreadCount) {
  const auto counts = make_counts(cm({{50, 3, 1, 0}, {2, 30, 4, 1}, {1, 5, 20, 2}, {0, 1, 2, 9}}));
  const auto a = draw_posterior(counts, PriorSpec::default_reduced(), 500, 77, 1);
  const auto b = draw_posterior(counts, PriorSpec::default_reduced(), 500, 77, 4);
  const auto c = draw_posterior(counts, PriorSpec::default_reduced(), 500, 77, 3);
  EXPECT_EQ(a.draws, b.draws);
  EXPECT_EQ(a.draws, c.draws);
}

TEST(DrawPosterior, SeedsAgreeInDistribution) {
  const auto counts = make_counts(cm({{80, 10, 5}, {12, 40, 6}, {3, 8, 30}}));
  const std::size_t R = 4000;
  const auto a = draw_posterior(counts, PriorSpec::default_reduced(), R, 1);
  const auto b = draw_posterior(counts, PriorSpec::default_reduced(), R, 2);
  EXPECT_NE(a.draws, b.draws);
  const Eigen::VectorXd sa = column_sd(a.draws), sb = column_sd(b.draws);
  for (Eigen::Index i = 0; i < 3; ++i) {
    const double se = std::sqrt((sa[i] * sa[i] + sb[i] * sb[i]) / static_cast<double>(R));
    EXPECT_LE(std::abs(a.draws.col(i).mean() - b.draws.col(i).mean()), 3 * se);
  }
}

TEST(DrawPosterior, ConjugateBetaMarginal) {
  const auto counts = make_counts(cm({{37, 12}, {15, 20}}));
  const double eps = 0.5;
  const auto prior = PriorSpec::uniform_fixed(eps);
  const int R = 100000;
  std::vector<double> p11(R);
  for (int r = 0; r < R; ++r) p11[static_cast<std::size_t>(r)] = sample_transition_rows(counts, prior, 9, static_cast<std::size_t>(r))(0, 0);
  double mean = 0.0;
  for (double v : p11) mean += v;
  mean /= R;
  double var = 0.0;
  for (double v : p11) var += (v - mean) * (v - mean);
  var /= (R - 1);
  const auto ref = oracle::beta_moments(37 + eps, 12 + eps);
  EXPECT_NEAR(mean, ref.mean, 4 * std::sqrt(ref.var / R));
  EXPECT_NEAR(var, ref.var, 4 * oracle::beta_variance_se(37 + eps, 12 + eps, R));
}

TEST(DrawPosterior, MoreDataShrinksEverySd) {
  std::mt19937_64 gen(31);
  for (int trial = 0; trial < 15; ++trial) {
    const int n = 2 + trial % 5;
    std::uniform_int_distribution<int> cell(0, 20);
    CountMatrix m(n, n);
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) m(i, j) = cell(gen) + (i == j ? 5 : 0);
    const auto a = draw_posterior(make_counts(m), PriorSpec::default_reduced(), 2000, 100 + trial);
    const auto b = draw_posterior(make_counts(CountMatrix(m * 100)), PriorSpec::default_reduced(), 2000, 100 + trial);
    const Eigen::VectorXd sa = column_sd(a.draws), sb = column_sd(b.draws);
    for (int i = 0; i < n; ++i) EXPECT_LT(sb[i], sa[i]) << "trial " << trial << ", model " << i;
  }
}

TEST(DrawPosterior, PriorWashout) {
  const auto counts = make_counts(cm({{900, 80, 40}, {70, 1200, 30}, {50, 20, 1100}}));
  const auto a = draw_posterior(counts, PriorSpec::uniform_fixed(0.0), 2000, 4);
  const auto b = draw_posterior(counts, PriorSpec::default_reduced(), 2000, 4);
  const auto pa = point_estimate(a).values, pb = point_estimate(b).values;
  for (int i = 0; i < 3; ++i) EXPECT_NEAR(pa[i], pb[i], 0.01);
}

TEST(DrawPosterior, ReducibleDrawReportsIndex) {
  const auto ab = count_transitions(index_chain(std::vector<std::string>{"A", "B", "A", "B"}));
  const auto c = count_transitions(index_chain(std::vector<std::string>{"C", "C", "C"}));
  const auto merged = merge_counts(std::vector<TransitionCounts>{ab, c});
  try {
    draw_posterior(merged, PriorSpec::uniform_fixed(0.0), 10, 1, 1);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::NoUniqueStationary);
    EXPECT_NE(std::string(e.what()).find("draw 0"), std::string::npos);
  }
  // The default prior connects the blocks.
  EXPECT_NO_THROW(draw_posterior(merged, PriorSpec::default_reduced(), 10, 1));
}

TEST(DrawPosterior, ZeroEpsilonOnIrreducibleSupport) {
  const auto counts = make_counts(cm({{0, 5, 0}, {0, 0, 7}, {6, 0, 0}}));
  const auto d = draw_posterior(counts, PriorSpec::uniform_fixed(0.0), 20, 1);
  for (Eigen::Index r = 0; r < d.draws.rows(); ++r)
    for (int i = 0; i < 3; ++i) EXPECT_NEAR(d.draws(r, i), 1.0 / 3.0, 1e-12);
}

TEST(DrawPosterior, LargeSparseModelSpace) {
  // Many models with a handful of visits each: shapes 1/I* are tiny.
  std::mt19937_64 gen(8);
  const int n = 300;
  std::uniform_int_distribution<int> pick(0, n - 1);
  std::vector<int> chain;
  for (int t = 0; t < 2000; ++t) chain.push_back(t < n ? t : pick(gen));
  const auto counts = count_transitions(index_chain(chain));
  ASSERT_EQ(counts.model_count(), static_cast<std::size_t>(n));
  const auto d = draw_posterior(counts, PriorSpec::default_reduced(), 10, 2);
  for (Eigen::Index r = 0; r < d.draws.rows(); ++r) {
    ASSERT_TRUE(d.draws.row(r).allFinite());
    ASSERT_GE(d.draws.row(r).minCoeff(), 0.0);
    ASSERT_NEAR(d.draws.row(r).sum(), 1.0, 1e-10);
  }
}

TEST(DrawPosterior, RejectsZeroDraws) {
  const auto counts = make_counts(cm({{1, 1}, {1, 1}}));
  EXPECT_THROW(draw_posterior(counts, PriorSpec::default_reduced(), 0, 1), Error);
}

TEST(PointEstimate, Examples) {
  PosteriorDraws d;
  d.draws.resize(3, 2);
  d.draws << 0.7, 0.3, 0.7, 0.3, 0.7, 0.3;
  auto pe = point_estimate(d);
  EXPECT_NEAR(pe.values[0], 0.7, 1e-15);
  EXPECT_NEAR(pe.values[1], 0.3, 1e-15);

  d.draws.resize(2, 2);
  d.draws << 1, 0, 0, 1;
  pe = point_estimate(d);
  EXPECT_DOUBLE_EQ(pe.values[0], 0.5);
  EXPECT_DOUBLE_EQ(pe.values[1], 0.5);

  d.draws.resize(3, 2);
  d.draws << 0.6, 0.4, 0.5, 0.5, 0.4, 0.6;
  pe = point_estimate(d, PointStatistic::Median);
  EXPECT_DOUBLE_EQ(pe.values[0], 0.5);
  EXPECT_DOUBLE_EQ(pe.values[1], 0.5);
  EXPECT_FALSE(pe.renormalized);

  d.draws.resize(3, 3);
  d.draws << 0.8, 0.1, 0.1, 0.1, 0.8, 0.1, 0.1, 0.1, 0.8;
  pe = point_estimate(d, PointStatistic::Median);
  EXPECT_TRUE(pe.renormalized);
  EXPECT_NEAR(pe.values.sum(), 1.0, 1e-15);
}
