#pragma once

// Decision-oriented summaries of stationary draws. Everything here is a
// function of the draws alone. Model subsets are summed per draw and never
// refitted as a lumped chain, because a function of a Markov chain is not
// Markov in general.

#include <Eigen/Core>

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <optional>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "mcmcprec/errors.hpp"
#include "mcmcprec/markov_posterior.hpp"
#include "mcmcprec/stats.hpp"

namespace mcmcprec {

struct QuantileLevels {
  double lower = 0.05;
  double upper = 0.95;
};

inline void validate_levels(const QuantileLevels& q) {
  if (!(q.lower > 0.0 && q.lower < q.upper && q.upper < 1.0))
    throw Error(ErrorKind::InvalidArgument, "quantile levels must satisfy 0 < lower < upper < 1");
}

struct ModelSummary {
  std::string label;
  double mean = 0.0;
  double sd = 0.0;
  double median = 0.0;
  double lower = 0.0;
  double upper = 0.0;
};

struct UncertaintySummary {
  std::vector<ModelSummary> models;
  QuantileLevels levels;
  std::size_t draws = 0;
  /// R < 2: SDs are NaN, the rest is still filled in.
  bool insufficient_draws = false;
};

inline UncertaintySummary summarize(const PosteriorDraws& draws, QuantileLevels levels = {}) {
  validate_levels(levels);
  if (draws.draw_count() == 0) throw Error(ErrorKind::InsufficientDraws, "no posterior draws");
  UncertaintySummary out;
  out.levels = levels;
  out.draws = draws.draw_count();
  out.insufficient_draws = draws.draw_count() < 2;
  for (std::size_t i = 0; i < draws.model_count(); ++i) {
    const auto values = draws.component(i);
    const auto m = stats::describe(values, levels.lower, levels.upper);
    ModelSummary s{draws.dictionary().label(i), m.mean, m.sd, m.median, m.lower, m.upper};
    if (out.insufficient_draws) s.sd = std::numeric_limits<double>::quiet_NaN();
    out.models.push_back(std::move(s));
  }
  return out;
}

struct BayesFactorSummary {
  std::size_t numerator = 0;
  std::size_t denominator = 0;
  std::string numerator_label;
  std::string denominator_label;
  /// p(M_j)/p(M_i); 1 under uniform model priors.
  double odds_factor = 1.0;
  /// B^(r) for draws with a positive denominator, in draw order.
  std::vector<double> samples;
  stats::Moments moments;
  /// Draws with pi_j^(r) == 0, excluded from `samples`.
  std::size_t zero_denominator_draws = 0;
  bool unstable() const { return zero_denominator_draws > 0; }
};

/// B_ij^(r) = pi_i^(r) / pi_j^(r), times p(M_j)/p(M_i) when prior model
/// probabilities are given, turning posterior odds into a Bayes factor.
inline std::vector<BayesFactorSummary> bayes_factors(
    const PosteriorDraws& draws, const std::vector<std::pair<std::size_t, std::size_t>>& pairs,
    const std::optional<Eigen::VectorXd>& prior_model_probs = std::nullopt,
    QuantileLevels levels = {}) {
  validate_levels(levels);
  const std::size_t n = draws.model_count();
  if (prior_model_probs) {
    if (static_cast<std::size_t>(prior_model_probs->size()) != n)
      throw Error(ErrorKind::InvalidArgument, "prior model probabilities must have one entry per model");
    if (!((prior_model_probs->array() > 0.0).all()))
      throw Error(ErrorKind::InvalidArgument, "prior model probabilities must be positive");
  }
  std::vector<BayesFactorSummary> out;
  for (auto [i, j] : pairs) {
    if (i >= n || j >= n) throw Error(ErrorKind::LabelError, "Bayes factor index out of range");
    BayesFactorSummary bf;
    bf.numerator = i;
    bf.denominator = j;
    bf.numerator_label = draws.dictionary().label(i);
    bf.denominator_label = draws.dictionary().label(j);
    if (prior_model_probs) bf.odds_factor = (*prior_model_probs)[static_cast<Eigen::Index>(j)] /
                                            (*prior_model_probs)[static_cast<Eigen::Index>(i)];
    bf.samples.reserve(draws.draw_count());
    for (Eigen::Index r = 0; r < draws.draws.rows(); ++r) {
      const double den = draws.draws(r, static_cast<Eigen::Index>(j));
      if (den == 0.0) {
        ++bf.zero_denominator_draws;
        continue;
      }
      bf.samples.push_back(draws.draws(r, static_cast<Eigen::Index>(i)) / den * bf.odds_factor);
    }
    if (!bf.samples.empty()) bf.moments = stats::describe(bf.samples, levels.lower, levels.upper);
    out.push_back(std::move(bf));
  }
  return out;
}

struct SubsetSummary {
  std::vector<std::string> labels;
  std::vector<std::size_t> indices;
  /// sum_{i in subset} pi_i^(r) for every draw.
  std::vector<double> samples;
  stats::Moments moments;
};

inline SubsetSummary subset_probability(const PosteriorDraws& draws,
                                        const std::vector<std::string>& subset,
                                        QuantileLevels levels = {}) {
  validate_levels(levels);
  if (subset.empty()) throw Error(ErrorKind::InvalidArgument, "model subset is empty");
  SubsetSummary out;
  std::set<std::size_t> seen;
  for (const auto& label : subset) {
    const auto idx = draws.dictionary().at(label);
    if (seen.insert(idx).second) {
      out.labels.push_back(label);
      out.indices.push_back(idx);
    }
  }
  out.samples.assign(draws.draw_count(), 0.0);
  for (Eigen::Index r = 0; r < draws.draws.rows(); ++r)
    for (auto idx : out.indices)
      out.samples[static_cast<std::size_t>(r)] += draws.draws(r, static_cast<Eigen::Index>(idx));
  out.moments = stats::describe(out.samples, levels.lower, levels.upper);
  return out;
}

struct ModelRank {
  std::string label;
  /// Rank of the model under the posterior-mean point estimate (1 = best).
  std::size_t point_rank = 0;
  double mean_rank = 0.0;
  double sd_rank = 0.0;
  /// P(tau = point_rank)
  double p_point_rank = 0.0;
  /// P(tau <= k_top)
  double p_top_k = 0.0;
  /// P(tau = k) for k = 1..I*, at index k - 1.
  std::vector<double> rank_distribution;
};

struct RankReport {
  std::size_t k_top = 0;
  std::vector<ModelRank> models;
  /// Share of draws whose ordered top k_top list equals the point estimate's.
  double p_top_order_reproduced = 0.0;
};

/// Ranking of one probability vector: descending, ties to the lower index.
/// Returns rank[i] in 1..n.
inline std::vector<std::size_t> rank_models(const Eigen::Ref<const Eigen::RowVectorXd>& pi,
                                            std::vector<std::size_t>* order_out = nullptr) {
  const auto n = static_cast<std::size_t>(pi.size());
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    return pi[static_cast<Eigen::Index>(a)] > pi[static_cast<Eigen::Index>(b)];
  });
  std::vector<std::size_t> rank(n);
  for (std::size_t k = 0; k < n; ++k) rank[order[k]] = k + 1;
  if (order_out) *order_out = std::move(order);
  return rank;
}

inline RankReport rank_stability(const PosteriorDraws& draws, std::size_t k_top = 10) {
  const std::size_t n = draws.model_count();
  const std::size_t R = draws.draw_count();
  if (R == 0) throw Error(ErrorKind::InsufficientDraws, "no posterior draws");
  if (k_top < 1 || k_top > n)
    throw Error(ErrorKind::InvalidArgument,
                "k_top must be between 1 and the number of models (" + std::to_string(n) + ")");

  const Eigen::RowVectorXd point = draws.draws.colwise().mean();
  std::vector<std::size_t> point_order;
  const auto point_rank = rank_models(point, &point_order);

  std::vector<std::vector<std::size_t>> hist(n, std::vector<std::size_t>(n, 0));
  std::vector<double> rank_sum(n, 0.0), rank_sq(n, 0.0);
  std::size_t reproduced = 0;
  std::vector<std::size_t> order;
  for (Eigen::Index r = 0; r < draws.draws.rows(); ++r) {
    const auto rank = rank_models(draws.draws.row(r), &order);
    for (std::size_t i = 0; i < n; ++i) {
      ++hist[i][rank[i] - 1];
      rank_sum[i] += static_cast<double>(rank[i]);
      rank_sq[i] += static_cast<double>(rank[i]) * static_cast<double>(rank[i]);
    }
    if (std::equal(order.begin(), order.begin() + static_cast<std::ptrdiff_t>(k_top), point_order.begin()))
      ++reproduced;
  }

  RankReport out;
  out.k_top = k_top;
  const double Rd = static_cast<double>(R);
  out.p_top_order_reproduced = static_cast<double>(reproduced) / Rd;
  for (std::size_t i = 0; i < n; ++i) {
    ModelRank m;
    m.label = draws.dictionary().label(i);
    m.point_rank = point_rank[i];
    m.mean_rank = rank_sum[i] / Rd;
    m.sd_rank = R > 1 ? std::sqrt(std::max(0.0, (rank_sq[i] - Rd * m.mean_rank * m.mean_rank) / (Rd - 1.0)))
                      : 0.0;
    m.rank_distribution.resize(n);
    std::size_t top = 0;
    for (std::size_t k = 0; k < n; ++k) {
      m.rank_distribution[k] = static_cast<double>(hist[i][k]) / Rd;
      if (k < k_top) top += hist[i][k];
    }
    m.p_point_rank = m.rank_distribution[point_rank[i] - 1];
    m.p_top_k = static_cast<double>(top) / Rd;
    out.models.push_back(std::move(m));
  }
  return out;
}

}  // namespace mcmcprec
