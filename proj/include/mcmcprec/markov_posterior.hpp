#pragma once

// Posterior sampling of the transition matrix of a first-order Markov model
// fitted to the model-indexing chain, and the induced stationary draws.
//
// Each row p_i of P has an independent Dirichlet(eps_i1, ..., eps_iI) prior,
// so given counts N the posterior row is Dirichlet(n_i1 + eps_i1, ...). Each
// posterior P^(r) is mapped to its stationary vector pi^(r).

#include <Eigen/Core>

#include <cmath>
#include <cstdint>
#include <memory>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "mcmcprec/chain_ingest.hpp"
#include "mcmcprec/errors.hpp"
#include "mcmcprec/parallel.hpp"
#include "mcmcprec/rng.hpp"
#include "mcmcprec/stationary.hpp"
#include "mcmcprec/stats.hpp"

namespace mcmcprec {

inline constexpr std::size_t default_draw_count = 1000;

enum class PriorMode { DefaultReduced, UniformFixed, Matrix };

struct PriorSpec {
  PriorMode mode = PriorMode::DefaultReduced;
  double epsilon = 0.0;
  /// Per-cell prior shapes for PriorMode::Matrix, in the counts' index order.
  std::optional<Eigen::MatrixXd> epsilon_matrix;

  /// eps = 1/I* on every cell among the observed models.
  static PriorSpec default_reduced() { return {}; }
  static PriorSpec uniform_fixed(double eps) {
    if (!(eps >= 0.0) || !std::isfinite(eps))
      throw Error(ErrorKind::InvalidArgument, "epsilon must be a finite value >= 0");
    return {PriorMode::UniformFixed, eps, std::nullopt};
  }
  static PriorSpec matrix(Eigen::MatrixXd eps) {
    if (!eps.allFinite() || (eps.array() < 0.0).any())
      throw Error(ErrorKind::InvalidArgument, "epsilon matrix entries must be finite and >= 0");
    return {PriorMode::Matrix, 0.0, std::move(eps)};
  }

  /// Prior shapes for an I* x I* transition matrix.
  Eigen::MatrixXd resolve(std::size_t model_count) const {
    const auto n = static_cast<Eigen::Index>(model_count);
    switch (mode) {
      case PriorMode::DefaultReduced:
        return Eigen::MatrixXd::Constant(n, n, 1.0 / static_cast<double>(model_count));
      case PriorMode::UniformFixed:
        return Eigen::MatrixXd::Constant(n, n, epsilon);
      case PriorMode::Matrix:
        if (!epsilon_matrix || epsilon_matrix->rows() != n || epsilon_matrix->cols() != n)
          throw Error(ErrorKind::InvalidArgument,
                      "epsilon matrix must be " + std::to_string(model_count) + "x" +
                          std::to_string(model_count));
        return *epsilon_matrix;
    }
    return {};
  }

  /// Total prior mass sum_ij eps_ij; (I*)^2 eps for the scalar modes.
  double total_weight(std::size_t model_count) const { return resolve(model_count).sum(); }

  std::string describe(std::size_t model_count) const {
    std::ostringstream os;
    os.precision(17);
    switch (mode) {
      case PriorMode::DefaultReduced:
        os << "default_reduced (epsilon = 1/" << model_count << " = "
           << 1.0 / static_cast<double>(model_count) << " on observed models)";
        break;
      case PriorMode::UniformFixed: os << "uniform_fixed (epsilon = " << epsilon << ")"; break;
      case PriorMode::Matrix: os << "matrix"; break;
    }
    return os.str();
  }
};

inline std::string_view to_string(PriorMode mode) {
  switch (mode) {
    case PriorMode::DefaultReduced: return "default_reduced";
    case PriorMode::UniformFixed: return "uniform_fixed";
    case PriorMode::Matrix: return "matrix";
  }
  return "unknown";
}

using DrawMatrix = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;

struct PosteriorDraws {
  /// R x I*; row r is pi^(r).
  DrawMatrix draws;
  std::uint64_t seed = 0;
  PriorSpec prior;
  /// Resolved prior shapes actually used.
  Eigen::MatrixXd epsilon;
  std::shared_ptr<const TransitionCounts> source_counts;
  /// Draws whose stationary vector needed the power-iteration fallback.
  std::size_t power_iteration_fallbacks = 0;

  std::size_t draw_count() const { return static_cast<std::size_t>(draws.rows()); }
  std::size_t model_count() const { return static_cast<std::size_t>(draws.cols()); }
  double prior_weight() const { return epsilon.sum(); }
  const LabelDictionary& dictionary() const { return source_counts->dictionary; }

  /// Values of component i across draws.
  std::vector<double> component(std::size_t i) const {
    std::vector<double> out(draw_count());
    for (std::size_t r = 0; r < out.size(); ++r)
      out[r] = draws(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(i));
    return out;
  }
};

namespace detail {

inline void check_rows(const TransitionCounts& counts, const Eigen::MatrixXd& eps) {
  for (Eigen::Index i = 0; i < counts.counts.rows(); ++i) {
    bool positive = false;
    for (Eigen::Index j = 0; j < counts.counts.cols(); ++j)
      if (static_cast<double>(counts.counts(i, j)) + eps(i, j) > 0.0) positive = true;
    if (!positive)
      throw Error(ErrorKind::DegenerateRow,
                  "model '" + counts.dictionary.label(static_cast<std::size_t>(i)) +
                      "' has no observed transitions and zero prior mass; its posterior row is undefined");
  }
}

}  // namespace detail

/// One posterior transition matrix: row i ~ Dirichlet(n_i + eps_i).
inline Eigen::MatrixXd sample_transition_rows(const TransitionCounts& counts,
                                              const Eigen::MatrixXd& eps, StreamRng& rng) {
  const Eigen::Index n = counts.counts.rows();
  if (eps.rows() != n || eps.cols() != n)
    throw Error(ErrorKind::InvalidArgument, "prior shape matrix does not match the counts");
  detail::check_rows(counts, eps);
  Eigen::MatrixXd P(n, n);
  std::vector<double> shape(static_cast<std::size_t>(n)), row(static_cast<std::size_t>(n));
  for (Eigen::Index i = 0; i < n; ++i) {
    for (Eigen::Index j = 0; j < n; ++j)
      shape[static_cast<std::size_t>(j)] = static_cast<double>(counts.counts(i, j)) + eps(i, j);
    dirichlet_variate(shape, row, rng);
    for (Eigen::Index j = 0; j < n; ++j) P(i, j) = row[static_cast<std::size_t>(j)];
  }
  return P;
}

inline Eigen::MatrixXd sample_transition_rows(const TransitionCounts& counts, const PriorSpec& prior,
                                              std::uint64_t seed, std::size_t r) {
  StreamRng rng(seed, {static_cast<std::uint64_t>(r)});
  return sample_transition_rows(counts, prior.resolve(counts.model_count()), rng);
}

/// R stationary draws. Draw r uses the stream (seed, r) only, so the result
/// does not depend on the thread count.
inline PosteriorDraws draw_posterior(const TransitionCounts& counts, const PriorSpec& prior,
                                     std::size_t R, std::uint64_t seed,
                                     std::size_t threads = default_thread_count()) {
  if (R < 1) throw Error(ErrorKind::InvalidArgument, "number of draws R must be >= 1");
  const std::size_t n = counts.model_count();
  if (n < 1) throw Error(ErrorKind::EmptyChain, "no observed models");

  PosteriorDraws out;
  out.seed = seed;
  out.prior = prior;
  out.epsilon = prior.resolve(n);
  out.source_counts = std::make_shared<const TransitionCounts>(counts);
  detail::check_rows(counts, out.epsilon);
  out.draws.resize(static_cast<Eigen::Index>(R), static_cast<Eigen::Index>(n));

  if (n == 1) {
    out.draws.setOnes();
    return out;
  }

  StationaryOptions sopt;
  // A zero prior cell can make sampled matrices reducible; otherwise every
  // sampled P is strictly positive.
  sopt.check_support = (out.epsilon.array() <= 0.0).any();

  std::vector<char> fallback(R, 0);
  const Eigen::MatrixXd& eps = out.epsilon;
  parallel_for(
      R,
      [&](std::size_t r) {
        StreamRng rng(seed, {static_cast<std::uint64_t>(r)});
        Eigen::MatrixXd P = sample_transition_rows(counts, eps, rng);
        try {
          auto res = solve_stationary(P, sopt);
          out.draws.row(static_cast<Eigen::Index>(r)) = res.pi.transpose();
          fallback[r] = res.used_power_iteration ? 1 : 0;
        } catch (const Error& e) {
          throw Error(e.kind(), "draw " + std::to_string(r) + ": " + e.detail());
        }
      },
      threads);
  for (char f : fallback) out.power_iteration_fallbacks += static_cast<std::size_t>(f);
  return out;
}

enum class PointStatistic { Mean, Median };

struct PointEstimate {
  Eigen::VectorXd values;
  /// Set when the componentwise medians were rescaled to sum to one.
  bool renormalized = false;
};

inline PointEstimate point_estimate(const PosteriorDraws& draws,
                                    PointStatistic statistic = PointStatistic::Mean) {
  if (draws.draw_count() == 0) throw Error(ErrorKind::InsufficientDraws, "no posterior draws");
  PointEstimate out;
  if (statistic == PointStatistic::Mean) {
    out.values = draws.draws.colwise().mean().transpose();
    return out;
  }
  out.values.resize(static_cast<Eigen::Index>(draws.model_count()));
  for (std::size_t i = 0; i < draws.model_count(); ++i)
    out.values[static_cast<Eigen::Index>(i)] = stats::median(draws.component(i));
  const double s = out.values.sum();
  if (s > 0.0 && s != 1.0) {
    out.values /= s;
    out.renormalized = true;
  }
  return out;
}

}  // namespace mcmcprec
