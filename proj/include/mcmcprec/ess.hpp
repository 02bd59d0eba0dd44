#pragma once

// Effective sample size of the model-indexing chain.
//
// The i.i.d. benchmark posterior for pi under an improper D(0, ..., 0) prior
// is Dirichlet(visit counts). Fitting a Dirichlet to the Markov-model draws
// and reading its shapes as pseudo visit counts gives the number of
// independent iterations with the same dispersion, after removing the total
// prior mass sum_ij eps_ij the Markov posterior carries.

#include <Eigen/Core>

#include <cmath>
#include <cstdint>
#include <limits>
#include <span>
#include <vector>

#include "mcmcprec/dirichlet.hpp"
#include "mcmcprec/errors.hpp"
#include "mcmcprec/markov_posterior.hpp"
#include "mcmcprec/rng.hpp"

namespace mcmcprec {

struct IidPosterior {
  /// Dirichlet parameters: visit counts per model.
  Eigen::VectorXd shape;
  /// Components with zero visits, whose posterior is a point mass at 0.
  std::vector<bool> degenerate;

  bool any_degenerate() const {
    for (bool d : degenerate)
      if (d) return true;
    return false;
  }
  Eigen::VectorXd mean() const { return shape / shape.sum(); }
};

inline IidPosterior iid_posterior(std::span<const std::int64_t> visits) {
  IidPosterior out;
  out.shape.resize(static_cast<Eigen::Index>(visits.size()));
  out.degenerate.resize(visits.size());
  double total = 0.0;
  for (std::size_t i = 0; i < visits.size(); ++i) {
    if (visits[i] < 0) throw Error(ErrorKind::InvalidArgument, "visit counts must be non-negative");
    out.shape[static_cast<Eigen::Index>(i)] = static_cast<double>(visits[i]);
    out.degenerate[i] = visits[i] == 0;
    total += static_cast<double>(visits[i]);
  }
  if (!(total > 0.0)) throw Error(ErrorKind::EmptyChain, "no visits to any model");
  return out;
}

inline IidPosterior iid_posterior(const std::vector<std::int64_t>& visits) {
  return iid_posterior(std::span<const std::int64_t>(visits));
}

/// R draws from the i.i.d. posterior; draw r uses stream (seed, r).
inline DrawMatrix sample_iid_posterior(const IidPosterior& post, std::size_t R, std::uint64_t seed) {
  const auto n = post.shape.size();
  DrawMatrix out(static_cast<Eigen::Index>(R), n);
  std::vector<double> row(static_cast<std::size_t>(n));
  const std::span<const double> shape(post.shape.data(), static_cast<std::size_t>(n));
  for (std::size_t r = 0; r < R; ++r) {
    StreamRng rng(seed, {static_cast<std::uint64_t>(r)});
    dirichlet_variate(shape, row, rng);
    for (Eigen::Index i = 0; i < n; ++i) out(static_cast<Eigen::Index>(r), i) = row[static_cast<std::size_t>(i)];
  }
  return out;
}

struct EssOptions {
  /// t_eff above this multiple of T is flagged (never truncated).
  double cap_multiple = 1.5;
  DirichletFitOptions fit;
};

struct EssEstimate {
  Eigen::VectorXd alpha_hat;
  double prior_weight = 0.0;
  /// NaN when only one model was observed.
  double t_eff = std::numeric_limits<double>::quiet_NaN();
  double t_raw = 0.0;
  double ratio = std::numeric_limits<double>::quiet_NaN();
  DirichletFit fit;

  bool converged = false;
  /// sum(alpha) - prior weight was negative; t_eff reported as 0.
  bool negative = false;
  /// t_eff exceeds cap_multiple * T.
  bool exceeds_cap = false;
  /// Some draws had exact zeros and were clamped before fitting.
  bool approximate = false;
  /// A single observed model: dispersion is zero and the ESS is undefined.
  bool trivial = false;
};

inline EssEstimate effective_sample_size(const PosteriorDraws& draws, const EssOptions& opt = {}) {
  EssEstimate out;
  out.prior_weight = draws.prior_weight();
  out.t_raw = draws.source_counts ? static_cast<double>(draws.source_counts->iterations) : 0.0;
  if (draws.model_count() == 1) {
    out.trivial = true;
    out.converged = true;
    out.alpha_hat = Eigen::VectorXd::Constant(1, std::numeric_limits<double>::quiet_NaN());
    return out;
  }
  if (draws.draw_count() < 2)
    throw Error(ErrorKind::InsufficientDraws, "effective sample size needs at least 2 draws");

  out.fit = fit_dirichlet(draws.draws, opt.fit);
  out.alpha_hat = out.fit.alpha;
  out.converged = out.fit.converged;
  out.approximate = out.fit.clamped;
  const double raw = out.alpha_hat.sum() - out.prior_weight;
  if (raw < 0.0) {
    out.negative = true;
    out.t_eff = 0.0;
  } else {
    out.t_eff = raw;
  }
  if (out.t_raw > 0.0) {
    out.ratio = out.t_eff / out.t_raw;
    out.exceeds_cap = out.t_eff > opt.cap_multiple * out.t_raw;
  }
  return out;
}

}  // namespace mcmcprec
