#pragma once

#include <Eigen/Core>

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <limits>
#include <string>
#include <vector>

#include "mcmcprec/errors.hpp"

namespace mcmcprec {

inline constexpr double euler_gamma = 0.57721566490153286060651209008240243;

/// Psi(x) for x > 0: upward recurrence to x >= 10, then the asymptotic series
/// through the x^-14 term (truncation error below 5e-17 there).
inline double digamma(double x) {
  if (!(x > 0.0) || std::isinf(x))
    throw Error(ErrorKind::DomainError, "digamma requires a finite x > 0, got " + std::to_string(x));
  double result = 0.0;
  while (x < 10.0) {
    result -= 1.0 / x;
    x += 1.0;
  }
  const double r = 1.0 / (x * x);
  // B_2k / (2k x^2k), Horner in 1/x^2
  const double series =
      r * (1.0 / 12 - r * (1.0 / 120 - r * (1.0 / 252 - r * (1.0 / 240 - r * (1.0 / 132 - r * (691.0 / 32760 - r * (1.0 / 12)))))));
  return result + std::log(x) - 0.5 / x - series;
}

/// Psi'(x) for x > 0.
inline double trigamma(double x) {
  if (!(x > 0.0) || std::isinf(x))
    throw Error(ErrorKind::DomainError, "trigamma requires a finite x > 0, got " + std::to_string(x));
  double result = 0.0;
  while (x < 10.0) {
    result += 1.0 / (x * x);
    x += 1.0;
  }
  const double r = 1.0 / (x * x);
  const double series =
      1.0 / 6 - r * (1.0 / 30 - r * (1.0 / 42 - r * (1.0 / 30 - r * (5.0 / 66 - r * (691.0 / 2730 - r * (7.0 / 6))))));
  return result + 1.0 / x + 0.5 * r + series * r / x;
}

/// Psi^-1(y): Newton's method from the piecewise start
/// x0 = exp(y) + 1/2 (y >= -2.22), x0 = -1/(y + gamma) otherwise.
inline double inverse_digamma(double y, int newton_steps = 5) {
  if (std::isnan(y)) throw Error(ErrorKind::DomainError, "inverse_digamma of NaN");
  if (y > 709.0) return std::numeric_limits<double>::infinity();
  double x = y >= -2.22 ? std::exp(y) + 0.5 : -1.0 / (y + euler_gamma);
  for (int k = 0; k < newton_steps; ++k) {
    double next = x - (digamma(x) - y) / trigamma(x);
    // Psi is concave, so a Newton step can only overshoot to the left.
    if (!(next > 0.0)) next = 0.5 * x;
    x = next;
  }
  return x;
}

struct DirichletFitOptions {
  double tolerance = 1e-8;
  std::size_t max_iter = 10000;
  /// Sample entries below this are raised to it before taking logs.
  double clamp = 1e-300;
  bool keep_trace = true;
};

struct DirichletFit {
  Eigen::VectorXd alpha;
  std::size_t iterations = 0;
  bool converged = false;
  /// Total log-likelihood at the returned alpha.
  double log_likelihood = 0.0;
  /// Log-likelihood at the start and after every update.
  std::vector<double> log_likelihood_trace;
  /// ||alpha' - alpha||_inf of the last update.
  double last_step = std::numeric_limits<double>::infinity();
  /// True when at least one sample entry was clamped.
  bool clamped = false;
};

namespace detail {

// Extended precision keeps rounding noise below the likelihood gains of the
// last fixed-point steps, so the recorded trace is monotone.
inline long double total_loglik(const Eigen::VectorXd& alpha, const Eigen::VectorXd& mean_log,
                                long double R) {
  long double sum = 0.0L;
  for (Eigen::Index i = 0; i < alpha.size(); ++i) sum += alpha[i];
  long double ll = std::lgamma(sum);
  for (Eigen::Index i = 0; i < alpha.size(); ++i)
    ll += -std::lgamma(static_cast<long double>(alpha[i])) +
          (static_cast<long double>(alpha[i]) - 1.0L) * static_cast<long double>(mean_log[i]);
  return R * ll;
}

}  // namespace detail

/// Mean log-likelihood per sample of Dirichlet(alpha) given mean log components.
inline double dirichlet_mean_loglik(const Eigen::VectorXd& alpha, const Eigen::VectorXd& mean_log) {
  return static_cast<double>(detail::total_loglik(alpha, mean_log, 1.0L));
}

namespace detail {

// Method-of-moments start matching the first moments and the pooled second
// moment; all ones when the moments carry no information.
template <class Derived>
Eigen::VectorXd moment_start(const Eigen::MatrixBase<Derived>& samples) {
  const Eigen::Index n = samples.cols();
  const double R = static_cast<double>(samples.rows());
  const Eigen::VectorXd m = samples.colwise().sum().transpose() / R;
  const Eigen::VectorXd q = samples.array().square().colwise().sum().transpose() / R;
  const double num = (m - q).sum();
  const double den = (q - m.cwiseProduct(m)).sum();
  const double s = num / den;
  if (!(den > 0.0) || !std::isfinite(s) || !(s > 0.0) || !((m.array() > 0.0).all()))
    return Eigen::VectorXd::Ones(n);
  return s * m;
}

}  // namespace detail

/// Maximum-likelihood Dirichlet shapes for the rows of `samples` (one
/// simplex vector per row) by the fixed-point iteration
///   alpha_i <- Psi^-1( Psi(sum_j alpha_j) + mean_r log pi_i^(r) ),
/// updating all components from the previous iterate.
template <class Derived>
DirichletFit fit_dirichlet(const Eigen::MatrixBase<Derived>& samples,
                           const DirichletFitOptions& opt = {}) {
  const Eigen::Index R = samples.rows();
  const Eigen::Index n = samples.cols();
  if (R < 2) throw Error(ErrorKind::InvalidArgument, "fit_dirichlet needs at least 2 samples");
  if (n < 1) throw Error(ErrorKind::InvalidArgument, "fit_dirichlet needs at least one component");

  DirichletFit fit;
  Eigen::MatrixXd clamped = samples;
  Eigen::VectorXd mean_log = Eigen::VectorXd::Zero(n);
  for (Eigen::Index i = 0; i < n; ++i) {
    bool any_interior = false;
    for (Eigen::Index r = 0; r < R; ++r) {
      double v = clamped(r, i);
      if (!(v >= 0.0))
        throw Error(ErrorKind::DomainError, "sample entries must be non-negative");
      if (v > opt.clamp) {
        any_interior = true;
      } else {
        v = opt.clamp;
        fit.clamped = true;
      }
      clamped(r, i) = v;
      mean_log[i] += std::log(v);
    }
    if (!any_interior)
      throw Error(ErrorKind::DegenerateSamples,
                  "component " + std::to_string(i) + " is zero in every sample");
    mean_log[i] /= static_cast<double>(R);
  }

  Eigen::VectorXd alpha = detail::moment_start(clamped);
  double ll = static_cast<double>(detail::total_loglik(alpha, mean_log, R));
  if (opt.keep_trace) fit.log_likelihood_trace.push_back(ll);

  Eigen::VectorXd next(n);
  for (std::size_t it = 1; it <= opt.max_iter; ++it) {
    const double psi_sum = digamma(alpha.sum());
    for (Eigen::Index i = 0; i < n; ++i) next[i] = inverse_digamma(psi_sum + mean_log[i]);
    if (!next.allFinite() || !((next.array() > 0.0).all())) break;
    fit.last_step = (next - alpha).cwiseAbs().maxCoeff();
    alpha = next;
    fit.iterations = it;
    ll = static_cast<double>(detail::total_loglik(alpha, mean_log, R));
    if (opt.keep_trace) fit.log_likelihood_trace.push_back(ll);
    if (fit.last_step <= opt.tolerance) {
      fit.converged = true;
      break;
    }
  }
  fit.alpha = std::move(alpha);
  fit.log_likelihood = ll;
  return fit;
}

}  // namespace mcmcprec
