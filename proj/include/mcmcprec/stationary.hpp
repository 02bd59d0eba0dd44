#pragma once

// Stationary distribution of a row-stochastic matrix: the left eigenvector
// with eigenvalue one, normalized to the simplex.
//
// The primary route solves (P^T - I) x = 0 with one equation replaced by
// sum(x) = 1 through partially pivoted LU. Every row of P^T - I is minus the
// sum of the others, so dropping any one keeps the rank at n - 1 whenever the
// eigenvalue-one eigenspace is one-dimensional. When the LU reciprocal
// condition estimate is below 1e-12, or the solution fails its residual
// check, the solver falls back to power iteration with Cesaro averaging.

#include <Eigen/Core>
#include <Eigen/LU>

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <string>
#include <vector>

#include "mcmcprec/errors.hpp"

namespace mcmcprec {

struct SupportReport {
  /// Strongly connected components of the positive-entry digraph, each sorted
  /// ascending; components are ordered by their smallest member.
  std::vector<std::vector<std::size_t>> classes;
  std::vector<bool> closed;

  std::size_t closed_count() const {
    return static_cast<std::size_t>(std::count(closed.begin(), closed.end(), true));
  }
  bool has_unique_stationary() const { return closed_count() == 1; }
};

/// Communicating classes of the digraph with an edge i -> j whenever P(i,j) > 0.
inline SupportReport classify_support(const Eigen::MatrixXd& P) {
  const auto n = static_cast<std::size_t>(P.rows());
  // Iterative Tarjan.
  constexpr std::size_t unvisited = static_cast<std::size_t>(-1);
  std::vector<std::size_t> index(n, unvisited), low(n, 0), comp(n, unvisited);
  std::vector<bool> on_stack(n, false);
  std::vector<std::size_t> stack;
  std::vector<std::pair<std::size_t, std::size_t>> call;  // (node, next neighbour)
  std::vector<std::vector<std::size_t>> classes;
  std::size_t counter = 0;

  for (std::size_t root = 0; root < n; ++root) {
    if (index[root] != unvisited) continue;
    call.emplace_back(root, 0);
    index[root] = low[root] = counter++;
    stack.push_back(root);
    on_stack[root] = true;
    while (!call.empty()) {
      auto& [v, next] = call.back();
      bool descended = false;
      while (next < n) {
        const std::size_t w = next++;
        if (!(P(static_cast<Eigen::Index>(v), static_cast<Eigen::Index>(w)) > 0.0)) continue;
        if (index[w] == unvisited) {
          index[w] = low[w] = counter++;
          stack.push_back(w);
          on_stack[w] = true;
          call.emplace_back(w, 0);
          descended = true;
          break;
        }
        if (on_stack[w]) low[v] = std::min(low[v], index[w]);
      }
      if (descended) continue;
      const std::size_t done = v;
      if (low[done] == index[done]) {
        std::vector<std::size_t> members;
        std::size_t w;
        do {
          w = stack.back();
          stack.pop_back();
          on_stack[w] = false;
          comp[w] = classes.size();
          members.push_back(w);
        } while (w != done);
        std::sort(members.begin(), members.end());
        classes.push_back(std::move(members));
      }
      call.pop_back();
      if (!call.empty()) {
        const std::size_t parent = call.back().first;
        low[parent] = std::min(low[parent], low[done]);
      }
    }
  }

  std::vector<bool> closed(classes.size(), true);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j)
      if (P(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) > 0.0 && comp[i] != comp[j])
        closed[comp[i]] = false;

  std::vector<std::size_t> order(classes.size());
  for (std::size_t k = 0; k < order.size(); ++k) order[k] = k;
  std::sort(order.begin(), order.end(),
            [&](std::size_t a, std::size_t b) { return classes[a].front() < classes[b].front(); });
  SupportReport report;
  for (auto k : order) {
    report.classes.push_back(std::move(classes[k]));
    report.closed.push_back(closed[k]);
  }
  return report;
}

struct StationaryOptions {
  double row_sum_tolerance = 1e-10;
  double residual_tolerance = 1e-8;
  double max_condition = 1e12;
  /// Run classify_support first. Strictly positive matrices can skip it.
  bool check_support = true;
  std::size_t max_power_iterations = 200000;
};

struct StationaryResult {
  Eigen::VectorXd pi;
  /// ||pi^T P - pi^T||_inf
  double residual = 0.0;
  bool used_power_iteration = false;
};

inline double stationary_residual(const Eigen::MatrixXd& P, const Eigen::VectorXd& pi) {
  return (P.transpose() * pi - pi).cwiseAbs().maxCoeff();
}

inline void validate_stochastic(const Eigen::MatrixXd& P, double tolerance = 1e-10) {
  if (P.rows() != P.cols() || P.rows() == 0)
    throw Error(ErrorKind::NonStochastic, "transition matrix must be square and non-empty");
  for (Eigen::Index i = 0; i < P.rows(); ++i) {
    if (!P.row(i).allFinite() || (P.row(i).array() < 0.0).any())
      throw Error(ErrorKind::NonStochastic, "row " + std::to_string(i) + " has a negative or non-finite entry");
    const double s = P.row(i).sum();
    if (std::abs(s - 1.0) > tolerance)
      throw Error(ErrorKind::NonStochastic,
                  "row " + std::to_string(i) + " sums to " + std::to_string(s));
  }
}

namespace detail {

// Clamps rounding noise and renormalizes; returns false when a component is
// negative beyond `noise`.
inline bool project_to_simplex(Eigen::VectorXd& x, double noise = 1e-12) {
  for (Eigen::Index i = 0; i < x.size(); ++i) {
    if (!std::isfinite(x[i]) || x[i] < -noise) return false;
    if (x[i] < 0.0) x[i] = 0.0;
  }
  const double s = x.sum();
  if (!(s > 0.0)) return false;
  x /= s;
  return true;
}

inline Eigen::VectorXd cesaro_power_iteration(const Eigen::MatrixXd& P, double tolerance,
                                              std::size_t max_iter) {
  const Eigen::Index n = P.rows();
  const Eigen::MatrixXd Pt = P.transpose();
  Eigen::VectorXd x = Eigen::VectorXd::Constant(n, 1.0 / static_cast<double>(n));
  Eigen::VectorXd avg = x;
  for (std::size_t k = 1; k <= max_iter; ++k) {
    x = Pt * x;
    x /= x.sum();
    avg += (x - avg) / static_cast<double>(k + 1);
    if (k % 16 == 0) {
      Eigen::VectorXd candidate = avg / avg.sum();
      if (stationary_residual(P, candidate) <= tolerance) return candidate;
      Eigen::VectorXd plain = x;
      if (stationary_residual(P, plain) <= tolerance) return plain;
    }
  }
  return avg / avg.sum();
}

}  // namespace detail

inline StationaryResult solve_stationary(const Eigen::MatrixXd& P, const StationaryOptions& opt = {}) {
  validate_stochastic(P, opt.row_sum_tolerance);
  const Eigen::Index n = P.rows();
  if (opt.check_support) {
    auto report = classify_support(P);
    if (!report.has_unique_stationary())
      throw Error(ErrorKind::NoUniqueStationary,
                  "support graph has " + std::to_string(report.closed_count()) +
                      " closed communicating classes");
  }
  StationaryResult out;
  if (n == 1) {
    out.pi = Eigen::VectorXd::Ones(1);
    return out;
  }

  Eigen::MatrixXd A = P.transpose();
  A.diagonal().array() -= 1.0;
  A.row(n - 1).setOnes();
  Eigen::VectorXd b = Eigen::VectorXd::Zero(n);
  b[n - 1] = 1.0;

  Eigen::PartialPivLU<Eigen::MatrixXd> lu(A);
  const double rcond = lu.rcond();
  if (rcond > 0.0 && 1.0 / rcond <= opt.max_condition) {
    Eigen::VectorXd x = lu.solve(b);
    if (detail::project_to_simplex(x)) {
      const double r = stationary_residual(P, x);
      if (r <= opt.residual_tolerance) {
        out.pi = std::move(x);
        out.residual = r;
        return out;
      }
    }
  }

  Eigen::VectorXd x =
      detail::cesaro_power_iteration(P, opt.residual_tolerance * 0.1, opt.max_power_iterations);
  detail::project_to_simplex(x);
  out.residual = stationary_residual(P, x);
  out.used_power_iteration = true;
  if (!(out.residual <= opt.residual_tolerance))
    throw Error(ErrorKind::NoUniqueStationary,
                "power iteration did not reach residual tolerance (residual " +
                    std::to_string(out.residual) + ")");
  out.pi = std::move(x);
  return out;
}

inline Eigen::VectorXd stationary(const Eigen::MatrixXd& P, const StationaryOptions& opt = {}) {
  return solve_stationary(P, opt).pi;
}

}  // namespace mcmcprec
