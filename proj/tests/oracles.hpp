#pragma once

// Reference computations used by the unit tests and the acceptance binary.
// None of these call into the library's numerical code.

#include <Eigen/Dense>

#include <cmath>
#include <cstdint>
#include <random>
#include <vector>

namespace oracle {

/// Random row-stochastic matrix with an irreducible support. Three families
/// are mixed: dense uniform rows, dense rows with log-normal weights spanning
/// several orders of magnitude, and sparse rows closed by a Hamiltonian cycle.
inline Eigen::MatrixXd random_stochastic(std::mt19937_64& gen, int n, int family) {
  Eigen::MatrixXd P(n, n);
  std::uniform_real_distribution<double> unif(0.0, 1.0);
  std::normal_distribution<double> normal(0.0, 2.0);
  std::uniform_int_distribution<int> pick(0, n - 1);
  switch (family % 3) {
    case 0:
      for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) P(i, j) = unif(gen) + 1e-3;
      break;
    case 1:
      for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) P(i, j) = std::exp(normal(gen));
      break;
    default:
      P.setZero();
      for (int i = 0; i < n; ++i) {
        P(i, (i + 1) % n) = unif(gen) + 0.05;
        for (int k = 0; k < 3; ++k) P(i, pick(gen)) += unif(gen);
      }
      break;
  }
  for (int i = 0; i < n; ++i) P.row(i) /= P.row(i).sum();
  return P;
}

/// Power iteration on the lazy chain (P + I)/2, which shares the stationary
/// vector of P and is aperiodic.
inline Eigen::VectorXd power_iteration(const Eigen::MatrixXd& P, double tol = 1e-15,
                                       int max_iter = 2000000) {
  const auto n = P.rows();
  const Eigen::MatrixXd Lt = 0.5 * (P.transpose() + Eigen::MatrixXd::Identity(n, n));
  Eigen::VectorXd x = Eigen::VectorXd::Constant(n, 1.0 / static_cast<double>(n));
  for (int it = 0; it < max_iter; ++it) {
    Eigen::VectorXd y = Lt * x;
    y /= y.sum();
    const double delta = (y - x).cwiseAbs().maxCoeff();
    x = y;
    if (delta < tol) break;
  }
  return x;
}

/// Least-squares solution of [P^T - I ; 1^T] x = [0 ; 1] by Householder QR.
inline Eigen::VectorXd null_space(const Eigen::MatrixXd& P) {
  const auto n = P.rows();
  Eigen::MatrixXd A(n + 1, n);
  A.topRows(n) = P.transpose() - Eigen::MatrixXd::Identity(n, n);
  A.row(n).setOnes();
  Eigen::VectorXd b = Eigen::VectorXd::Zero(n + 1);
  b[n] = 1.0;
  return A.colPivHouseholderQr().solve(b);
}

/// Mean and variance of Beta(a, b).
struct BetaMoments {
  double mean;
  double var;
};

inline BetaMoments beta_moments(double a, double b) {
  const double s = a + b;
  return {a / s, a * b / (s * s * (s + 1.0))};
}

/// Standard error of a sample variance estimate for a Beta(a, b) sample of size R,
/// from the fourth central moment.
inline double beta_variance_se(double a, double b, double R) {
  const double s = a + b;
  const double var = a * b / (s * s * (s + 1.0));
  // excess kurtosis of the beta distribution
  const double ex = 6.0 * ((a - b) * (a - b) * (s + 1.0) - a * b * (s + 2.0)) / (a * b * (s + 2.0) * (s + 3.0));
  const double mu4 = (ex + 3.0) * var * var;
  return std::sqrt((mu4 - var * var) / R);
}

}  // namespace oracle
