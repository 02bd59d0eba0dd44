#pragma once

// Descriptive statistics shared by the summary and benchmark modules.
// SD uses divisor n - 1; quantiles interpolate linearly between order
// statistics (position p * (n - 1) on the sorted sample).

#include <algorithm>
#include <cmath>
#include <span>
#include <vector>

namespace mcmcprec::stats {

inline double mean(std::span<const double> x) {
  double s = 0.0;
  for (double v : x) s += v;
  return x.empty() ? 0.0 : s / static_cast<double>(x.size());
}

/// Sample SD with divisor n - 1; 0 for n < 2.
inline double sd(std::span<const double> x) {
  if (x.size() < 2) return 0.0;
  const double m = mean(x);
  double ss = 0.0;
  for (double v : x) ss += (v - m) * (v - m);
  return std::sqrt(ss / static_cast<double>(x.size() - 1));
}

/// Quantile of an already sorted sample.
inline double quantile_sorted(std::span<const double> sorted, double p) {
  if (sorted.empty()) return 0.0;
  const double pos = p * static_cast<double>(sorted.size() - 1);
  const auto lo = static_cast<std::size_t>(std::floor(pos));
  const auto hi = std::min(lo + 1, sorted.size() - 1);
  const double frac = pos - static_cast<double>(lo);
  return sorted[lo] + frac * (sorted[hi] - sorted[lo]);
}

inline double quantile(std::span<const double> x, double p) {
  std::vector<double> s(x.begin(), x.end());
  std::sort(s.begin(), s.end());
  return quantile_sorted(s, p);
}

inline double median(std::span<const double> x) { return quantile(x, 0.5); }

struct Moments {
  double mean = 0.0;
  double sd = 0.0;
  double median = 0.0;
  double lower = 0.0;
  double upper = 0.0;
};

inline Moments describe(std::span<const double> x, double lower_p, double upper_p) {
  std::vector<double> s(x.begin(), x.end());
  std::sort(s.begin(), s.end());
  return {mean(x), sd(x), quantile_sorted(s, 0.5), quantile_sorted(s, lower_p),
          quantile_sorted(s, upper_p)};
}

}  // namespace mcmcprec::stats
