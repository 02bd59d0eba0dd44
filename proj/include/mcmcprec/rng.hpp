#pragma once

// Reproducible random streams and the handful of variates the library needs.
//
// Every stochastic quantity is drawn from a StreamRng keyed by a master seed
// and a path of stream identifiers (draw index, replication index, ...), so
// results do not depend on evaluation order or thread count. The key is
// hashed with SplitMix64 into the state of a xoshiro256** engine; streams
// are cheap to construct, which matters with one stream per posterior draw.
// Variate transforms are implemented here instead of using <random>
// distributions, whose output is implementation-defined.

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdint>
#include <initializer_list>
#include <limits>
#include <span>
#include <vector>

namespace mcmcprec {

inline constexpr std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

class StreamRng {
 public:
  using result_type = std::uint64_t;

  explicit StreamRng(std::uint64_t seed, std::initializer_list<std::uint64_t> path = {}) {
    std::uint64_t key = splitmix64(seed);
    std::uint64_t depth = 0;
    for (auto p : path) key = splitmix64(key ^ splitmix64(p + 0x632be59bd9b4e019ULL * ++depth));
    key = splitmix64(key ^ depth);
    for (auto& w : state_) {
      key += 0x9e3779b97f4a7c15ULL;
      w = splitmix64(key);
    }
  }

  static constexpr result_type min() { return 0; }
  static constexpr result_type max() { return std::numeric_limits<result_type>::max(); }

  /// xoshiro256** (Blackman & Vigna).
  result_type operator()() {
    const std::uint64_t out = rotl(state_[1] * 5, 7) * 9;
    const std::uint64_t t = state_[1] << 17;
    state_[2] ^= state_[0];
    state_[3] ^= state_[1];
    state_[1] ^= state_[2];
    state_[0] ^= state_[3];
    state_[2] ^= t;
    state_[3] = rotl(state_[3], 45);
    return out;
  }

  /// Uniform on the open interval (0, 1) with 53 bits of resolution.
  double uniform() { return (static_cast<double>((*this)() >> 11) + 0.5) * 0x1.0p-53; }

  /// Standard normal via the Marsaglia polar method.
  double normal() {
    if (has_spare_) {
      has_spare_ = false;
      return spare_;
    }
    double u, v, s;
    do {
      u = 2.0 * uniform() - 1.0;
      v = 2.0 * uniform() - 1.0;
      s = u * u + v * v;
    } while (s >= 1.0 || s == 0.0);
    const double f = std::sqrt(-2.0 * std::log(s) / s);
    spare_ = v * f;
    has_spare_ = true;
    return u * f;
  }

  /// Index drawn from a discrete distribution given by `probs` (need not be normalized).
  std::size_t categorical(std::span<const double> probs) {
    double total = 0.0;
    for (double p : probs) total += p;
    const double target = uniform() * total;
    double acc = 0.0;
    for (std::size_t i = 0; i < probs.size(); ++i) {
      acc += probs[i];
      if (target < acc) return i;
    }
    // rounding at the upper edge: last index with positive mass
    for (std::size_t i = probs.size(); i-- > 0;)
      if (probs[i] > 0.0) return i;
    return probs.size() - 1;
  }

 private:
  static constexpr std::uint64_t rotl(std::uint64_t x, int k) { return (x << k) | (x >> (64 - k)); }

  std::array<std::uint64_t, 4> state_{};
  double spare_ = 0.0;
  bool has_spare_ = false;
};

namespace detail {

// Marsaglia & Tsang (2000), valid for shape >= 1.
inline double gamma_mt(double shape, StreamRng& rng) {
  const double d = shape - 1.0 / 3.0;
  const double c = 1.0 / std::sqrt(9.0 * d);
  for (;;) {
    double x, v;
    do {
      x = rng.normal();
      v = 1.0 + c * x;
    } while (v <= 0.0);
    v = v * v * v;
    const double u = rng.uniform();
    const double x2 = x * x;
    if (u < 1.0 - 0.0331 * x2 * x2) return d * v;
    if (std::log(u) < 0.5 * x2 + d * (1.0 - v + std::log(v))) return d * v;
  }
}

}  // namespace detail

/// Unit-scale gamma variate. shape must be > 0.
inline double gamma_variate(double shape, StreamRng& rng) {
  if (shape >= 1.0) return detail::gamma_mt(shape, rng);
  return detail::gamma_mt(shape + 1.0, rng) * std::pow(rng.uniform(), 1.0 / shape);
}

/// Logarithm of a unit-scale gamma variate. For shape < 1 the boost
/// G(a) = G(a+1) U^(1/a) is applied on the log scale, so tiny shapes do not
/// underflow to zero.
inline double log_gamma_variate(double shape, StreamRng& rng) {
  if (shape >= 1.0) return std::log(detail::gamma_mt(shape, rng));
  return std::log(detail::gamma_mt(shape + 1.0, rng)) + std::log(rng.uniform()) / shape;
}

/// Dirichlet draw written to `out`. Zero shapes yield exact zeros; at least
/// one shape must be positive. Rows containing a shape below one are
/// normalized on the log scale.
inline void dirichlet_variate(std::span<const double> alpha, std::span<double> out,
                              StreamRng& rng) {
  const bool small = std::any_of(alpha.begin(), alpha.end(),
                                 [](double a) { return a > 0.0 && a < 1.0; });
  if (!small) {
    double total = 0.0;
    for (std::size_t i = 0; i < alpha.size(); ++i) {
      out[i] = alpha[i] > 0.0 ? detail::gamma_mt(alpha[i], rng) : 0.0;
      total += out[i];
    }
    for (auto& x : out.first(alpha.size())) x /= total;
    return;
  }
  double top = -std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < alpha.size(); ++i) {
    out[i] = alpha[i] > 0.0 ? log_gamma_variate(alpha[i], rng)
                            : -std::numeric_limits<double>::infinity();
    top = std::max(top, out[i]);
  }
  double total = 0.0;
  for (std::size_t i = 0; i < alpha.size(); ++i) {
    out[i] = alpha[i] > 0.0 ? std::exp(out[i] - top) : 0.0;
    total += out[i];
  }
  for (auto& x : out.first(alpha.size())) x /= total;
}

}  // namespace mcmcprec
