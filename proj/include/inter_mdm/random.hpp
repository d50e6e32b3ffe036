#pragma once

// Seeded sampling and log-space probability arithmetic shared by the
// generator, the agents and the naming game.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <numeric>
#include <random>
#include <span>
#include <vector>

#include "inter_mdm/errors.hpp"

namespace inter_mdm {

// Lower bound applied to probabilities before any log and to Dirichlet draws.
inline constexpr double kProbFloor = 1e-300;
inline constexpr double kProbSumTolerance = 1e-9;

using CountHistogram = std::vector<std::int32_t>;

// A categorical distribution. Construction validates non-negativity and
// normalization, so every ProbVector in flight is usable as-is.
class ProbVector {
 public:
  ProbVector() = default;
  explicit ProbVector(std::vector<double> p) : p_(std::move(p)) { validate(p_); }

  static void validate(std::span<const double> p) {
    if (p.empty()) throw ParameterError("probability vector is empty");
    double total = 0.0;
    for (double x : p) {
      if (!(x >= 0.0) || !std::isfinite(x))
        throw ParameterError("probability vector has a negative or non-finite entry");
      total += x;
    }
    if (std::abs(total - 1.0) > kProbSumTolerance)
      throw ParameterError("probability vector does not sum to 1");
  }

  std::size_t size() const noexcept { return p_.size(); }
  double operator[](std::size_t i) const { return p_[i]; }
  std::span<const double> values() const noexcept { return p_; }
  auto begin() const noexcept { return p_.begin(); }
  auto end() const noexcept { return p_.end(); }

  friend bool operator==(const ProbVector&, const ProbVector&) = default;

 private:
  std::vector<double> p_;
};

namespace detail {

constexpr std::uint64_t splitmix64(std::uint64_t x) noexcept {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

}  // namespace detail

// A reproducible random stream identified by (seed, stream id). Child streams
// are derived deterministically, so each consumer can own an independent
// stream regardless of the order in which work is scheduled.
class RngStream {
 public:
  RngStream(std::uint64_t seed, std::uint64_t stream_id)
      : seed_(seed), stream_id_(stream_id) {
    const std::uint64_t a = detail::splitmix64(seed);
    const std::uint64_t b = detail::splitmix64(a ^ detail::splitmix64(stream_id));
    std::seed_seq seq{static_cast<std::uint32_t>(a), static_cast<std::uint32_t>(a >> 32),
                      static_cast<std::uint32_t>(b), static_cast<std::uint32_t>(b >> 32)};
    engine_.seed(seq);
  }

  RngStream derive(std::uint64_t tag) const {
    return RngStream(seed_, detail::splitmix64(stream_id_ * 0x100000001b3ULL + tag + 1));
  }

  std::uint64_t seed() const noexcept { return seed_; }
  std::uint64_t stream_id() const noexcept { return stream_id_; }
  std::mt19937_64& engine() noexcept { return engine_; }

  // Uniform on [0, 1).
  double uniform() { return std::uniform_real_distribution<double>(0.0, 1.0)(engine_); }

 private:
  std::uint64_t seed_;
  std::uint64_t stream_id_;
  std::mt19937_64 engine_;
};

// log of a Gamma(shape, 1) draw. Shapes below one use the boost
// Gamma(a) = Gamma(a + 1) * U^(1/a), kept in log space so that tiny shapes
// do not underflow to zero.
inline double sample_log_gamma(double shape, RngStream& rng) {
  if (shape >= 1.0) {
    return std::log(std::gamma_distribution<double>(shape, 1.0)(rng.engine()));
  }
  const double boosted = std::gamma_distribution<double>(shape + 1.0, 1.0)(rng.engine());
  const double u = 1.0 - rng.uniform();  // (0, 1]
  return std::log(boosted) + std::log(u) / shape;
}

// Shift-invariant softmax. Entries equal to -inf receive zero mass.
inline ProbVector normalize_log_weights(std::span<const double> log_weights) {
  if (log_weights.empty()) throw ParameterError("log weight vector is empty");
  double max_w = -std::numeric_limits<double>::infinity();
  for (double x : log_weights) {
    if (std::isnan(x)) throw ParameterError("log weight is NaN");
    max_w = std::max(max_w, x);
  }
  if (max_w == -std::numeric_limits<double>::infinity())
    throw InferenceError("all log weights are -infinity");
  if (max_w == std::numeric_limits<double>::infinity())
    throw ParameterError("log weight is +infinity");

  std::vector<double> p(log_weights.size());
  double total = 0.0;
  for (std::size_t i = 0; i < p.size(); ++i) {
    p[i] = std::exp(log_weights[i] - max_w);
    total += p[i];
  }
  for (double& x : p) x /= total;
  return ProbVector(std::move(p));
}

// Dirichlet draw via normalized Gamma variates; every entry is at least
// kProbFloor.
inline ProbVector sample_dirichlet(std::span<const double> alpha, RngStream& rng) {
  if (alpha.empty()) throw ParameterError("Dirichlet concentration is empty");
  std::vector<double> log_g(alpha.size());
  for (std::size_t i = 0; i < alpha.size(); ++i) {
    if (!(alpha[i] > 0.0) || !std::isfinite(alpha[i]))
      throw ParameterError("Dirichlet concentration must be strictly positive");
    log_g[i] = sample_log_gamma(alpha[i], rng);
  }
  const ProbVector normalized = normalize_log_weights(log_g);
  std::vector<double> p(normalized.begin(), normalized.end());
  double total = 0.0;
  for (double& x : p) {
    x = std::max(x, kProbFloor);
    total += x;
  }
  for (double& x : p) x /= total;
  return ProbVector(std::move(p));
}

inline std::size_t sample_categorical(const ProbVector& p, RngStream& rng) {
  if (p.size() == 0) throw ParameterError("categorical distribution is empty");
  const double u = rng.uniform();
  double cumulative = 0.0;
  std::size_t last_positive = 0;
  for (std::size_t i = 0; i < p.size(); ++i) {
    if (p[i] > 0.0) last_positive = i;
    cumulative += p[i];
    if (u < cumulative) return i;
  }
  // u landed in the rounding gap above the accumulated sum
  return last_positive;
}

inline CountHistogram sample_multinomial(int n, const ProbVector& p, RngStream& rng) {
  if (n < 1) throw ParameterError("multinomial draw count must be at least 1");
  CountHistogram counts(p.size(), 0);
  for (int i = 0; i < n; ++i) ++counts[sample_categorical(p, rng)];
  return counts;
}

// Sum_f obs_f * log p_f. The multinomial coefficient is left out: it depends
// only on the observation and cancels across mixture components.
inline double log_multinomial_weight(std::span<const std::int32_t> obs,
                                     std::span<const double> p) {
  if (obs.size() != p.size())
    throw ParameterError("observation and probability lengths differ");
  double total = 0.0;
  for (std::size_t f = 0; f < obs.size(); ++f) {
    if (obs[f] != 0) total += obs[f] * std::log(std::max(p[f], kProbFloor));
  }
  return total;
}

inline double log_multinomial_weight(const CountHistogram& obs, const ProbVector& p) {
  return log_multinomial_weight(std::span<const std::int32_t>(obs), p.values());
}

}  // namespace inter_mdm
