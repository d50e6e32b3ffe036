#pragma once

// Brute-force reference computations. Deliberately naive and independent of
// the library implementations they check.

#include <cmath>
#include <cstddef>
#include <map>
#include <random>
#include <vector>

namespace oracle {

// Adjusted Rand index by explicit enumeration of all object pairs.
inline double ari_by_pairs(const std::vector<int>& x, const std::vector<int>& y) {
  const std::size_t n = x.size();
  double both = 0, in_x = 0, in_y = 0, pairs = 0;
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i + 1; j < n; ++j) {
      const bool sx = x[i] == x[j];
      const bool sy = y[i] == y[j];
      pairs += 1;
      if (sx) in_x += 1;
      if (sy) in_y += 1;
      if (sx && sy) both += 1;
    }
  }
  const double expected = pairs > 0 ? in_x * in_y / pairs : 0.0;
  const double max_index = 0.5 * (in_x + in_y);
  if (max_index == expected) {
    // trivial partitions: identical groupings iff every pair agrees
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = i + 1; j < n; ++j)
        if ((x[i] == x[j]) != (y[i] == y[j])) return 0.0;
    return 1.0;
  }
  return (both - expected) / (max_index - expected);
}

// Cohen's kappa from explicit per-sign frequency sums.
inline double kappa_by_frequencies(const std::vector<int>& a, const std::vector<int>& b, int num_signs) {
  const double n = static_cast<double>(a.size());
  double agree = 0;
  for (std::size_t d = 0; d < a.size(); ++d) agree += a[d] == b[d] ? 1 : 0;
  double chance = 0;
  for (int w = 0; w < num_signs; ++w) {
    double fa = 0, fb = 0;
    for (int x : a) fa += x == w ? 1 : 0;
    for (int x : b) fb += x == w ? 1 : 0;
    chance += (fa / n) * (fb / n);
  }
  const double observed = agree / n;
  if (chance == 1.0) return observed == 1.0 ? 1.0 : 0.0;
  return (observed - chance) / (1.0 - chance);
}

// Normalized elementwise product of two distributions, by enumeration.
inline std::vector<double> product_target(const std::vector<double>& p, const std::vector<double>& q) {
  std::vector<double> out(p.size());
  double total = 0;
  for (std::size_t i = 0; i < p.size(); ++i) {
    out[i] = p[i] * q[i];
    total += out[i];
  }
  for (double& x : out) x /= total;
  return out;
}

inline std::vector<double> frequencies(const std::vector<long>& counts) {
  double total = 0;
  for (long c : counts) total += static_cast<double>(c);
  std::vector<double> out(counts.size());
  for (std::size_t i = 0; i < counts.size(); ++i) out[i] = static_cast<double>(counts[i]) / total;
  return out;
}

inline double total_variation(const std::vector<double>& p, const std::vector<double>& q) {
  double s = 0;
  for (std::size_t i = 0; i < p.size(); ++i) s += std::abs(p[i] - q[i]);
  return 0.5 * s;
}

// A random distribution from an engine unrelated to the library's streams.
inline std::vector<double> random_distribution(std::size_t n, std::mt19937& gen) {
  std::gamma_distribution<double> g(1.0, 1.0);
  std::vector<double> out(n);
  double total = 0;
  for (double& x : out) {
    x = g(gen) + 1e-3;
    total += x;
  }
  for (double& x : out) x /= total;
  return out;
}

}  // namespace oracle
