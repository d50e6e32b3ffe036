#pragma once

#include <cmath>
#include <map>
#include <optional>
#include <span>
#include <string_view>
#include <utility>
#include <vector>

#include "inter_mdm/errors.hpp"

namespace inter_mdm {

struct MetricsRecord {
  int iteration = 0;
  double ari_a = 0.0;
  double ari_b = 0.0;
  std::optional<double> kappa;  // absent when both agents share one sign vector
};

namespace detail {

inline double choose2(double n) { return n * (n - 1.0) / 2.0; }

}  // namespace detail

// Hubert-Arabie adjusted Rand index via the contingency table.
inline double adjusted_rand_index(std::span<const int> x, std::span<const int> y) {
  if (x.size() != y.size()) throw ParameterError("label vectors differ in length");
  if (x.empty()) throw ParameterError("label vectors are empty");

  std::map<std::pair<int, int>, long> cells;
  std::map<int, long> rows, cols;
  for (std::size_t i = 0; i < x.size(); ++i) {
    ++cells[{x[i], y[i]}];
    ++rows[x[i]];
    ++cols[y[i]];
  }
  double index = 0.0, sum_rows = 0.0, sum_cols = 0.0;
  for (const auto& [_, n] : cells) index += detail::choose2(static_cast<double>(n));
  for (const auto& [_, n] : rows) sum_rows += detail::choose2(static_cast<double>(n));
  for (const auto& [_, n] : cols) sum_cols += detail::choose2(static_cast<double>(n));

  // scaled by the total pair count so integer inputs stay exact
  const double total_pairs = detail::choose2(static_cast<double>(x.size()));
  const double expected = sum_rows * sum_cols;
  const double denom = 0.5 * (sum_rows + sum_cols) * total_pairs - expected;
  if (denom == 0.0) {
    // Both partitions trivial (single cluster or all singletons).
    return cells.size() == rows.size() && cells.size() == cols.size() ? 1.0 : 0.0;
  }
  return (index * total_pairs - expected) / denom;
}

// Cohen's kappa on sign indices. Signs are a shared vocabulary, so agreement
// means the same index, not an equivalent partition.
inline double kappa(std::span<const int> wa, std::span<const int> wb, int num_signs) {
  if (wa.size() != wb.size()) throw ParameterError("sign vectors differ in length");
  if (wa.empty()) throw ParameterError("sign vectors are empty");
  if (num_signs < 1) throw ParameterError("vocabulary size must be positive");
  std::vector<double> freq_a(static_cast<std::size_t>(num_signs), 0.0);
  std::vector<double> freq_b(static_cast<std::size_t>(num_signs), 0.0);
  std::size_t agree = 0;
  for (std::size_t d = 0; d < wa.size(); ++d) {
    if (wa[d] < 0 || wa[d] >= num_signs || wb[d] < 0 || wb[d] >= num_signs)
      throw ParameterError("sign index out of range");
    freq_a[static_cast<std::size_t>(wa[d])] += 1.0;
    freq_b[static_cast<std::size_t>(wb[d])] += 1.0;
    if (wa[d] == wb[d]) ++agree;
  }
  const double n = static_cast<double>(wa.size());
  const double observed = static_cast<double>(agree) / n;
  double chance = 0.0;
  for (std::size_t w = 0; w < freq_a.size(); ++w) chance += (freq_a[w] / n) * (freq_b[w] / n);
  if (chance >= 1.0) return observed == 1.0 ? 1.0 : 0.0;
  return (observed - chance) / (1.0 - chance);
}

struct Summary {
  double mean = 0.0;
  double sd = 0.0;
};

// Mean and sample standard deviation (n - 1 denominator; 0 when n = 1).
inline Summary summarize(std::span<const double> values) {
  if (values.empty()) throw ParameterError("cannot summarize an empty sample");
  double mean = 0.0;
  for (double v : values) mean += v;
  mean /= static_cast<double>(values.size());
  if (values.size() == 1) return {mean, 0.0};
  double ss = 0.0;
  for (double v : values) ss += (v - mean) * (v - mean);
  return {mean, std::sqrt(ss / static_cast<double>(values.size() - 1))};
}

// Landis-Koch reading of a kappa value, for report annotations only.
inline std::string_view kappa_band(double k) {
  if (k < 0.0) return "no agreement";
  if (k <= 0.20) return "slight";
  if (k <= 0.40) return "fair";
  if (k <= 0.60) return "moderate";
  if (k <= 0.80) return "substantial";
  return "almost perfect";
}

}  // namespace inter_mdm
