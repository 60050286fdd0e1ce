#pragma once

#include <algorithm>
#include <cmath>
#include <numeric>
#include <optional>
#include <span>
#include <vector>

namespace citenet::stats {

inline std::optional<double> mean(std::span<const double> values) {
  if (values.empty()) return std::nullopt;
  return std::accumulate(values.begin(), values.end(), 0.0) / static_cast<double>(values.size());
}

/// Population standard deviation (divides by n).
inline std::optional<double> stddev(std::span<const double> values) {
  auto m = mean(values);
  if (!m) return std::nullopt;
  double acc = 0.0;
  for (double v : values) acc += (v - *m) * (v - *m);
  return std::sqrt(acc / static_cast<double>(values.size()));
}

/// Percentile in [0, 100] with linear interpolation between closest ranks.
inline std::optional<double> percentile(std::vector<double> values, double q) {
  if (values.empty()) return std::nullopt;
  std::sort(values.begin(), values.end());
  const double pos = q / 100.0 * static_cast<double>(values.size() - 1);
  const auto lo = static_cast<std::size_t>(std::floor(pos));
  const auto hi = std::min(lo + 1, values.size() - 1);
  const double frac = pos - static_cast<double>(lo);
  return values[lo] + (values[hi] - values[lo]) * frac;
}

inline std::optional<double> median(std::vector<double> values) {
  return percentile(std::move(values), 50.0);
}

}  // namespace citenet::stats
