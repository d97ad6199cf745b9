#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <stdexcept>
#include <vector>

namespace metapop {

struct Interval {
  double low = 0.0;
  double high = 1.0;
  double half_width() const { return 0.5 * (high - low); }
};

// Wilson score interval for a binomial proportion (z = 1.96 for 95%).
inline Interval wilson_interval(long long successes, long long n, double z = 1.96) {
  if (n <= 0) throw std::invalid_argument("wilson_interval: n must be positive");
  const double p = static_cast<double>(successes) / static_cast<double>(n);
  const double z2 = z * z;
  const double denom = 1.0 + z2 / n;
  const double center = (p + z2 / (2.0 * n)) / denom;
  const double half =
      (z / denom) * std::sqrt(p * (1.0 - p) / n + z2 / (4.0 * n * n));
  return {std::max(0.0, center - half), std::min(1.0, center + half)};
}

// Nearest-rank quantile of a sorted sample; q in [0, 1].
inline double quantile_sorted(const std::vector<double>& sorted, double q) {
  if (sorted.empty()) throw std::invalid_argument("quantile of empty sample");
  if (q <= 0.0) return sorted.front();
  if (q >= 1.0) return sorted.back();
  const std::size_t rank =
      static_cast<std::size_t>(std::ceil(q * static_cast<double>(sorted.size())));
  return sorted[std::min(sorted.size() - 1, rank == 0 ? 0 : rank - 1)];
}

struct MeanSe {
  double mean = 0.0;
  double se = 0.0;
};

// Sample mean and standard error (unbiased variance / sqrt(n)).
inline MeanSe mean_and_se(const std::vector<double>& xs) {
  const std::size_t n = xs.size();
  if (n == 0) throw std::invalid_argument("mean of empty sample");
  double m = 0.0;
  for (double x : xs) m += x;
  m /= static_cast<double>(n);
  if (n == 1) return {m, 0.0};
  double ss = 0.0;
  for (double x : xs) ss += (x - m) * (x - m);
  const double var = ss / static_cast<double>(n - 1);
  return {m, std::sqrt(var / static_cast<double>(n))};
}

}  // namespace metapop
