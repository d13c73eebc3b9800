#include "statichedge/statistics.hpp"

#include <algorithm>
#include <cmath>

#include "statichedge/errors.hpp"

namespace statichedge::statistics {

double percentile_sorted(std::span<const double> sorted, double q) {
  if (sorted.empty()) throw DomainError("percentile of an empty sample");
  if (!(q >= 0.0 && q <= 100.0)) throw DomainError("percentile level must lie in [0, 100]");
  const double pos = q / 100.0 * static_cast<double>(sorted.size() - 1);
  const auto lo = static_cast<std::size_t>(std::floor(pos));
  const std::size_t hi = std::min(lo + 1, sorted.size() - 1);
  const double frac = pos - static_cast<double>(lo);
  return sorted[lo] + frac * (sorted[hi] - sorted[lo]);
}

double percentile(std::span<const double> sample, double q) {
  std::vector<double> sorted(sample.begin(), sample.end());
  std::sort(sorted.begin(), sorted.end());
  return percentile_sorted(sorted, q);
}

HedgeErrorStats summarize(std::span<const double> sample) {
  if (sample.size() < 2) throw DomainError("summarize needs at least two samples");
  std::vector<double> sorted(sample.begin(), sample.end());
  std::sort(sorted.begin(), sorted.end());

  HedgeErrorStats s;
  s.count = sorted.size();
  const double n = static_cast<double>(s.count);
  double sum = 0.0, sum_sq = 0.0, sum_abs = 0.0;
  for (double x : sample) {
    sum += x;
    sum_sq += x * x;
    sum_abs += std::abs(x);
  }
  s.mean = sum / n;
  s.rmse = std::sqrt(sum_sq / n);
  s.mae = sum_abs / n;
  s.min = sorted.front();
  s.max = sorted.back();
  s.p95 = percentile_sorted(sorted, 95.0);
  s.p05 = percentile_sorted(sorted, 5.0);

  if (s.min == s.max) {
    s.degenerate = true;
    return s;
  }
  double m2 = 0.0, m3 = 0.0, m4 = 0.0;
  for (double x : sample) {
    const double d = x - s.mean;
    const double d2 = d * d;
    m2 += d2;
    m3 += d2 * d;
    m4 += d2 * d2;
  }
  m2 /= n;
  m3 /= n;
  m4 /= n;
  s.skewness = m3 / std::pow(m2, 1.5);
  s.kurtosis = m4 / (m2 * m2) - 3.0;
  return s;
}

}  // namespace statichedge::statistics
