#pragma once

#include <cstddef>
#include <span>
#include <vector>

namespace statichedge::statistics {

struct HedgeErrorStats {
  double p95 = 0.0;
  double p05 = 0.0;
  double rmse = 0.0;
  double mean = 0.0;
  double mae = 0.0;
  double min = 0.0;
  double max = 0.0;
  double skewness = 0.0;
  double kurtosis = 0.0;  // excess
  std::size_t count = 0;
  /// All samples equal; skewness and kurtosis are reported as 0.
  bool degenerate = false;

  bool operator==(const HedgeErrorStats&) const = default;
};

/// Linear-interpolation percentile (q in [0, 100]) of an ascending sample.
double percentile_sorted(std::span<const double> sorted, double q);

double percentile(std::span<const double> sample, double q);

/// Needs at least two samples. Moments are population moments.
HedgeErrorStats summarize(std::span<const double> sample);

}  // namespace statichedge::statistics
