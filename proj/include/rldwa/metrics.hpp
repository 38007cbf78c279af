#pragma once

#include <cstddef>
#include <span>

namespace rldwa {

/// Heading-error statistics over one run, all in the unit of the input
/// series (degrees in the logs). std_dev is the sample deviation and is 0
/// for a single-element series; rmse = sqrt(mean of squares).
struct MetricsSummary {
  double mean = 0.0;
  double std_dev = 0.0;
  double rmse = 0.0;
  double mae = 0.0;
  std::size_t count = 0;
};

/// Throws std::invalid_argument on an empty series.
MetricsSummary compute_metrics(std::span<const double> series);

}  // namespace rldwa
