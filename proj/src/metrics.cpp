#include "rldwa/metrics.hpp"

#include <cmath>
#include <stdexcept>

namespace rldwa {

MetricsSummary compute_metrics(std::span<const double> series) {
  if (series.empty()) throw std::invalid_argument("compute_metrics: empty series");
  MetricsSummary m;
  m.count = series.size();
  const double n = static_cast<double>(series.size());

  double sum = 0.0, sum_sq = 0.0, sum_abs = 0.0;
  for (double x : series) {
    sum += x;
    sum_sq += x * x;
    sum_abs += std::abs(x);
  }
  m.mean = sum / n;
  m.rmse = std::sqrt(sum_sq / n);
  m.mae = sum_abs / n;

  if (series.size() > 1) {
    double ss = 0.0;
    for (double x : series) ss += (x - m.mean) * (x - m.mean);
    m.std_dev = std::sqrt(ss / (n - 1.0));
  }
  return m;
}

}  // namespace rldwa
