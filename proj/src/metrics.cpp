#include "mixprof/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>
#include <stdexcept>

namespace mixprof {

double mse_per_user(const SenderProfiles& truth, const EstimatedProfiles& est,
                    int i) {
  if (est.undefined_users.count(i)) {
    std::ostringstream msg;
    msg << "user " << i << " has no defined estimate (" << est.attack_name
        << "); exclude it from aggregation";
    throw std::invalid_argument(msg.str());
  }
  return (truth.probs.col(i) - est.est.col(i)).squaredNorm();
}

MseReport mse_summary(const SenderProfiles& truth, const EstimatedProfiles& est) {
  const auto n = static_cast<int>(truth.probs.cols());
  MseReport report;
  report.per_user = Vector::Constant(n, std::numeric_limits<double>::quiet_NaN());
  double sum = 0.0;
  for (int i = 0; i < n; ++i) {
    if (est.undefined_users.count(i)) {
      report.excluded_users.insert(i);
      continue;
    }
    report.per_user(i) = mse_per_user(truth, est, i);
    sum += report.per_user(i);
    ++report.n_defined;
  }
  if (report.n_defined == 0)
    throw std::runtime_error("every user's estimate is undefined; empty report");
  report.average = sum / report.n_defined;
  return report;
}

double percentile(const std::vector<double>& sorted_values, double pct) {
  const auto n = sorted_values.size();
  if (n == 0) throw std::invalid_argument("percentile of empty sample");
  const double h = (static_cast<double>(n) - 1.0) * pct / 100.0;
  const auto lo = static_cast<std::size_t>(h);
  if (lo + 1 >= n) return sorted_values.back();
  const double frac = h - static_cast<double>(lo);
  return sorted_values[lo] + frac * (sorted_values[lo + 1] - sorted_values[lo]);
}

BoxStats box_stats(std::vector<double> samples) {
  if (samples.empty()) throw std::invalid_argument("box_stats of empty sample");
  std::sort(samples.begin(), samples.end());
  BoxStats stats;
  stats.min = samples.front();
  stats.max = samples.back();
  stats.p25 = percentile(samples, 25.0);
  stats.p75 = percentile(samples, 75.0);
  double sum = 0.0;
  for (double v : samples) sum += v;
  stats.mean = sum / static_cast<double>(samples.size());
  return stats;
}

}  // namespace mixprof
