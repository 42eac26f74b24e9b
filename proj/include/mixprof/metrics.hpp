#pragma once

#include <set>
#include <vector>

#include "mixprof/model.hpp"

namespace mixprof {

/// Per-user squared estimation errors against ground truth. Users with
/// undefined estimates are excluded from the average (their per_user entry
/// is NaN), not counted as zero.
struct MseReport {
  Vector per_user;
  double average = 0.0;
  std::set<int> excluded_users;
  int n_defined = 0;
};

/// Squared Euclidean distance between user i's true and estimated profile
/// columns. Throws std::invalid_argument when i's estimate is undefined;
/// callers must exclude such users.
double mse_per_user(const SenderProfiles& truth, const EstimatedProfiles& est,
                    int i);

/// Throws std::runtime_error when every user is undefined.
MseReport mse_summary(const SenderProfiles& truth, const EstimatedProfiles& est);

/// Box-and-whiskers summary with the mean as the center mark.
struct BoxStats {
  double mean = 0.0;
  double p25 = 0.0;
  double p75 = 0.0;
  double min = 0.0;
  double max = 0.0;
};

/// Percentile by linear interpolation between order statistics: for n sorted
/// values the p-th percentile sits at fractional index (n-1) * p / 100.
double percentile(const std::vector<double>& sorted_values, double pct);

BoxStats box_stats(std::vector<double> samples);

}  // namespace mixprof
