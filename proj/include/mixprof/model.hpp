#pragma once

#include <cstdint>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include <Eigen/Dense>

namespace mixprof {

using Matrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXd;
using IntMatrix = Eigen::MatrixXi;
using IntVector = Eigen::VectorXi;

/// Tolerance for stochasticity checks on constructed inputs (frequency and
/// profile column sums). Inputs are built, not measured, so this is tight.
inline constexpr double kStochasticTol = 1e-12;

/// Threshold-mix scenario parameters: N users, t messages per round,
/// rho observed rounds, and the base RNG seed.
struct MixConfig {
  int n_users = 0;
  int threshold = 0;
  std::int64_t rounds = 0;
  std::uint64_t seed = 0;
};

/// Probability that a message entering the mix comes from each user.
/// Entries are nonnegative and sum to 1.
struct SenderFrequencies {
  Vector freq;
};

/// probs(j, i) is the probability that sender i addresses recipient j.
/// Every column is a distribution over recipients.
struct SenderProfiles {
  Matrix probs;

  int n_users() const { return static_cast<int>(probs.cols()); }
};

/// One observation window: x(r, i) messages sent by user i in round r,
/// y(r, j) messages received by user j in round r. Every row of either
/// matrix sums to the threshold.
struct ObservationPair {
  IntMatrix x;
  IntMatrix y;

  std::int64_t rounds() const { return x.rows(); }
  int n_users() const { return static_cast<int>(x.cols()); }
};

/// Raw (unclamped) output of a disclosure attack. est(j, i) estimates the
/// probability that sender i addresses recipient j; entries may fall outside
/// [0, 1]. Columns of users listed in undefined_users are NaN.
struct EstimatedProfiles {
  Matrix est;
  std::string attack_name;
  std::set<int> undefined_users;
  /// Condition number of the normal-equation matrix; set by lsda only.
  std::optional<double> condition_number;
};

/// Elementwise indicator: 1 where a user sent at least one message in a
/// round, 0 otherwise. Idempotent.
IntMatrix binary_indicator(const IntMatrix& x);

/// Messages sent by everyone except user i, per round: t - x_i. Equals the
/// sum of all other users' columns when row sums equal t.
/// Throws std::out_of_range on a bad user index.
IntVector background_vector(const IntMatrix& x, int i, int t);

/// Checks every invariant of the scenario types and returns one message per
/// violation (empty result means valid). Never throws on bad input.
std::vector<std::string> validate(const MixConfig& config,
                                  const SenderFrequencies& freqs,
                                  const SenderProfiles& profiles);

/// Row-sum and shape checks for an observation window against its config.
std::vector<std::string> validate_observations(const MixConfig& config,
                                               const ObservationPair& obs);

/// Optional post-processing: clamp estimates to [0, 1] and renormalize each
/// defined column to sum 1. Off by default everywhere; the raw estimator is
/// the analyzed object. A clamped all-zero column becomes uniform.
EstimatedProfiles clamp_and_normalize(const EstimatedProfiles& raw);

}  // namespace mixprof
