#pragma once

#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>

#include "mixprof/model.hpp"

namespace mixprof {

/// The estimator family. Each member maps an ObservationPair to raw
/// (unclamped) profile estimates; none of them ever sees the ground truth.
enum class AttackKind { Sda, Sda0, Sda1, Sda2, Lsda };

std::string to_string(AttackKind kind);
std::optional<AttackKind> attack_from_string(std::string_view name);

/// Normal-equation condition numbers above this are worth a warning: the
/// inversion itself starts adding visible error at large N.
inline constexpr double kIllConditionedThreshold = 1e8;

/// Background profile estimated from the rounds where user i sent nothing:
/// the average of y over those rounds, divided by t.
struct BackgroundEstimate {
  Vector value;
  std::int64_t rounds_used = 0;
};

/// Returns nullopt when user i sent in every round (no background rounds).
std::optional<BackgroundEstimate> estimate_background(const ObservationPair& obs,
                                                      int i, int threshold);

/// Original statistical disclosure estimator: empirical recipient average
/// over user i's active rounds, minus a fixed uniform background,
///   p(j|i) = (x+_i' y_j) / (x+_i' 1) - (t - 1) / N.
/// Returns nullopt when i never sends.
std::optional<Vector> sda(const ObservationPair& obs, int i, int threshold,
                          int n_users);

/// Generalized estimator with the background measured from i's idle rounds:
///   p(j|i) = (x+_i' y_j) / (x+_i' x_i) - (x+_i' x_b) / (x+_i' x_i) * bg_j.
/// Returns nullopt when i never sends or never idles.
std::optional<Vector> sda0(const ObservationPair& obs, int i, int threshold);

/// Like sda0 but rounds are weighted by how many messages i actually sent:
/// the selector x+_i is replaced by x_i. Coincides with sda0 whenever x_i is
/// binary. Returns nullopt under the same conditions as sda0.
std::optional<Vector> sda1(const ObservationPair& obs, int i, int threshold);

/// Two-unknown least squares per user: jointly fits i's profile and the
/// background profile from all rounds by solving, for every recipient j,
/// the 2x2 normal equations of U_i = (x_i, x_b). Returns nullopt when
/// U_i' U_i is singular (x_i constant, including all-zero).
std::optional<Vector> sda2(const ObservationPair& obs, int i, int threshold);

struct LsdaOptions {
  /// When the normal equations are rank deficient, fall back to the
  /// minimum-norm solution instead of failing. Off by default: a silent
  /// pseudo-inverse would mask an unidentifiable instance.
  bool allow_rank_deficient = false;
};

/// Raised when X'X is rank deficient and no fallback was requested.
class SingularNormalEquations : public std::runtime_error {
 public:
  SingularNormalEquations(Eigen::Index rank, Eigen::Index size);
  Eigen::Index rank() const { return rank_; }
  Eigen::Index size() const { return size_; }

 private:
  Eigen::Index rank_;
  Eigen::Index size_;
};

/// Least squares over all users at once: solves X'X Q = X'Y with one
/// factorization shared by the N right-hand sides, where column i of Q is
/// user i's estimated profile. Also reports the condition number of X'X.
EstimatedProfiles lsda(const ObservationPair& obs, const LsdaOptions& options = {});

/// Dispatches one attack over all users. Per-user estimators skip and flag
/// users whose estimate is undefined; lsda failures propagate.
EstimatedProfiles run_attack(AttackKind kind, const ObservationPair& obs,
                             const MixConfig& config,
                             const LsdaOptions& options = {});

}  // namespace mixprof
