#pragma once

#include <cstdint>

#include "mixprof/model.hpp"

namespace mixprof {

/// Uniformity of a profile column: 1 - sum of squared entries. Ranges from 0
/// (single fixed recipient) to (N-1)/N (uniform over all users).
double uniformity(const Vector& profile_column);

/// Mixture profile of everyone except user i, weighted by their relative
/// sending frequencies. Throws std::invalid_argument when f_i = 1 (there is
/// no background).
Vector background_profile(const SenderProfiles& profiles,
                          const SenderFrequencies& freqs, int i);

/// Autocorrelation matrix of the multinomial input process:
///   R = t [F + (t-1) F 1 F],  F = diag(f).
Matrix autocorrelation(const SenderFrequencies& freqs, int threshold);

/// Closed-form inverse   R^-1 = (1/t) [F^-1 - (1 - 1/t) 1].
/// Throws std::invalid_argument when any frequency is zero (R is singular).
Matrix autocorrelation_inverse(const SenderFrequencies& freqs, int threshold);

/// Falling factorial t(t-1)...(t-n+1); zero when n > t.
double falling_factorial(int t, int n);

/// Per-recipient quantities entering the conditional covariance expansion.
struct TheoryIntermediates {
  /// s_k = p(j,k) (1 - p(j,k)) for the fixed recipient j.
  Vector binomial_variances;
  /// eta_j = sum_k f_k s_k.
  double eta = 0.0;
  double t1 = 0.0, t2 = 0.0, t3 = 0.0;
};

TheoryIntermediates theory_intermediates(const SenderProfiles& profiles,
                                         const SenderFrequencies& freqs,
                                         int threshold, int j);

/// Closed form of E{ X' Sigma_{y_j|X} X } for recipient j:
///   rho [ F (eta t^(3) 1 + t^(2) (S 1 + 1 S)) F + (eta t^(2) I + t S) F ].
Matrix covariance_middle_term(const SenderProfiles& profiles,
                              const SenderFrequencies& freqs, int threshold,
                              std::int64_t rounds, int j);

/// Asymptotic covariance of the least-squares estimate of recipient j's
/// sender column: R^-1 (middle term / rho^2) R^-1. Diagnostic quantity; its
/// diagonal summed over j reproduces the closed-form MSE below.
Matrix lsda_profile_covariance(const SenderProfiles& profiles,
                               const SenderFrequencies& freqs, int threshold,
                               std::int64_t rounds, int j);

/// Asymptotic per-user MSE of the joint least-squares attack:
///   (1/rho) [ (1/f_i - 1)(1 - 1/t) ubar + (1/(f_i t)) u_i ],
/// with ubar the frequency-weighted average uniformity. Throws when f_i = 0.
double mse_lsda_theory(const SenderProfiles& profiles,
                       const SenderFrequencies& freqs, int threshold,
                       std::int64_t rounds, int i);

/// Same form with ubar replaced by the two-player average
/// f_i u_i + (1 - f_i) u_{b_i}: user i against her aggregated background.
/// Never smaller than the joint least-squares prediction.
double mse_sda2_theory(const SenderProfiles& profiles,
                       const SenderFrequencies& freqs, int threshold,
                       std::int64_t rounds, int i);

/// All per-user predictions and intermediate uniformities in one object.
struct TheoryReport {
  Vector per_user_mse_lsda;
  Vector per_user_mse_sda2;
  double avg_uniformity_lsda = 0.0;
  Vector avg_uniformity_sda2_per_user;
  Vector uniformities;
  Vector background_uniformities;
};

TheoryReport theory_report(const SenderProfiles& profiles,
                           const SenderFrequencies& freqs, int threshold,
                           std::int64_t rounds);

}  // namespace mixprof
