#include "mixprof/theory.hpp"

#include <sstream>
#include <stdexcept>

namespace mixprof {

double uniformity(const Vector& profile_column) {
  return 1.0 - profile_column.squaredNorm();
}

Vector background_profile(const SenderProfiles& profiles,
                          const SenderFrequencies& freqs, int i) {
  const Eigen::Index n = freqs.freq.size();
  const double remainder = 1.0 - freqs.freq(i);
  if (remainder <= 0.0) {
    std::ostringstream msg;
    msg << "user " << i << " sends every message (f = " << freqs.freq(i)
        << "); background profile undefined";
    throw std::invalid_argument(msg.str());
  }
  Vector bg = Vector::Zero(n);
  for (Eigen::Index k = 0; k < n; ++k) {
    if (k == i) continue;
    bg += (freqs.freq(k) / remainder) * profiles.probs.col(k);
  }
  return bg;
}

Matrix autocorrelation(const SenderFrequencies& freqs, int threshold) {
  const double t = threshold;
  const Vector& f = freqs.freq;
  Matrix r = t * (t - 1.0) * (f * f.transpose());
  r.diagonal() += t * f;
  return r;
}

Matrix autocorrelation_inverse(const SenderFrequencies& freqs, int threshold) {
  const double t = threshold;
  const Vector& f = freqs.freq;
  const Eigen::Index n = f.size();
  for (Eigen::Index i = 0; i < n; ++i) {
    if (f(i) <= 0.0) {
      std::ostringstream msg;
      msg << "frequency of user " << i << " is " << f(i)
          << "; the autocorrelation matrix is singular";
      throw std::invalid_argument(msg.str());
    }
  }
  Matrix inv = Matrix::Constant(n, n, -(1.0 - 1.0 / t) / t);
  inv.diagonal() += f.cwiseInverse() / t;
  return inv;
}

double falling_factorial(int t, int n) {
  if (n > t) return 0.0;
  double v = 1.0;
  for (int k = 0; k < n; ++k) v *= t - k;
  return v;
}

TheoryIntermediates theory_intermediates(const SenderProfiles& profiles,
                                         const SenderFrequencies& freqs,
                                         int threshold, int j) {
  TheoryIntermediates ti;
  const Vector pj = profiles.probs.row(j).transpose();
  ti.binomial_variances = pj.array() * (1.0 - pj.array());
  ti.eta = freqs.freq.dot(ti.binomial_variances);
  ti.t1 = falling_factorial(threshold, 1);
  ti.t2 = falling_factorial(threshold, 2);
  ti.t3 = falling_factorial(threshold, 3);
  return ti;
}

Matrix covariance_middle_term(const SenderProfiles& profiles,
                              const SenderFrequencies& freqs, int threshold,
                              std::int64_t rounds, int j) {
  const TheoryIntermediates ti = theory_intermediates(profiles, freqs, threshold, j);
  const Vector& s = ti.binomial_variances;
  const Vector& f = freqs.freq;
  const Eigen::Index n = f.size();
  Matrix m(n, n);
  for (Eigen::Index i = 0; i < n; ++i)
    for (Eigen::Index l = 0; l < n; ++l)
      m(i, l) = f(i) * f(l) * (ti.eta * ti.t3 + ti.t2 * (s(i) + s(l)));
  m.diagonal() += (ti.eta * ti.t2 + threshold * s.array()).matrix().cwiseProduct(f);
  return static_cast<double>(rounds) * m;
}

Matrix lsda_profile_covariance(const SenderProfiles& profiles,
                               const SenderFrequencies& freqs, int threshold,
                               std::int64_t rounds, int j) {
  const Matrix rinv = autocorrelation_inverse(freqs, threshold);
  const Matrix mid = covariance_middle_term(profiles, freqs, threshold, rounds, j);
  const double rho = static_cast<double>(rounds);
  return rinv * (mid / (rho * rho)) * rinv;
}

namespace {

void check_positive_frequency(const SenderFrequencies& freqs, int i) {
  if (freqs.freq(i) <= 0.0) {
    std::ostringstream msg;
    msg << "user " << i << " has frequency " << freqs.freq(i)
        << "; the profile cannot be estimated at any number of rounds";
    throw std::invalid_argument(msg.str());
  }
}

double mse_common(double fi, double ui, double ubar, int threshold,
                  std::int64_t rounds) {
  const double t = threshold;
  return ((1.0 / fi - 1.0) * (1.0 - 1.0 / t) * ubar + ui / (fi * t)) /
         static_cast<double>(rounds);
}

}  // namespace

double mse_lsda_theory(const SenderProfiles& profiles,
                       const SenderFrequencies& freqs, int threshold,
                       std::int64_t rounds, int i) {
  check_positive_frequency(freqs, i);
  const Eigen::Index n = freqs.freq.size();
  double ubar = 0.0;
  for (Eigen::Index k = 0; k < n; ++k)
    ubar += freqs.freq(k) * uniformity(profiles.probs.col(k));
  return mse_common(freqs.freq(i), uniformity(profiles.probs.col(i)), ubar,
                    threshold, rounds);
}

double mse_sda2_theory(const SenderProfiles& profiles,
                       const SenderFrequencies& freqs, int threshold,
                       std::int64_t rounds, int i) {
  check_positive_frequency(freqs, i);
  const double fi = freqs.freq(i);
  const double ui = uniformity(profiles.probs.col(i));
  const double ub = uniformity(background_profile(profiles, freqs, i));
  return mse_common(fi, ui, fi * ui + (1.0 - fi) * ub, threshold, rounds);
}

TheoryReport theory_report(const SenderProfiles& profiles,
                           const SenderFrequencies& freqs, int threshold,
                           std::int64_t rounds) {
  const Eigen::Index n = freqs.freq.size();
  TheoryReport report;
  report.per_user_mse_lsda.resize(n);
  report.per_user_mse_sda2.resize(n);
  report.avg_uniformity_sda2_per_user.resize(n);
  report.uniformities.resize(n);
  report.background_uniformities.resize(n);

  for (Eigen::Index i = 0; i < n; ++i)
    report.uniformities(i) = uniformity(profiles.probs.col(i));
  report.avg_uniformity_lsda = freqs.freq.dot(report.uniformities);

  for (int i = 0; i < n; ++i) {
    const double fi = freqs.freq(i);
    report.background_uniformities(i) =
        uniformity(background_profile(profiles, freqs, i));
    report.avg_uniformity_sda2_per_user(i) =
        fi * report.uniformities(i) + (1.0 - fi) * report.background_uniformities(i);
    report.per_user_mse_lsda(i) =
        mse_lsda_theory(profiles, freqs, threshold, rounds, i);
    report.per_user_mse_sda2(i) =
        mse_sda2_theory(profiles, freqs, threshold, rounds, i);
  }
  return report;
}

}  // namespace mixprof
