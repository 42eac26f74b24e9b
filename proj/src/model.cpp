#include "mixprof/model.hpp"

#include <cmath>
#include <sstream>
#include <stdexcept>

namespace mixprof {

IntMatrix binary_indicator(const IntMatrix& x) {
  return (x.array() >= 1).cast<int>();
}

IntVector background_vector(const IntMatrix& x, int i, int t) {
  if (i < 0 || i >= x.cols()) {
    std::ostringstream msg;
    msg << "user index " << i << " out of range [0, " << x.cols() << ")";
    throw std::out_of_range(msg.str());
  }
  return IntVector::Constant(x.rows(), t) - x.col(i);
}

namespace {

template <typename... Args>
std::string concat(Args&&... args) {
  std::ostringstream out;
  (out << ... << args);
  return out.str();
}

}  // namespace

std::vector<std::string> validate(const MixConfig& config,
                                  const SenderFrequencies& freqs,
                                  const SenderProfiles& profiles) {
  std::vector<std::string> violations;
  const int n = config.n_users;

  if (n < 2) violations.push_back(concat("config.n_users = ", n, ", must be >= 2"));
  if (config.threshold < 1)
    violations.push_back(concat("config.threshold = ", config.threshold, ", must be >= 1"));
  if (config.rounds < 1)
    violations.push_back(concat("config.rounds = ", config.rounds, ", must be >= 1"));

  if (freqs.freq.size() != n) {
    violations.push_back(concat("freqs has ", freqs.freq.size(), " entries, expected ", n));
  } else {
    double sum = 0.0;
    for (int i = 0; i < n; ++i) {
      const double f = freqs.freq(i);
      if (!(f >= 0.0))
        violations.push_back(concat("freqs[", i, "] = ", f, ", must be >= 0"));
      sum += f;
    }
    if (std::abs(sum - 1.0) > kStochasticTol)
      violations.push_back(concat("freqs sum to ", sum, ", must be 1"));
  }

  if (profiles.probs.rows() != n || profiles.probs.cols() != n) {
    violations.push_back(concat("profiles is ", profiles.probs.rows(), "x",
                                profiles.probs.cols(), ", expected ", n, "x", n));
  } else {
    for (int i = 0; i < n; ++i) {
      double sum = 0.0;
      for (int j = 0; j < n; ++j) {
        const double p = profiles.probs(j, i);
        if (!(p >= 0.0 && p <= 1.0))
          violations.push_back(
              concat("profiles(", j, ", ", i, ") = ", p, ", must be in [0, 1]"));
        sum += p;
      }
      if (std::abs(sum - 1.0) > kStochasticTol)
        violations.push_back(concat("profile column of sender ", i, " sums to ", sum,
                                    ", must be 1"));
    }
  }
  return violations;
}

std::vector<std::string> validate_observations(const MixConfig& config,
                                               const ObservationPair& obs) {
  std::vector<std::string> violations;
  if (obs.x.rows() != obs.y.rows() || obs.x.cols() != obs.y.cols()) {
    violations.push_back("x and y have different shapes");
    return violations;
  }
  if (obs.x.cols() != config.n_users)
    violations.push_back(concat("observations cover ", obs.x.cols(),
                                " users, config says ", config.n_users));
  if (obs.x.rows() != config.rounds)
    violations.push_back(concat("observations cover ", obs.x.rows(),
                                " rounds, config says ", config.rounds));
  for (Eigen::Index r = 0; r < obs.x.rows(); ++r) {
    long sx = 0, sy = 0;
    for (Eigen::Index c = 0; c < obs.x.cols(); ++c) {
      if (obs.x(r, c) < 0)
        violations.push_back(concat("x(", r, ", ", c, ") negative"));
      if (obs.y(r, c) < 0)
        violations.push_back(concat("y(", r, ", ", c, ") negative"));
      sx += obs.x(r, c);
      sy += obs.y(r, c);
    }
    if (sx != config.threshold)
      violations.push_back(concat("round ", r, ": x row sums to ", sx,
                                  ", expected t = ", config.threshold));
    if (sy != config.threshold)
      violations.push_back(concat("round ", r, ": y row sums to ", sy,
                                  ", expected t = ", config.threshold));
  }
  return violations;
}

EstimatedProfiles clamp_and_normalize(const EstimatedProfiles& raw) {
  EstimatedProfiles out = raw;
  const Eigen::Index n = out.est.cols();
  for (Eigen::Index i = 0; i < n; ++i) {
    if (out.undefined_users.count(static_cast<int>(i))) continue;
    Vector col = out.est.col(i).cwiseMax(0.0).cwiseMin(1.0);
    const double sum = col.sum();
    if (sum > 0.0) {
      out.est.col(i) = col / sum;
    } else {
      out.est.col(i).setConstant(1.0 / static_cast<double>(out.est.rows()));
    }
  }
  return out;
}

}  // namespace mixprof
