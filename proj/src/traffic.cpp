#include "mixprof/traffic.hpp"

#include <algorithm>
#include <stdexcept>

namespace mixprof {

namespace {

// SplitMix64 step; used only to turn (seed, stream_id) into a well-mixed
// engine seed.
std::uint64_t splitmix64(std::uint64_t& state) {
  state += 0x9E3779B97F4A7C15ull;
  std::uint64_t z = state;
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
  return z ^ (z >> 31);
}

std::uint64_t mix_seed(std::uint64_t seed, std::uint64_t stream_id) {
  std::uint64_t state = seed;
  const std::uint64_t a = splitmix64(state);
  state ^= stream_id * 0xD1342543DE82EF95ull;
  const std::uint64_t b = splitmix64(state);
  return a ^ (b + 0x165667B19E3779F9ull);
}

}  // namespace

RngStream::RngStream(std::uint64_t seed, std::uint64_t stream_id)
    : seed_(seed), stream_id_(stream_id), engine_(mix_seed(seed, stream_id)) {}

CategoricalSampler::CategoricalSampler(const Vector& probs) {
  cum_.resize(static_cast<std::size_t>(probs.size()));
  double acc = 0.0;
  for (Eigen::Index k = 0; k < probs.size(); ++k) {
    acc += probs(k);
    cum_[static_cast<std::size_t>(k)] = acc;
  }
  if (!cum_.empty()) cum_.back() = 1.0;  // guard against rounding in the tail
}

int CategoricalSampler::draw(RngStream& rng) const {
  const double u = rng.next_unit();
  const auto it = std::upper_bound(cum_.begin(), cum_.end(), u);
  const auto idx = static_cast<std::size_t>(it - cum_.begin());
  return static_cast<int>(std::min(idx, cum_.size() - 1));
}

namespace {

struct RoundSampler {
  CategoricalSampler senders;
  std::vector<CategoricalSampler> recipients;  // one per sender column

  RoundSampler(const SenderFrequencies& freqs, const SenderProfiles& profiles)
      : senders(freqs.freq) {
    recipients.reserve(static_cast<std::size_t>(profiles.probs.cols()));
    for (Eigen::Index i = 0; i < profiles.probs.cols(); ++i)
      recipients.emplace_back(profiles.probs.col(i));
  }

  void sample_into(int threshold, RngStream& rng, IntMatrix& x, IntMatrix& y,
                   Eigen::Index row) const {
    for (int m = 0; m < threshold; ++m) {
      const int i = senders.draw(rng);
      const int j = recipients[static_cast<std::size_t>(i)].draw(rng);
      ++x(row, i);
      ++y(row, j);
    }
  }
};

}  // namespace

std::pair<IntVector, IntVector> sample_round(const SenderFrequencies& freqs,
                                             const SenderProfiles& profiles,
                                             int threshold, RngStream& rng) {
  const int n = static_cast<int>(freqs.freq.size());
  IntMatrix x = IntMatrix::Zero(1, n);
  IntMatrix y = IntMatrix::Zero(1, n);
  RoundSampler(freqs, profiles).sample_into(threshold, rng, x, y, 0);
  return {x.row(0).transpose(), y.row(0).transpose()};
}

ObservationPair simulate(const MixConfig& config, const SenderFrequencies& freqs,
                         const SenderProfiles& profiles) {
  RngStream rng(config.seed, 0);
  return simulate(config, freqs, profiles, rng);
}

ObservationPair simulate(const MixConfig& config, const SenderFrequencies& freqs,
                         const SenderProfiles& profiles, RngStream& rng) {
  if (config.rounds < 1) throw std::invalid_argument("rounds must be >= 1");
  ObservationPair obs;
  obs.x = IntMatrix::Zero(config.rounds, config.n_users);
  obs.y = IntMatrix::Zero(config.rounds, config.n_users);
  const RoundSampler sampler(freqs, profiles);
  for (Eigen::Index r = 0; r < config.rounds; ++r)
    sampler.sample_into(config.threshold, rng, obs.x, obs.y, r);
  return obs;
}

SenderProfiles ring_profiles(int n_users, int n_friends, bool include_self) {
  if (n_friends < 1 || n_friends > n_users)
    throw std::invalid_argument("n_friends must be in [1, n_users]");
  Matrix probs = Matrix::Zero(n_users, n_users);
  const double w = 1.0 / n_friends;
  const int first = include_self ? 0 : 1;
  for (int i = 0; i < n_users; ++i)
    for (int k = first; k < first + n_friends; ++k)
      probs((i + k) % n_users, i) = w;
  return SenderProfiles{std::move(probs)};
}

SenderFrequencies uniform_frequencies(int n_users) {
  return SenderFrequencies{Vector::Constant(n_users, 1.0 / n_users)};
}

SenderFrequencies geometric_frequencies(int n_users, double decay) {
  if (!(decay > 0.0 && decay <= 1.0))
    throw std::invalid_argument("decay must be in (0, 1]");
  Vector f(n_users);
  double w = 1.0;
  for (int i = 0; i < n_users; ++i) {
    f(i) = w;
    w *= decay;
  }
  f /= f.sum();
  return SenderFrequencies{std::move(f)};
}

}  // namespace mixprof
