#pragma once

#include <cstdint>
#include <random>
#include <utility>
#include <vector>

#include "mixprof/model.hpp"

namespace mixprof {

/// Reproducible random stream. The same (seed, stream_id) pair always yields
/// the same draw sequence, independent of how many other streams exist, so
/// experiment repetitions can run on any number of workers.
///
/// Sampling uses 53-bit uniforms built directly from mt19937_64 output
/// (whose sequence is fixed by the standard), not std::distributions, so
/// generated traffic is identical across platforms.
class RngStream {
 public:
  explicit RngStream(std::uint64_t seed, std::uint64_t stream_id = 0);

  std::uint64_t next_u64() { return engine_(); }

  /// Uniform double in [0, 1) with 53 random bits.
  double next_unit() {
    return static_cast<double>(engine_() >> 11) * 0x1.0p-53;
  }

  std::uint64_t seed() const { return seed_; }
  std::uint64_t stream_id() const { return stream_id_; }

 private:
  std::uint64_t seed_;
  std::uint64_t stream_id_;
  std::mt19937_64 engine_;
};

/// Inverse-CDF sampler over a fixed discrete distribution.
class CategoricalSampler {
 public:
  explicit CategoricalSampler(const Vector& probs);
  int draw(RngStream& rng) const;

 private:
  std::vector<double> cum_;
};

/// Draws one mix round: the t senders follow a multinomial with the given
/// frequencies, and each message's recipient is drawn independently from the
/// sender's profile column. Both returned rows sum to t.
std::pair<IntVector, IntVector> sample_round(const SenderFrequencies& freqs,
                                             const SenderProfiles& profiles,
                                             int threshold, RngStream& rng);

/// Simulates config.rounds independent rounds. Deterministic: the stream
/// (config.seed, stream 0) fixes the whole observation bit-for-bit.
ObservationPair simulate(const MixConfig& config, const SenderFrequencies& freqs,
                         const SenderProfiles& profiles);

/// As above but drawing from a caller-provided stream (one per repetition).
ObservationPair simulate(const MixConfig& config, const SenderFrequencies& freqs,
                         const SenderProfiles& profiles, RngStream& rng);

/// Ring ground truth: sender i sends uniformly to the n_friends users
/// (i + k) mod n_users for k = 0..n_friends-1 (0-based; the k=0 "friend" is
/// the sender herself). With include_self = false the window shifts to
/// k = 1..n_friends. Throws std::invalid_argument when n_friends is out of
/// [1, n_users].
SenderProfiles ring_profiles(int n_users, int n_friends, bool include_self = true);

SenderFrequencies uniform_frequencies(int n_users);

/// One-parameter skew family: f_i proportional to decay^i, normalized.
/// decay = 1 gives uniform frequencies. Throws on decay outside (0, 1].
SenderFrequencies geometric_frequencies(int n_users, double decay);

}  // namespace mixprof
