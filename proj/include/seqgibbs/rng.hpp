#pragma once

#include <array>
#include <cstdint>

namespace seqgibbs {

/// Deterministic, platform-independent random stream.
///
/// Each (seed, stream_id) pair identifies an independent xoshiro256++
/// sequence whose state is derived with splitmix64, so replicates and
/// chains can draw from uncorrelated streams without coordination. All
/// variate transforms are implemented here (rather than through
/// std::normal_distribution etc.) because the standard distributions are
/// implementation-defined and would break cross-platform reproducibility.
///
/// A stream is single-owner: never share one instance between threads.
class RngStream {
 public:
  explicit RngStream(std::uint64_t seed, std::uint64_t stream_id = 0);

  std::uint64_t next_u64();

  /// Uniform on the open interval (0, 1), 53-bit resolution.
  double uniform01();

  /// Unbiased integer in [0, n), n > 0.
  std::uint64_t uniform_below(std::uint64_t n);

  /// Standard normal via Box-Muller; the paired variate is cached.
  double normal();

  /// Gamma(shape, rate 1) via Marsaglia-Tsang; shape > 0.
  double gamma(double shape);

  /// Independent stream derived from this one's identity and a tag.
  /// Deterministic: the same (seed, stream_id, tag) always yields the
  /// same child stream.
  RngStream substream(std::uint64_t tag) const;

  std::uint64_t seed() const { return seed_; }
  std::uint64_t stream_id() const { return stream_id_; }

 private:
  std::array<std::uint64_t, 4> state_{};
  std::uint64_t seed_ = 0;
  std::uint64_t stream_id_ = 0;
  double cached_normal_ = 0.0;
  bool has_cached_normal_ = false;
};

}  // namespace seqgibbs
