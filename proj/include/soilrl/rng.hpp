#pragma once

#include <cstdint>
#include <random>

namespace soilrl {

/// SplitMix64 finalizer. Used to derive sub-seeds from (seed, stream_id) and
/// (seed, replication) pairs.
std::uint64_t mix64(std::uint64_t x) noexcept;

/// Derives an independent 64-bit seed from a base seed and an index.
std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t index) noexcept;

/// A reproducible source of uniform and normal variates.
///
/// The engine is std::mt19937_64 (its output sequence is fixed by the
/// standard), seeded with derive_seed(seed, stream_id). The conversion to
/// reals is done here rather than through <random> distributions so the
/// draw sequence is identical across standard-library implementations.
///
/// Each uniform(), open_uniform() or standard_normal() call consumes exactly
/// one 64-bit engine output.
class RandomStream {
 public:
  RandomStream() : RandomStream(0, 0) {}
  RandomStream(std::uint64_t seed, std::uint32_t stream_id);

  /// Uniform on [0, 1) with 53 bits of precision.
  double uniform();
  /// Uniform on the open interval (0, 1): (k + 0.5) / 2^53.
  double open_uniform();
  /// Standard normal by inverse CDF of one open_uniform() draw.
  double standard_normal();
  /// Raw 64-bit engine output.
  std::uint64_t next_u64();

  std::uint64_t seed() const noexcept { return seed_; }
  std::uint32_t stream_id() const noexcept { return stream_id_; }
  std::uint64_t counter() const noexcept { return counter_; }

  /// Test hook: when set, every uniform draw returns this value instead of
  /// advancing the engine (0.5 forces all normals to 0).
  void force_uniform(double u) noexcept {
    forced_ = true;
    forced_value_ = u;
  }

 private:
  std::uint64_t seed_;
  std::uint32_t stream_id_;
  std::uint64_t counter_ = 0;
  std::mt19937_64 engine_;
  bool forced_ = false;
  double forced_value_ = 0.5;
};

/// Inverse of the standard normal CDF (Wichura, AS241 PPND16); relative
/// accuracy about 1e-16 on (0, 1).
double normal_quantile(double p);

/// Standard normal CDF.
double normal_cdf(double x);

}  // namespace soilrl
