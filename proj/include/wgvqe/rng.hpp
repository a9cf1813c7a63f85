#pragma once

#include <cstddef>
#include <cstdint>
#include <random>

namespace wgvqe {

/// Seedable, splittable pseudo-random generator.
///
/// Wraps std::mt19937_64. Conversions to doubles and bounded integers are
/// implemented here rather than through <random> distributions so that a
/// given seed produces the same stream regardless of the standard library.
/// A single Rng must not be shared between threads; use split() to derive
/// independent child streams.
class Rng {
 public:
  explicit Rng(std::uint64_t seed = 0);

  std::uint64_t seed() const noexcept { return seed_; }

  /// Child generator whose stream is a deterministic function of
  /// (seed, stream). Does not advance this generator.
  Rng split(std::uint64_t stream) const;

  std::uint64_t next_u64() { return engine_(); }
  /// Uniform on [0, 1).
  double uniform();
  /// Uniform on [lo, hi).
  double uniform(double lo, double hi);
  /// Uniform integer in [0, n). n must be positive.
  std::size_t below(std::size_t n);
  /// Standard normal deviate (Box-Muller).
  double normal();

 private:
  std::uint64_t seed_;
  std::mt19937_64 engine_;
  bool has_spare_ = false;
  double spare_ = 0.0;
};

/// SplitMix64 finaliser; used to derive child seeds.
std::uint64_t splitmix64(std::uint64_t x) noexcept;

}  // namespace wgvqe
