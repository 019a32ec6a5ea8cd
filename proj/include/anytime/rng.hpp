#pragma once

#include <array>
#include <cstdint>
#include <limits>

#include "anytime/core.hpp"

namespace anytime {

/// Philox4x32-10 counter-based generator (Salmon et al., SC'11).
///
/// A stream is identified by a 64-bit key; output block i is the keyed
/// bijection of counter i, so streams are reproducible, cheap to split and
/// independent of consumption order elsewhere. Satisfies
/// UniformRandomBitGenerator.
class Philox {
 public:
  using result_type = std::uint32_t;

  explicit Philox(std::uint64_t key = 0) : key_(key) {}

  /// Independent child stream; the same (parent key, stream id) pair always
  /// yields the same child.
  Philox split(std::uint64_t stream_id) const;

  /// Stream keyed from a seed and a named purpose ("noise", "problem", ...).
  static Philox for_purpose(std::uint64_t seed, const char* purpose);

  static constexpr result_type min() { return 0; }
  static constexpr result_type max() { return std::numeric_limits<result_type>::max(); }
  result_type operator()();

  /// Uniform in [0, 1) with 53 random bits.
  double uniform();
  /// Standard normal via the Marsaglia polar method (portable, unlike
  /// std::normal_distribution).
  double normal();
  Vector normal_vector(Eigen::Index dim);
  /// Uniform on the unit sphere in R^dim.
  Vector unit_sphere(Eigen::Index dim);

  std::uint64_t key() const { return key_; }
  std::uint64_t counter() const { return counter_; }

 private:
  void refill();

  std::uint64_t key_;
  std::uint64_t counter_ = 0;
  std::array<std::uint32_t, 4> block_{};
  int used_ = 4;
  bool has_spare_ = false;
  double spare_ = 0.0;
};

/// SplitMix64 finalizer; used for key derivation.
std::uint64_t mix64(std::uint64_t x);

}  // namespace anytime
