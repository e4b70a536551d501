#pragma once

#include <cstdint>
#include <random>
#include <string_view>

namespace adclin {

/// Name recorded in experiment metadata so runs can be reproduced elsewhere.
inline constexpr std::string_view kGeneratorName = "mt19937_64 seeded by splitmix64(master, stream, index)";

/// One step of the splitmix64 sequence; advances `state`.
std::uint64_t splitmix64(std::uint64_t& state) noexcept;

/// Derives an independent 64-bit seed for substream `stream`, element `index`.
/// Seeds for element i do not depend on how many elements are drawn.
std::uint64_t derive_seed(std::uint64_t master, std::uint64_t stream, std::uint64_t index) noexcept;

/// Seeded generator with platform-independent derived draws.
///
/// std::uniform_*_distribution is implementation-defined, so all draws are
/// built directly from the raw 64-bit engine output.
class Rng {
 public:
  explicit Rng(std::uint64_t seed);

  std::uint64_t next() { return engine_(); }

  /// Uniform double in [0, 1) from the top 53 bits.
  double uniform01() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

  /// Uniform double in [lo, hi).
  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform01(); }

  /// Uniform integer in [0, 4) from the top two bits.
  unsigned quarter() { return static_cast<unsigned>(engine_() >> 62); }

 private:
  std::mt19937_64 engine_;
};

}  // namespace adclin
