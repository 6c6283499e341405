#pragma once

#include <cstdint>
#include <limits>

namespace whl {

/// SplitMix64 output mixer.
constexpr std::uint64_t mix64(std::uint64_t z) noexcept {
  z += 0x9E3779B97F4A7C15ULL;
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

/// Purpose tags so that different draws for the same (replication, index)
/// never share a stream.
enum class StreamDomain : std::uint64_t {
  Observation = 1,
  Weight = 2,
  Outlier = 3,
  Raw = 4,
};

/// Counter-based generator: the k-th output of a stream is a pure function of
/// (key, k), so a stream can be recreated anywhere from its coordinates.
/// Satisfies UniformRandomBitGenerator.
class StreamEngine {
 public:
  using result_type = std::uint64_t;

  explicit StreamEngine(std::uint64_t key) noexcept : key_(key) {}

  /// Stream for one (seed, replication, index, domain) coordinate.
  static StreamEngine at(std::uint64_t seed, std::uint64_t replication, std::uint64_t index,
                         StreamDomain domain) noexcept {
    std::uint64_t k = mix64(seed);
    k = mix64(k ^ static_cast<std::uint64_t>(domain));
    k = mix64(k ^ replication);
    k = mix64(k ^ index);
    return StreamEngine(k);
  }

  static constexpr result_type min() noexcept { return 0; }
  static constexpr result_type max() noexcept { return std::numeric_limits<result_type>::max(); }

  result_type operator()() noexcept {
    counter_ += 1;
    return mix64(key_ + counter_ * 0xD1B54A32D192ED03ULL);
  }

  /// Uniform double in [0, 1) from the top 53 bits.
  double uniform01() noexcept { return static_cast<double>((*this)() >> 11) * 0x1.0p-53; }

 private:
  std::uint64_t key_;
  std::uint64_t counter_ = 0;
};

inline constexpr const char* kGeneratorId = "splitmix64-counter-stream";
inline constexpr int kGeneratorVersion = 1;

}  // namespace whl
