#pragma once

#include <array>
#include <cstdint>
#include <limits>
#include <string>

namespace chaoslab {

/// Philox4x32-10 counter-based generator.
///
/// A stream is identified by (seed, tag, index): the seed forms the 64-bit
/// key, and the upper three counter words hold the tag and the 64-bit index.
/// The lowest counter word walks through the stream, giving 2^34 outputs per
/// stream. Draw d of an experiment uses stream (seed, tag, d), so results do
/// not depend on how draws are spread over worker lanes.
class Philox4x32 {
 public:
  using result_type = std::uint32_t;
  using Block = std::array<std::uint32_t, 4>;
  using Key = std::array<std::uint32_t, 2>;

  Philox4x32(std::uint64_t seed, std::uint32_t tag, std::uint64_t index);

  static constexpr result_type min() { return 0; }
  static constexpr result_type max() { return std::numeric_limits<result_type>::max(); }

  result_type operator()();

  /// Uniform double in [0, 1) with 53 random bits.
  double uniform();

  /// The raw bijection: ten rounds on `counter` under `key`.
  static Block encrypt(Block counter, Key key);

 private:
  Key key_;
  Block counter_;
  Block buffer_{};
  unsigned next_ = 4;
};

/// Stable 32-bit tag for a named stream family (FNV-1a).
std::uint32_t stream_tag(const std::string& name);

/// Human-readable stream identifier for logs.
std::string describe_stream(std::uint64_t seed, std::uint32_t tag, std::uint64_t first,
                            std::uint64_t count);

}  // namespace chaoslab
