#include "chaoslab/rng.hpp"

#include <cstdio>

namespace chaoslab {

namespace {

constexpr std::uint32_t kM0 = 0xD2511F53u;
constexpr std::uint32_t kM1 = 0xCD9E8D57u;
constexpr std::uint32_t kW0 = 0x9E3779B9u;
constexpr std::uint32_t kW1 = 0xBB67AE85u;

inline void mulhilo(std::uint32_t a, std::uint32_t b, std::uint32_t& hi, std::uint32_t& lo) {
  const std::uint64_t p = static_cast<std::uint64_t>(a) * b;
  hi = static_cast<std::uint32_t>(p >> 32);
  lo = static_cast<std::uint32_t>(p);
}

}  // namespace

Philox4x32::Block Philox4x32::encrypt(Block c, Key k) {
  for (int round = 0; round < 10; ++round) {
    std::uint32_t hi0, lo0, hi1, lo1;
    mulhilo(kM0, c[0], hi0, lo0);
    mulhilo(kM1, c[2], hi1, lo1);
    c = {hi1 ^ c[1] ^ k[0], lo1, hi0 ^ c[3] ^ k[1], lo0};
    k[0] += kW0;
    k[1] += kW1;
  }
  return c;
}

Philox4x32::Philox4x32(std::uint64_t seed, std::uint32_t tag, std::uint64_t index)
    : key_{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32)},
      counter_{0u, tag, static_cast<std::uint32_t>(index),
               static_cast<std::uint32_t>(index >> 32)} {}

Philox4x32::result_type Philox4x32::operator()() {
  if (next_ == 4) {
    buffer_ = encrypt(counter_, key_);
    ++counter_[0];
    next_ = 0;
  }
  return buffer_[next_++];
}

double Philox4x32::uniform() {
  const std::uint64_t hi = (*this)() >> 5;  // 27 bits
  const std::uint64_t lo = (*this)() >> 6;  // 26 bits
  return static_cast<double>((hi << 26) | lo) * 0x1.0p-53;
}

std::uint32_t stream_tag(const std::string& name) {
  std::uint32_t h = 2166136261u;
  for (unsigned char ch : name) {
    h ^= ch;
    h *= 16777619u;
  }
  return h;
}

std::string describe_stream(std::uint64_t seed, std::uint32_t tag, std::uint64_t first,
                            std::uint64_t count) {
  char buf[160];
  std::snprintf(buf, sizeof buf, "philox4x32-10 seed=%llu tag=0x%08x draws=[%llu,%llu)",
                static_cast<unsigned long long>(seed), tag,
                static_cast<unsigned long long>(first),
                static_cast<unsigned long long>(first + count));
  return buf;
}

}  // namespace chaoslab
