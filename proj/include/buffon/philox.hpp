#pragma once

// Philox4x32-10 counter-based generator (Salmon et al., SC'11). A stream is
// identified by a 64-bit key and a 64-bit stream index; draws never depend on
// which thread produces them.

#include <array>
#include <cstdint>

namespace buffon {

using Philox4x32Counter = std::array<std::uint32_t, 4>;
using Philox4x32Key = std::array<std::uint32_t, 2>;

inline Philox4x32Counter philox4x32_10(Philox4x32Counter ctr, Philox4x32Key key) {
  constexpr std::uint32_t mul0 = 0xD2511F53u;
  constexpr std::uint32_t mul1 = 0xCD9E8D57u;
  constexpr std::uint32_t weyl0 = 0x9E3779B9u;
  constexpr std::uint32_t weyl1 = 0xBB67AE85u;

  for (int round = 0; round < 10; ++round) {
    if (round > 0) {
      key[0] += weyl0;
      key[1] += weyl1;
    }
    const std::uint64_t p0 = static_cast<std::uint64_t>(mul0) * ctr[0];
    const std::uint64_t p1 = static_cast<std::uint64_t>(mul1) * ctr[2];
    const auto hi0 = static_cast<std::uint32_t>(p0 >> 32);
    const auto lo0 = static_cast<std::uint32_t>(p0);
    const auto hi1 = static_cast<std::uint32_t>(p1 >> 32);
    const auto lo1 = static_cast<std::uint32_t>(p1);
    ctr = {hi1 ^ ctr[1] ^ key[0], lo1, hi0 ^ ctr[3] ^ key[1], lo0};
  }
  return ctr;
}

// Uniform doubles in [0, 1) with 53 random bits, two per Philox block.
class PhiloxStream {
public:
  PhiloxStream(std::uint64_t seed, std::uint64_t stream)
      : key_{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32)},
        stream_(stream) {}

  double next_uniform() {
    if (cursor_ == 2)
      refill();
    const std::uint64_t hi = buffer_[2 * cursor_];
    const std::uint64_t lo = buffer_[2 * cursor_ + 1];
    ++cursor_;
    return static_cast<double>(((hi << 32) | lo) >> 11) * 0x1.0p-53;
  }

private:
  void refill() {
    buffer_ = philox4x32_10({static_cast<std::uint32_t>(stream_),
                             static_cast<std::uint32_t>(stream_ >> 32), block_, 0u},
                            key_);
    ++block_;
    cursor_ = 0;
  }

  Philox4x32Key key_;
  std::uint64_t stream_;
  std::uint32_t block_ = 0;
  Philox4x32Counter buffer_{};
  int cursor_ = 2;
};

} // namespace buffon
