#pragma once

// Counter-based Philox4x32-10 generator. Every (seed, stream, sample) triple
// addresses its own independent sequence, so samples can be produced in any
// order or on any number of threads with identical results.

#include <array>
#include <cstdint>
#include <limits>

namespace levylab {

struct RngSpec {
  std::uint64_t seed = 0;
  std::uint32_t stream = 0;
};

/// One Philox4x32-10 block: 128-bit counter, 64-bit key.
inline std::array<std::uint32_t, 4> philox4x32_10(std::array<std::uint32_t, 4> ctr,
                                                  std::array<std::uint32_t, 2> key) {
  constexpr std::uint32_t M0 = 0xD2511F53u, M1 = 0xCD9E8D57u;
  constexpr std::uint32_t W0 = 0x9E3779B9u, W1 = 0xBB67AE85u;
  for (int round = 0; round < 10; ++round) {
    const std::uint64_t p0 = static_cast<std::uint64_t>(M0) * ctr[0];
    const std::uint64_t p1 = static_cast<std::uint64_t>(M1) * ctr[2];
    const auto hi0 = static_cast<std::uint32_t>(p0 >> 32), lo0 = static_cast<std::uint32_t>(p0);
    const auto hi1 = static_cast<std::uint32_t>(p1 >> 32), lo1 = static_cast<std::uint32_t>(p1);
    ctr = {hi1 ^ ctr[1] ^ key[0], lo1, hi0 ^ ctr[3] ^ key[1], lo0};
    key[0] += W0;
    key[1] += W1;
  }
  return ctr;
}

/// UniformRandomBitGenerator over the Philox stream of one sample.
class PhiloxEngine {
 public:
  using result_type = std::uint32_t;

  PhiloxEngine(const RngSpec& spec, std::uint64_t sample)
      : key_{static_cast<std::uint32_t>(spec.seed), static_cast<std::uint32_t>(spec.seed >> 32)},
        ctr_{0u, static_cast<std::uint32_t>(sample), static_cast<std::uint32_t>(sample >> 32), spec.stream} {}

  static constexpr result_type min() { return 0; }
  static constexpr result_type max() { return std::numeric_limits<result_type>::max(); }

  result_type operator()() {
    if (pos_ == 4) {
      block_ = philox4x32_10(ctr_, key_);
      ++ctr_[0];
      pos_ = 0;
    }
    return block_[pos_++];
  }

 private:
  std::array<std::uint32_t, 2> key_;
  std::array<std::uint32_t, 4> ctr_;
  std::array<std::uint32_t, 4> block_{};
  int pos_ = 4;
};

}  // namespace levylab
