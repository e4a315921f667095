#pragma once

#include <array>
#include <cmath>
#include <cstdint>

namespace waverisk {

namespace detail {

// One block of Philox 4x32-10. Counter-based: the output is a pure function
// of (counter, key), so streams can be split and replayed at will.
inline std::array<std::uint32_t, 4> philox4x32(std::array<std::uint32_t, 4> ctr,
                                               std::array<std::uint32_t, 2> key) {
  for (int round = 0; round < 10; ++round) {
    const std::uint64_t p0 = 0xD2511F53ULL * ctr[0];
    const std::uint64_t p1 = 0xCD9E8D57ULL * ctr[2];
    const auto hi0 = static_cast<std::uint32_t>(p0 >> 32);
    const auto lo0 = static_cast<std::uint32_t>(p0);
    const auto hi1 = static_cast<std::uint32_t>(p1 >> 32);
    const auto lo1 = static_cast<std::uint32_t>(p1);
    ctr = {hi1 ^ ctr[1] ^ key[0], lo1, hi0 ^ ctr[3] ^ key[1], lo0};
    key[0] += 0x9E3779B9u;
    key[1] += 0xBB67AE85u;
  }
  return ctr;
}

}  // namespace detail

// Identifies one reproducible stream: same (seed, stream) always replays the
// same draws, distinct pairs behave independently.
struct SeedSpec {
  std::uint64_t seed = 0;
  std::uint64_t stream = 0;
};

// Splittable generator. The 64-bit seed is the Philox key, the 64-bit stream
// id occupies the counter's upper half, and the lower half counts blocks, so
// each stream has 2^64 blocks of four 32-bit words.
class Rng {
 public:
  explicit Rng(SeedSpec s) : Rng(s.seed, s.stream) {}
  Rng(std::uint64_t seed, std::uint64_t stream)
      : key_{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32)},
        stream_{static_cast<std::uint32_t>(stream), static_cast<std::uint32_t>(stream >> 32)} {}

  std::uint32_t next_u32() {
    if (pos_ == 4) {
      buf_ = detail::philox4x32({static_cast<std::uint32_t>(block_),
                                 static_cast<std::uint32_t>(block_ >> 32), stream_[0],
                                 stream_[1]},
                                key_);
      ++block_;
      pos_ = 0;
    }
    return buf_[pos_++];
  }

  std::uint64_t next_u64() {
    const std::uint64_t hi = next_u32();
    return (hi << 32) | next_u32();
  }

  // Uniform on the open interval (0, 1); never returns an endpoint, so logs
  // and tangents below are always finite.
  double uniform() {
    return (static_cast<double>(next_u64() >> 11) + 0.5) * 0x1.0p-53;
  }

  // Standard normal via Box-Muller; the second value of each pair is cached.
  double gaussian() {
    if (have_spare_) {
      have_spare_ = false;
      return spare_;
    }
    const double r = std::sqrt(-2.0 * std::log(uniform()));
    const double a = 2.0 * kPi * uniform();
    spare_ = r * std::sin(a);
    have_spare_ = true;
    return r * std::cos(a);
  }

  // Standard Cauchy.
  double cauchy() { return std::tan(kPi * (uniform() - 0.5)); }

  // Student t with nu degrees of freedom (Bailey's polar method). Rejection
  // is deterministic per stream, so replays stay bit-identical.
  double student_t(double nu) {
    for (;;) {
      const double u = 2.0 * uniform() - 1.0;
      const double v = 2.0 * uniform() - 1.0;
      const double w = u * u + v * v;
      if (w > 0.0 && w <= 1.0)
        return u * std::sqrt(nu * (std::pow(w, -2.0 / nu) - 1.0) / w);
    }
  }

 private:
  static constexpr double kPi = 3.14159265358979323846;

  std::array<std::uint32_t, 2> key_;
  std::array<std::uint32_t, 2> stream_;
  std::uint64_t block_ = 0;
  std::array<std::uint32_t, 4> buf_{};
  int pos_ = 4;
  double spare_ = 0.0;
  bool have_spare_ = false;
};

}  // namespace waverisk
