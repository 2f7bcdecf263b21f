#pragma once

#include <array>
#include <cmath>
#include <cstdint>

namespace sntf::rng {

// Counter-based PRNG: Philox4x32-10 (Salmon et al., Random123).
// Every random quantity in this library is drawn from a stream addressed by
// (seed, purpose, element). Streams are independent by construction, so draws
// for one purpose never perturb another and per-element generation is
// order-free (parallel and serial execution produce identical results on any
// platform with IEEE-754 doubles).

struct Philox4x32 {
  static constexpr std::uint32_t kMul0 = 0xD2511F53u;
  static constexpr std::uint32_t kMul1 = 0xCD9E8D57u;
  static constexpr std::uint32_t kWeyl0 = 0x9E3779B9u;
  static constexpr std::uint32_t kWeyl1 = 0xBB67AE85u;

  static std::array<std::uint32_t, 4> block(std::array<std::uint32_t, 4> ctr,
                                            std::uint32_t k0, std::uint32_t k1) {
    for (int round = 0; round < 10; ++round) {
      const std::uint64_t p0 = std::uint64_t(kMul0) * ctr[0];
      const std::uint64_t p1 = std::uint64_t(kMul1) * ctr[2];
      const std::uint32_t hi0 = std::uint32_t(p0 >> 32), lo0 = std::uint32_t(p0);
      const std::uint32_t hi1 = std::uint32_t(p1 >> 32), lo1 = std::uint32_t(p1);
      ctr = {hi1 ^ ctr[1] ^ k0, lo1, hi0 ^ ctr[3] ^ k1, lo0};
      k0 += kWeyl0;
      k1 += kWeyl1;
    }
    return ctr;
  }
};

// SplitMix64 finalizer, used only to spread (seed, purpose, element) into a
// well-mixed 64-bit Philox key.
inline std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9E3779B97F4A7C15ull;
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ull;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBull;
  return x ^ (x >> 31);
}

// Purpose tags for the library's named sub-streams.
enum class Stream : std::uint64_t {
  Mask = 1,
  Noise = 2,
  InitA = 3,
  InitB = 4,
  InitM = 5,
  InitN = 6,
  InitZ = 7,
  InitT3 = 8,
  InitT4 = 9,
  InitT5 = 10,
  GenA = 11,
  GenB = 12,
  Generic = 13,
};

/// Generator for one (seed, purpose, element) stream. Cheap to construct;
/// yields an unbounded sequence of draws for that element.
class EntryRng {
public:
  EntryRng(std::uint64_t seed, Stream purpose, std::uint64_t element) {
    const std::uint64_t key =
        splitmix64(splitmix64(seed + (static_cast<std::uint64_t>(purpose) << 32)) ^ element);
    k0_ = std::uint32_t(key);
    k1_ = std::uint32_t(key >> 32);
  }

  std::uint32_t next_u32() {
    if (pos_ == 4) {
      buf_ = Philox4x32::block({std::uint32_t(counter_), std::uint32_t(counter_ >> 32), 0, 0},
                               k0_, k1_);
      ++counter_;
      pos_ = 0;
    }
    return buf_[pos_++];
  }

  std::uint64_t next_u64() {
    const std::uint64_t lo = next_u32();
    const std::uint64_t hi = next_u32();
    return lo | (hi << 32);
  }

  /// Uniform double in [0, 1), 53 random bits.
  double uniform() { return double(next_u64() >> 11) * 0x1.0p-53; }

  /// Standard normal via Box-Muller (first variate of the pair).
  double normal() {
    const double u1 = 1.0 - uniform();  // (0, 1]
    const double u2 = uniform();
    return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * M_PI * u2);
  }

  /// Laplace(0, tau) via inverse CDF.
  double laplace(double tau) {
    const double v = uniform() - 0.5;
    double t = 1.0 - 2.0 * std::abs(v);
    if (t < 0x1.0p-53) t = 0x1.0p-53;
    const double mag = -tau * std::log(t);
    return v < 0 ? -mag : mag;
  }

  /// Poisson(mean) by multiplication of uniforms; means above the split
  /// threshold are decomposed as sums of independent halves, which keeps the
  /// product above double underflow for any realistic mean.
  long long poisson(double mean) {
    if (mean <= 0.0) return 0;
    constexpr double kSplit = 60.0;
    if (mean > kSplit) {
      const double half = 0.5 * mean;
      return poisson(half) + poisson(mean - half);
    }
    const double limit = std::exp(-mean);
    long long n = 0;
    double prod = uniform();
    while (prod > limit) {
      ++n;
      prod *= uniform();
    }
    return n;
  }

private:
  std::uint32_t k0_ = 0, k1_ = 0;
  std::uint64_t counter_ = 0;
  std::array<std::uint32_t, 4> buf_{};
  int pos_ = 4;
};

}  // namespace sntf::rng
