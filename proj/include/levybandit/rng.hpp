#pragma once

#include <array>
#include <cmath>
#include <cstdint>

namespace levybandit {

// Philox 4x32-10 counter-based generator (Salmon et al., SC'11). A stream is
// keyed by (seed, stream index); every draw is a pure function of the key and
// a counter, so replications can run in any order, serially or in parallel,
// and produce bit-identical numbers.
class CounterRng {
 public:
  CounterRng(std::uint64_t seed, std::uint64_t stream)
      : key_{static_cast<std::uint32_t>(seed),
             static_cast<std::uint32_t>(seed >> 32)},
        stream_lo_(static_cast<std::uint32_t>(stream)),
        stream_hi_(static_cast<std::uint32_t>(stream >> 32)) {}

  std::uint64_t next_u64() {
    if (avail_ == 0) refill();
    --avail_;
    const std::uint64_t lo = block_[2 * avail_];
    const std::uint64_t hi = block_[2 * avail_ + 1];
    return lo | (hi << 32);
  }

  // Uniform in the open interval (0, 1); never 0, safe under log().
  double next_uniform() {
    return (static_cast<double>(next_u64() >> 11) + 0.5) * 0x1.0p-53;
  }

  // Standard normal via Box-Muller; the paired draw is cached.
  double next_normal() {
    if (has_spare_) {
      has_spare_ = false;
      return spare_;
    }
    const double u1 = next_uniform();
    const double u2 = next_uniform();
    const double radius = std::sqrt(-2.0 * std::log(u1));
    const double angle = 6.283185307179586476925286766559 * u2;
    spare_ = radius * std::sin(angle);
    has_spare_ = true;
    return radius * std::cos(angle);
  }

  // Poisson count by inversion (sequential search); meant for small means,
  // which is what per-step jump intensities are.
  int next_poisson(double mean) {
    const double u = next_uniform();
    double p = std::exp(-mean);
    double cumulative = p;
    int k = 0;
    while (u > cumulative && k < 1024) {
      ++k;
      p *= mean / k;
      cumulative += p;
    }
    return k;
  }

 private:
  static constexpr std::uint32_t kWeyl0 = 0x9E3779B9u;
  static constexpr std::uint32_t kWeyl1 = 0xBB67AE85u;
  static constexpr std::uint32_t kMult0 = 0xD2511F53u;
  static constexpr std::uint32_t kMult1 = 0xCD9E8D57u;

  static void mul_hilo(std::uint32_t a, std::uint32_t b, std::uint32_t& hi,
                       std::uint32_t& lo) {
    const std::uint64_t prod = static_cast<std::uint64_t>(a) * b;
    hi = static_cast<std::uint32_t>(prod >> 32);
    lo = static_cast<std::uint32_t>(prod);
  }

  void refill() {
    std::uint32_t c0 = static_cast<std::uint32_t>(block_index_);
    std::uint32_t c1 = static_cast<std::uint32_t>(block_index_ >> 32);
    std::uint32_t c2 = stream_lo_;
    std::uint32_t c3 = stream_hi_;
    std::uint32_t k0 = key_[0];
    std::uint32_t k1 = key_[1];
    for (int round = 0; round < 10; ++round) {
      std::uint32_t hi0, lo0, hi1, lo1;
      mul_hilo(kMult0, c0, hi0, lo0);
      mul_hilo(kMult1, c2, hi1, lo1);
      const std::uint32_t n0 = hi1 ^ c1 ^ k0;
      const std::uint32_t n1 = lo1;
      const std::uint32_t n2 = hi0 ^ c3 ^ k1;
      const std::uint32_t n3 = lo0;
      c0 = n0; c1 = n1; c2 = n2; c3 = n3;
      k0 += kWeyl0;
      k1 += kWeyl1;
    }
    block_ = {c0, c1, c2, c3};
    ++block_index_;
    avail_ = 2;
  }

  std::array<std::uint32_t, 2> key_;
  std::uint32_t stream_lo_, stream_hi_;
  std::uint64_t block_index_ = 0;
  std::array<std::uint32_t, 4> block_{};
  int avail_ = 0;
  double spare_ = 0.0;
  bool has_spare_ = false;
};

}  // namespace levybandit
