// Counter-based random number generation (Philox4x64-10).
//
// Every consumer owns an Rng keyed by (seed, stream). Streams never
// overlap, so per-trial and per-chain substreams give results that do
// not depend on scheduling or thread count.

#pragma once

#include <array>
#include <cstdint>
#include <cmath>
#include <stdexcept>

namespace w1h {

namespace detail {

struct Philox4x64State {
  std::array<std::uint64_t, 2> key;
  std::array<std::uint64_t, 4> ctr;
};

inline void philox_mulhilo(std::uint64_t a, std::uint64_t b,
                           std::uint64_t& hi, std::uint64_t& lo) {
  unsigned __int128 p = static_cast<unsigned __int128>(a) * b;
  hi = static_cast<std::uint64_t>(p >> 64);
  lo = static_cast<std::uint64_t>(p);
}

// One 10-round block. Constants as in Salmon et al. (SC'11); output
// matches numpy.random.Philox word-for-word for the same key/counter.
inline std::array<std::uint64_t, 4> philox4x64_10(
    std::array<std::uint64_t, 4> x, std::array<std::uint64_t, 2> k) {
  constexpr std::uint64_t M0 = 0xD2E7470EE14C6C93ULL;
  constexpr std::uint64_t M1 = 0xCA5A826395121157ULL;
  constexpr std::uint64_t W0 = 0x9E3779B97F4A7C15ULL;
  constexpr std::uint64_t W1 = 0xBB67AE8584CAA73BULL;
  for (int round = 0; round < 10; ++round) {
    std::uint64_t hi0, lo0, hi1, lo1;
    philox_mulhilo(M0, x[0], hi0, lo0);
    philox_mulhilo(M1, x[2], hi1, lo1);
    x = {hi1 ^ x[1] ^ k[0], lo1, hi0 ^ x[3] ^ k[1], lo0};
    k[0] += W0;
    k[1] += W1;
  }
  return x;
}

}  // namespace detail

class Rng {
 public:
  explicit Rng(std::uint64_t seed, std::uint64_t stream = 0)
      : key_{seed, stream}, ctr_{0, 0, 0, 0}, pos_(4) {}

  // A fresh generator on an unrelated stream; used to hand substreams
  // to trials/chains: Rng(seed, k) for k = 0,1,2,...
  Rng substream(std::uint64_t k) const { return Rng(key_[0], key_[1] ^ (0x9E3779B97F4A7C15ULL + k)); }

  std::uint64_t next_u64() {
    if (pos_ == 4) {
      ++ctr_[0];
      if (ctr_[0] == 0) ++ctr_[1];
      buf_ = detail::philox4x64_10(ctr_, key_);
      pos_ = 0;
    }
    return buf_[pos_++];
  }

  // [0,1) with 53-bit resolution
  double uniform() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

  double uniform(double a, double b) { return a + (b - a) * uniform(); }

  // unbiased integer in [0,n)
  std::uint64_t uniform_below(std::uint64_t n) {
    if (n == 0) throw std::invalid_argument("uniform_below: n must be positive");
    std::uint64_t mask = ~std::uint64_t{0};
    if (n & (n - 1)) {
      int bits = 64;
      while (bits > 1 && (n - 1) >> (bits - 1) == 0) --bits;
      mask = (bits == 64) ? mask : ((std::uint64_t{1} << bits) - 1);
    } else {
      return next_u64() & (n - 1);
    }
    for (;;) {
      std::uint64_t v = next_u64() & mask;
      if (v < n) return v;
    }
  }

  double exponential() {
    double u;
    do { u = uniform(); } while (u <= 0.0);
    return -std::log1p(-u);
  }

  // Knuth's product method; splits large means so the inner loop stays
  // short. Exact for any lambda >= 0.
  long poisson(double lambda) {
    if (lambda < 0) throw std::invalid_argument("poisson: negative mean");
    long total = 0;
    while (lambda > 30.0) {
      total += poisson_small(30.0);
      lambda -= 30.0;
    }
    return total + poisson_small(lambda);
  }

 private:
  long poisson_small(double lambda) {
    if (lambda == 0.0) return 0;
    const double limit = std::exp(-lambda);
    long k = 0;
    double prod = uniform();
    while (prod > limit) {
      ++k;
      prod *= uniform();
    }
    return k;
  }

  std::array<std::uint64_t, 2> key_;
  std::array<std::uint64_t, 4> ctr_;
  std::array<std::uint64_t, 4> buf_{};
  int pos_;
};

}  // namespace w1h
