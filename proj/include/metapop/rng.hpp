#pragma once

#include <cstdint>
#include <cmath>
#include <random>

namespace metapop {

// Identifies one reproducible random stream: a 64-bit master seed plus the
// replica index it is split for. Distinct (master, replica) pairs give
// independent streams; the same pair gives a bit-identical event sequence.
struct RngSeed {
  std::uint64_t master = 0;
  std::uint64_t replica = 0;
};

inline std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

// Counter-based stream splitting: the stream for (master, replica) is seeded
// with splitmix64(master ^ splitmix64(replica + 1)). The split depends only on
// the indices, never on thread scheduling, so results are stable under any
// --threads value.
class RngStream {
 public:
  explicit RngStream(std::uint64_t seed) : gen_(seed) {}

  static RngStream from(RngSeed s) {
    return RngStream(splitmix64(s.master ^ splitmix64(s.replica + 1)));
  }

  std::uint64_t next_u64() { return gen_(); }

  // uniform in [0, 1), 53-bit resolution
  double uniform() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

  double uniform(double a, double b) { return a + (b - a) * uniform(); }

  // exponential holding time; rate must be > 0
  double exponential(double rate) { return -std::log1p(-uniform()) / rate; }

  bool bernoulli(double p) { return uniform() < p; }

  // uniform integer in [0, n), rejection sampled (no modulo bias)
  std::uint64_t below(std::uint64_t n) {
    const std::uint64_t threshold = (0 - n) % n;
    for (;;) {
      std::uint64_t r = next_u64();
      if (r >= threshold) return r % n;
    }
  }

 private:
  std::mt19937_64 gen_;
};

}  // namespace metapop
