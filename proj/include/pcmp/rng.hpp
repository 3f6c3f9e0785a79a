#pragma once

#include <cstdint>
#include <random>
#include <stdexcept>

namespace pcmp {

constexpr std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ull;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ull;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebull;
  return x ^ (x >> 31);
}

// Deterministic random source. Everything a run consumes flows through one
// of these, so a (seed, stream) pair pins the whole execution.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : gen_(splitmix64(seed)) {}

  // Seed for an independent child stream (one per Monte Carlo trial), so
  // results do not depend on trial execution order.
  static std::uint64_t derive(std::uint64_t seed, std::uint64_t stream) {
    return splitmix64(seed ^ splitmix64(stream + 0x193a6754ull));
  }

  std::uint64_t next_u64() { return gen_(); }

  bool coin() { return (next_u64() >> 63) != 0; }

  // Uniform in [0, bound); rejection keeps the draw unbiased and independent
  // of any library distribution internals.
  std::uint64_t below(std::uint64_t bound) {
    if (bound == 0) throw std::invalid_argument("Rng::below: bound must be positive");
    const std::uint64_t threshold = (0 - bound) % bound;  // 2^64 mod bound
    std::uint64_t r;
    do {
      r = next_u64();
    } while (r < threshold);
    return r % bound;
  }

 private:
  std::mt19937_64 gen_;
};

}  // namespace pcmp
