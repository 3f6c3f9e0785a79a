#pragma once

#include <cmath>
#include <cstddef>
#include <numeric>
#include <vector>

#include "pcmp/bits.hpp"
#include "pcmp/errors.hpp"
#include "pcmp/rng.hpp"

namespace pcmp {

// Toy prepare-and-measure key exchange. It exists to make "pre-shared key
// bits" concrete, not to model photons: states are (bit, basis) pairs, a
// mismatched measurement basis yields a fair coin.
struct Bb84Config {
  enum class Eve { none, intercept_resend };
  Eve eve = Eve::none;
  double sample_fraction = 0.5;   // sifted bits sacrificed to estimate QBER
  double qber_threshold = 0.11;   // abort above this
};

struct Bb84Result {
  Bits key_a;              // sender-side key after sifting and sampling
  Bits key_b;              // receiver-side key; equals key_a when qber == 0
  double qber = 0.0;
  std::size_t sifted_len = 0;
  std::size_t sampled_len = 0;
};

inline Bb84Result bb84_exchange(std::size_t n_pulses, Rng& rng, const Bb84Config& cfg = {}) {
  if (n_pulses < 16) throw BadRange("bb84_exchange: need at least 16 pulses");

  Bits sifted_a, sifted_b;
  sifted_a.reserve(n_pulses / 2 + 8);
  sifted_b.reserve(n_pulses / 2 + 8);
  for (std::size_t i = 0; i < n_pulses; ++i) {
    const std::uint8_t bit = rng.coin();
    const std::uint8_t basis_a = rng.coin();

    std::uint8_t wire_bit = bit;
    std::uint8_t wire_basis = basis_a;
    if (cfg.eve == Bb84Config::Eve::intercept_resend) {
      const std::uint8_t basis_e = rng.coin();
      const std::uint8_t measured = (basis_e == wire_basis) ? wire_bit : rng.coin();
      wire_bit = measured;   // resent in Eve's basis
      wire_basis = basis_e;
    }

    const std::uint8_t basis_b = rng.coin();
    const std::uint8_t received = (basis_b == wire_basis) ? wire_bit : rng.coin();

    // Sifting keeps pulses where the endpoints' bases match.
    if (basis_b == basis_a) {
      sifted_a.push_back(bit);
      sifted_b.push_back(received);
    }
  }

  Bb84Result result;
  result.sifted_len = sifted_a.size();

  // Sacrifice a random subset of the sifted bits to estimate the error rate.
  const std::size_t n_sample = static_cast<std::size_t>(
      std::llround(cfg.sample_fraction * static_cast<double>(result.sifted_len)));
  std::vector<std::size_t> order(result.sifted_len);
  std::iota(order.begin(), order.end(), std::size_t{0});
  for (std::size_t i = 0; i < n_sample; ++i) {
    const std::size_t j = i + rng.below(order.size() - i);
    std::swap(order[i], order[j]);
  }

  std::size_t mismatches = 0;
  for (std::size_t i = 0; i < n_sample; ++i)
    if (sifted_a[order[i]] != sifted_b[order[i]]) ++mismatches;
  result.sampled_len = n_sample;
  result.qber = n_sample == 0 ? 0.0
                              : static_cast<double>(mismatches) / static_cast<double>(n_sample);
  if (result.qber > cfg.qber_threshold) throw Bb84Aborted(result.qber);

  std::vector<bool> sampled(result.sifted_len, false);
  for (std::size_t i = 0; i < n_sample; ++i) sampled[order[i]] = true;
  for (std::size_t i = 0; i < result.sifted_len; ++i) {
    if (sampled[i]) continue;
    result.key_a.push_back(sifted_a[i]);
    result.key_b.push_back(sifted_b[i]);
  }
  return result;
}

}  // namespace pcmp
