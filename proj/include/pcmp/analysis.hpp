#pragma once

#include <bit>
#include <cmath>
#include <cstdint>
#include <iomanip>
#include <optional>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include "pcmp/equality.hpp"
#include "pcmp/millionaire.hpp"

namespace pcmp {

inline BigInt binomial(unsigned n, unsigned k) {
  if (k > n) return 0;
  if (k > n - k) k = n - k;
  BigInt result = 1;
  for (unsigned i = 1; i <= k; ++i) {
    result *= n - k + i;
    result /= i;
  }
  return result;
}

// Bits an announced Hamming distance R reveals about an N-bit secret:
// N - log2 C(N,R). The candidate space shrinks from 2^N to C(N,R).
inline double leak_I(unsigned N, unsigned R) {
  if (N < 1 || N > 64) throw BadRange("leak_I: N must be in [1, 64]");
  if (R > N) throw BadRange("leak_I: R exceeds N");
  return static_cast<double>(N) - std::log2(binomial(N, R).convert_to<double>());
}

// Probability of Hamming distance R between uniform N-bit strings, exact.
inline Rational leak_prob(unsigned N, unsigned R) {
  if (N < 1 || N > 64) throw BadRange("leak_prob: N must be in [1, 64]");
  if (R > N) throw BadRange("leak_prob: R exceeds N");
  return Rational(binomial(N, R), BigInt(1) << N);
}

// Average leak over the unequal outcomes:
// N - [sum_{R=1..N} C(N,R) log2 C(N,R)] / (2^N - 1).
inline double leak_avg(unsigned N) {
  if (N < 1 || N > 64) throw BadRange("leak_avg: N must be in [1, 64]");
  long double sum = 0.0L;
  for (unsigned R = 1; R <= N; ++R) {
    const long double c = binomial(N, R).convert_to<long double>();
    if (c > 1.0L) sum += c * std::log2(c);
  }
  const long double denom = ((BigInt(1) << N) - 1).convert_to<long double>();
  return static_cast<double>(static_cast<long double>(N) - sum / denom);
}

// Exact rational value of the average leak, available exactly when every
// C(N,R) with R >= 1 is a power of two (so each log2 term is an integer).
inline std::optional<Rational> leak_avg_rational(unsigned N) {
  if (N < 1 || N > 64) throw BadRange("leak_avg_rational: N must be in [1, 64]");
  BigInt sum = 0;
  for (unsigned R = 1; R <= N; ++R) {
    const BigInt c = binomial(N, R);
    if ((c & (c - 1)) != 0) return std::nullopt;
    sum += c * static_cast<unsigned>(boost::multiprecision::msb(c));
  }
  return Rational(BigInt(N)) - Rational(sum, (BigInt(1) << N) - 1);
}

struct LeakageReport {
  unsigned n_bits = 0;
  struct Row {
    unsigned r = 0;
    double i_bits = 0.0;
    Rational prob;
  };
  std::vector<Row> per_r;               // R = 0..N
  Rational p_neq;                       // (2^N - 1) / 2^N
  double avg_leak = 0.0;                // average over R >= 1
  std::optional<Rational> avg_exact;

  json to_json() const {
    json rows = json::array();
    for (const Row& row : per_r)
      rows.push_back({{"R", row.r},
                      {"I_bits", row.i_bits},
                      {"prob", row.prob.str()},
                      {"prob_value", row.prob.to_double()}});
    json j;
    j["N"] = n_bits;
    j["per_R"] = std::move(rows);
    j["p_neq"] = p_neq.str();
    j["avg_leak_bits"] = avg_leak;
    if (avg_exact) j["avg_leak_exact"] = avg_exact->str();
    return j;
  }

  std::string table() const {
    std::ostringstream os;
    os << "N = " << n_bits << "\n";
    os << std::setw(4) << "R" << std::setw(14) << "I(R) bits" << std::setw(24)
       << "prob(R)" << "\n";
    for (const Row& row : per_r) {
      os << std::setw(4) << row.r << std::setw(14) << std::fixed
         << std::setprecision(6) << row.i_bits << std::setw(24) << row.prob.str()
         << "\n";
    }
    os << "p(X != Y)      = " << p_neq.str() << "\n";
    os << "avg leak (R>0) = " << std::fixed << std::setprecision(6) << avg_leak
       << " bits";
    if (avg_exact) os << " = " << avg_exact->str();
    os << "\n";
    return os.str();
  }
};

inline LeakageReport leakage_report(unsigned N) {
  LeakageReport report;
  report.n_bits = N;
  for (unsigned R = 0; R <= N; ++R)
    report.per_r.push_back({R, leak_I(N, R), leak_prob(N, R)});
  report.p_neq = Rational((BigInt(1) << N) - 1, BigInt(1) << N);
  report.avg_leak = leak_avg(N);
  report.avg_exact = leak_avg_rational(N);
  return report;
}

// Exhaustive census over all 2^N x 2^N ordered (X, Y) pairs, bucketed by
// Hamming distance. This is the independent check of the closed forms; it
// never touches the binomial path.
inline std::vector<std::uint64_t> hamming_pair_census(unsigned N) {
  if (N < 1 || N > 12) throw BadRange("hamming_pair_census: N must be in [1, 12]");
  std::vector<std::uint64_t> counts(N + 1, 0);
  const std::uint64_t space = std::uint64_t(1) << N;
  for (std::uint64_t x = 0; x < space; ++x)
    for (std::uint64_t y = 0; y < space; ++y)
      ++counts[static_cast<unsigned>(std::popcount(x ^ y))];
  return counts;
}

// Chance that a Trent who flips k of n announcements is caught: the flips
// all have to avoid the n-1 audited rounds, so only a lone flip landing
// exactly on i0 survives.
inline Rational detection_probability(std::size_t n, std::size_t k) {
  if (n < 2) throw BadRange("detection_probability: need n >= 2");
  if (k > n) throw BadRange("detection_probability: k exceeds n");
  if (k == 0) return Rational(0);
  if (k == 1) return Rational(BigInt(n - 1), BigInt(n));
  return Rational(1);
}

enum class ProtocolKind { p1, p2 };

constexpr std::string_view to_string(ProtocolKind k) {
  return k == ProtocolKind::p1 ? "p1" : "p2";
}

struct DetectionEstimate {
  ProtocolKind protocol{};
  std::size_t n = 0;
  std::size_t k = 0;
  std::size_t trials = 0;
  std::size_t detected = 0;
  Rational analytic;
  double empirical = 0.0;

  json to_json() const {
    return {{"protocol", std::string(to_string(protocol))},
            {"n", n},
            {"k", k},
            {"trials", trials},
            {"detected", detected},
            {"analytic", analytic.str()},
            {"analytic_value", analytic.to_double()},
            {"empirical", empirical}};
  }

  std::string table() const {
    std::ostringstream os;
    os << "protocol  " << to_string(protocol) << "\n"
       << "n         " << n << "\n"
       << "k         " << k << "\n"
       << "trials    " << trials << "\n"
       << "detected  " << detected << "\n"
       << "analytic  " << analytic.str() << " = " << std::setprecision(6) << std::fixed
       << analytic.to_double() << "\n"
       << "empirical " << std::setprecision(6) << std::fixed << empirical << "\n";
    return os.str();
  }
};

namespace detail {

inline Rational random_int32(Rng& rng) {
  const std::uint64_t raw = rng.below(std::uint64_t(1) << 32);
  return Rational(static_cast<long long>(raw) - (1ll << 31));
}

}  // namespace detail

namespace detail {

inline bool detection_trial(ProtocolKind protocol, std::size_t n, std::size_t k,
                            std::uint64_t seed, std::size_t trial, Transcript& scratch,
                            const ProtocolConfig& cfg) {
  Rng rng(Rng::derive(seed, trial));
  scratch.clear();
  const TrentStrategy trent = TrentStrategy::flip_random(k);
  Rational a = random_int32(rng);
  Rational b = random_int32(rng);
  while (b == a) b = random_int32(rng);
  if (protocol == ProtocolKind::p1)
    return run_p1(a, b, n, rng, trent, scratch, cfg).verdict == P1Verdict::cheat_detected;
  const std::size_t m = sample_m(n, rng);
  return run_p2(a, b, n, m, rng, trent, scratch, cfg).verdict == P2Verdict::cheat_detected;
}

}  // namespace detail

// Monte Carlo counterpart of detection_probability: full protocol runs
// against a flip_random(k) Trent. Each trial gets its own RNG stream derived
// from (seed, trial index), so the detected count is identical no matter how
// trials are split across threads.
inline DetectionEstimate estimate_detection(ProtocolKind protocol, std::size_t n,
                                            std::size_t k, std::size_t trials,
                                            std::uint64_t seed,
                                            const ProtocolConfig& cfg = {},
                                            unsigned threads = 0) {
  if (trials < 1) throw BadRange("estimate_detection: need at least one trial");
  DetectionEstimate est;
  est.protocol = protocol;
  est.n = n;
  est.k = k;
  est.trials = trials;
  est.analytic = detection_probability(n, k);

  if (threads == 0) {
    const unsigned hw = std::thread::hardware_concurrency();
    threads = hw == 0 ? 1 : hw;
  }
  threads = static_cast<unsigned>(
      std::min<std::size_t>(threads, std::max<std::size_t>(1, trials / 256)));

  if (threads <= 1) {
    Transcript scratch;
    for (std::size_t trial = 0; trial < trials; ++trial)
      if (detail::detection_trial(protocol, n, k, seed, trial, scratch, cfg))
        ++est.detected;
  } else {
    std::vector<std::size_t> counts(threads, 0);
    std::vector<std::thread> workers;
    workers.reserve(threads);
    for (unsigned w = 0; w < threads; ++w) {
      workers.emplace_back([&, w] {
        Transcript scratch;
        std::size_t local = 0;
        for (std::size_t trial = w; trial < trials; trial += threads)
          if (detail::detection_trial(protocol, n, k, seed, trial, scratch, cfg)) ++local;
        counts[w] = local;
      });
    }
    for (std::thread& worker : workers) worker.join();
    for (std::size_t c : counts) est.detected += c;
  }
  est.empirical = static_cast<double>(est.detected) / static_cast<double>(est.trials);
  return est;
}

struct ExhaustiveDetection {
  std::size_t cases = 0;
  std::size_t detected = 0;
  bool all_detected() const { return cases > 0 && detected == cases; }

  json to_json() const {
    return {{"cases", cases}, {"detected", detected}, {"all_detected", all_detected()}};
  }
};

// Enumerates every (flip set of size k) x (i0 position) combination and runs
// the protocol on each. For k >= 2 at least one flip must land on an audited
// round, so every case ends in detection.
inline ExhaustiveDetection exhaustive_detection(ProtocolKind protocol, std::size_t n,
                                                std::size_t k, std::uint64_t seed = 1,
                                                const ProtocolConfig& cfg = {}) {
  if (n < 2) throw BadRange("exhaustive_detection: need n >= 2");
  if (k < 1 || k > n) throw BadRange("exhaustive_detection: need 1 <= k <= n");

  std::vector<std::size_t> combo(k);
  for (std::size_t i = 0; i < k; ++i) combo[i] = i + 1;

  ExhaustiveDetection result;
  Transcript scratch;
  for (;;) {
    for (std::size_t i0 = 1; i0 <= n; ++i0) {
      Rng rng(Rng::derive(seed, result.cases));
      scratch.clear();
      const TrentStrategy trent =
          TrentStrategy::flip(std::set<std::size_t>(combo.begin(), combo.end()));
      Rational a = detail::random_int32(rng);
      Rational b = detail::random_int32(rng);
      while (b == a) b = detail::random_int32(rng);

      bool caught = false;
      if (protocol == ProtocolKind::p1) {
        const P1Plan plan =
            plan_rounds_at(n, i0, rng, DecoyScheme::randomized, cfg.magnitude_bits);
        caught = run_p1_with_plan(a, b, plan, rng, trent, scratch, cfg).verdict ==
                 P1Verdict::cheat_detected;
      } else {
        const std::size_t m = sample_m(n, rng);
        const QpcPlan plan = plan_qpc_at(n, m, i0, rng, cfg.magnitude_bits);
        caught = run_p2_with_plan(a, b, plan, rng, trent, scratch, cfg).verdict ==
                 P2Verdict::cheat_detected;
      }
      if (caught) ++result.detected;
      ++result.cases;
    }

    // next k-combination of [1, n]
    std::size_t pos = k;
    while (pos > 0 && combo[pos - 1] == n - k + pos) --pos;
    if (pos == 0) break;
    ++combo[pos - 1];
    for (std::size_t i = pos; i < k; ++i) combo[i] = combo[i - 1] + 1;
  }
  return result;
}

}  // namespace pcmp
