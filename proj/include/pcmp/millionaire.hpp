#pragma once

#include <string_view>
#include <utility>
#include <vector>

#include "pcmp/protocol.hpp"

namespace pcmp {

enum class DecoyScheme { randomized, fixed_2_1 };

// The shared run plan: n rounds, one secret index i0 carrying the real
// secrets, and a known unequal decoy pair for every other round. Alice and
// Bob both hold the plan; Trent must never learn it.
struct P1Plan {
  std::size_t n = 0;
  std::size_t i0 = 0;  // 1-based
  std::vector<std::pair<Rational, Rational>> decoys;  // size n; slot i0-1 unused

  bool is_decoy(std::size_t i) const { return i != i0; }
};

inline P1Plan plan_rounds_at(std::size_t n, std::size_t i0, Rng& rng,
                             DecoyScheme scheme = DecoyScheme::randomized,
                             unsigned magnitude_bits = 64) {
  if (n < 2) throw BadRoundCount("plan_rounds: need n >= 2 so decoy rounds exist");
  if (i0 < 1 || i0 > n) throw std::invalid_argument("plan_rounds: i0 out of range");
  P1Plan plan;
  plan.n = n;
  plan.i0 = i0;
  plan.decoys.resize(n);
  for (std::size_t i = 1; i <= n; ++i) {
    if (i == i0) continue;
    if (scheme == DecoyScheme::fixed_2_1) {
      plan.decoys[i - 1] = {Rational(2), Rational(1)};
    } else {
      const Rational a_i = sample_scalar(rng, magnitude_bits, false);
      Rational b_i;
      do {
        b_i = sample_scalar(rng, magnitude_bits, false);
      } while (b_i == a_i);
      plan.decoys[i - 1] = {a_i, b_i};
    }
  }
  return plan;
}

inline P1Plan plan_rounds(std::size_t n, Rng& rng,
                          DecoyScheme scheme = DecoyScheme::randomized,
                          unsigned magnitude_bits = 64) {
  if (n < 2) throw BadRoundCount("plan_rounds: need n >= 2 so decoy rounds exist");
  return plan_rounds_at(n, rng.below(n) + 1, rng, scheme, magnitude_bits);
}

enum class P1Verdict { greater, less, cheat_detected };

constexpr std::string_view to_string(P1Verdict v) {
  switch (v) {
    case P1Verdict::greater: return "greater";
    case P1Verdict::less: return "less";
    default: return "cheat-detected";
  }
}

struct P1Outcome {
  P1Verdict verdict{};
  std::size_t n = 0;
  std::size_t i0 = 0;
  std::vector<RoundRecord> records;
  std::vector<std::size_t> mismatched;

  // redact drops the plan (i0) and all party-side secrets, leaving what an
  // outside reader of the announcements could reconstruct.
  json to_json(bool redact = false) const {
    json rounds = json::array();
    for (const RoundRecord& rec : records) rounds.push_back(round_json(rec, redact));
    json j;
    j["verdict"] = std::string(to_string(verdict));
    j["n"] = n;
    if (!redact) j["i0"] = i0;
    j["rounds"] = std::move(rounds);
    j["mismatched"] = mismatched;
    return j;
  }
};

// Audit of the announced bits against the known decoy pairs: flags every
// decoy round whose announcement decodes to the wrong ordering. The i0
// round cannot be audited, which is where the residual 1/n risk lives.
inline std::vector<std::size_t> security_check(const std::vector<RoundRecord>& records,
                                               const P1Plan& plan) {
  std::vector<std::size_t> mismatched;
  for (const RoundRecord& rec : records) {
    if (!plan.is_decoy(rec.index)) continue;
    const auto& [a_i, b_i] = plan.decoys[rec.index - 1];
    const Verdict expected = a_i > b_i ? Verdict::greater : Verdict::less;
    const Verdict decoded = decode_verdict(rec.params.lambda, rec.ordering_announcement());
    if (decoded != expected) mismatched.push_back(rec.index);
  }
  return mismatched;
}

inline P1Outcome run_p1_with_plan(const Rational& a, const Rational& b, const P1Plan& plan,
                                  Rng& rng, const TrentStrategy& trent, Transcript& t,
                                  const ProtocolConfig& cfg = {}) {
  if (a == b) throw EqualSecrets();
  detail::reject_equality_lie(trent);
  record_input(t, Party::alice, "a", a.str());
  record_input(t, Party::bob, "b", b.str());

  const std::set<std::size_t> flips = trent.materialize(plan.n, rng);

  P1Outcome outcome;
  outcome.n = plan.n;
  outcome.i0 = plan.i0;
  outcome.records.reserve(plan.n);
  detail::ChannelSet channels;
  for (std::size_t i = 1; i <= plan.n; ++i) {
    const auto& [a_i, b_i] = i == plan.i0 ? std::pair<Rational, Rational>{a, b}
                                          : plan.decoys[i - 1];
    outcome.records.push_back(detail::run_round(i, a_i, b_i, /*equality_mode=*/false,
                                                flips, rng, t, channels, cfg));
  }

  outcome.mismatched = security_check(outcome.records, plan);
  if (!outcome.mismatched.empty()) {
    outcome.verdict = P1Verdict::cheat_detected;
  } else {
    const RoundRecord& real = outcome.records[plan.i0 - 1];
    const Verdict v = decode_verdict(real.params.lambda, real.ordering_announcement());
    outcome.verdict = v == Verdict::greater ? P1Verdict::greater : P1Verdict::less;
  }
  return outcome;
}

// The complete ordering protocol: n rounds, one real, n-1 audited decoys.
inline P1Outcome run_p1(const Rational& a, const Rational& b, std::size_t n, Rng& rng,
                        const TrentStrategy& trent, Transcript& t,
                        const ProtocolConfig& cfg = {},
                        DecoyScheme scheme = DecoyScheme::randomized) {
  if (a == b) throw EqualSecrets();
  const P1Plan plan = plan_rounds(n, rng, scheme, cfg.magnitude_bits);
  return run_p1_with_plan(a, b, plan, rng, trent, t, cfg);
}

}  // namespace pcmp
