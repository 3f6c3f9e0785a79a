#pragma once

#include <algorithm>
#include <set>
#include <string_view>
#include <vector>

#include "pcmp/protocol.hpp"

namespace pcmp {

// Run plan for the equality protocol: besides the real round i0, the index
// set S plants m decoy rounds whose inputs are deliberately equal, so the
// count of "equal" announcements Trent sees never tells him whether the
// real pair was one of them.
struct QpcPlan {
  std::size_t n = 0;
  std::size_t m = 0;
  std::vector<std::size_t> s;      // S = {i0, i1, ..., im}; s[0] is i0, draw order kept
  std::vector<Rational> a_decoys;  // Alice's a_i per round; 1 inside S, != 1 outside

  std::size_t i0() const { return s.front(); }

  bool in_s(std::size_t i) const {
    return std::find(s.begin(), s.end(), i) != s.end();
  }

  std::set<std::size_t> planted() const { return {s.begin() + 1, s.end()}; }
};

namespace detail {

inline void fill_qpc_decoys(QpcPlan& plan, Rng& rng, unsigned magnitude_bits) {
  plan.a_decoys.assign(plan.n, Rational(1));
  for (std::size_t i = 1; i <= plan.n; ++i) {
    if (plan.in_s(i)) continue;
    Rational a_i;
    do {
      a_i = sample_scalar(rng, magnitude_bits, false);
    } while (a_i == Rational(1));
    plan.a_decoys[i - 1] = a_i;
  }
}

}  // namespace detail

// Plan with a caller-chosen i0; the remaining m members of S are drawn
// uniformly from the other indices.
inline QpcPlan plan_qpc_at(std::size_t n, std::size_t m, std::size_t i0, Rng& rng,
                           unsigned magnitude_bits = 64) {
  if (m < 1 || m >= n)
    throw BadCounts("plan_qpc: need 1 <= m < n, got m=" + std::to_string(m) +
                    " n=" + std::to_string(n));
  if (i0 < 1 || i0 > n) throw std::invalid_argument("plan_qpc_at: i0 out of range");
  QpcPlan plan;
  plan.n = n;
  plan.m = m;
  plan.s.push_back(i0);

  std::vector<std::size_t> pool;
  pool.reserve(n - 1);
  for (std::size_t i = 1; i <= n; ++i)
    if (i != i0) pool.push_back(i);
  for (std::size_t i = 0; i < m; ++i) {
    const std::size_t j = i + rng.below(pool.size() - i);
    std::swap(pool[i], pool[j]);
    plan.s.push_back(pool[i]);
  }

  detail::fill_qpc_decoys(plan, rng, magnitude_bits);
  return plan;
}

inline QpcPlan plan_qpc(std::size_t n, std::size_t m, Rng& rng,
                        unsigned magnitude_bits = 64) {
  if (m < 1 || m >= n)
    throw BadCounts("plan_qpc: need 1 <= m < n, got m=" + std::to_string(m) +
                    " n=" + std::to_string(n));
  return plan_qpc_at(n, m, rng.below(n) + 1, rng, magnitude_bits);
}

// Default secret range for m when a run does not fix it: uniform over
// [n/4, n/2], clamped to the valid [1, n-1].
inline std::size_t sample_m(std::size_t n, Rng& rng) {
  if (n < 2) throw BadCounts("sample_m: need n >= 2");
  const std::size_t lo = std::max<std::size_t>(1, n / 4);
  const std::size_t hi = std::min(n - 1, std::max<std::size_t>(1, n / 2));
  return lo + rng.below(hi - lo + 1);
}

enum class P2Verdict { equal, not_equal, cheat_detected };

constexpr std::string_view to_string(P2Verdict v) {
  switch (v) {
    case P2Verdict::equal: return "equal";
    case P2Verdict::not_equal: return "not-equal";
    default: return "cheat-detected";
  }
}

struct P2Outcome {
  P2Verdict verdict{};
  std::size_t n = 0;
  std::size_t m = 0;
  std::size_t i0 = 0;
  std::vector<RoundRecord> records;
  std::vector<std::size_t> mismatched;

  json to_json(bool redact = false) const {
    json rounds = json::array();
    for (const RoundRecord& rec : records) rounds.push_back(round_json(rec, redact));
    json j;
    j["verdict"] = std::string(to_string(verdict));
    j["n"] = n;
    if (!redact) {
      j["m"] = m;
      j["i0"] = i0;
    }
    j["rounds"] = std::move(rounds);
    j["mismatched"] = mismatched;
    return j;
  }
};

// Audit against the plan: rounds in S \ {i0} must be announced equal, rounds
// outside S unequal. Round i0 is unauditable, as in the ordering protocol.
inline std::vector<std::size_t> qpc_security_check(const std::vector<RoundRecord>& records,
                                                   const QpcPlan& plan) {
  std::vector<std::size_t> mismatched;
  for (const RoundRecord& rec : records) {
    if (rec.index == plan.i0()) continue;
    const bool expected_equal = plan.in_s(rec.index);
    if (rec.equality_announcement().equal != expected_equal)
      mismatched.push_back(rec.index);
  }
  return mismatched;
}

inline P2Outcome run_p2_with_plan(const Rational& a, const Rational& b, const QpcPlan& plan,
                                  Rng& rng, const TrentStrategy& trent, Transcript& t,
                                  const ProtocolConfig& cfg = {}) {
  record_input(t, Party::alice, "a", a.str());
  record_input(t, Party::bob, "b", b.str());

  const std::set<std::size_t> flips = trent.materialize(plan.n, rng);

  P2Outcome outcome;
  outcome.n = plan.n;
  outcome.m = plan.m;
  outcome.i0 = plan.i0();
  outcome.records.reserve(plan.n);
  const Rational one(1);
  detail::ChannelSet channels;
  for (std::size_t i = 1; i <= plan.n; ++i) {
    const Rational& a_i = i == plan.i0() ? a : plan.a_decoys[i - 1];
    const Rational& b_i = i == plan.i0() ? b : one;
    outcome.records.push_back(
        detail::run_round(i, a_i, b_i, /*equality_mode=*/true, flips, rng, t, channels, cfg));
  }

  outcome.mismatched = qpc_security_check(outcome.records, plan);
  if (!outcome.mismatched.empty()) {
    outcome.verdict = P2Verdict::cheat_detected;
  } else {
    const RoundRecord& real = outcome.records[plan.i0() - 1];
    outcome.verdict = real.equality_announcement().equal ? P2Verdict::equal
                                                         : P2Verdict::not_equal;
  }
  return outcome;
}

// The private-equality protocol. Trent only ever announces equal/unequal,
// so neither side learns an ordering when a != b, and the planted-equal
// decoys keep the real result hidden from Trent himself.
inline P2Outcome run_p2(const Rational& a, const Rational& b, std::size_t n, std::size_t m,
                        Rng& rng, const TrentStrategy& trent, Transcript& t,
                        const ProtocolConfig& cfg = {}) {
  const QpcPlan plan = plan_qpc(n, m, rng, cfg.magnitude_bits);
  return run_p2_with_plan(a, b, plan, rng, trent, t, cfg);
}

}  // namespace pcmp
