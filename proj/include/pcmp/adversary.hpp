#pragma once

#include <json.hpp>

#include <set>
#include <vector>

#include "pcmp/blinding.hpp"
#include "pcmp/rng.hpp"

namespace pcmp {

// What Trent does with his honest announcement before publishing it.
// flip_random commits to its rounds once per run (materialize): a lying
// Trent picks rounds without knowing i0, not adaptively.
struct TrentStrategy {
  enum class Kind { honest, flip_rounds, flip_random, equality_lie };

  Kind kind = Kind::honest;
  std::set<std::size_t> rounds;  // flip_rounds / equality_lie, 1-based
  bool all_rounds = false;
  std::size_t k = 0;             // flip_random

  static TrentStrategy honest() { return {}; }

  static TrentStrategy flip(std::set<std::size_t> rounds) {
    TrentStrategy s;
    s.kind = Kind::flip_rounds;
    s.rounds = std::move(rounds);
    return s;
  }

  static TrentStrategy flip_all() {
    TrentStrategy s;
    s.kind = Kind::flip_rounds;
    s.all_rounds = true;
    return s;
  }

  static TrentStrategy flip_random(std::size_t k) {
    TrentStrategy s;
    s.kind = Kind::flip_random;
    s.k = k;
    return s;
  }

  static TrentStrategy equality_lie(std::set<std::size_t> rounds) {
    TrentStrategy s;
    s.kind = Kind::equality_lie;
    s.rounds = std::move(rounds);
    return s;
  }

  static TrentStrategy equality_lie_all() {
    TrentStrategy s;
    s.kind = Kind::equality_lie;
    s.all_rounds = true;
    return s;
  }

  // Concrete flip set for an n-round run. flip_random draws its k distinct
  // rounds here, once, uniformly without replacement.
  std::set<std::size_t> materialize(std::size_t n, Rng& rng) const {
    std::set<std::size_t> flips;
    switch (kind) {
      case Kind::honest:
        break;
      case Kind::flip_rounds:
      case Kind::equality_lie:
        if (all_rounds) {
          for (std::size_t i = 1; i <= n; ++i) flips.insert(i);
        } else {
          for (std::size_t i : rounds) {
            if (i < 1 || i > n)
              throw std::invalid_argument("TrentStrategy: flip round out of range");
            flips.insert(i);
          }
        }
        break;
      case Kind::flip_random: {
        if (k > n) throw std::invalid_argument("TrentStrategy: k exceeds round count");
        std::vector<std::size_t> pool(n);
        for (std::size_t i = 0; i < n; ++i) pool[i] = i + 1;
        for (std::size_t i = 0; i < k; ++i) {
          const std::size_t j = i + rng.below(pool.size() - i);
          std::swap(pool[i], pool[j]);
          flips.insert(pool[i]);
        }
        break;
      }
    }
    return flips;
  }
};

inline Announcement apply_strategy(const std::set<std::size_t>& flips, std::size_t i,
                                   Announcement honest) {
  if (flips.count(i)) honest.r ^= 1;
  return honest;
}

inline EqualityAnnouncement apply_strategy(const std::set<std::size_t>& flips,
                                           std::size_t i, EqualityAnnouncement honest) {
  if (flips.count(i)) honest.equal = !honest.equal;
  return honest;
}

// Convenience for the non-random kinds; flip_random needs materialize first
// because its rounds are a per-run commitment.
inline Announcement apply_strategy(const TrentStrategy& s, std::size_t i,
                                   Announcement honest) {
  if (s.kind == TrentStrategy::Kind::flip_random)
    throw std::logic_error("apply_strategy: materialize flip_random for the run first");
  if (s.kind == TrentStrategy::Kind::honest) return honest;
  if (s.all_rounds || s.rounds.count(i)) honest.r ^= 1;
  return honest;
}

inline EqualityAnnouncement apply_strategy(const TrentStrategy& s, std::size_t i,
                                           EqualityAnnouncement honest) {
  if (s.kind == TrentStrategy::Kind::flip_random)
    throw std::logic_error("apply_strategy: materialize flip_random for the run first");
  if (s.kind == TrentStrategy::Kind::honest) return honest;
  if (s.all_rounds || s.rounds.count(i)) honest.equal = !honest.equal;
  return honest;
}

// One (a, b, c, lambda) assignment consistent with an observed (alpha, beta).
struct BlindAssignment {
  Rational a;
  Rational b;
  Rational c;
  Rational lambda;
};

// Given one explanation (u, v, c0, lambda0) of Trent's observation, the
// order-swapped assignment (v, u, alpha+beta-c0, -lambda0) reproduces the
// identical (alpha, beta). This is the constructive reason a lone (alpha,
// beta) pair never pins down which secret was larger.
inline BlindAssignment ambiguity_swap(const Rational& u, const Rational& v,
                                      const Rational& c0, const Rational& lambda0) {
  if (lambda0.is_zero()) throw ZeroLambda();
  const Rational alpha = lambda0 * u + c0;
  const Rational beta = lambda0 * v + c0;
  return {v, u, alpha + beta - c0, -lambda0};
}

struct ConsistencyReport {
  Rational alpha;
  Rational beta;
  std::vector<BlindAssignment> hypotheses;
  std::set<Verdict> orderings_possible;

  nlohmann::json to_json() const {
    nlohmann::json hyps = nlohmann::json::array();
    for (const BlindAssignment& h : hypotheses)
      hyps.push_back({{"a", h.a.str()},
                      {"b", h.b.str()},
                      {"c", h.c.str()},
                      {"lambda", h.lambda.str()}});
    nlohmann::json orderings = nlohmann::json::array();
    for (Verdict v : orderings_possible) orderings.push_back(std::string(to_string(v)));
    return {{"alpha", alpha.str()},
            {"beta", beta.str()},
            {"hypotheses", hyps},
            {"orderings_possible", orderings}};
  }
};

// Brute-force inversion of the two blinding equations over finite domains:
// every (a, b, c, lambda) in secret x secret x param x param reproducing the
// observation, with lambda != 0. For fixed (a, lambda) the equations force
// c = alpha - lambda*a and b = (beta - c)/lambda, so the scan is
// |secrets| * |params| with set lookups.
inline ConsistencyReport enumerate_consistent(const Rational& alpha, const Rational& beta,
                                              const std::vector<Rational>& secret_domain,
                                              const std::vector<Rational>& param_domain) {
  const std::set<Rational> secrets(secret_domain.begin(), secret_domain.end());
  const std::set<Rational> params(param_domain.begin(), param_domain.end());

  ConsistencyReport report;
  report.alpha = alpha;
  report.beta = beta;
  for (const Rational& a : secrets) {
    for (const Rational& lambda : params) {
      if (lambda.is_zero()) continue;
      const Rational c = alpha - lambda * a;
      if (!params.count(c)) continue;
      const Rational b = (beta - c) / lambda;
      if (!secrets.count(b)) continue;
      report.hypotheses.push_back({a, b, c, lambda});
      const int ord = sign(a - b);
      if (ord > 0) report.orderings_possible.insert(Verdict::greater);
      if (ord < 0) report.orderings_possible.insert(Verdict::less);
    }
  }
  return report;
}

}  // namespace pcmp
