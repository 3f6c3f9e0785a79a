#pragma once

#include <string_view>
#include <variant>

#include "pcmp/errors.hpp"
#include "pcmp/rational.hpp"

namespace pcmp {

// Per-round pair shared by Alice and Bob; lambda must be nonzero.
struct BlindingParams {
  Rational lambda;
  Rational c;
};

struct BlindedValue {
  Rational value;
  friend bool operator==(const BlindedValue&, const BlindedValue&) = default;
};

// Trent's public bit for an ordering round: 0 means alpha > beta.
struct Announcement {
  int r = 0;
};

// Trent's public flag for an equality round: whether alpha == beta. He never
// says which is larger.
struct EqualityAnnouncement {
  bool equal = false;
};

enum class Verdict { greater, less };

constexpr std::string_view to_string(Verdict v) {
  return v == Verdict::greater ? "greater" : "less";
}

inline BlindedValue blind(const Rational& secret, const BlindingParams& params) {
  if (params.lambda.is_zero()) throw ZeroLambda();
  return {params.lambda * secret + params.c};
}

inline Announcement trent_compare(const BlindedValue& alpha, const BlindedValue& beta) {
  const Rational d = alpha.value - beta.value;
  if (d.is_zero()) throw EqualBlindedValues();
  return {d.sign() > 0 ? 0 : 1};
}

inline EqualityAnnouncement trent_equal(const BlindedValue& alpha, const BlindedValue& beta) {
  return {alpha.value == beta.value};
}

inline Verdict decode_verdict(const Rational& lambda, Announcement announcement) {
  if (lambda.is_zero()) throw ZeroLambda();
  const int s = announcement.r == 0 ? lambda.sign() : -lambda.sign();
  return s > 0 ? Verdict::greater : Verdict::less;
}

// Everything one executed round produced. Fields a party would not see
// (the other side's secret, Trent's difference, the ground-truth lie flag)
// are here for the harness; per-observer access control lives in the
// transcript views, not in this record.
struct RoundRecord {
  std::size_t index = 0;  // 1-based
  Rational a;
  Rational b;
  BlindingParams params;
  Rational alpha;
  Rational beta;
  Rational d;             // Trent-side difference alpha - beta
  std::variant<Announcement, EqualityAnnouncement> announcement;
  bool trent_lied = false;

  const Announcement& ordering_announcement() const {
    return std::get<Announcement>(announcement);
  }
  const EqualityAnnouncement& equality_announcement() const {
    return std::get<EqualityAnnouncement>(announcement);
  }
};

}  // namespace pcmp
