#include <catch2/catch_amalgamated.hpp>

#include <set>

#include "pcmp/protocol.hpp"

using namespace pcmp;

namespace {

BlindingParams params(long long lambda, long long c) {
  return {Rational(lambda), Rational(c)};
}

}  // namespace

TEST_CASE("blinding evaluates lambda*a + c exactly") {
  CHECK(blind(Rational(2), params(3, 5)).value == Rational(11));
  CHECK(blind(Rational(42), params(1, 0)).value == Rational(42));  // identity blinding
  CHECK(blind(Rational(1), params(-3, 14)).value == Rational(11));
  CHECK_THROWS_AS(blind(Rational(2), params(0, 5)), ZeroLambda);
}

TEST_CASE("trent's comparison bit follows the sign of the difference") {
  CHECK(trent_compare({Rational(11)}, {Rational(8)}).r == 0);
  CHECK(trent_compare({Rational(8)}, {Rational(11)}).r == 1);
  CHECK_THROWS_AS(trent_compare({Rational(7)}, {Rational(7)}), EqualBlindedValues);
}

TEST_CASE("trent's equality flag") {
  CHECK(trent_equal({Rational(11)}, {Rational(11)}).equal);
  CHECK(!trent_equal({Rational(11)}, {Rational(8)}).equal);
}

TEST_CASE("blinded values collide exactly when the secrets do") {
  Rng rng(21);
  for (int i = 0; i < 200; ++i) {
    BlindingParams p{sample_scalar(rng, 16, true), sample_scalar(rng, 16, false)};
    const Rational a = sample_scalar(rng, 8, false);
    const Rational b = sample_scalar(rng, 8, false);
    CHECK(trent_equal(blind(a, p), blind(b, p)).equal == (a == b));
  }
}

TEST_CASE("verdict decoding: (-1)^R lambda > 0 means greater") {
  CHECK(decode_verdict(Rational(3), {0}) == Verdict::greater);
  CHECK(decode_verdict(Rational(-3), {0}) == Verdict::less);
  CHECK(decode_verdict(Rational(-3), {1}) == Verdict::greater);
  CHECK(decode_verdict(Rational(3), {1}) == Verdict::less);
  CHECK_THROWS_AS(decode_verdict(Rational(0), {0}), ZeroLambda);
}

TEST_CASE("announcement carries exactly one bit") {
  Rng rng(31);
  for (int i = 0; i < 50; ++i) {
    const Rational lambda = sample_scalar(rng, 16, true);
    std::set<Verdict> range;
    range.insert(decode_verdict(lambda, {0}));
    range.insert(decode_verdict(lambda, {1}));
    CHECK(range.size() == 2);
  }
}

TEST_CASE("blinding difference algebra: blind(a) - blind(b) = lambda*(a-b)") {
  Rng rng(41);
  for (int i = 0; i < 300; ++i) {
    BlindingParams p{sample_scalar(rng, 32, true), sample_scalar(rng, 32, false)};
    const Rational a = sample_scalar(rng, 16, false);
    const Rational b = sample_scalar(rng, 16, false);
    CHECK(blind(a, p).value - blind(b, p).value == p.lambda * (a - b));
  }
}

TEST_CASE("single-round protocol decodes the true ordering under an honest trent") {
  Rng rng(51);
  Transcript t;
  CHECK(run_p0(Rational(7), Rational(4), rng, TrentStrategy::honest(), t).verdict ==
        Verdict::greater);
  CHECK(run_p0(Rational(4), Rational(7), rng, TrentStrategy::honest(), t).verdict ==
        Verdict::less);
}

TEST_CASE("single-round correctness over an exhaustive small grid") {
  Rng rng(61);
  Transcript t;
  for (int a = -3; a <= 3; ++a) {
    for (int b = -3; b <= 3; ++b) {
      if (a == b) continue;
      const P0Result res =
          run_p0(Rational(a), Rational(b), rng, TrentStrategy::honest(), t);
      CHECK(res.verdict == (a > b ? Verdict::greater : Verdict::less));
      CHECK(res.record.alpha ==
            res.record.params.lambda * Rational(a) + res.record.params.c);
      CHECK(res.record.d == res.record.alpha - res.record.beta);
      t.clear();
    }
  }
}

TEST_CASE("single-round correctness over random rational secrets") {
  Rng rng(71);
  Transcript t;
  for (int i = 0; i < 100; ++i) {
    const Rational a = sample_scalar(rng, 20, false);
    Rational b = sample_scalar(rng, 20, false);
    while (b == a) b = sample_scalar(rng, 20, false);
    const P0Result res = run_p0(a, b, rng, TrentStrategy::honest(), t);
    CHECK(res.verdict == (a > b ? Verdict::greater : Verdict::less));
    t.clear();
  }
}

TEST_CASE("a flipped announcement silently inverts the bare-protocol verdict") {
  Rng rng(81);
  Transcript t;
  const P0Result res =
      run_p0(Rational(7), Rational(4), rng, TrentStrategy::flip({1}), t);
  CHECK(res.verdict == Verdict::less);  // wrong, and nothing in P0 can tell
  CHECK(res.record.trent_lied);
}

TEST_CASE("equal secrets are rejected before any round runs") {
  Rng rng(91);
  Transcript t;
  CHECK_THROWS_AS(run_p0(Rational(5), Rational(5), rng, TrentStrategy::honest(), t),
                  EqualSecrets);
  CHECK(t.empty());
}

TEST_CASE("equality-lie strategies have no meaning in an ordering run") {
  Rng rng(101);
  Transcript t;
  CHECK_THROWS_AS(
      run_p0(Rational(7), Rational(4), rng, TrentStrategy::equality_lie({1}), t),
      std::invalid_argument);
}
