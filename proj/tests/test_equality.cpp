#include <catch2/catch_amalgamated.hpp>

#include <set>

#include "pcmp/analysis.hpp"
#include "pcmp/equality.hpp"

using namespace pcmp;

TEST_CASE("a plan plants m equal rounds plus the secret one") {
  Rng rng(1);
  const QpcPlan plan = plan_qpc(10, 3, rng);
  CHECK(plan.n == 10);
  CHECK(plan.m == 3);
  REQUIRE(plan.s.size() == 4);
  const std::set<std::size_t> distinct(plan.s.begin(), plan.s.end());
  CHECK(distinct.size() == 4);
  for (std::size_t i : plan.s) {
    CHECK(i >= 1);
    CHECK(i <= 10);
  }
  for (std::size_t i = 1; i <= 10; ++i) {
    if (plan.in_s(i)) {
      if (i != plan.i0()) CHECK(plan.a_decoys[i - 1] == Rational(1));
    } else {
      CHECK(plan.a_decoys[i - 1] != Rational(1));
    }
  }
}

TEST_CASE("the planted count must stay below the round count") {
  Rng rng(2);
  CHECK_THROWS_AS(plan_qpc(3, 3, rng), BadCounts);
  CHECK_THROWS_AS(plan_qpc(3, 5, rng), BadCounts);
  CHECK_THROWS_AS(plan_qpc(10, 0, rng), BadCounts);
}

TEST_CASE("the default m range sits inside [n/4, n/2]") {
  Rng rng(3);
  for (int rep = 0; rep < 200; ++rep) {
    const std::size_t m = sample_m(10, rng);
    CHECK(m >= 2);
    CHECK(m <= 5);
  }
  for (int rep = 0; rep < 50; ++rep) CHECK(sample_m(2, rng) == 1);
}

TEST_CASE("honest equality runs answer correctly") {
  Rng rng(4);
  Transcript t;
  CHECK(run_p2(Rational(5), Rational(5), 10, 3, rng, TrentStrategy::honest(), t).verdict ==
        P2Verdict::equal);
  t.clear();
  CHECK(run_p2(Rational(5), Rational(6), 10, 3, rng, TrentStrategy::honest(), t).verdict ==
        P2Verdict::not_equal);
}

TEST_CASE("honest verdicts over an exhaustive small domain") {
  Transcript t;
  int rep = 0;
  for (int a = 0; a <= 3; ++a) {
    for (int b = 0; b <= 3; ++b) {
      Rng rng(Rng::derive(50, rep++));
      t.clear();
      const P2Outcome outcome =
          run_p2(Rational(a), Rational(b), 6, 2, rng, TrentStrategy::honest(), t);
      CHECK(outcome.verdict == (a == b ? P2Verdict::equal : P2Verdict::not_equal));
      CHECK(outcome.mismatched.empty());
    }
  }
}

TEST_CASE("lying on a planted round is caught") {
  Rng rng(5);
  Transcript t;
  const QpcPlan plan = plan_qpc_at(10, 3, 4, rng);
  const std::set<std::size_t> planted = plan.planted();
  REQUIRE(!planted.empty());
  const std::size_t victim = *planted.begin();
  const P2Outcome outcome = run_p2_with_plan(Rational(5), Rational(6), plan, rng,
                                             TrentStrategy::equality_lie({victim}), t);
  CHECK(outcome.verdict == P2Verdict::cheat_detected);
  CHECK(outcome.mismatched == std::vector<std::size_t>{victim});
}

TEST_CASE("lying on an unplanted round is caught too") {
  Rng rng(6);
  Transcript t;
  const QpcPlan plan = plan_qpc_at(10, 3, 4, rng);
  std::size_t outside = 0;
  for (std::size_t i = 1; i <= 10; ++i)
    if (!plan.in_s(i)) outside = i;
  REQUIRE(outside != 0);
  const P2Outcome outcome = run_p2_with_plan(Rational(5), Rational(6), plan, rng,
                                             TrentStrategy::flip({outside}), t);
  CHECK(outcome.verdict == P2Verdict::cheat_detected);
  CHECK(outcome.mismatched == std::vector<std::size_t>{outside});
}

TEST_CASE("lying only on the secret round flips the verdict unseen") {
  Rng rng(7);
  Transcript t;
  const QpcPlan plan = plan_qpc_at(10, 3, 4, rng);
  const P2Outcome outcome = run_p2_with_plan(Rational(5), Rational(6), plan, rng,
                                             TrentStrategy::flip({4}), t);
  CHECK(outcome.verdict == P2Verdict::equal);  // wrong
  CHECK(outcome.mismatched.empty());
  CHECK(outcome.records[3].trent_lied);
}

TEST_CASE("the audit accepts honest records") {
  Rng rng(8);
  Transcript t;
  const QpcPlan plan = plan_qpc_at(8, 2, 5, rng);
  const P2Outcome outcome =
      run_p2_with_plan(Rational(7), Rational(7), plan, rng, TrentStrategy::honest(), t);
  CHECK(qpc_security_check(outcome.records, plan).empty());
}

TEST_CASE("trent sees m equal announcements when a != b and m+1 when a == b") {
  for (std::size_t m = 2; m <= 5; ++m) {
    Rng rng(Rng::derive(60, m));
    Transcript t;
    const P2Outcome unequal =
        run_p2(Rational(5), Rational(6), 10, m, rng, TrentStrategy::honest(), t);
    std::size_t equal_count = 0;
    for (const json& e : view(t, Observer::trent))
      if (e.contains("announcement") && e["announcement"].value("equal", false))
        ++equal_count;
    CHECK(equal_count == m);
    CHECK(unequal.verdict == P2Verdict::not_equal);

    t.clear();
    Rng rng2(Rng::derive(61, m));
    run_p2(Rational(5), Rational(5), 10, m, rng2, TrentStrategy::honest(), t);
    equal_count = 0;
    for (const json& e : view(t, Observer::trent))
      if (e.contains("announcement") && e["announcement"].value("equal", false))
        ++equal_count;
    CHECK(equal_count == m + 1);
  }
}

TEST_CASE("no ordering information exists anywhere in an equality run") {
  Rng rng(9);
  Transcript t;
  run_p2(Rational(5), Rational(6), 10, 3, rng, TrentStrategy::honest(), t);
  for (Observer who : {Observer::alice, Observer::bob, Observer::trent, Observer::eve}) {
    for (const json& e : view(t, who)) {
      if (e.contains("announcement")) {
        CHECK(e["announcement"].contains("equal"));
        CHECK(!e["announcement"].contains("r"));
      }
    }
  }
}

TEST_CASE("exhaustive small-n check: two or more lies never survive") {
  for (std::size_t n = 3; n <= 6; ++n) {
    for (std::size_t k = 2; k <= n; ++k) {
      const ExhaustiveDetection result = exhaustive_detection(ProtocolKind::p2, n, k);
      CHECK(result.all_detected());
    }
  }
}

TEST_CASE("outcome json redaction hides the index set and plan") {
  Rng rng(10);
  Transcript t;
  const P2Outcome outcome =
      run_p2(Rational(5), Rational(5), 6, 2, rng, TrentStrategy::honest(), t);
  const json full = outcome.to_json(false);
  CHECK(full.contains("i0"));
  CHECK(full.contains("m"));
  const json redacted = outcome.to_json(true);
  CHECK(!redacted.contains("i0"));
  CHECK(!redacted.contains("m"));
  CHECK(redacted["verdict"] == "equal");
}
