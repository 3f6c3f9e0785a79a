#include <catch2/catch_amalgamated.hpp>

#include <array>
#include <map>
#include <sstream>

#include "pcmp/channel.hpp"
#include "pcmp/protocol.hpp"

using namespace pcmp;

namespace {

SharedKey test_key(Bits bits, Party a = Party::alice, Party b = Party::bob) {
  return SharedKey{"k-test", a, b, std::move(bits), 0};
}

}  // namespace

TEST_CASE("one-time pad is plain XOR") {
  Transcript t;
  SharedKey key = test_key({0, 1, 1, 0});
  const CipherMessage msg = send_secure(t, key, Party::alice, {1, 0, 1, 0});
  CHECK(msg.ciphertext == Bits{1, 1, 0, 0});
  CHECK(decrypt(key, msg) == Bits{1, 0, 1, 0});
}

TEST_CASE("decrypt inverts encrypt on random messages") {
  Rng rng(5);
  Transcript t;
  for (int i = 0; i < 200; ++i) {
    const Bits m = random_bits(rng, 256);
    SharedKey key = test_key(random_bits(rng, 256));
    const CipherMessage msg = send_secure(t, key, Party::alice, m);
    CHECK(decrypt(key, msg) == m);
  }
}

TEST_CASE("uniform pads give uniform ciphertexts, exhaustively over 2 bits") {
  std::map<int, int> counts;
  for (int p = 0; p < 4; ++p) {
    for (int k = 0; k < 4; ++k) {
      Transcript t;
      SharedKey key = test_key({static_cast<std::uint8_t>(k >> 1),
                                static_cast<std::uint8_t>(k & 1)});
      const CipherMessage msg =
          send_secure(t, key, Party::alice,
                      {static_cast<std::uint8_t>(p >> 1), static_cast<std::uint8_t>(p & 1)});
      counts[msg.ciphertext[0] * 2 + msg.ciphertext[1]]++;
    }
  }
  REQUIRE(counts.size() == 4);
  for (const auto& [value, count] : counts) CHECK(count == 4);
}

TEST_CASE("pad bits are consumed once and never reused") {
  Transcript t;
  Rng rng(6);
  SharedKey key = test_key(random_bits(rng, 64));
  const CipherMessage first = send_secure(t, key, Party::alice, random_bits(rng, 24));
  CHECK(first.key_offset == 0);
  CHECK(key.consumed == 24);
  const CipherMessage second = send_secure(t, key, Party::bob, random_bits(rng, 24));
  CHECK(second.key_offset == 24);
  CHECK(key.consumed == 48);
  CHECK(second.key_offset > first.key_offset);
  CHECK_THROWS_AS(send_secure(t, key, Party::alice, random_bits(rng, 17)), KeyExhausted);
  CHECK(key.consumed == 48);  // failed send consumed nothing
}

TEST_CASE("sender must hold the key") {
  Transcript t;
  SharedKey key = test_key({1, 0, 1, 0}, Party::alice, Party::bob);
  CHECK_THROWS_AS(send_secure(t, key, Party::trent, {1}), std::invalid_argument);
}

TEST_CASE("cipher sequence numbers increase per ordered pair") {
  Transcript t;
  Rng rng(7);
  SharedKey ab = test_key(random_bits(rng, 64), Party::alice, Party::bob);
  SharedKey at = test_key(random_bits(rng, 64), Party::alice, Party::trent);
  const CipherMessage m0 = send_secure(t, ab, Party::alice, {1, 0});
  const CipherMessage m1 = send_secure(t, ab, Party::alice, {0, 1});
  const CipherMessage m2 = send_secure(t, ab, Party::bob, {1, 1});
  const CipherMessage m3 = send_secure(t, at, Party::alice, {1});
  CHECK(m0.sequence == 0);
  CHECK(m1.sequence == 1);
  CHECK(m2.sequence == 0);  // opposite direction counts separately
  CHECK(m3.sequence == 0);  // different pair
}

TEST_CASE("framed text survives the pad end to end") {
  Transcript t;
  Rng rng(12);
  for (const std::string text : {"9/1", "-7/3", "lambda=-31/7;c=12/5", ""}) {
    SharedKey key = test_key(random_bits(rng, (4 + text.size()) * 8));
    const CipherMessage msg = send_secure_text(t, key, Party::alice, text);
    CHECK(receive_text(key, msg) == text);
  }
}

TEST_CASE("text framing round trips and rejects garbage") {
  CHECK(unframe_text(frame_text("")) == "");
  CHECK(unframe_text(frame_text("-7/3")) == "-7/3");
  CHECK(unframe_text(frame_text("lambda=1/2;c=-3/1")) == "lambda=1/2;c=-3/1");
  CHECK_THROWS_AS(unframe_text(Bits{1, 0, 1}), std::invalid_argument);
  Bits frame = frame_text("ab");
  frame.pop_back();  // truncated
  frame.pop_back();
  CHECK_THROWS_AS(unframe_text(frame), std::invalid_argument);
}

TEST_CASE("hex encoding round trips odd bit lengths") {
  Rng rng(8);
  for (std::size_t n : {1u, 7u, 8u, 9u, 63u, 64u, 100u}) {
    const Bits b = random_bits(rng, n);
    CHECK(bits_from_hex(bits_to_hex(b), n) == b);
  }
}

TEST_CASE("ideal key establishment gives both ends the same bits") {
  Transcript t;
  Rng rng(9);
  const SharedKey key = establish_key(t, rng, Party::alice, Party::bob, 128);
  CHECK(key.bits.size() == 128);
  CHECK(key.consumed == 0);
  CHECK(key.has_endpoint(Party::alice));
  CHECK(key.has_endpoint(Party::bob));
  CHECK(!key.has_endpoint(Party::trent));
  REQUIRE(t.events().size() == 1);
  CHECK(t.events()[0].kind == Event::Kind::key);
  CHECK(t.events()[0].n_bits == 128);
}

TEST_CASE("transcript serializes and parses back") {
  Transcript t;
  Rng rng(10);
  run_p0(Rational(7), Rational(4), rng, TrentStrategy::honest(), t);

  std::stringstream full;
  t.to_jsonl(full);
  const Transcript parsed = Transcript::from_jsonl(full);
  REQUIRE(parsed.events().size() == t.events().size());
  for (std::size_t i = 0; i < t.events().size(); ++i) {
    CHECK(parsed.events()[i].seq == t.events()[i].seq);
    CHECK(parsed.events()[i].kind == t.events()[i].kind);
    CHECK(parsed.events()[i].from == t.events()[i].from);
    CHECK(parsed.events()[i].payload_hex == t.events()[i].payload_hex);
    CHECK(parsed.events()[i].plaintext == t.events()[i].plaintext);
  }

  std::stringstream redacted;
  t.to_jsonl(redacted, /*redact=*/true);
  std::string line;
  while (std::getline(redacted, line)) {
    const json j = json::parse(line);
    CHECK(!j.contains("plaintext"));
    CHECK(!j.contains("bits_hex"));
    CHECK(!j.contains("value"));
  }
}

TEST_CASE("corrupt transcript lines are reported") {
  std::stringstream bad("{\"seq\":0,\"kind\":\"nope\"}\n");
  CHECK_THROWS_AS(Transcript::from_jsonl(bad), std::runtime_error);
  std::stringstream notjson("hello\n");
  CHECK_THROWS_AS(Transcript::from_jsonl(notjson), std::runtime_error);
}

TEST_CASE("views partition a run's information correctly") {
  Transcript t;
  Rng rng(11);
  const P0Result res = run_p0(Rational(7), Rational(4), rng, TrentStrategy::honest(), t);
  const std::string alpha_text = res.record.alpha.str();
  const std::string beta_text = res.record.beta.str();
  const std::string lambda_text = res.record.params.lambda.str();

  SECTION("trent sees the blinded values and his announcement, nothing else") {
    bool saw_alpha = false, saw_beta = false, saw_announcement = false;
    for (const json& e : view(t, Observer::trent)) {
      CHECK(e["kind"] != "input");
      if (e.contains("plaintext")) {
        const std::string p = e["plaintext"].get<std::string>();
        // Nothing Trent can read mentions the blinding pair or the secrets.
        CHECK(p.find("lambda") == std::string::npos);
        saw_alpha = saw_alpha || p == alpha_text;
        saw_beta = saw_beta || p == beta_text;
      }
      if (e.contains("announcement")) saw_announcement = true;
    }
    CHECK(saw_alpha);
    CHECK(saw_beta);
    CHECK(saw_announcement);
  }

  SECTION("alice sees her secret, the blinding pair, alpha and R, but not beta") {
    bool saw_a = false, saw_params = false, saw_alpha = false, saw_announcement = false;
    for (const json& e : view(t, Observer::alice)) {
      if (e["kind"] == "input") {
        CHECK(e["from"] == "alice");
        if (e["name"] == "a") saw_a = true;
      }
      if (e.contains("plaintext")) {
        const std::string p = e["plaintext"].get<std::string>();
        CHECK(p != beta_text);
        if (p.find("lambda=" + lambda_text) != std::string::npos) saw_params = true;
        if (p == alpha_text) saw_alpha = true;
      }
      if (e["kind"] == "cipher" && e["from"] == "bob" && e["to"] == "trent")
        CHECK(!e.contains("plaintext"));
      if (e.contains("announcement")) saw_announcement = true;
    }
    CHECK(saw_a);
    CHECK(saw_params);
    CHECK(saw_alpha);
    CHECK(saw_announcement);
  }

  SECTION("an outside eavesdropper sees ciphertext and announcements only") {
    bool saw_announcement = false;
    for (const json& e : view(t, Observer::eve)) {
      CHECK(e["kind"] != "input");
      CHECK(!e.contains("plaintext"));
      CHECK(!e.contains("bits_hex"));
      if (e.contains("announcement")) saw_announcement = true;
    }
    CHECK(saw_announcement);
  }
}

TEST_CASE("same seed reproduces a byte-identical transcript") {
  std::stringstream s1, s2;
  {
    Transcript t;
    Rng rng(123);
    run_p0(Rational(7), Rational(4), rng, TrentStrategy::honest(), t);
    t.to_jsonl(s1);
  }
  {
    Transcript t;
    Rng rng(123);
    run_p0(Rational(7), Rational(4), rng, TrentStrategy::honest(), t);
    t.to_jsonl(s2);
  }
  CHECK(s1.str() == s2.str());
  CHECK(!s1.str().empty());
}
