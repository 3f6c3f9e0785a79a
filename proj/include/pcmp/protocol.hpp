#pragma once

#include <set>
#include <string>

#include "pcmp/adversary.hpp"
#include "pcmp/blinding.hpp"
#include "pcmp/channel.hpp"

namespace pcmp {

struct ProtocolConfig {
  enum class KeySource { ideal, bb84 };

  unsigned magnitude_bits = 64;     // grid for the blinding parameters c, lambda
  KeySource key_source = KeySource::ideal;
  Bb84Config bb84;
  std::size_t pad_block_bits = 4096;  // granularity of key establishment
};

namespace detail {

inline std::size_t framed_bits(std::string_view text) { return (4 + text.size()) * 8; }

inline SharedKey make_key(Transcript& t, Rng& rng, Party x, Party y, std::size_t n_bits,
                          const ProtocolConfig& cfg) {
  return cfg.key_source == ProtocolConfig::KeySource::ideal
             ? establish_key(t, rng, x, y, n_bits)
             : establish_key_bb84(t, rng, x, y, n_bits, cfg.bb84);
}

// Key material between one pair of parties. Messages consume successive
// slices of a pad block; a fresh block is established when the current one
// cannot cover the next message, so pad bits are never reused and the
// consumed offset only moves forward.
class PadPool {
 public:
  PadPool(Party x, Party y) : x_(x), y_(y) {}

  CipherMessage send_text(Transcript& t, Rng& rng, Party sender, std::string_view text,
                          const ProtocolConfig& cfg) {
    const std::size_t need = framed_bits(text);
    if (keys_.empty() || keys_.back().remaining() < need)
      keys_.push_back(make_key(t, rng, x_, y_, std::max(need, cfg.pad_block_bits), cfg));
    return send_secure_text(t, keys_.back(), sender, text);
  }

  const std::vector<SharedKey>& keys() const { return keys_; }

 private:
  Party x_;
  Party y_;
  std::vector<SharedKey> keys_;
};

struct ChannelSet {
  PadPool ab{Party::alice, Party::bob};
  PadPool at{Party::alice, Party::trent};
  PadPool bt{Party::bob, Party::trent};
};

// One blinded exchange: fresh (lambda, c) shared over the Alice-Bob pad,
// alpha and beta to Trent over their own pads, Trent's honest announcement
// possibly inverted by the strategy's flip set.
inline RoundRecord run_round(std::size_t index, const Rational& a_i, const Rational& b_i,
                             bool equality_mode, const std::set<std::size_t>& flips,
                             Rng& rng, Transcript& t, ChannelSet& channels,
                             const ProtocolConfig& cfg) {
  BlindingParams params;
  params.lambda = sample_scalar(rng, cfg.magnitude_bits, /*nonzero=*/true);
  params.c = sample_scalar(rng, cfg.magnitude_bits, /*nonzero=*/false);

  const std::string params_text = "lambda=" + params.lambda.str() + ";c=" + params.c.str();
  channels.ab.send_text(t, rng, Party::alice, params_text, cfg);

  const BlindedValue alpha = blind(a_i, params);
  channels.at.send_text(t, rng, Party::alice, alpha.value.str(), cfg);

  const BlindedValue beta = blind(b_i, params);
  channels.bt.send_text(t, rng, Party::bob, beta.value.str(), cfg);

  RoundRecord rec;
  rec.index = index;
  rec.a = a_i;
  rec.b = b_i;
  rec.params = params;
  rec.alpha = alpha.value;
  rec.beta = beta.value;
  rec.d = alpha.value - beta.value;

  if (equality_mode) {
    const EqualityAnnouncement honest = trent_equal(alpha, beta);
    const EqualityAnnouncement announced = apply_strategy(flips, index, honest);
    announce_equal(t, Party::trent, announced.equal);
    rec.announcement = announced;
    rec.trent_lied = announced.equal != honest.equal;
  } else {
    const Announcement honest = trent_compare(alpha, beta);
    const Announcement announced = apply_strategy(flips, index, honest);
    announce_bit(t, Party::trent, announced.r);
    rec.announcement = announced;
    rec.trent_lied = announced.r != honest.r;
  }
  return rec;
}

inline void reject_equality_lie(const TrentStrategy& trent) {
  if (trent.kind == TrentStrategy::Kind::equality_lie)
    throw std::invalid_argument("equality_lie only applies to equality runs");
}

}  // namespace detail

inline json round_json(const RoundRecord& rec, bool redact = false) {
  json j;
  j["i"] = rec.index;
  j["alpha"] = rec.alpha.str();
  j["beta"] = rec.beta.str();
  if (std::holds_alternative<Announcement>(rec.announcement))
    j["announcement"] = json{{"r", rec.ordering_announcement().r}};
  else
    j["announcement"] = json{{"equal", rec.equality_announcement().equal}};
  if (!redact) {
    j["a"] = rec.a.str();
    j["b"] = rec.b.str();
    j["lambda"] = rec.params.lambda.str();
    j["c"] = rec.params.c.str();
    j["d"] = rec.d.str();
    j["trent_lied"] = rec.trent_lied;
  }
  return j;
}

struct P0Result {
  Verdict verdict{};
  RoundRecord record;
};

// The single-round ordering protocol. A lying Trent flips the verdict
// undetected here; the multi-round variant exists for exactly that reason.
inline P0Result run_p0(const Rational& a, const Rational& b, Rng& rng,
                       const TrentStrategy& trent, Transcript& t,
                       const ProtocolConfig& cfg = {}) {
  if (a == b) throw EqualSecrets();
  detail::reject_equality_lie(trent);
  record_input(t, Party::alice, "a", a.str());
  record_input(t, Party::bob, "b", b.str());
  const std::set<std::size_t> flips = trent.materialize(1, rng);
  detail::ChannelSet channels;
  RoundRecord rec =
      detail::run_round(1, a, b, /*equality_mode=*/false, flips, rng, t, channels, cfg);
  const Verdict verdict = decode_verdict(rec.params.lambda, rec.ordering_announcement());
  return {verdict, std::move(rec)};
}

}  // namespace pcmp
