#pragma once

#include <json.hpp>

#include <algorithm>
#include <cstdint>
#include <istream>
#include <map>
#include <optional>
#include <ostream>
#include <string>
#include <string_view>
#include <vector>

#include "pcmp/bb84.hpp"
#include "pcmp/bits.hpp"
#include "pcmp/errors.hpp"
#include "pcmp/rng.hpp"

namespace pcmp {

using json = nlohmann::json;

enum class Party { alice, bob, trent };
enum class Observer { alice, bob, trent, eve };

constexpr std::string_view name(Party p) {
  switch (p) {
    case Party::alice: return "alice";
    case Party::bob: return "bob";
    default: return "trent";
  }
}

constexpr std::string_view name(Observer o) {
  switch (o) {
    case Observer::alice: return "alice";
    case Observer::bob: return "bob";
    case Observer::trent: return "trent";
    default: return "eve";
  }
}

inline std::optional<Observer> observer_from_name(std::string_view s) {
  if (s == "alice") return Observer::alice;
  if (s == "bob") return Observer::bob;
  if (s == "trent") return Observer::trent;
  if (s == "eve") return Observer::eve;
  return std::nullopt;
}

constexpr bool is_party(Observer o, Party p) {
  return (o == Observer::alice && p == Party::alice) ||
         (o == Observer::bob && p == Party::bob) ||
         (o == Observer::trent && p == Party::trent);
}

// Pre-shared key material between two parties; the QKD stand-in. Pad bits
// are consumed strictly in order and never reused.
struct SharedKey {
  std::string key_id;
  Party end_a{};
  Party end_b{};
  Bits bits;
  std::size_t consumed = 0;

  std::size_t remaining() const { return bits.size() - consumed; }
  bool has_endpoint(Party p) const { return p == end_a || p == end_b; }
  Party peer(Party p) const { return p == end_a ? end_b : end_a; }
};

struct CipherMessage {
  Party sender{};
  Party receiver{};
  Bits ciphertext;
  std::uint64_t sequence = 0;  // strictly increasing per ordered (sender, receiver)
  std::string key_id;
  std::size_t key_offset = 0;  // first pad bit this message consumed
};

// One observable fact. Payload fields are optional: full-mode transcripts
// carry plaintexts and key bits so per-observer views can be reconstructed
// offline; redacted transcripts keep only what an outside wire-tap sees.
struct Event {
  enum class Kind { key, cipher, announce, input };

  std::uint64_t seq = 0;
  Kind kind{};
  std::string from;
  std::string to;

  // key events
  std::string key_id;
  std::string source;                    // "ideal" | "bb84"
  std::optional<std::string> bits_hex;   // secret; endpoints only

  // cipher events
  std::size_t n_bits = 0;                // key length or payload bit length
  std::size_t key_offset = 0;            // first pad bit the message consumed
  std::string payload_hex;
  std::optional<std::string> plaintext;  // secret; endpoints only

  // announce events: exactly one of r / equal is set
  std::optional<int> r;
  std::optional<bool> equal;

  // input events (a party's local value; visible to its owner alone)
  std::string input_name;
  std::optional<std::string> input_value;
};

inline std::string_view kind_name(Event::Kind k) {
  switch (k) {
    case Event::Kind::key: return "key";
    case Event::Kind::cipher: return "cipher";
    case Event::Kind::announce: return "announce";
    default: return "input";
  }
}

// Renders an event, optionally stripping every secret-bearing field.
inline json event_json(const Event& e, bool redact) {
  json j;
  j["seq"] = e.seq;
  j["kind"] = kind_name(e.kind);
  if (!e.from.empty()) j["from"] = e.from;
  if (!e.to.empty()) j["to"] = e.to;
  switch (e.kind) {
    case Event::Kind::key:
      j["key_id"] = e.key_id;
      j["n_bits"] = e.n_bits;
      j["source"] = e.source;
      if (!redact && e.bits_hex) j["bits_hex"] = *e.bits_hex;
      break;
    case Event::Kind::cipher:
      j["key_id"] = e.key_id;
      j["n_bits"] = e.n_bits;
      j["key_offset"] = e.key_offset;
      j["payload_hex"] = e.payload_hex;
      if (!redact && e.plaintext) j["plaintext"] = *e.plaintext;
      break;
    case Event::Kind::announce:
      if (e.r) j["announcement"] = json{{"r", *e.r}};
      if (e.equal) j["announcement"] = json{{"equal", *e.equal}};
      break;
    case Event::Kind::input:
      j["name"] = e.input_name;
      if (!redact && e.input_value) j["value"] = *e.input_value;
      break;
  }
  return j;
}

// Ordered record of everything that happened in a run. Append-only; the
// single owner serializes all writes.
class Transcript {
 public:
  Event& append(Event e) {
    e.seq = next_seq_++;
    events_.push_back(std::move(e));
    return events_.back();
  }

  const std::vector<Event>& events() const { return events_; }
  bool empty() const { return events_.empty(); }

  void clear() {
    events_.clear();
    next_seq_ = 0;
    key_count_ = 0;
    cipher_seq_.clear();
  }

  std::string next_key_id() { return "k" + std::to_string(key_count_++); }

  std::uint64_t next_cipher_sequence(Party from, Party to) {
    return cipher_seq_[{static_cast<int>(from), static_cast<int>(to)}]++;
  }

  void to_jsonl(std::ostream& os, bool redact = false) const {
    for (const Event& e : events_) os << event_json(e, redact).dump() << '\n';
  }

  static Transcript from_jsonl(std::istream& is) {
    Transcript t;
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(is, line)) {
      ++line_no;
      if (line.empty()) continue;
      json j;
      try {
        j = json::parse(line);
      } catch (const json::parse_error& err) {
        throw std::runtime_error("transcript line " + std::to_string(line_no) +
                                 ": " + err.what());
      }
      Event e;
      e.seq = j.at("seq").get<std::uint64_t>();
      const std::string kind = j.at("kind").get<std::string>();
      e.from = j.value("from", "");
      e.to = j.value("to", "");
      if (kind == "key") {
        e.kind = Event::Kind::key;
        e.key_id = j.at("key_id").get<std::string>();
        e.n_bits = j.at("n_bits").get<std::size_t>();
        e.source = j.value("source", "ideal");
        if (j.contains("bits_hex")) e.bits_hex = j["bits_hex"].get<std::string>();
      } else if (kind == "cipher") {
        e.kind = Event::Kind::cipher;
        e.key_id = j.at("key_id").get<std::string>();
        e.n_bits = j.at("n_bits").get<std::size_t>();
        e.key_offset = j.value("key_offset", std::size_t{0});
        e.payload_hex = j.at("payload_hex").get<std::string>();
        if (j.contains("plaintext")) e.plaintext = j["plaintext"].get<std::string>();
      } else if (kind == "announce") {
        e.kind = Event::Kind::announce;
        const json& a = j.at("announcement");
        if (a.contains("r")) e.r = a["r"].get<int>();
        if (a.contains("equal")) e.equal = a["equal"].get<bool>();
      } else if (kind == "input") {
        e.kind = Event::Kind::input;
        e.input_name = j.at("name").get<std::string>();
        if (j.contains("value")) e.input_value = j["value"].get<std::string>();
      } else {
        throw std::runtime_error("transcript line " + std::to_string(line_no) +
                                 ": unknown event kind '" + kind + "'");
      }
      // Keep the recorded sequence numbers rather than restamping.
      t.next_seq_ = std::max(t.next_seq_, e.seq + 1);
      t.events_.push_back(std::move(e));
    }
    return t;
  }

 private:
  std::vector<Event> events_;
  std::uint64_t next_seq_ = 0;
  std::size_t key_count_ = 0;
  std::map<std::pair<int, int>, std::uint64_t> cipher_seq_;
};

// Ideal key source: both endpoints end up with the same uniform bits.
inline SharedKey establish_key(Transcript& t, Rng& rng, Party a, Party b,
                               std::size_t n_bits) {
  if (n_bits < 1) throw std::invalid_argument("establish_key: n_bits must be >= 1");
  SharedKey key{t.next_key_id(), a, b, random_bits(rng, n_bits), 0};
  Event e;
  e.kind = Event::Kind::key;
  e.from = std::string(name(a));
  e.to = std::string(name(b));
  e.key_id = key.key_id;
  e.n_bits = n_bits;
  e.source = "ideal";
  e.bits_hex = bits_to_hex(key.bits);
  t.append(std::move(e));
  return key;
}

// BB84-backed key source: repeats the toy exchange (growing the pulse count)
// until enough sifted bits survive sampling. Throws Bb84Aborted like the
// underlying exchange when the error estimate crosses the threshold.
inline SharedKey establish_key_bb84(Transcript& t, Rng& rng, Party a, Party b,
                                    std::size_t n_bits, const Bb84Config& cfg = {}) {
  if (n_bits < 1) throw std::invalid_argument("establish_key_bb84: n_bits must be >= 1");
  std::size_t pulses = std::max<std::size_t>(64, 8 * n_bits);
  for (int attempt = 0; attempt < 16; ++attempt, pulses *= 2) {
    Bb84Result res = bb84_exchange(pulses, rng, cfg);
    if (res.key_a.size() < n_bits) continue;
    SharedKey key{t.next_key_id(), a, b,
                  Bits(res.key_a.begin(), res.key_a.begin() + static_cast<long>(n_bits)),
                  0};
    Event e;
    e.kind = Event::Kind::key;
    e.from = std::string(name(a));
    e.to = std::string(name(b));
    e.key_id = key.key_id;
    e.n_bits = n_bits;
    e.source = "bb84";
    e.bits_hex = bits_to_hex(key.bits);
    t.append(std::move(e));
    return key;
  }
  throw ProtocolError("establish_key_bb84: exchange never yielded enough bits");
}

// One-time-pad encryption of a bit string; consumes key bits exactly once
// and records the ciphertext. The optional note is the plaintext rendering
// stored in full-mode transcripts.
inline CipherMessage send_secure(Transcript& t, SharedKey& key, Party sender,
                                 const Bits& plaintext,
                                 std::optional<std::string> plaintext_note = std::nullopt) {
  if (!key.has_endpoint(sender))
    throw std::invalid_argument("send_secure: sender does not hold this key");
  if (key.remaining() < plaintext.size())
    throw KeyExhausted(plaintext.size(), key.remaining());

  CipherMessage msg;
  msg.sender = sender;
  msg.receiver = key.peer(sender);
  msg.key_id = key.key_id;
  msg.key_offset = key.consumed;
  msg.ciphertext.resize(plaintext.size());
  for (std::size_t i = 0; i < plaintext.size(); ++i)
    msg.ciphertext[i] = plaintext[i] ^ key.bits[key.consumed + i];
  key.consumed += plaintext.size();
  msg.sequence = t.next_cipher_sequence(msg.sender, msg.receiver);

  Event e;
  e.kind = Event::Kind::cipher;
  e.from = std::string(name(msg.sender));
  e.to = std::string(name(msg.receiver));
  e.key_id = msg.key_id;
  e.n_bits = msg.ciphertext.size();
  e.key_offset = msg.key_offset;
  e.payload_hex = bits_to_hex(msg.ciphertext);
  e.plaintext = std::move(plaintext_note);
  t.append(std::move(e));
  return msg;
}

inline Bits decrypt(const SharedKey& key, const CipherMessage& msg) {
  if (msg.key_offset + msg.ciphertext.size() > key.bits.size())
    throw KeyExhausted(msg.ciphertext.size(), key.bits.size() - msg.key_offset);
  Bits out(msg.ciphertext.size());
  for (std::size_t i = 0; i < msg.ciphertext.size(); ++i)
    out[i] = msg.ciphertext[i] ^ key.bits[msg.key_offset + i];
  return out;
}

inline CipherMessage send_secure_text(Transcript& t, SharedKey& key, Party sender,
                                      std::string_view text) {
  return send_secure(t, key, sender, frame_text(text), std::string(text));
}

inline std::string receive_text(const SharedKey& key, const CipherMessage& msg) {
  return unframe_text(decrypt(key, msg));
}

inline void announce_bit(Transcript& t, Party from, int r) {
  Event e;
  e.kind = Event::Kind::announce;
  e.from = std::string(name(from));
  e.r = r;
  t.append(std::move(e));
}

inline void announce_equal(Transcript& t, Party from, bool equal) {
  Event e;
  e.kind = Event::Kind::announce;
  e.from = std::string(name(from));
  e.equal = equal;
  t.append(std::move(e));
}

inline void record_input(Transcript& t, Party who, std::string input_name,
                         std::string value) {
  Event e;
  e.kind = Event::Kind::input;
  e.from = std::string(name(who));
  e.input_name = std::move(input_name);
  e.input_value = std::move(value);
  t.append(std::move(e));
}

// Exactly the events an observer can see. Public announcements are visible
// to everyone; key bits and plaintexts only where the observer is an
// endpoint; local inputs only to their owner. Everyone else gets ciphertext
// and key-establishment skeletons, which is all an external wire-tap has.
inline std::vector<json> view(const Transcript& t, Observer who) {
  std::vector<json> out;
  for (const Event& e : t.events()) {
    const bool is_from = !e.from.empty() && e.from == name(who);
    const bool is_to = !e.to.empty() && e.to == name(who);
    const bool endpoint = is_from || is_to;
    switch (e.kind) {
      case Event::Kind::key:
      case Event::Kind::cipher:
        out.push_back(event_json(e, /*redact=*/!endpoint));
        break;
      case Event::Kind::announce:
        out.push_back(event_json(e, false));
        break;
      case Event::Kind::input:
        if (is_from) out.push_back(event_json(e, false));
        break;
    }
  }
  return out;
}

}  // namespace pcmp
