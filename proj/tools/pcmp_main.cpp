// pcmp: three-party private comparison on one-time-pad channels.
//
// Subcommands: compare (ordering with decoy-round auditing), qpc (private
// equality), attack (detection probability experiments), leakage (prior-art
// leak analysis), views (per-observer transcript filtering), bb84 (toy key
// exchange). Exit codes: 0 clean verdict, 1 usage/config error, 2 cheat or
// tamper detected.

#include <CLI11.hpp>

#include <fstream>
#include <iostream>
#include <optional>
#include <set>
#include <string>

#include "pcmp/pcmp.hpp"

namespace {

using namespace pcmp;

constexpr int kExitOk = 0;
constexpr int kExitUsage = 1;
constexpr int kExitCheat = 2;

Rational parse_secret(const std::string& text) {
  try {
    return Rational::parse(text);
  } catch (const std::exception&) {
    throw CLI::ValidationError("secrets must be exact literals like 9 or -7/3, got '" +
                               text + "'");
  }
}

// --trent grammar: honest | flip-rounds:1,3 | flip-random:2 | equality-lie:all
TrentStrategy parse_trent(const std::string& text) {
  if (text == "honest") return TrentStrategy::honest();
  const auto colon = text.find(':');
  const std::string kind = text.substr(0, colon);
  const std::string arg = colon == std::string::npos ? "" : text.substr(colon + 1);

  auto parse_rounds = [&](bool equality) {
    if (arg == "all")
      return equality ? TrentStrategy::equality_lie_all() : TrentStrategy::flip_all();
    std::set<std::size_t> rounds;
    std::size_t pos = 0;
    while (pos < arg.size()) {
      const auto comma = arg.find(',', pos);
      const std::string item =
          arg.substr(pos, comma == std::string::npos ? std::string::npos : comma - pos);
      try {
        rounds.insert(std::stoull(item));
      } catch (const std::exception&) {
        throw CLI::ValidationError("bad round list in --trent: '" + arg + "'");
      }
      if (comma == std::string::npos) break;
      pos = comma + 1;
    }
    if (rounds.empty()) throw CLI::ValidationError("--trent " + kind + " needs rounds");
    return equality ? TrentStrategy::equality_lie(rounds) : TrentStrategy::flip(rounds);
  };

  if (kind == "flip-rounds") return parse_rounds(false);
  if (kind == "equality-lie") return parse_rounds(true);
  if (kind == "flip-random") {
    try {
      return TrentStrategy::flip_random(std::stoull(arg));
    } catch (const std::exception&) {
      throw CLI::ValidationError("--trent flip-random needs a count, got '" + arg + "'");
    }
  }
  throw CLI::ValidationError("unknown --trent strategy '" + text + "'");
}

struct CommonOpts {
  std::uint64_t seed = 0;
  std::string format = "table";
  std::string out;
  bool redact = false;
  unsigned bits = 64;
  std::string key_source = "ideal";
  std::string trent = "honest";

  ProtocolConfig config() const {
    ProtocolConfig cfg;
    cfg.magnitude_bits = bits;
    cfg.key_source = key_source == "bb84" ? ProtocolConfig::KeySource::bb84
                                          : ProtocolConfig::KeySource::ideal;
    return cfg;
  }
};

void add_common(CLI::App* cmd, CommonOpts& opts) {
  cmd->add_option("--seed", opts.seed, "Run seed; fully determines the run")
      ->default_val(0);
  cmd->add_option("--format", opts.format, "Output format")
      ->check(CLI::IsMember({"table", "json"}))
      ->default_val("table");
  cmd->add_option("--out", opts.out, "Write the run transcript (JSON Lines) here");
  cmd->add_flag("--redact", opts.redact,
                "Strip plan and secret fields from written transcript/outcome");
  cmd->add_option("--bits", opts.bits, "Magnitude bits for blinding parameters")
      ->check(CLI::Range(1u, 256u))
      ->default_val(64);
  cmd->add_option("--key-source", opts.key_source, "Key material source")
      ->check(CLI::IsMember({"ideal", "bb84"}))
      ->default_val("ideal");
  cmd->add_option("--trent", opts.trent,
                  "Trent behavior: honest | flip-rounds:1,3 | flip-random:k | "
                  "equality-lie:all");
}

void write_transcript(const Transcript& t, const CommonOpts& opts) {
  if (opts.out.empty()) return;
  std::ofstream os(opts.out, std::ios::binary);
  if (!os) throw CLI::ValidationError("cannot open --out file '" + opts.out + "'");
  t.to_jsonl(os, opts.redact);
}

// Report subcommands print to stdout and, with --out, to a file as well.
void emit(const std::string& text, const std::string& out_path) {
  std::cout << text;
  if (out_path.empty()) return;
  std::ofstream os(out_path, std::ios::binary);
  if (!os) throw CLI::ValidationError("cannot open --out file '" + out_path + "'");
  os << text;
}

int run_compare(const std::string& a_text, const std::string& b_text, std::size_t n,
                const std::string& decoys, const std::string& outcome_path,
                const CommonOpts& opts) {
  const Rational a = parse_secret(a_text);
  const Rational b = parse_secret(b_text);
  const TrentStrategy trent = parse_trent(opts.trent);
  const DecoyScheme scheme =
      decoys == "fixed-2-1" ? DecoyScheme::fixed_2_1 : DecoyScheme::randomized;

  Rng rng(opts.seed);
  Transcript t;
  const P1Outcome outcome = run_p1(a, b, n, rng, trent, t, opts.config(), scheme);
  write_transcript(t, opts);
  if (!outcome_path.empty()) {
    std::ofstream os(outcome_path, std::ios::binary);
    if (!os) throw CLI::ValidationError("cannot open outcome file '" + outcome_path + "'");
    os << outcome.to_json(opts.redact).dump(2) << "\n";
  }

  if (opts.format == "json")
    std::cout << outcome.to_json(opts.redact).dump() << "\n";
  else
    std::cout << to_string(outcome.verdict) << "\n";
  return outcome.verdict == P1Verdict::cheat_detected ? kExitCheat : kExitOk;
}

int run_qpc(const std::string& a_text, const std::string& b_text, std::size_t n,
            std::optional<std::size_t> m, const std::string& outcome_path,
            const CommonOpts& opts) {
  const Rational a = parse_secret(a_text);
  const Rational b = parse_secret(b_text);
  const TrentStrategy trent = parse_trent(opts.trent);

  Rng rng(opts.seed);
  const std::size_t m_value = m ? *m : sample_m(n, rng);
  Transcript t;
  const P2Outcome outcome = run_p2(a, b, n, m_value, rng, trent, t, opts.config());
  write_transcript(t, opts);
  if (!outcome_path.empty()) {
    std::ofstream os(outcome_path, std::ios::binary);
    if (!os) throw CLI::ValidationError("cannot open outcome file '" + outcome_path + "'");
    os << outcome.to_json(opts.redact).dump(2) << "\n";
  }

  if (opts.format == "json")
    std::cout << outcome.to_json(opts.redact).dump() << "\n";
  else
    std::cout << to_string(outcome.verdict) << "\n";
  return outcome.verdict == P2Verdict::cheat_detected ? kExitCheat : kExitOk;
}

int run_attack(const std::string& protocol, std::size_t n, std::size_t k,
               std::size_t trials, bool exhaustive, unsigned bits,
               const CommonOpts& opts) {
  const ProtocolKind kind = protocol == "p2" ? ProtocolKind::p2 : ProtocolKind::p1;
  ProtocolConfig cfg;
  cfg.magnitude_bits = bits;

  if (exhaustive) {
    const ExhaustiveDetection result = exhaustive_detection(kind, n, k, opts.seed, cfg);
    if (opts.format == "json") {
      std::cout << result.to_json().dump() << "\n";
    } else {
      std::cout << "cases     " << result.cases << "\n"
                << "detected  " << result.detected << "\n"
                << "fraction  "
                << static_cast<double>(result.detected) / static_cast<double>(result.cases)
                << "\n";
    }
    return kExitOk;
  }

  const DetectionEstimate est = estimate_detection(kind, n, k, trials, opts.seed, cfg);
  if (opts.format == "json")
    std::cout << est.to_json().dump() << "\n";
  else
    std::cout << est.table();
  return kExitOk;
}

int run_leakage(unsigned n_bits, bool oracle, const CommonOpts& opts) {
  if (n_bits < 1 || n_bits > 64)
    throw CLI::ValidationError("--bits must be in [1, 64]");
  LeakageReport report = leakage_report(n_bits);

  json oracle_json;
  std::string oracle_text;
  if (oracle) {
    if (n_bits > 8)
      throw CLI::ValidationError("--oracle enumerates all pairs; limited to --bits <= 8");
    const std::vector<std::uint64_t> census = hamming_pair_census(n_bits);
    bool prob_ok = true;
    double max_i_err = 0.0;
    const BigInt total = BigInt(1) << (2 * n_bits);
    for (unsigned r = 0; r <= n_bits; ++r) {
      prob_ok = prob_ok && Rational(BigInt(census[r]), total) == report.per_r[r].prob;
      const double i_oracle =
          static_cast<double>(n_bits) -
          std::log2(static_cast<double>(census[r]) / std::pow(2.0, n_bits));
      max_i_err = std::max(max_i_err, std::abs(i_oracle - report.per_r[r].i_bits));
    }
    oracle_json = {{"prob_exact_match", prob_ok}, {"max_I_abs_error", max_i_err}};
    oracle_text = "oracle: prob " + std::string(prob_ok ? "exact match" : "MISMATCH") +
                  ", max |I error| = " + std::to_string(max_i_err) + "\n";
    if (!prob_ok || max_i_err > 1e-12) {
      std::cerr << "leakage oracle disagrees with closed form\n";
      return kExitUsage;
    }
  }

  if (opts.format == "json") {
    json j = report.to_json();
    if (oracle) j["oracle"] = oracle_json;
    std::cout << j.dump() << "\n";
  } else {
    std::cout << report.table() << oracle_text;
  }
  return kExitOk;
}

int run_views(const std::string& path, const std::string& observer_name) {
  const auto observer = observer_from_name(observer_name);
  if (!observer)
    throw CLI::ValidationError("--as must be one of alice, bob, trent, eve");
  std::ifstream is(path, std::ios::binary);
  if (!is) {
    std::cerr << "cannot open transcript '" << path << "'\n";
    return kExitUsage;
  }
  Transcript t;
  try {
    t = Transcript::from_jsonl(is);
  } catch (const std::exception& e) {
    std::cerr << "corrupt transcript: " << e.what() << "\n";
    return kExitUsage;
  }
  for (const json& event : view(t, *observer)) std::cout << event.dump() << "\n";
  return kExitOk;
}

int run_bb84(std::size_t pulses, bool eve, double sample_fraction, double threshold,
             const CommonOpts& opts) {
  Bb84Config cfg;
  cfg.eve = eve ? Bb84Config::Eve::intercept_resend : Bb84Config::Eve::none;
  cfg.sample_fraction = sample_fraction;
  cfg.qber_threshold = threshold;
  Rng rng(opts.seed);
  try {
    const Bb84Result res = bb84_exchange(pulses, rng, cfg);
    if (opts.format == "json") {
      std::cout << json{{"aborted", false},
                        {"qber", res.qber},
                        {"sifted_len", res.sifted_len},
                        {"sampled_len", res.sampled_len},
                        {"key_len", res.key_a.size()},
                        {"keys_equal", res.key_a == res.key_b}}
                       .dump()
                << "\n";
    } else {
      std::cout << "pulses      " << pulses << "\n"
                << "sifted      " << res.sifted_len << "\n"
                << "sampled     " << res.sampled_len << "\n"
                << "qber        " << res.qber << "\n"
                << "key length  " << res.key_a.size() << "\n"
                << "keys equal  " << (res.key_a == res.key_b ? "yes" : "no") << "\n";
    }
    return kExitOk;
  } catch (const Bb84Aborted& e) {
    if (opts.format == "json")
      std::cout << json{{"aborted", true}, {"qber", e.qber}}.dump() << "\n";
    else
      std::cout << "aborted (qber " << e.qber << " above threshold " << threshold << ")\n";
    return kExitCheat;
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Three-party private comparison protocols on one-time-pad channels"};
  app.require_subcommand(1);

  // compare
  auto* compare = app.add_subcommand("compare", "Which secret is larger (n-round run)");
  std::string cmp_a, cmp_b, cmp_decoys = "randomized", cmp_outcome;
  std::size_t cmp_n = 20;
  CommonOpts cmp_opts;
  compare->add_option("--a", cmp_a, "Alice's secret, e.g. 9 or -7/3")->required();
  compare->add_option("--b", cmp_b, "Bob's secret")->required();
  compare->add_option("--n", cmp_n, "Total rounds (1 real, n-1 decoys)")->default_val(20);
  compare->add_option("--decoys", cmp_decoys, "Decoy scheme")
      ->check(CLI::IsMember({"randomized", "fixed-2-1"}))
      ->default_val("randomized");
  compare->add_option("--outcome", cmp_outcome, "Write outcome JSON here");
  add_common(compare, cmp_opts);

  // qpc
  auto* qpc = app.add_subcommand("qpc", "Whether the secrets are equal");
  std::string qpc_a, qpc_b, qpc_outcome;
  std::size_t qpc_n = 20;
  std::optional<std::size_t> qpc_m;
  CommonOpts qpc_opts;
  qpc->add_option("--a", qpc_a, "Alice's secret")->required();
  qpc->add_option("--b", qpc_b, "Bob's secret")->required();
  qpc->add_option("--n", qpc_n, "Total rounds")->default_val(20);
  qpc->add_option("--m", qpc_m, "Planted-equal count (default: seeded draw from [n/4, n/2])");
  qpc->add_option("--outcome", qpc_outcome, "Write outcome JSON here");
  add_common(qpc, qpc_opts);

  // attack
  auto* attack = app.add_subcommand("attack", "Detection probability for a lying Trent");
  std::string atk_protocol = "p1";
  std::size_t atk_n = 20, atk_k = 1, atk_trials = 100000;
  bool atk_exhaustive = false;
  unsigned atk_bits = 16;
  CommonOpts atk_opts;
  attack->add_option("--protocol", atk_protocol, "Protocol under attack")
      ->check(CLI::IsMember({"p1", "p2"}))
      ->default_val("p1");
  attack->add_option("--n", atk_n, "Rounds per run")->default_val(20);
  attack->add_option("--k", atk_k, "Announcements Trent flips per run")->default_val(1);
  attack->add_option("--trials", atk_trials, "Monte Carlo trials")->default_val(100000);
  attack->add_flag("--exhaustive", atk_exhaustive,
                   "Enumerate all (flip set, i0) combinations instead of sampling");
  attack->add_option("--bits", atk_bits, "Blinding magnitude bits for the trial runs")
      ->check(CLI::Range(1u, 256u))
      ->default_val(16);
  attack->add_option("--seed", atk_opts.seed, "Experiment seed")->default_val(0);
  attack->add_option("--format", atk_opts.format, "Output format")
      ->check(CLI::IsMember({"table", "json"}))
      ->default_val("table");

  // leakage
  auto* leakage = app.add_subcommand(
      "leakage", "Leak profile of protocols that reveal the Hamming distance");
  unsigned leak_bits = 0;
  bool leak_oracle = false;
  CommonOpts leak_opts;
  leakage->add_option("--bits", leak_bits, "Secret length N in bits")->required();
  leakage->add_flag("--oracle", leak_oracle,
                    "Also run the exhaustive pair-counting check (N <= 8)");
  leakage->add_option("--format", leak_opts.format, "Output format")
      ->check(CLI::IsMember({"table", "json"}))
      ->default_val("table");

  // views
  auto* views = app.add_subcommand("views", "Print one observer's view of a transcript");
  std::string views_path, views_as;
  views->add_option("transcript", views_path, "Transcript file (JSON Lines)")->required();
  views->add_option("--as", views_as, "Observer: alice | bob | trent | eve")->required();

  // bb84
  auto* bb84 = app.add_subcommand("bb84", "Toy key exchange with optional eavesdropper");
  std::size_t bb84_pulses = 1024;
  bool bb84_eve = false;
  double bb84_fraction = 0.5, bb84_threshold = 0.11;
  CommonOpts bb84_opts;
  bb84->add_option("--pulses", bb84_pulses, "Pulses to send")->default_val(1024);
  bb84->add_flag("--eve", bb84_eve, "Intercept-resend eavesdropper on the line");
  bb84->add_option("--sample-fraction", bb84_fraction, "Sifted fraction sacrificed for QBER")
      ->check(CLI::Range(0.0, 1.0))
      ->default_val(0.5);
  bb84->add_option("--threshold", bb84_threshold, "QBER abort threshold")
      ->check(CLI::Range(0.0, 1.0))
      ->default_val(0.11);
  bb84->add_option("--seed", bb84_opts.seed, "Exchange seed")->default_val(0);
  bb84->add_option("--format", bb84_opts.format, "Output format")
      ->check(CLI::IsMember({"table", "json"}))
      ->default_val("table");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);  // prints the message
    return kExitUsage;
  }

  try {
    if (compare->parsed())
      return run_compare(cmp_a, cmp_b, cmp_n, cmp_decoys, cmp_outcome, cmp_opts);
    if (qpc->parsed())
      return run_qpc(qpc_a, qpc_b, qpc_n, qpc_m, qpc_outcome, qpc_opts);
    if (attack->parsed())
      return run_attack(atk_protocol, atk_n, atk_k, atk_trials, atk_exhaustive, atk_bits,
                        atk_opts);
    if (leakage->parsed()) return run_leakage(leak_bits, leak_oracle, leak_opts);
    if (views->parsed()) return run_views(views_path, views_as);
    if (bb84->parsed())
      return run_bb84(bb84_pulses, bb84_eve, bb84_fraction, bb84_threshold, bb84_opts);
  } catch (const CLI::Error& e) {
    std::cerr << e.what() << "\n";
    return kExitUsage;
  } catch (const ProtocolError& e) {
    std::cerr << e.what() << "\n";
    return kExitUsage;
  } catch (const std::exception& e) {
    std::cerr << e.what() << "\n";
    return kExitUsage;
  }
  return kExitUsage;
}
