// Command-line front end: solve, bounds, cost, sweep, surface, verify, probe, ledger.

#include "auditgame/bounds.hpp"
#include "auditgame/casestudy.hpp"
#include "auditgame/config_io.hpp"
#include "auditgame/cost.hpp"
#include "auditgame/equilibrium.hpp"
#include "auditgame/errors.hpp"
#include "auditgame/ledger.hpp"
#include "auditgame/oracle.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <cmath>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <random>
#include <sstream>

#include <sys/stat.h>

using namespace auditgame;
using nlohmann::json;
namespace fs = std::filesystem;

namespace {

struct Options {
  std::string config;
  std::string out;
  std::string format;
  std::string mode = "rational";
  std::optional<int> resolution;
  std::uint64_t seed = 1;
  int workers = 1;
  std::string qmin_grid, c_grid, k_grid, coalition;
  std::optional<std::string> budget;
  bool allow_fine_below_cost = false;
  int samples = 0;

  // ledger
  std::string dir = "ledger-state";
  std::string key_out;
  std::string owner_pk;
  std::uint64_t coin_id = 0;
  std::int64_t valid_from = 0, valid_until = 0;
  std::string note;
  std::vector<std::string> coin_files;
  std::string goods;
  std::int64_t price = 0;
  std::string request, secret_key, receipt;
};

void emit(const Options& opt, const std::string& text) {
  if (opt.out.empty() || opt.out == "-") {
    std::cout << text;
    return;
  }
  std::ofstream out(opt.out, std::ios::binary);
  if (!out) throw InputError("cannot write output file '" + opt.out + "'");
  out << text;
}

std::string dump(const json& doc) { return doc.dump(2) + "\n"; }

std::string read_text(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw InputError("cannot read '" + path.string() + "'");
  std::stringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

NumericMode mode_of(const Options& opt) { return parse_numeric_mode(opt.mode); }

GameConfig<Rational> load(const Options& opt) {
  if (opt.config.empty()) throw InputError("--config is required for this command");
  return load_config(opt.config, opt.allow_fine_below_cost);
}

template <class T>
GameConfig<T> convert(const GameConfig<Rational>& cfg) {
  if constexpr (std::is_same_v<T, double>)
    return to_double_config(cfg);
  else
    return cfg;
}

// "a,b,c" or "from:to:step".
std::vector<Rational> parse_grid(const std::string& text, const std::string& flag) {
  std::vector<Rational> out;
  if (text.find(':') != std::string::npos) {
    std::vector<std::string> parts;
    std::stringstream ss(text);
    for (std::string p; std::getline(ss, p, ':');) parts.push_back(p);
    if (parts.size() != 3) throw InputError(flag + " range must be from:to:step");
    out = rational_range(parse_rational(parts[0]), parse_rational(parts[1]), parse_rational(parts[2]));
  } else {
    std::stringstream ss(text);
    for (std::string p; std::getline(ss, p, ',');) out.push_back(parse_rational(p));
  }
  if (out.empty()) throw InputError(flag + " is empty");
  return out;
}

void apply_overrides(SweepSpec& spec, const Options& opt) {
  if (!opt.config.empty()) {
    const auto base = load_config(opt.config, true);
    if (base.size() != 2) throw InputError("sweep base config must have exactly 2 types");
    spec.base = base;
  }
  if (!opt.qmin_grid.empty()) spec.q_min_grid = parse_grid(opt.qmin_grid, "--qmin-grid");
  if (!opt.c_grid.empty()) spec.c_grid = parse_grid(opt.c_grid, "--c-grid");
  if (!opt.k_grid.empty()) spec.k_grid = parse_grid(opt.k_grid, "--k-grid");
  if (!opt.coalition.empty()) {
    spec.coalition_grid.clear();
    for (const auto& r : parse_grid(opt.coalition, "--coalition")) {
      if (boost::multiprecision::denominator(r) != 1) throw InputError("--coalition values must be integers");
      spec.coalition_grid.push_back(boost::multiprecision::numerator(r).convert_to<long long>());
    }
  }
  spec.validate();
}

// Monte-Carlo estimate of the average user and administrator payoffs.
template <class T>
json monte_carlo(const EquilibriumResult<T>& r, const GameConfig<T>& cfg, int samples, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::vector<double> prior;
  for (const auto& q : cfg.prior) prior.push_back(to_double(q));
  std::discrete_distribution<std::size_t> draw_type(prior.begin(), prior.end());
  std::vector<std::discrete_distribution<std::size_t>> draw_signal;
  for (const auto& row : r.strategy().matrix) {
    std::vector<double> w;
    for (const auto& x : row) w.push_back(to_double(x));
    draw_signal.emplace_back(w.begin(), w.end());
  }
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  double su = 0, su2 = 0, sa = 0, sa2 = 0;
  for (int i = 0; i < samples; ++i) {
    const auto m = draw_type(rng);
    const auto s = draw_signal[m](rng);
    const int audit = unit(rng) < to_double(r.audit().probs[s]) ? 1 : 0;
    const double u = to_double(user_payoff(audit, s, m, cfg));
    const double a = to_double(admin_payoff(audit, s, m, cfg));
    su += u;
    su2 += u * u;
    sa += a;
    sa2 += a * a;
  }
  const double n = samples;
  const double mu = su / n, ma = sa / n;
  const double se_u = std::sqrt(std::max(0.0, su2 / n - mu * mu) / n);
  const double se_a = std::sqrt(std::max(0.0, sa2 / n - ma * ma) / n);
  const double exact_u = to_double(r.user_utility_avg), exact_a = to_double(r.admin_utility);
  return json{{"samples", samples},
              {"seed", seed},
              {"user_utility_estimate", mu},
              {"user_utility_std_error", se_u},
              {"admin_utility_estimate", ma},
              {"admin_utility_std_error", se_a},
              {"within_3_std_errors",
               std::fabs(mu - exact_u) <= 3 * se_u + 1e-12 && std::fabs(ma - exact_a) <= 3 * se_a + 1e-12}};
}

template <class T>
int run_solve(const Options& opt) {
  const auto cfg = convert<T>(load(opt));
  const auto result = signaling_equilibrium(cfg);
  json doc = result_to_json(result, cfg);
  doc["budget_analysis"] = budget_to_json(budget_thresholds(cfg));
  emit(opt, opt.format == "csv" ? flat_csv(doc) : dump(doc));
  return 0;
}

template <class T>
int run_bounds(const Options& opt) {
  const auto cfg = convert<T>(load(opt));
  GameConfig<T> unbudgeted = cfg;
  unbudgeted.budget.reset();
  const auto eq = bp_equilibrium(unbudgeted);
  const auto report = bound_report(cfg, &eq.strategy());
  if (opt.format == "json") {
    json doc = bounds_to_json(report, cfg);
    doc["equilibrium_excess"] = number_json(eq.excess);
    doc["satisfied"] = satisfies_bounds(eq.strategy(), eq.excess, cfg);
    emit(opt, dump(doc));
  } else {
    emit(opt, bounds_to_csv(report, cfg));
  }
  return 0;
}

template <class T>
int run_cost(const Options& opt) {
  const auto cfg = convert<T>(load(opt));
  CostReport<T> report;
  if (opt.budget) {
    if (cfg.size() != 2) throw InputError("--budget override needs a two-type config");
    const T budget = from_rational<T>(parse_rational(*opt.budget));
    if (budget < T(0)) throw InputError("--budget must be >= 0");
    GameConfig<T> per_user = cfg;
    per_user.num_users = 1;
    per_user.coalition_size = 1;
    per_user.budget = budget / T(cfg.coalition_size);
    const auto eq = budgeted_two_type_equilibrium(per_user);
    report.cost_no_audit = cost_no_audit(cfg);
    report.budget_component = budget;
    report.excess_component = T(cfg.num_users) * eq.excess;
    report.cost_audit = report.budget_component + report.excess_component;
    report.dominates = Num<T>::leq(report.cost_audit, report.cost_no_audit);
    report.verdict = "not_guaranteed";
    report.regime_note = "budget override: outside the threshold-pinned guarantee";
  } else {
    report = compare(cfg);
  }
  const json doc = cost_to_json(report);
  emit(opt, opt.format == "csv" ? flat_csv(doc) : dump(doc));
  return 0;
}

template <class T>
int run_sweep(const Options& opt) {
  auto spec = ftbp_preset();
  apply_overrides(spec, opt);
  const auto rows = sweep_costs<T>(spec, opt.workers);
  if (opt.format == "json") {
    json arr = json::array();
    for (const auto& r : rows)
      arr.push_back({{"q_min", number_json(r.q_min)},
                     {"c", number_json(r.c)},
                     {"k", number_json(r.k)},
                     {"l", r.l},
                     {"cost_no_audit", number_json(r.cost_no_audit)},
                     {"cost_audit", number_json(r.cost_audit)},
                     {"budget", number_json(r.budget)},
                     {"excess", number_json(r.excess)},
                     {"dominates", r.dominates},
                     {"reference_line", number_json(r.reference_line)},
                     {"note", r.note}});
    json doc{{"rows", arr}};
    const auto crossing = reference_crossing(rows);
    doc["reference_crossing_q_min"] = crossing ? json(*crossing) : json(nullptr);
    emit(opt, dump(doc));
  } else {
    emit(opt, cost_rows_csv(rows));
  }
  return 0;
}

template <class T>
int run_surface(const Options& opt) {
  auto spec = surface_preset();
  apply_overrides(spec, opt);
  const auto rows = sweep_misreport_surface<T>(spec, opt.workers);
  if (opt.format == "json") {
    json arr = json::array();
    for (const auto& r : rows)
      arr.push_back({{"q_min", number_json(r.q_min)},
                     {"c", number_json(r.c)},
                     {"k", number_json(r.k)},
                     {"max_misreport_prob", number_json(r.max_misreport_prob)},
                     {"note", r.note}});
    emit(opt, dump(json{{"rows", arr}}));
  } else {
    emit(opt, surface_rows_csv(rows));
  }
  return 0;
}

template <class T>
int run_verify(const Options& opt) {
  const auto cfg = convert<T>(load(opt));
  const auto result = signaling_equilibrium(cfg);
  const auto report = verify_equilibrium(result, cfg, opt.resolution.value_or(200));
  json doc = verification_to_json(report, cfg);
  doc["equilibrium"] = result_to_json(result, cfg);
  if (opt.samples > 0) doc["monte_carlo"] = monte_carlo(result, cfg, opt.samples, opt.seed);
  emit(opt, opt.format == "csv" ? flat_csv(doc) : dump(doc));
  return 0;
}

int run_probe(const Options& opt) {
  const auto cfg = load(opt);
  GridSpec grid;
  grid.resolution = opt.resolution.value_or(100);
  const json doc = probe_to_json(nonexistence_probe(cfg, grid));
  emit(opt, opt.format == "csv" ? flat_csv(doc) : dump(doc));
  return 0;
}

template <class F>
int dispatch_mode(const Options& opt, F&& f) {
  return mode_of(opt) == NumericMode::rational ? f(Rational{}) : f(double{});
}

// ---- ledger -------------------------------------------------------------

void write_private(const fs::path& path, const std::string& text) {
  {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw InputError("cannot write '" + path.string() + "'");
  }
  fs::permissions(path, fs::perms::owner_read | fs::perms::owner_write, fs::perm_options::replace);
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  out << text;
}

void write_keypair(const fs::path& prefix, const KeyPair& keys) {
  fs::path sk = prefix;
  sk += ".sk";
  fs::path pk = prefix;
  pk += ".pk";
  if (fs::exists(sk) || fs::exists(pk)) throw InputError("refusing to overwrite existing key '" + sk.string() + "'");
  if (prefix.has_parent_path()) fs::create_directories(prefix.parent_path());
  write_private(sk, to_hex(keys.secret_key) + "\n");
  std::ofstream(pk) << to_hex(keys.public_key) << "\n";
}

std::string trimmed(std::string s) {
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.pop_back();
  std::size_t i = 0;
  while (i < s.size() && std::isspace(static_cast<unsigned char>(s[i]))) ++i;
  return s.substr(i);
}

// A hex key given inline or as a path to a file holding it.
Bytes key_arg(const std::string& value) {
  if (fs::exists(value)) return from_hex(trimmed(read_text(value)));
  return from_hex(trimmed(value));
}

struct LedgerFiles {
  fs::path dir;
  fs::path sk() const { return dir / "admin.sk"; }
  fs::path pk() const { return dir / "admin.pk"; }
  fs::path minted() const { return dir / "minted.jsonl"; }
  fs::path receipts() const { return dir / "receipts.jsonl"; }
  fs::path pending() const { return dir / "pending.json"; }
};

std::vector<PendingChallenge> load_pending(const LedgerFiles& files) {
  std::vector<PendingChallenge> out;
  if (!fs::exists(files.pending())) return out;
  json doc;
  try {
    doc = json::parse(read_text(files.pending()));
    for (const auto& p : doc.at("pending")) {
      PendingChallenge pc;
      const Bytes h = from_hex(p.at("receipt_hash").get<std::string>());
      if (h.size() != pc.receipt_hash.size()) throw InputError("bad receipt hash length");
      std::copy(h.begin(), h.end(), pc.receipt_hash.begin());
      pc.challenge = challenge_from_hex(p.at("challenge").get<std::string>());
      pc.issued_ms = p.at("issued_ms").get<std::int64_t>();
      out.push_back(pc);
    }
  } catch (const json::exception& e) {
    throw InputError(std::string("pending.json is malformed: ") + e.what());
  }
  return out;
}

void save_pending(const LedgerFiles& files, const std::vector<PendingChallenge>& pending) {
  json arr = json::array();
  for (const auto& p : pending)
    arr.push_back({{"receipt_hash", to_hex(p.receipt_hash.data(), p.receipt_hash.size())},
                   {"challenge", challenge_to_hex(p.challenge)},
                   {"issued_ms", p.issued_ms}});
  std::ofstream(files.pending()) << dump(json{{"pending", arr}});
}

std::unique_ptr<Ledger> open_ledger(const LedgerFiles& files) {
  if (!fs::exists(files.sk()) || !fs::exists(files.pk()))
    throw InputError("no administrator keys in '" + files.dir.string() + "' (run `ledger keygen --dir` first)");
  KeyPair admin{from_hex(trimmed(read_text(files.sk()))), from_hex(trimmed(read_text(files.pk())))};
  LedgerOptions options;
  options.receipt_log = files.receipts();
  options.mint_log = files.minted();
  auto ledger = std::make_unique<Ledger>(std::make_shared<Ed25519Scheme>(), admin, options);
  ledger->import_pending(load_pending(files));
  return ledger;
}

std::vector<Coin> read_coins(const std::vector<std::string>& paths) {
  std::vector<Coin> coins;
  for (const auto& path : paths) {
    std::stringstream lines(read_text(path));
    for (std::string line; std::getline(lines, line);)
      if (!trimmed(line).empty()) coins.push_back(coin_from_json(line));
  }
  if (coins.empty()) throw InputError("no coins given (--coins FILE, one coin JSON per line)");
  return coins;
}

int ledger_keygen(const Options& opt) {
  Ed25519Scheme scheme;
  const auto keys = scheme.gen();
  if (!opt.key_out.empty()) {
    write_keypair(opt.key_out, keys);
    emit(opt, dump(json{{"public_key", to_hex(keys.public_key)}}));
    return 0;
  }
  const LedgerFiles files{opt.dir};
  fs::create_directories(files.dir);
  write_keypair(files.dir / "admin", keys);
  emit(opt, dump(json{{"public_key", to_hex(keys.public_key)}, {"dir", files.dir.string()}}));
  return 0;
}

int ledger_mint(const Options& opt) {
  const LedgerFiles files{opt.dir};
  auto ledger = open_ledger(files);
  if (opt.owner_pk.empty()) throw InputError("--owner-pk is required");
  const Coin coin = ledger->mint(key_arg(opt.owner_pk), {opt.coin_id, opt.valid_from, opt.valid_until, opt.note});
  emit(opt, coin_to_json(coin) + "\n");
  return 0;
}

int ledger_spend_begin(const Options& opt) {
  const LedgerFiles files{opt.dir};
  auto ledger = open_ledger(files);
  RawReceipt raw;
  raw.goods = opt.goods;
  raw.price = opt.price;
  raw.coins = read_coins(opt.coin_files);
  raw.owner_pk = opt.owner_pk.empty() ? raw.coins.front().owner_pk : key_arg(opt.owner_pk);
  const Challenge z = ledger->begin_spend(raw);
  save_pending(files, ledger->export_pending());
  json doc{{"raw", json::parse(raw_receipt_to_json(raw))}, {"challenge", challenge_to_hex(z)}};
  emit(opt, dump(doc));
  return 0;
}

int ledger_spend_sign(const Options& opt) {
  if (opt.request.empty() || opt.secret_key.empty()) throw InputError("--request and --sk are required");
  json req;
  try {
    req = json::parse(read_text(opt.request));
  } catch (const json::exception& e) {
    throw InputError(std::string("spend request is not valid JSON: ") + e.what());
  }
  if (!req.contains("raw") || !req.contains("challenge")) throw InputError("spend request needs 'raw' and 'challenge'");
  Receipt receipt;
  receipt.raw = raw_receipt_from_json(req["raw"].dump());
  receipt.challenge = challenge_from_hex(req["challenge"].get<std::string>());
  Ed25519Scheme scheme;
  receipt.user_sig = scheme.sign(key_arg(opt.secret_key), receipt_message(receipt.raw, receipt.challenge));
  emit(opt, receipt_to_json(receipt) + "\n");
  return 0;
}

int ledger_spend_finalize(const Options& opt) {
  const LedgerFiles files{opt.dir};
  auto ledger = open_ledger(files);
  if (opt.receipt.empty()) throw InputError("--receipt is required");
  const Receipt receipt = receipt_from_json(trimmed(read_text(opt.receipt)));
  const auto result = ledger->finalize_spend(receipt);
  save_pending(files, ledger->export_pending());
  json doc{{"approved", result.approved}};
  doc["reason"] = result.reason ? json(to_string(*result.reason)) : json(nullptr);
  doc["detail"] = result.detail;
  emit(opt, dump(doc));
  return result.approved ? 0 : 1;
}

int ledger_audit_log(const Options& opt) {
  const LedgerFiles files{opt.dir};
  if (!fs::exists(files.pk())) throw InputError("no administrator public key in '" + files.dir.string() + "'");
  Ed25519Scheme scheme;
  ReplayReport report;
  if (fs::exists(files.receipts()))
    report = replay_receipt_log(files.receipts(), scheme, from_hex(trimmed(read_text(files.pk()))));
  emit(opt, dump(json{{"records", report.records},
                      {"verified", report.verified},
                      {"ok", report.ok()},
                      {"errors", report.errors}}));
  return report.ok() ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Audit game toolkit: equilibria, bounds, costs, sweeps and the artificial-currency ledger"};
  app.require_subcommand(1);
  app.fallthrough();
  Options opt;

  app.add_option("--config", opt.config, "Game config (JSON)");
  app.add_option("--out", opt.out, "Output file (default stdout)");
  app.add_option("--format", opt.format, "Output format: json or csv")->check(CLI::IsMember({"json", "csv"}));
  app.add_option("--mode", opt.mode, "Numeric mode: rational or float")
      ->check(CLI::IsMember({"rational", "exact", "float", "double"}));
  app.add_option("--resolution", opt.resolution, "Grid resolution for verify/probe")->check(CLI::PositiveNumber);
  app.add_option("--seed", opt.seed, "Seed for all pseudo-randomness");
  app.add_option("--workers", opt.workers, "Worker threads for sweeps")->check(CLI::Range(1, 256));

  auto* solve = app.add_subcommand("solve", "Equilibrium for the configured game");
  auto* bounds = app.add_subcommand("bounds", "Misreport caps and the excess ceiling");
  auto* cost = app.add_subcommand("cost", "Audit versus no-audit cost");
  cost->add_option("--budget", opt.budget, "Override the audit budget (two types)");
  auto* sweep = app.add_subcommand("sweep", "Cost sweep over the transit-benefit grid");
  auto* surface = app.add_subcommand("surface", "Largest equilibrium misreport probability over a grid");
  for (auto* sub : {sweep, surface}) {
    sub->add_option("--qmin-grid", opt.qmin_grid, "q_min values: a,b,c or from:to:step");
    sub->add_option("--c-grid", opt.c_grid, "Audit costs");
    sub->add_option("--k-grid", opt.k_grid, "Fines");
    sub->add_option("--coalition", opt.coalition, "Coalition sizes l");
  }
  auto* verify = app.add_subcommand("verify", "Check the equilibrium against brute-force deviations");
  verify->add_option("--samples", opt.samples, "Monte-Carlo payoff draws (0 disables)")->check(CLI::NonNegativeNumber);
  auto* probe = app.add_subcommand("probe", "Certify profitable deviations when the budget is short");
  for (auto* sub : {solve, bounds, cost, verify, probe})
    sub->add_flag("--allow-fine-below-cost", opt.allow_fine_below_cost, "Accept k < c");

  auto* ledger = app.add_subcommand("ledger", "Artificial-currency ledger");
  ledger->require_subcommand(1);
  ledger->add_option("--dir", opt.dir, "Ledger state directory");
  auto* keygen = ledger->add_subcommand("keygen", "Create administrator keys (or a user key pair with --key-out)");
  keygen->add_option("--key-out", opt.key_out, "Write PREFIX.sk / PREFIX.pk instead of administrator keys");
  auto* mint = ledger->add_subcommand("mint", "Issue a coin to a public key");
  mint->add_option("--owner-pk", opt.owner_pk, "Recipient public key (hex or file)")->required();
  mint->add_option("--coin-id", opt.coin_id, "Coin id, unique per owner")->required();
  mint->add_option("--valid-from", opt.valid_from, "Validity start (unix seconds)");
  mint->add_option("--valid-until", opt.valid_until, "Validity end (unix seconds)");
  mint->add_option("--note", opt.note, "Issuer note");
  auto* spend = ledger->add_subcommand("spend", "Two-phase spend");
  spend->require_subcommand(1);
  auto* begin = spend->add_subcommand("begin", "Register r0 and receive a challenge");
  begin->add_option("--coins", opt.coin_files, "Files with one coin JSON per line")->required();
  begin->add_option("--goods", opt.goods, "Goods description");
  begin->add_option("--price", opt.price, "Price");
  begin->add_option("--owner-pk", opt.owner_pk, "Spender public key (defaults to the coins' owner)");
  auto* sign = spend->add_subcommand("sign", "Sign a challenged receipt with the user's key");
  sign->add_option("--request", opt.request, "Output of `spend begin`")->required();
  sign->add_option("--sk", opt.secret_key, "User secret key (hex or file)")->required();
  auto* finalize = spend->add_subcommand("finalize", "Submit a signed receipt for approval");
  finalize->add_option("--receipt", opt.receipt, "Output of `spend sign`")->required();
  auto* audit_log = ledger->add_subcommand("audit-log", "Re-verify every approved receipt in the log");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 1;
  }

  try {
    auto with_mode = [&](auto run) { return dispatch_mode(opt, run); };
    if (opt.format.empty()) opt.format = (*bounds || *sweep || *surface) ? "csv" : "json";
    if (*solve) return with_mode([&](auto t) { return run_solve<decltype(t)>(opt); });
    if (*bounds) return with_mode([&](auto t) { return run_bounds<decltype(t)>(opt); });
    if (*cost) return with_mode([&](auto t) { return run_cost<decltype(t)>(opt); });
    if (*sweep) return with_mode([&](auto t) { return run_sweep<decltype(t)>(opt); });
    if (*surface) return with_mode([&](auto t) { return run_surface<decltype(t)>(opt); });
    if (*verify) return with_mode([&](auto t) { return run_verify<decltype(t)>(opt); });
    if (*probe) return run_probe(opt);
    if (*keygen) return ledger_keygen(opt);
    if (*mint) return ledger_mint(opt);
    if (*begin) return ledger_spend_begin(opt);
    if (*sign) return ledger_spend_sign(opt);
    if (*finalize) return ledger_spend_finalize(opt);
    if (*audit_log) return ledger_audit_log(opt);
  } catch (const NonexistenceError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const RegimeError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const InputError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "internal error: " << e.what() << "\n";
    return 3;
  }
  return 1;
}
