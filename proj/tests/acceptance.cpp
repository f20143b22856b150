// Acceptance run: one PASS/FAIL line per criterion, exit status 1 if any fails.

#include "auditgame/bounds.hpp"
#include "auditgame/casestudy.hpp"
#include "auditgame/cost.hpp"
#include "auditgame/equilibrium.hpp"
#include "auditgame/ledger.hpp"
#include "auditgame/oracle.hpp"
#include "fixtures.hpp"

#include <atomic>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <sstream>
#include <thread>

#include <unistd.h>

using namespace auditgame;
namespace fs = std::filesystem;

namespace {

struct Outcome {
  bool ok = true;
  std::string detail;

  void require(bool cond, const std::string& what) {
    if (!cond && ok) detail = what;
    ok = ok && cond;
  }
};

int failures = 0;

void criterion(int id, const std::string& title, double limit_seconds, const std::function<Outcome()>& body) {
  const auto start = std::chrono::steady_clock::now();
  Outcome out;
  try {
    out = body();
  } catch (const std::exception& e) {
    out.ok = false;
    out.detail = std::string("exception: ") + e.what();
  }
  const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  if (limit_seconds > 0 && secs > limit_seconds) out.require(false, "runtime over " + format15(limit_seconds) + " s");
  if (!out.ok) ++failures;
  char timing[64];
  std::snprintf(timing, sizeof(timing), "%.3f s", secs);
  std::cout << (out.ok ? "PASS" : "FAIL") << " criterion " << id << ": " << title << " [" << timing << "]";
  if (!out.detail.empty()) std::cout << " -- " << out.detail;
  std::cout << std::endl;
}

GameConfig<Rational> cfg_a_budget(const Rational& b, long long users) {
  auto cfg = fixtures::cfg_a();
  cfg.budget = b;
  cfg.num_users = users;
  cfg.coalition_size = users;
  return cfg;
}

std::vector<std::array<std::string, 4>> reference_surface() {
  std::ifstream in(std::string(TEST_DATA_DIR) + "/misreport_surface_reference.tsv");
  if (!in) throw std::runtime_error("missing reference surface data");
  std::string line;
  std::getline(in, line);
  std::vector<std::array<std::string, 4>> rows;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    std::istringstream fields(line);
    std::array<std::string, 4> r;
    for (auto& f : r) std::getline(fields, f, '\t');
    rows.push_back(r);
  }
  return rows;
}

// Criterion 2 grid: 5 priors x 5 costs x 4 fine offsets x 5 credit gaps.
std::vector<GameConfig<Rational>> closed_form_grid() {
  std::vector<GameConfig<Rational>> out;
  for (const Rational& q : {Rational(1, 10), Rational(1, 4), Rational(1, 2), Rational(3, 4), Rational(9, 10)})
    for (int c : {10, 25, 50, 75, 125})
      for (int extra : {0, 50, 200, 500})
        for (int df : {5, 20, 55, 100, 400}) out.push_back(two_type_config<Rational>(q, 50, 50 + df, c, c + extra));
  return out;
}

Outcome surface_reproduction() {
  Outcome out;
  const auto ref = reference_surface();
  const auto exact = sweep_misreport_surface<Rational>(surface_preset(), 1);
  const auto approx = sweep_misreport_surface<double>(surface_preset(), 1);
  out.require(ref.size() == 180 && exact.size() == 180 && approx.size() == 180, "expected 180 grid points");
  std::size_t matched = 0;
  for (std::size_t i = 0; i < std::min(ref.size(), exact.size()); ++i) {
    const Rational q = parse_rational(ref[i][0]), c = parse_rational(ref[i][1]), k = parse_rational(ref[i][2]);
    const Rational formula = min_of(Rational(1), (1 - q) * c / (q * (k - c + 55)));
    const bool ok = exact[i].q_min == q && exact[i].c == c && exact[i].k == k &&
                    exact[i].max_misreport_prob == formula && format15(exact[i].max_misreport_prob) == ref[i][3] &&
                    std::fabs(approx[i].max_misreport_prob - std::stod(ref[i][3])) <= 1e-12;
    matched += ok;
    out.require(ok, "mismatch at (" + ref[i][0] + ", " + ref[i][1] + ", " + ref[i][2] + ")");
  }
  if (out.ok) out.detail = std::to_string(matched) + "/180 points, exact and float";
  return out;
}

Outcome lp_vs_closed_form() {
  Outcome out;
  const auto grid = closed_form_grid();
  out.require(grid.size() == 500, "grid is not 500 points");
  for (const auto& cfg : grid) {
    const auto lp = bp_equilibrium(cfg);
    const auto cf = two_type_closed_form(cfg);
    out.require(lp.strategy() == cf.strategy() && lp.audit() == cf.audit() &&
                    lp.user_utility_avg == cf.user_utility_avg && lp.excess == cf.excess,
                "disagreement at q_L=" + format_exact(cfg.prior[0]) + " c=" + format_exact(cfg.audit_cost) +
                    " k=" + format_exact(cfg.fine));
  }
  if (out.ok) out.detail = "500/500 exact agreements";
  return out;
}

Outcome bound_invariants() {
  Outcome out;
  std::size_t checked = 0;
  const auto spec = surface_preset();
  for (const auto& q : spec.q_min_grid)
    for (const auto& c : spec.c_grid)
      for (const auto& k : spec.k_grid) {
        const auto cfg = sweep_point<Rational>(spec, q, c, k, 1);
        for (const auto& r : {bp_equilibrium(cfg), two_type_closed_form(cfg)}) {
          out.require(satisfies_bounds(r.strategy(), r.excess, cfg),
                      "bound violated at surface point c=" + format_exact(c) + " k=" + format_exact(k));
          ++checked;
        }
      }
  for (const auto& cfg : closed_form_grid())
    for (const auto& r : {bp_equilibrium(cfg), two_type_closed_form(cfg)}) {
      out.require(satisfies_bounds(r.strategy(), r.excess, cfg), "bound violated on the closed-form grid");
      ++checked;
    }
  const auto cfg = fixtures::cfg_a();
  const auto r = bp_equilibrium(cfg);
  const double excess = to_double(r.excess);
  const double bound = to_double(excess_payments_bound(cfg));
  // Independent evaluation: q_L * rate * df with rate = q_H c / (q_L (k - c + df)); bound c df / (k + df).
  const double rate = 0.5 * 25.0 / (0.5 * (100.0 - 25.0 + 55.0));
  out.require(std::fabs(excess - 0.5 * rate * 55.0) <= 1e-9, "reference excess differs from the formula");
  out.require(std::fabs(bound - 25.0 * 55.0 / 155.0) <= 1e-9, "reference bound differs from the formula");
  out.require(std::round(excess * 1e4) / 1e4 == 5.2885, "reference excess does not round to 5.2885");
  out.require(std::round(bound * 1e4) / 1e4 == 8.8710, "reference bound does not round to 8.8710");
  out.require(excess <= bound, "reference excess above bound");
  if (out.ok) {
    char buf[160];
    std::snprintf(buf, sizeof(buf), "%zu equilibria; reference excess %.10f <= bound %.10f", checked, excess, bound);
    out.detail = buf;
  }
  return out;
}

Outcome cost_dominance() {
  Outcome out;
  const auto rows = sweep_costs<Rational>(ftbp_preset(), 4);
  out.require(rows.size() == 99 * 3 * 3 * 2, "unexpected row count");
  std::size_t equal_rows = 0;
  for (const auto& r : rows) {
    out.require(r.cost_audit <= r.cost_no_audit, "audit cost above no-audit cost");
    if (r.q_min <= r.c / (r.k + 55)) {
      out.require(r.cost_audit == r.cost_no_audit, "missing equality below c/(k+df)");
      ++equal_rows;
    }
  }
  const auto crossing = reference_crossing(rows);
  out.require(crossing.has_value(), "no crossing of the reference line");
  if (crossing) out.require(std::fabs(*crossing - 0.379) <= 0.03, "crossing at " + format15(*crossing));
  if (out.ok) {
    char buf[128];
    std::snprintf(buf, sizeof(buf), "%zu rows, %zu exact ties, crossing q_min = %.4f", rows.size(), equal_rows,
                  *crossing);
    out.detail = buf;
  }
  return out;
}

Outcome containment_example() {
  Outcome out;
  const auto cfg = fixtures::three_type();
  const auto bp = bp_equilibrium(cfg);
  out.require(bp.excess == Rational(22, 45), "LP excess is " + format_exact(bp.excess));
  Strategy<Rational> pi;
  pi.matrix = {{Rational(2, 3), Rational(1, 3), 0}, {0, Rational(2, 3), Rational(1, 3)}, {0, 0, 1}};
  StrategyProfile<Rational> profile;
  profile.strategies = {pi};
  profile.audits = {AuditPolicy<Rational>::none(3)};
  const Rational ex = excess_payments(pi, profile.audits[0], cfg);
  out.require(ex == Rational(4, 9), "constructed profile excess is " + format_exact(ex));
  const auto dev = deviation_search(profile, cfg, GridSpec{200, 50'000'000});
  for (std::size_t m = 0; m < dev.gains.size(); ++m)
    out.require(dev.gains[m] <= dev.slack, "type " + cfg.types[m] + " gains " + format15(dev.gains[m]));
  out.require(ex < bp.excess, "no strict gap");
  const bool audited = !best_response(pi, cfg).is_zero();
  if (out.ok) {
    out.detail = "LP 22/45 > 4/9; per-type gains <= slack at resolution 200";
    if (audited) out.detail += "; note: the administrator's best response to this profile audits signal y";
  }
  return out;
}

Outcome nonexistence() {
  Outcome out;
  std::string summary;
  for (const Rational& b : {Rational(1), Rational(3), Rational(5)}) {
    const auto report = nonexistence_probe(cfg_a_budget(b, 2), GridSpec{100, 50'000'000});
    out.require(report.profiles == 101 * 101, "unexpected profile count");
    out.require(report.certified == report.profiles,
                "B=" + format_exact(b) + " certified " + std::to_string(report.certified) + "/" +
                    std::to_string(report.profiles));
    summary += (summary.empty() ? "" : ", ") + ("B=" + format_exact(b) + ": " + std::to_string(report.certified) +
                                                "/" + std::to_string(report.profiles));
  }
  if (out.ok) out.detail = summary;
  return out;
}

Outcome budgeted_two_type() {
  Outcome out;
  for (const Rational& b : {Rational(0), Rational(2), Rational(7165, 1000), Rational(10)}) {
    const auto cfg = cfg_a_budget(b, 1);
    const auto r = budgeted_two_type_equilibrium(cfg);
    const auto v = verify_equilibrium(r, cfg, 200);
    out.require(v.passed, "B=" + format15(b) + " fails verification");
  }
  const Rational t = two_type_budget_threshold(fixtures::cfg_a());
  const Rational eps(1, 1'000'000'000);
  out.require(budgeted_two_type_equilibrium(cfg_a_budget(t - eps, 1)).provenance == Provenance::budgeted_two_type,
              "below threshold not budgeted");
  out.require(budgeted_two_type_equilibrium(cfg_a_budget(t + eps, 1)).provenance == Provenance::closed_form_two_type,
              "above threshold not closed form");
  if (out.ok) out.detail = "switch at threshold " + format15(t);
  return out;
}

Outcome best_response_sign() {
  Outcome out;
  std::mt19937_64 rng(2718);
  std::size_t signals = 0, ties = 0;
  auto check = [&](const Strategy<Rational>& pi, const GameConfig<Rational>& cfg) {
    const auto sigma = best_response(pi, cfg);
    for (std::size_t s = 0; s < cfg.size(); ++s) {
      // Brute force: administrator utility with s always audited versus never audited.
      AuditPolicy<Rational> on = AuditPolicy<Rational>::none(cfg.size());
      on.probs[s] = 1;
      const Rational gain = admin_utility(pi, on, cfg) - admin_utility(pi, AuditPolicy<Rational>::none(cfg.size()), cfg);
      const Rational expected = gain > 0 ? Rational(1) : Rational(0);
      out.require(sigma.probs[s] == expected, "sign disagreement");
      ties += gain == 0;
      ++signals;
    }
  };
  for (int trial = 0; trial < 10000; ++trial) {
    const auto cfg = fixtures::random_config(rng, 2, 4);
    check(fixtures::random_strategy(rng, cfg.size()), cfg);
  }
  // Deliberate ties: two-type games played exactly at the largest unaudited misreport rate.
  std::uniform_int_distribution<int> q(1, 19), c(1, 60), extra(0, 100), df(1, 100);
  for (int trial = 0; trial < 1000; ++trial) {
    const int cost = c(rng);
    const auto cfg = two_type_config<Rational>(Rational(q(rng), 20), 0, df(rng), cost, cost + extra(rng));
    const Rational rate = two_type_misreport_rate(cfg);
    if (rate == 1) continue;
    check(fixtures::two_type_strategy(rate), cfg);
  }
  out.require(ties > 0, "no ties exercised");
  if (out.ok) out.detail = std::to_string(signals) + " signals, " + std::to_string(ties) + " ties";
  return out;
}

Outcome ledger_suite(std::shared_ptr<SignatureScheme> scheme, const std::string& tag) {
  Outcome out;
  const auto dir = fs::temp_directory_path() / ("auditgame_accept_" + tag + "_" + std::to_string(::getpid()));
  fs::remove_all(dir);
  fs::create_directories(dir);
  LedgerOptions options;
  options.receipt_log = dir / "receipts.jsonl";
  options.mint_log = dir / "minted.jsonl";
  options.seed = 99;
  const auto admin = scheme->gen();
  Ledger ledger(scheme, admin, options);

  auto spend = [&](const KeyPair& signer, const Bytes& owner, std::vector<Coin> coins, std::int64_t price) {
    RawReceipt raw{"ride", price, std::move(coins), owner};
    const auto z = ledger.begin_spend(raw);
    return ledger.finalize_spend({raw, z, scheme->sign(signer.secret_key, receipt_message(raw, z))});
  };

  std::vector<std::pair<KeyPair, Coin>> wallet;
  for (int i = 0; i < 1000; ++i) {
    const auto user = scheme->gen();
    const auto coin = ledger.mint(user.public_key, {static_cast<std::uint64_t>(i), 0, 0, ""});
    const auto r = spend(user, user.public_key, {coin}, i);
    out.require(r.approved, "round trip " + std::to_string(i) + " rejected");
    wallet.emplace_back(user, coin);
  }
  std::mt19937_64 rng(5);
  const auto& [reuse_user, reuse_coin] = wallet[std::uniform_int_distribution<std::size_t>(0, 999)(rng)];
  const auto again = spend(reuse_user, reuse_user.public_key, {reuse_coin}, 1);
  out.require(!again.approved && again.reason == Rejection::double_spend, "reused coin not rejected as double spend");

  const auto user = scheme->gen();
  const auto other = scheme->gen();
  const auto coin = ledger.mint(user.public_key, {5000, 0, 0, ""});
  Coin tampered = coin;
  tampered.meta.valid_until = 1;
  out.require(spend(user, user.public_key, {tampered}, 1).reason == Rejection::counterfeit_coin,
              "tampered coin accepted");
  out.require(spend(other, user.public_key, {coin}, 1).reason == Rejection::bad_signature,
              "wrong-key receipt accepted");

  std::vector<Receipt> racing;
  for (int i = 0; i < 100; ++i) {
    RawReceipt raw{"race", i, {coin}, user.public_key};
    const auto z = ledger.begin_spend(raw);
    racing.push_back({raw, z, scheme->sign(user.secret_key, receipt_message(raw, z))});
  }
  std::atomic<int> approvals{0};
  std::vector<std::thread> threads;
  for (auto& r : racing) threads.emplace_back([&ledger, &approvals, &r] { approvals += ledger.finalize_spend(r).approved; });
  for (auto& t : threads) t.join();
  out.require(approvals == 1, std::to_string(approvals.load()) + " approvals among 100 racing spends");

  const auto report = replay_receipt_log(options.receipt_log, *scheme, admin.public_key);
  out.require(report.ok() && report.records == 1001 && report.verified == 1001,
              "replay verified " + std::to_string(report.verified) + "/" + std::to_string(report.records));
  fs::remove_all(dir);
  if (out.ok) out.detail = tag + ": 1000 round trips, replay verified " + std::to_string(report.verified) + " receipts";
  return out;
}

}  // namespace

int main() {
  criterion(1, "misreport surface reproduces the reference table", 1.0, surface_reproduction);
  criterion(2, "LP equals the two-type closed form on a 500-point grid", 5.0, lp_vs_closed_form);
  criterion(3, "equilibria satisfy per-pair and aggregate bounds", 0.0, bound_invariants);
  criterion(4, "audits never cost more on the transit grid", 10.0, cost_dominance);
  criterion(5, "three-type example separates signaling from persuasion equilibria", 0.0, containment_example);
  criterion(6, "non-existence probe below the two-type threshold", 30.0, nonexistence);
  criterion(7, "budgeted two-type equilibria verify; branch switch at the threshold", 0.0, budgeted_two_type);
  criterion(8, "best response matches the brute-force audit sign", 0.0, best_response_sign);
  criterion(9, "ledger adversarial suite (test double)", 10.0,
            [] { return ledger_suite(std::make_shared<ToySignatureScheme>(11), "toy"); });
  criterion(9, "ledger adversarial suite (Ed25519)", 60.0,
            [] { return ledger_suite(std::make_shared<Ed25519Scheme>(), "ed25519"); });
  return failures == 0 ? 0 : 1;
}
