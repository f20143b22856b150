#include "auditgame/equilibrium.hpp"

#include "auditgame/oracle.hpp"

namespace auditgame {

std::string to_string(BudgetRegime r) {
  switch (r) {
    case BudgetRegime::UNCONSTRAINED: return "UNCONSTRAINED";
    case BudgetRegime::SUFFICIENT: return "SUFFICIENT";
    case BudgetRegime::TWO_TYPE_SUFFICIENT: return "TWO_TYPE_SUFFICIENT";
    case BudgetRegime::TWO_TYPE_ANY_BUDGET_SINGLE_USER: return "TWO_TYPE_ANY_BUDGET_SINGLE_USER";
    case BudgetRegime::NONEXISTENCE_POSSIBLE: return "NONEXISTENCE_POSSIBLE";
  }
  return "unknown";
}

template <class T>
std::pair<std::size_t, std::size_t> two_type_indices(const GameConfig<T>& cfg) {
  if (cfg.size() != 2) throw PreconditionError("two-type construction needs exactly 2 types, got " + std::to_string(cfg.size()));
  return cfg.alloc[1] < cfg.alloc[0] ? std::pair<std::size_t, std::size_t>{1, 0}
                                     : std::pair<std::size_t, std::size_t>{0, 1};
}

template <class T>
T two_type_misreport_rate(const GameConfig<T>& cfg) {
  const auto [lo, hi] = two_type_indices(cfg);
  const T& q_low = cfg.prior[lo];
  const T& q_high = cfg.prior[hi];
  const T df = cfg.alloc[hi] - cfg.alloc[lo];
  const T denom = q_low * (cfg.fine - cfg.audit_cost + df);
  if (!(denom > 0)) return T(1);
  return min_of(T(1), T(q_high * cfg.audit_cost / denom));
}

template <class T>
T two_type_budget_threshold(const GameConfig<T>& cfg) {
  const auto [lo, hi] = two_type_indices(cfg);
  const T df = cfg.alloc[hi] - cfg.alloc[lo];
  const T denom = cfg.fine + df;
  if (!(denom > 0)) return T(0);
  return cfg.audit_cost * df * (T(1) - two_type_misreport_rate(cfg)) / denom;
}

template <class T>
T general_budget_threshold(const GameConfig<T>& cfg) {
  const T df = cfg.delta_f_max();
  const T denom = cfg.fine + df;
  if (!(denom > 0)) return T(0);
  return cfg.audit_cost * df / denom;
}

template <class T>
EquilibriumResult<T> two_type_closed_form(const GameConfig<T>& cfg) {
  const auto [lo, hi] = two_type_indices(cfg);
  cfg.validate(false);
  const T rate = two_type_misreport_rate(cfg);
  Strategy<T> pi = Strategy<T>::truthful(2);
  pi(lo, hi) = rate;
  pi(lo, lo) = T(1) - rate;
  EquilibriumResult<T> result;
  result.profile.strategies.push_back(pi);
  result.profile.audits.push_back(AuditPolicy<T>::none(2));
  result.provenance = Provenance::closed_form_two_type;
  result.unique = true;
  evaluate_result(result, cfg);
  return result;
}

template <class T>
BudgetAnalysis<T> budget_thresholds(const GameConfig<T>& cfg) {
  cfg.validate(false);
  BudgetAnalysis<T> out;
  out.threshold_general = general_budget_threshold(cfg);
  out.threshold_coalition = T(cfg.coalition_size) * out.threshold_general;
  const bool two = cfg.size() == 2;
  if (two) out.threshold_two_type = two_type_budget_threshold(cfg);
  if (!cfg.budget) {
    out.regime = BudgetRegime::UNCONSTRAINED;
  } else if (Num<T>::leq(out.threshold_coalition, *cfg.budget)) {
    out.regime = BudgetRegime::SUFFICIENT;
  } else if (two && cfg.num_users == 1) {
    out.regime = BudgetRegime::TWO_TYPE_ANY_BUDGET_SINGLE_USER;
  } else if (two && Num<T>::leq(*out.threshold_two_type, *cfg.budget)) {
    out.regime = BudgetRegime::TWO_TYPE_SUFFICIENT;
  } else {
    out.regime = BudgetRegime::NONEXISTENCE_POSSIBLE;
  }
  return out;
}

namespace {

template <class T>
[[noreturn]] void throw_nonexistence(const GameConfig<T>& cfg, const BudgetAnalysis<T>& ba) {
  const double b = cfg.budget ? to_double(*cfg.budget) : 0.0;
  const double t2 = ba.threshold_two_type ? to_double(*ba.threshold_two_type) : 0.0;
  std::string msg = "no signaling equilibrium is guaranteed: budget " + format15(b);
  if (ba.threshold_two_type)
    msg += " is below the two-type threshold c*df*(1-rate)/(k+df) = " + format15(t2);
  else
    msg += " is below the sufficient-budget threshold l*c*df/(k+df) = " + format15(ba.threshold_coalition);
  msg += " with " + std::to_string(cfg.num_users) + " users";
  throw NonexistenceError(msg, b, t2, to_double(ba.threshold_general));
}

}  // namespace

template <class T>
EquilibriumResult<T> budgeted_two_type_equilibrium(const GameConfig<T>& cfg) {
  const auto [lo, hi] = two_type_indices(cfg);
  if (!cfg.budget) throw PreconditionError("budgeted equilibrium needs a finite budget");
  cfg.validate(false);
  const T& budget = *cfg.budget;
  const T threshold = two_type_budget_threshold(cfg);

  if (cfg.num_users > 1 && budget > 0 && !Num<T>::leq(threshold, budget))
    throw_nonexistence(cfg, budget_thresholds(cfg));

  if (cfg.audit_cost == 0 || !Num<T>::leq(budget, threshold)) {
    auto result = two_type_closed_form(cfg);
    result.notes.push_back("budget " + format15(budget) + " exceeds the two-type threshold " +
                           format15(threshold) + ": audits stay unused");
    return result;
  }

  Strategy<T> pi = Strategy<T>::truthful(2);
  pi(lo, hi) = T(1);
  pi(lo, lo) = T(0);
  const auto sigma = best_response(pi, cfg, std::optional<T>(budget));
  if (sigma.probs[lo] != 0) throw InternalError("budgeted branch audits the low signal");
  EquilibriumResult<T> result;
  result.profile.strategies.push_back(pi);
  result.profile.audits.push_back(sigma);
  result.provenance = Provenance::budgeted_two_type;
  result.unique = false;
  result.notes.push_back("budget " + format15(budget) + " is at most the two-type threshold " +
                         format15(threshold) + ": the administrator spends it all on the high signal");
  if (cfg.num_users > 1 && budget == 0) result.notes.push_back("zero budget: every user plays the no-audit game");
  evaluate_result(result, cfg);
  return result;
}

template <class T>
EquilibriumResult<T> signaling_equilibrium(const GameConfig<T>& cfg) {
  const auto ba = budget_thresholds(cfg);
  EquilibriumResult<T> result;
  switch (ba.regime) {
    case BudgetRegime::UNCONSTRAINED:
    case BudgetRegime::SUFFICIENT:
      result = bp_equilibrium(cfg);
      break;
    case BudgetRegime::TWO_TYPE_ANY_BUDGET_SINGLE_USER:
      result = budgeted_two_type_equilibrium(cfg);
      break;
    case BudgetRegime::TWO_TYPE_SUFFICIENT:
      result = two_type_closed_form(cfg);
      break;
    case BudgetRegime::NONEXISTENCE_POSSIBLE:
      if (cfg.size() == 2 && cfg.budget && *cfg.budget == 0) {
        result = budgeted_two_type_equilibrium(cfg);
        break;
      }
      throw_nonexistence(cfg, ba);
  }
  result.notes.push_back("regime " + to_string(ba.regime));
  if (result.audit().is_zero())
    result.notes.push_back("excess is the tight upper bound over all signaling equilibria of this game");
  return result;
}

template <class T>
VerificationReport<T> verify_equilibrium(const EquilibriumResult<T>& result, const GameConfig<T>& cfg,
                                         int resolution) {
  if (resolution < 10) throw PreconditionError("verification resolution must be >= 10");
  cfg.validate(false);
  result.profile.validate(cfg.size());
  VerificationReport<T> report;
  report.resolution = resolution;

  std::vector<AuditPolicy<T>> expected;
  if (result.profile.strategies.size() > 1 && cfg.budget) {
    expected = allocate_budget(result.profile.strategies, cfg, *cfg.budget);
  } else {
    for (const auto& pi : result.profile.strategies) expected.push_back(best_response(pi, cfg, cfg.budget));
  }
  report.best_response_matches = true;
  for (std::size_t i = 0; i < expected.size(); ++i) {
    const auto& have = result.profile.audits[std::min(i, result.profile.audits.size() - 1)];
    for (std::size_t s = 0; s < cfg.size(); ++s) {
      if (!Num<T>::eq(expected[i].probs[s], have.probs[s])) {
        report.best_response_matches = false;
        report.messages.push_back("audit probability on signal " + cfg.types[s] + " is " +
                                  format15(have.probs[s]) + " but the best response is " +
                                  format15(expected[i].probs[s]));
      }
    }
  }

  GridSpec grid;
  grid.resolution = resolution;
  const auto dev = deviation_search(result.profile, cfg, grid);
  report.max_gain_per_type = dev.gains;
  report.best_rows = dev.best_rows;
  report.slack = dev.slack;
  report.coarse = dev.coarse;
  report.max_gain = dev.max_gain();
  bool gains_ok = true;
  for (std::size_t m = 0; m < dev.gains.size(); ++m) {
    if (!Num<T>::leq(dev.gains[m], dev.slack)) {
      gains_ok = false;
      report.messages.push_back("type " + cfg.types[m] + " gains " + format15(dev.gains[m]) +
                                " by deviating (slack " + format15(dev.slack) + ")");
    }
  }
  report.passed = report.best_response_matches && gains_ok;
  return report;
}

#define AUDITGAME_INSTANTIATE(T)                                                                      \
  template std::pair<std::size_t, std::size_t> two_type_indices(const GameConfig<T>&);                \
  template T two_type_misreport_rate(const GameConfig<T>&);                                           \
  template T two_type_budget_threshold(const GameConfig<T>&);                                         \
  template T general_budget_threshold(const GameConfig<T>&);                                          \
  template EquilibriumResult<T> two_type_closed_form(const GameConfig<T>&);                           \
  template BudgetAnalysis<T> budget_thresholds(const GameConfig<T>&);                                 \
  template EquilibriumResult<T> budgeted_two_type_equilibrium(const GameConfig<T>&);                  \
  template EquilibriumResult<T> signaling_equilibrium(const GameConfig<T>&);                          \
  template VerificationReport<T> verify_equilibrium(const EquilibriumResult<T>&, const GameConfig<T>&, \
                                                    int);

AUDITGAME_INSTANTIATE(Rational)
AUDITGAME_INSTANTIATE(double)

#undef AUDITGAME_INSTANTIATE

}  // namespace auditgame
