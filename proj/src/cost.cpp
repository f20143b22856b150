#include "auditgame/cost.hpp"

#include "auditgame/equilibrium.hpp"
#include "auditgame/lp.hpp"

namespace auditgame {

template <class T>
T cost_no_audit(const GameConfig<T>& cfg) {
  const T n(cfg.num_users);
  if (cfg.size() == 2) {
    const auto [lo, hi] = two_type_indices(cfg);
    return n * cfg.prior[lo] * (cfg.alloc[hi] - cfg.alloc[lo]);
  }
  return n * (cfg.max_alloc() - cfg.expected_alloc());
}

template <class T>
CostReport<T> cost_audit_two_type(const GameConfig<T>& cfg) {
  const auto [lo, hi] = two_type_indices(cfg);
  cfg.validate(false);
  const T n(cfg.num_users);
  const T df = cfg.alloc[hi] - cfg.alloc[lo];
  const T rate = two_type_misreport_rate(cfg);

  CostReport<T> out;
  out.cost_no_audit = cost_no_audit(cfg);
  if (rate == 1) {
    out.budget_component = T(0);
    out.excess_component = out.cost_no_audit;
    out.regime_note = "q_min at or below c/(k+df): audit reduces to no-audit";
  } else {
    out.budget_component = T(cfg.coalition_size) * two_type_budget_threshold(cfg);
    out.excess_component = n * cfg.prior[lo] * rate * df;
  }
  if (cfg.fine < cfg.audit_cost) {
    if (!out.regime_note.empty()) out.regime_note += "; ";
    out.regime_note += "k < c: outside the standing fine >= cost assumption";
  }
  out.cost_audit = out.budget_component + out.excess_component;
  out.dominates = Num<T>::leq(out.cost_audit, out.cost_no_audit);
  out.verdict = out.dominates ? "dominates" : "not_guaranteed";
  return out;
}

template <class T>
CostReport<T> cost_audit_multitype(const GameConfig<T>& cfg) {
  if (cfg.size() <= 2) throw PreconditionError("multi-type cost needs more than 2 types");
  cfg.validate(false);
  GameConfig<T> unbudgeted = cfg;
  unbudgeted.budget.reset();
  const auto eq = bp_equilibrium(unbudgeted);
  const T n(cfg.num_users);
  const T df = cfg.delta_f_max();

  CostReport<T> out;
  out.cost_no_audit = cost_no_audit(cfg);
  out.budget_component = n * general_budget_threshold(cfg);
  out.excess_component = n * eq.excess;
  out.cost_audit = out.budget_component + out.excess_component;

  const T claimed = eq.objective;
  const T headroom = cfg.max_alloc() - claimed;
  if (!(headroom > 0)) {
    out.fine_threshold_undefined = true;
    out.regime_note = "every type claims the maximum credit: fine threshold undefined";
    out.dominates = false;
  } else {
    out.fine_threshold = df * (cfg.audit_cost / headroom - T(1));
    out.dominates = Num<T>::leq(*out.fine_threshold, cfg.fine);
    if (!out.dominates) out.regime_note = "fine below the threshold: dominance not guaranteed";
  }
  if (eq.multiplicity) {
    if (!out.regime_note.empty()) out.regime_note += "; ";
    out.regime_note += "LP optimum not unique";
  }
  out.verdict = out.dominates ? "dominates" : "not_guaranteed";
  return out;
}

template <class T>
CostReport<T> compare(const GameConfig<T>& cfg) {
  return cfg.size() == 2 ? cost_audit_two_type(cfg) : cost_audit_multitype(cfg);
}

#define AUDITGAME_INSTANTIATE(T)                                  \
  template T cost_no_audit(const GameConfig<T>&);                 \
  template CostReport<T> cost_audit_two_type(const GameConfig<T>&); \
  template CostReport<T> cost_audit_multitype(const GameConfig<T>&); \
  template CostReport<T> compare(const GameConfig<T>&);

AUDITGAME_INSTANTIATE(Rational)
AUDITGAME_INSTANTIATE(double)

#undef AUDITGAME_INSTANTIATE

}  // namespace auditgame
