#include "auditgame/lp.hpp"

#include <sstream>

namespace auditgame {

std::string to_string(Provenance p) {
  switch (p) {
    case Provenance::lp: return "lp";
    case Provenance::closed_form_two_type: return "closed_form_two_type";
    case Provenance::budgeted_two_type: return "budgeted_two_type";
  }
  return "unknown";
}

template <class T>
void evaluate_result(EquilibriumResult<T>& result, const GameConfig<T>& cfg) {
  const auto& pi = result.strategy();
  const auto& sigma = result.audit();
  result.user_utilities.clear();
  for (std::size_t m = 0; m < cfg.size(); ++m)
    result.user_utilities.push_back(user_utility_type(pi, sigma, m, cfg));
  result.user_utility_avg = user_utility_avg(pi, sigma, cfg);
  result.admin_utility = admin_utility(pi, sigma, cfg);
  result.excess = excess_payments(pi, sigma, cfg);
  result.total_excess = result.excess * T(cfg.num_users);
  T objective{0};
  for (std::size_t m = 0; m < cfg.size(); ++m)
    for (std::size_t s = 0; s < cfg.size(); ++s) objective += cfg.prior[m] * pi(m, s) * cfg.alloc[s];
  result.objective = objective;
}

template <class T>
LinearProgram<T> build_bp_lp(const GameConfig<T>& cfg) {
  if (cfg.size() < 2) throw InputError("LP needs at least 2 types: nothing to misreport");
  cfg.validate(false);
  const std::size_t n = cfg.size();
  for (const auto& q : cfg.prior)
    if (!(q > 0)) throw PreconditionError("LP needs a strictly positive prior (prune zero-mass types first)");

  LinearProgram<T> lp;
  lp.num_types = n;
  lp.objective.assign(n * n, T(0));
  lp.column_names.resize(n * n);
  for (std::size_t m = 0; m < n; ++m) {
    for (std::size_t s = 0; s < n; ++s) {
      lp.column_names[lp.column(s, m)] = "pi(" + cfg.types[s] + "|" + cfg.types[m] + ")";
      lp.objective[lp.column(s, m)] = cfg.prior[m] * cfg.alloc[s];
    }
  }
  for (std::size_t m = 0; m < n; ++m) {
    LinearConstraint<T> row;
    row.label = "sum[" + cfg.types[m] + "]";
    row.coeffs.assign(n * n, T(0));
    for (std::size_t s = 0; s < n; ++s) row.coeffs[lp.column(s, m)] = T(1);
    row.relation = Relation::eq;
    row.rhs = T(1);
    lp.constraints.push_back(std::move(row));
  }
  for (std::size_t s = 0; s < n; ++s) {
    LinearConstraint<T> row;
    row.label = "no_audit[" + cfg.types[s] + "]";
    row.coeffs.assign(n * n, T(0));
    for (std::size_t m = 0; m < n; ++m) {
      T coeff = -cfg.audit_cost * cfg.prior[m];
      if (m != s) coeff += cfg.prior[m] * (cfg.fine + positive_part(T(cfg.alloc[s] - cfg.alloc[m])));
      row.coeffs[lp.column(s, m)] = coeff;
    }
    row.relation = Relation::leq;
    row.rhs = T(0);
    lp.constraints.push_back(std::move(row));
  }
  return lp;
}

template <class T>
Strategy<T> strategy_from_solution(const LinearProgram<T>& lp, const LPSolution<T>& sol) {
  if (sol.status != LPStatus::optimal) throw InternalError("no optimal solution to read");
  const std::size_t n = lp.num_types;
  Strategy<T> pi;
  pi.matrix.assign(n, std::vector<T>(n, T(0)));
  for (std::size_t m = 0; m < n; ++m)
    for (std::size_t s = 0; s < n; ++s) pi(m, s) = sol.values[lp.column(s, m)];
  return pi;
}

template <class T>
EquilibriumResult<T> bp_equilibrium(const GameConfig<T>& cfg) {
  cfg.validate(false);
  if (cfg.budget) {
    const T df = cfg.delta_f_max();
    const T denom = cfg.fine + df;
    const T threshold = denom > 0 ? T(T(cfg.coalition_size) * cfg.audit_cost * df / denom) : T(0);
    if (*cfg.budget < threshold && !Num<T>::eq(*cfg.budget, threshold))
      throw RegimeError("budget " + format15(*cfg.budget) +
                        " is below the sufficient-budget threshold l*c*df/(k+df) = " + format15(threshold) +
                        "; use the budgeted/regime-aware equilibrium instead");
  }

  std::vector<std::size_t> kept;
  const GameConfig<T> reduced = prune_zero_prior(cfg, kept);
  EquilibriumResult<T> result;
  Strategy<T> pi = Strategy<T>::truthful(cfg.size());
  if (reduced.size() >= 2) {
    const auto lp = build_bp_lp(reduced);
    const auto sol = solve_lp(lp);
    if (sol.status != LPStatus::optimal)
      throw InternalError("no-audit LP returned " + to_string(sol.status) + " (truthful play is always feasible)");
    const auto reduced_pi = strategy_from_solution(lp, sol);
    for (std::size_t a = 0; a < kept.size(); ++a) {
      for (std::size_t s = 0; s < cfg.size(); ++s) pi(kept[a], s) = T(0);
      for (std::size_t b = 0; b < kept.size(); ++b) pi(kept[a], kept[b]) = reduced_pi(a, b);
    }
    result.multiplicity = sol.multiplicity_flag;
  }
  if (kept.size() != cfg.size())
    result.notes.push_back("dropped " + std::to_string(cfg.size() - kept.size()) +
                           " zero-probability type(s) before building the LP; their rows are truthful");

  for (std::size_t m = 0; m < cfg.size(); ++m)
    for (std::size_t s = 0; s < cfg.size(); ++s)
      if (cfg.alloc[s] < cfg.alloc[m] && pi(m, s) != 0 && !Num<T>::is_zero(cfg.prior[m]))
        throw InternalError("LP optimum under-reports " + cfg.types[m] + " as " + cfg.types[s]);
  const auto sigma = best_response(pi, cfg);
  if (!sigma.is_zero()) throw InternalError("administrator would audit the LP optimum");

  result.profile.strategies.push_back(std::move(pi));
  result.profile.audits.push_back(sigma);
  result.provenance = Provenance::lp;
  result.unique = reduced.size() == 2 && Num<T>::lt(T(0), reduced.delta_f_max());
  evaluate_result(result, cfg);
  return result;
}

template <class T>
std::string to_debug_text(const LinearProgram<T>& lp) {
  std::ostringstream out;
  out << "maximize columns=" << lp.num_columns() << " rows=" << lp.constraints.size() << "\n";
  out << "columns";
  for (const auto& name : lp.column_names) out << ' ' << name;
  out << "\nobjective";
  for (const auto& c : lp.objective) out << ' ' << format_exact(c);
  out << "\n";
  for (const auto& row : lp.constraints) {
    out << "row " << row.label;
    for (const auto& c : row.coeffs) out << ' ' << format_exact(c);
    out << (row.relation == Relation::eq ? " = " : " <= ") << format_exact(row.rhs) << "\n";
  }
  return out.str();
}

#define AUDITGAME_INSTANTIATE(T)                                                        \
  template void evaluate_result(EquilibriumResult<T>&, const GameConfig<T>&);           \
  template LinearProgram<T> build_bp_lp(const GameConfig<T>&);                          \
  template Strategy<T> strategy_from_solution(const LinearProgram<T>&, const LPSolution<T>&); \
  template EquilibriumResult<T> bp_equilibrium(const GameConfig<T>&);                   \
  template std::string to_debug_text(const LinearProgram<T>&);

AUDITGAME_INSTANTIATE(Rational)
AUDITGAME_INSTANTIATE(double)

#undef AUDITGAME_INSTANTIATE

}  // namespace auditgame
