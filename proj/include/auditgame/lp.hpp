#pragma once

#include "auditgame/core.hpp"
#include "auditgame/equilibrium_result.hpp"

#include <string>
#include <vector>

namespace auditgame {

enum class Relation { leq, eq };

template <class T>
struct LinearConstraint {
  std::string label;
  std::vector<T> coeffs;
  Relation relation = Relation::leq;
  T rhs{0};
};

/// max objective·x subject to the constraints and x ≥ 0.
template <class T>
struct LinearProgram {
  std::vector<std::string> column_names;
  std::vector<T> objective;
  std::vector<LinearConstraint<T>> constraints;
  /// Number of types when built from a game (columns = n·n), 0 otherwise.
  std::size_t num_types = 0;

  std::size_t num_columns() const { return objective.size(); }
  /// Column of π(s | m).
  std::size_t column(std::size_t signal, std::size_t truth) const { return truth * num_types + signal; }
};

enum class LPStatus { optimal, infeasible, unbounded };

std::string to_string(LPStatus s);

template <class T>
struct LPSolution {
  LPStatus status = LPStatus::infeasible;
  std::vector<T> values;
  T objective_value{0};
  /// Some nonbasic column has zero reduced cost at the optimum.
  bool multiplicity_flag = false;
  std::size_t pivots = 0;
};

/// Maximizes the users' average credit subject to one no-audit row per signal and
/// row-stochastic equalities per type.
template <class T>
LinearProgram<T> build_bp_lp(const GameConfig<T>& cfg);

/// Dense two-phase primal simplex with Bland's rule. Exact for Rational.
template <class T>
LPSolution<T> solve_lp(const LinearProgram<T>& lp);

/// Reads the optimal π back out of an LP built by build_bp_lp.
template <class T>
Strategy<T> strategy_from_solution(const LinearProgram<T>& lp, const LPSolution<T>& sol);

/// Sender-preferred equilibrium: σ ≡ 0 and π solving the LP. Throws RegimeError when
/// a budget is set below the coalition-scaled sufficient-budget threshold.
template <class T>
EquilibriumResult<T> bp_equilibrium(const GameConfig<T>& cfg);

/// Plain-text dump: header, column names, objective, then one line per constraint.
template <class T>
std::string to_debug_text(const LinearProgram<T>& lp);

}  // namespace auditgame
