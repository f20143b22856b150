#pragma once

#include "auditgame/core.hpp"
#include "auditgame/equilibrium_result.hpp"
#include "auditgame/lp.hpp"

#include <optional>
#include <string>
#include <utility>
#include <vector>

namespace auditgame {

enum class BudgetRegime {
  UNCONSTRAINED,
  SUFFICIENT,
  TWO_TYPE_SUFFICIENT,
  TWO_TYPE_ANY_BUDGET_SINGLE_USER,
  NONEXISTENCE_POSSIBLE
};

std::string to_string(BudgetRegime r);

template <class T>
struct BudgetAnalysis {
  T threshold_general{0};
  /// Only defined for two-type games.
  std::optional<T> threshold_two_type;
  T threshold_coalition{0};
  BudgetRegime regime = BudgetRegime::UNCONSTRAINED;
};

/// Indices of the low- and high-credit type of a two-type game.
template <class T>
std::pair<std::size_t, std::size_t> two_type_indices(const GameConfig<T>& cfg);

/// min(1, q_H c / (q_L (k − c + Δf))): the largest misreport rate that keeps auditing unprofitable.
template <class T>
T two_type_misreport_rate(const GameConfig<T>& cfg);

/// c·Δf·(1 − rate)/(k + Δf) for two types.
template <class T>
T two_type_budget_threshold(const GameConfig<T>& cfg);

/// c·Δf_max/(k + Δf_max).
template <class T>
T general_budget_threshold(const GameConfig<T>& cfg);

template <class T>
EquilibriumResult<T> two_type_closed_form(const GameConfig<T>& cfg);

template <class T>
BudgetAnalysis<T> budget_thresholds(const GameConfig<T>& cfg);

/// Single user, two types, any finite budget.
template <class T>
EquilibriumResult<T> budgeted_two_type_equilibrium(const GameConfig<T>& cfg);

/// Regime-aware dispatcher returning the administrator-least-favorable equilibrium.
/// Throws NonexistenceError when no equilibrium is guaranteed.
template <class T>
EquilibriumResult<T> signaling_equilibrium(const GameConfig<T>& cfg);

template <class T>
struct VerificationReport {
  bool passed = false;
  bool best_response_matches = false;
  std::vector<T> max_gain_per_type;
  /// Replacement row achieving each type's best gain.
  std::vector<std::vector<T>> best_rows;
  T max_gain{0};
  T slack{0};
  int resolution = 0;
  bool coarse = false;
  std::vector<std::string> messages;
};

/// Re-derives the administrator's response and searches quantized unilateral row
/// replacements for every type.
template <class T>
VerificationReport<T> verify_equilibrium(const EquilibriumResult<T>& result, const GameConfig<T>& cfg,
                                         int resolution);

}  // namespace auditgame
