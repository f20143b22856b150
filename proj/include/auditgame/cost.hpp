#pragma once

#include "auditgame/core.hpp"

#include <optional>
#include <string>

namespace auditgame {

template <class T>
struct CostReport {
  T cost_no_audit{0};
  T cost_audit{0};
  T budget_component{0};
  T excess_component{0};
  std::string regime_note;
  /// Fine at or above which audits are guaranteed to be cheaper (more than two types only).
  std::optional<T> fine_threshold;
  bool fine_threshold_undefined = false;
  bool dominates = false;
  /// "dominates" or "not_guaranteed".
  std::string verdict;
};

/// Status-quo overpayment: n·(max f − Σ q_m f(m)).
template <class T>
T cost_no_audit(const GameConfig<T>& cfg);

/// Two types, budget pinned at l times the two-type threshold.
template <class T>
CostReport<T> cost_audit_two_type(const GameConfig<T>& cfg);

/// More than two types, per-user budget c·Δf_max/(k + Δf_max), LP excess, scaled by n.
template <class T>
CostReport<T> cost_audit_multitype(const GameConfig<T>& cfg);

template <class T>
CostReport<T> compare(const GameConfig<T>& cfg);

}  // namespace auditgame
