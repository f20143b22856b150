#pragma once

#include "auditgame/core.hpp"

#include <string>
#include <vector>

namespace auditgame {

enum class Provenance { lp, closed_form_two_type, budgeted_two_type };

std::string to_string(Provenance p);

/// An equilibrium with its evaluated utilities. The profile holds a single shared
/// strategy/audit pair when all users play symmetrically; utilities and `excess`
/// are per user, `total_excess` multiplies by the population.
template <class T>
struct EquilibriumResult {
  StrategyProfile<T> profile;
  std::vector<T> user_utilities;
  T user_utility_avg{0};
  T admin_utility{0};
  T excess{0};
  T total_excess{0};
  /// Raw LP objective Σ q_m Σ_s π(s|m) f(s) (equals user_utility_avg when σ ≡ 0).
  T objective{0};
  Provenance provenance = Provenance::lp;
  bool multiplicity = false;
  bool unique = false;
  std::vector<std::string> notes;

  const Strategy<T>& strategy() const { return profile.strategies.front(); }
  const AuditPolicy<T>& audit() const { return profile.audits.front(); }
};

/// Fills utilities and excess from the first strategy/audit pair of the profile.
template <class T>
void evaluate_result(EquilibriumResult<T>& result, const GameConfig<T>& cfg);

}  // namespace auditgame
