#pragma once

#include "auditgame/core.hpp"

#include <string_view>
#include <utility>
#include <vector>

namespace auditgame {

template <class T>
struct MisreportBound {
  T cap{1};
  /// Denominator k − c + f(s) − f(m) was not positive; the cap is the trivial 1.
  bool vacuous = false;
};

/// Largest π(s|m) compatible with the administrator not auditing s:
/// min(q_s c / (q_m (k − c + f(s) − f(m))), 1).
template <class T>
MisreportBound<T> misreport_prob_bound(const GameConfig<T>& cfg, std::size_t signal, std::size_t truth);
template <class T>
MisreportBound<T> misreport_prob_bound(const GameConfig<T>& cfg, std::string_view signal,
                                       std::string_view truth) {
  return misreport_prob_bound(cfg, cfg.index_of(signal), cfg.index_of(truth));
}

/// c·Δf_max/(k + Δf_max): ceiling on per-user excess payments in any equilibrium.
template <class T>
T excess_payments_bound(const GameConfig<T>& cfg);

/// Smallest fine k ≥ c whose excess bound is at most `max_excess`.
template <class T>
T fine_for_tolerance(const GameConfig<T>& cfg, const T& max_excess);

template <class T>
struct BoundReport {
  /// caps[m][s] for s ≠ m; the diagonal holds 1.
  std::vector<std::vector<T>> caps;
  std::vector<std::vector<bool>> vacuous;
  T excess_cap{0};
  /// (signal, truth) pairs where the supplied strategy sits exactly on its cap.
  std::vector<std::pair<std::size_t, std::size_t>> binding_pairs;
};

template <class T>
BoundReport<T> bound_report(const GameConfig<T>& cfg, const Strategy<T>* strategy = nullptr);

/// True when every misreport entry of π respects its cap and the excess respects the ceiling.
template <class T>
bool satisfies_bounds(const Strategy<T>& pi, const T& excess, const GameConfig<T>& cfg);

}  // namespace auditgame
