#pragma once

#include "auditgame/core.hpp"

#include <cstddef>
#include <string>
#include <vector>

namespace auditgame {

struct GridSpec {
  int resolution = 200;
  /// Above this many enumerated points the resolution is halved until it fits.
  std::size_t max_enumeration = 50'000'000;

  void validate() const;
};

/// Utility change a user can cause by moving within one grid cell: (Δf_max + k)/resolution.
template <class T>
T grid_slack(const GameConfig<T>& cfg, int resolution);

/// Audit probabilities for several users sharing one budget. Violating (user, signal)
/// pairs are served in decreasing order of their audit gain; tied pairs split equally.
/// Total spend c·Σσ never exceeds B.
template <class T>
std::vector<AuditPolicy<T>> allocate_budget(const std::vector<Strategy<T>>& strategies,
                                            const GameConfig<T>& cfg, const T& budget);

template <class T>
struct GridSearchResult {
  Strategy<T> strategy;
  T objective{0};
  bool coarse = false;
  int effective_resolution = 0;
  std::size_t evaluated = 0;
  std::size_t feasible = 0;
};

/// Brute force over quantized strategies with no under-reporting that leave every
/// signal unaudited. Returns the one with the largest average user utility.
template <class T>
GridSearchResult<T> grid_best_strategy(const GameConfig<T>& cfg, const GridSpec& grid);

template <class T>
struct DeviationReport {
  std::vector<T> gains;
  std::vector<std::vector<T>> best_rows;
  T slack{0};
  bool coarse = false;
  int effective_resolution = 0;

  T max_gain() const;
};

/// For each type m, tries every quantized replacement of row m of the first user's
/// strategy, lets the administrator re-optimize, and records the largest gain in that
/// type's utility. Multi-user budgeted profiles reallocate the shared budget.
template <class T>
DeviationReport<T> deviation_search(const StrategyProfile<T>& profile, const GameConfig<T>& cfg,
                                    const GridSpec& grid);

struct ProbeTrace {
  std::string p1;
  std::string p2;
  std::string rho1;
  std::string rho2;
  int deviator = 0;
  std::string deviation;
  std::string rule;
  std::string gain;
};

struct ProbeReport {
  int resolution = 0;
  std::string budget;
  std::string threshold_two_type;
  std::string misreport_rate;
  std::size_t profiles = 0;
  std::size_t certified = 0;
  double fraction = 0.0;
  std::size_t by_raise_to_one = 0;
  std::size_t by_raise_to_rate = 0;
  std::size_t by_midpoint = 0;
  std::size_t by_tie_undercut = 0;
  std::size_t by_grid_scan = 0;
  std::vector<ProbeTrace> samples;
  std::vector<ProbeTrace> uncertified;
};

/// Two users, two types, budget strictly between 0 and the two-type threshold: for every
/// quantized pair of misreport rates, exhibits a unilateral deviation that strictly pays.
ProbeReport nonexistence_probe(const GameConfig<Rational>& cfg, const GridSpec& grid);

}  // namespace auditgame
