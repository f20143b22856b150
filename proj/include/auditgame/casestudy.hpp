#pragma once

#include "auditgame/core.hpp"

#include <optional>
#include <string>
#include <vector>

namespace auditgame {

/// Grid sweep around a base game. For two-type bases, q_min is the prior of the
/// low-credit type and the high type gets 1 − q_min.
struct SweepSpec {
  GameConfig<Rational> base;
  std::vector<Rational> q_min_grid;
  std::vector<Rational> c_grid;
  std::vector<Rational> k_grid;
  std::vector<long long> coalition_grid;
  Rational reference_line{0};

  void validate() const;
};

/// Transit-benefit calibration: 4000 users, credits 50 and 105, monthly fraud reference 83,333.
SweepSpec ftbp_preset();

/// Misreport-probability surface: q_min ∈ {1/4, 1/2, 3/4}, c ∈ {25,…,150}, k ∈ {100,…,1000}.
SweepSpec surface_preset();

/// Evenly spaced values from..to with the given step, all exact.
std::vector<Rational> rational_range(const Rational& from, const Rational& to, const Rational& step);

template <class T>
struct CostRow {
  T q_min{0};
  T c{0};
  T k{0};
  long long l = 1;
  T cost_no_audit{0};
  T cost_audit{0};
  T budget{0};
  T excess{0};
  bool dominates = false;
  T reference_line{0};
  std::string note;
};

template <class T>
struct SurfaceRow {
  T q_min{0};
  T c{0};
  T k{0};
  T max_misreport_prob{0};
  std::string note;
};

/// One row per (q_min, c, k, l), q_min major. Rows are computed on `workers` threads and
/// placed by index, so the output does not depend on scheduling.
template <class T>
std::vector<CostRow<T>> sweep_costs(const SweepSpec& spec, int workers = 1);

/// One row per (q_min, c, k): the largest off-diagonal entry of the equilibrium strategy.
template <class T>
std::vector<SurfaceRow<T>> sweep_misreport_surface(const SweepSpec& spec, int workers = 1);

/// Game at one grid point of the sweep.
template <class T>
GameConfig<T> sweep_point(const SweepSpec& spec, const Rational& q_min, const Rational& c, const Rational& k,
                          long long l);

template <class T>
std::string cost_rows_csv(const std::vector<CostRow<T>>& rows);
template <class T>
std::string surface_rows_csv(const std::vector<SurfaceRow<T>>& rows);

/// q_min where the no-audit cost first reaches the reference line, by linear interpolation
/// between consecutive grid rows of the first (c, k, l) combination.
template <class T>
std::optional<double> reference_crossing(const std::vector<CostRow<T>>& rows);

}  // namespace auditgame
