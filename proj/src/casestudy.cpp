#include "auditgame/casestudy.hpp"

#include "auditgame/cost.hpp"
#include "auditgame/equilibrium.hpp"
#include "auditgame/lp.hpp"

#include <algorithm>
#include <atomic>
#include <exception>
#include <sstream>
#include <thread>

namespace auditgame {

void SweepSpec::validate() const {
  if (q_min_grid.empty() || c_grid.empty() || k_grid.empty() || coalition_grid.empty())
    throw InputError("sweep grids must be non-empty");
  for (const auto& q : q_min_grid)
    if (q < 0 || q > 1) throw InputError("q_min grid values must lie in [0,1]");
  for (const auto& c : c_grid)
    if (c < 0) throw InputError("c grid values must be >= 0");
  for (const auto& k : k_grid)
    if (k < 0) throw InputError("k grid values must be >= 0");
  for (auto l : coalition_grid)
    if (l < 1 || l > base.num_users) throw InputError("coalition sizes must lie in [1, num_users]");
  if (base.size() < 2) throw InputError("sweep base needs at least 2 types");
}

std::vector<Rational> rational_range(const Rational& from, const Rational& to, const Rational& step) {
  if (!(step > 0)) throw InputError("range step must be positive");
  std::vector<Rational> out;
  for (Rational x = from; x <= to; x += step) out.push_back(x);
  return out;
}

SweepSpec ftbp_preset() {
  SweepSpec spec;
  spec.base.types = {"L", "H"};
  spec.base.prior = {Rational(1, 2), Rational(1, 2)};
  spec.base.alloc = {Rational(50), Rational(105)};
  spec.base.audit_cost = 75;
  spec.base.fine = 300;
  spec.base.num_users = 4000;
  spec.base.coalition_size = 1;
  spec.q_min_grid = rational_range(Rational(1, 100), Rational(99, 100), Rational(1, 100));
  spec.c_grid = {25, 75, 125};
  spec.k_grid = {100, 300, 500};
  spec.coalition_grid = {1, 150};
  spec.reference_line = 83333;
  return spec;
}

SweepSpec surface_preset() {
  SweepSpec spec = ftbp_preset();
  spec.base.num_users = 1;
  spec.q_min_grid = {Rational(1, 4), Rational(1, 2), Rational(3, 4)};
  spec.c_grid = rational_range(25, 150, 25);
  spec.k_grid = rational_range(100, 1000, 100);
  spec.coalition_grid = {1};
  spec.reference_line = 0;
  return spec;
}

template <class T>
GameConfig<T> sweep_point(const SweepSpec& spec, const Rational& q_min, const Rational& c, const Rational& k,
                          long long l) {
  GameConfig<Rational> cfg = spec.base;
  cfg.audit_cost = c;
  cfg.fine = k;
  cfg.coalition_size = l;
  if (cfg.size() == 2) {
    const auto [lo, hi] = two_type_indices(cfg);
    cfg.prior[lo] = q_min;
    cfg.prior[hi] = Rational(1) - q_min;
  }
  if constexpr (std::is_same_v<T, double>) {
    return to_double_config(cfg);
  } else {
    return cfg;
  }
}

namespace {

template <class Fn>
void run_parallel(std::size_t count, int workers, Fn&& fn) {
  const std::size_t threads = std::clamp<std::size_t>(workers < 1 ? 1 : static_cast<std::size_t>(workers), 1, 64);
  if (threads == 1 || count < 2) {
    for (std::size_t i = 0; i < count; ++i) fn(i);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::vector<std::thread> pool;
  std::exception_ptr failure;
  std::atomic<bool> failed{false};
  for (std::size_t t = 0; t < threads; ++t) {
    pool.emplace_back([&] {
      while (true) {
        const std::size_t i = next.fetch_add(1);
        if (i >= count || failed.load()) return;
        try {
          fn(i);
        } catch (...) {
          if (!failed.exchange(true)) failure = std::current_exception();
        }
      }
    });
  }
  for (auto& th : pool) th.join();
  if (failure) std::rethrow_exception(failure);
}

}  // namespace

template <class T>
std::vector<CostRow<T>> sweep_costs(const SweepSpec& spec, int workers) {
  spec.validate();
  struct Key {
    Rational q, c, k;
    long long l;
  };
  std::vector<Key> keys;
  for (const auto& q : spec.q_min_grid)
    for (const auto& c : spec.c_grid)
      for (const auto& k : spec.k_grid)
        for (auto l : spec.coalition_grid) keys.push_back({q, c, k, l});

  std::vector<CostRow<T>> rows(keys.size());
  const T reference = from_rational<T>(spec.reference_line);
  run_parallel(keys.size(), workers, [&](std::size_t i) {
    const auto& key = keys[i];
    CostRow<T> row;
    row.q_min = from_rational<T>(key.q);
    row.c = from_rational<T>(key.c);
    row.k = from_rational<T>(key.k);
    row.l = key.l;
    row.reference_line = reference;
    try {
      const auto cfg = sweep_point<T>(spec, key.q, key.c, key.k, key.l);
      cfg.validate(false);
      const auto report = compare(cfg);
      row.cost_no_audit = report.cost_no_audit;
      row.cost_audit = report.cost_audit;
      row.budget = report.budget_component;
      row.excess = report.excess_component;
      row.dominates = report.dominates;
      row.note = report.regime_note;
    } catch (const std::exception& e) {
      row.note = std::string("error: ") + e.what();
    }
    rows[i] = std::move(row);
  });
  return rows;
}

template <class T>
std::vector<SurfaceRow<T>> sweep_misreport_surface(const SweepSpec& spec, int workers) {
  spec.validate();
  struct Key {
    Rational q, c, k;
  };
  std::vector<Key> keys;
  for (const auto& q : spec.q_min_grid)
    for (const auto& c : spec.c_grid)
      for (const auto& k : spec.k_grid) keys.push_back({q, c, k});

  std::vector<SurfaceRow<T>> rows(keys.size());
  run_parallel(keys.size(), workers, [&](std::size_t i) {
    const auto& key = keys[i];
    SurfaceRow<T> row;
    row.q_min = from_rational<T>(key.q);
    row.c = from_rational<T>(key.c);
    row.k = from_rational<T>(key.k);
    try {
      GameConfig<T> cfg = sweep_point<T>(spec, key.q, key.c, key.k, 1);
      cfg.budget.reset();
      cfg.num_users = 1;
      cfg.validate(false);
      const auto eq = cfg.size() == 2 ? two_type_closed_form(cfg) : bp_equilibrium(cfg);
      T best{0};
      for (std::size_t m = 0; m < cfg.size(); ++m)
        for (std::size_t s = 0; s < cfg.size(); ++s)
          if (s != m) best = max_of(best, eq.strategy()(m, s));
      row.max_misreport_prob = best;
      if (key.k < key.c) row.note = "k < c";
    } catch (const std::exception& e) {
      row.note = std::string("error: ") + e.what();
    }
    rows[i] = std::move(row);
  });
  return rows;
}

template <class T>
std::string cost_rows_csv(const std::vector<CostRow<T>>& rows) {
  std::ostringstream out;
  out << "q_min,c,k,l,cost_no_audit,cost_audit,budget,excess,dominates,reference_line\n";
  for (const auto& r : rows) {
    out << format15(r.q_min) << ',' << format15(r.c) << ',' << format15(r.k) << ',' << r.l << ','
        << format15(r.cost_no_audit) << ',' << format15(r.cost_audit) << ',' << format15(r.budget) << ','
        << format15(r.excess) << ',' << (r.dominates ? "true" : "false") << ',' << format15(r.reference_line)
        << '\n';
  }
  return out.str();
}

template <class T>
std::string surface_rows_csv(const std::vector<SurfaceRow<T>>& rows) {
  std::ostringstream out;
  out << "q_min,c,k,max_misreport_prob\n";
  for (const auto& r : rows)
    out << format15(r.q_min) << ',' << format15(r.c) << ',' << format15(r.k) << ','
        << format15(r.max_misreport_prob) << '\n';
  return out.str();
}

template <class T>
std::optional<double> reference_crossing(const std::vector<CostRow<T>>& rows) {
  if (rows.empty()) return std::nullopt;
  const auto& first = rows.front();
  std::vector<const CostRow<T>*> curve;
  for (const auto& r : rows)
    if (r.c == first.c && r.k == first.k && r.l == first.l) curve.push_back(&r);
  const double ref = to_double(first.reference_line);
  for (std::size_t i = 0; i < curve.size(); ++i) {
    const double y1 = to_double(curve[i]->cost_no_audit);
    if (y1 < ref) continue;
    const double x1 = to_double(curve[i]->q_min);
    if (i == 0) return x1;
    const double x0 = to_double(curve[i - 1]->q_min);
    const double y0 = to_double(curve[i - 1]->cost_no_audit);
    return x0 + (ref - y0) * (x1 - x0) / (y1 - y0);
  }
  return std::nullopt;
}

#define AUDITGAME_INSTANTIATE(T)                                                                        \
  template GameConfig<T> sweep_point(const SweepSpec&, const Rational&, const Rational&, const Rational&, \
                                     long long);                                                        \
  template std::vector<CostRow<T>> sweep_costs(const SweepSpec&, int);                                  \
  template std::vector<SurfaceRow<T>> sweep_misreport_surface(const SweepSpec&, int);                   \
  template std::string cost_rows_csv(const std::vector<CostRow<T>>&);                                   \
  template std::string surface_rows_csv(const std::vector<SurfaceRow<T>>&);                             \
  template std::optional<double> reference_crossing(const std::vector<CostRow<T>>&);

AUDITGAME_INSTANTIATE(Rational)
AUDITGAME_INSTANTIATE(double)

#undef AUDITGAME_INSTANTIATE

}  // namespace auditgame
