#include "auditgame/oracle.hpp"

#include "auditgame/equilibrium.hpp"

#include <algorithm>
#include <functional>
#include <numeric>

namespace auditgame {

void GridSpec::validate() const {
  if (resolution < 10) throw PreconditionError("grid resolution must be >= 10");
  if (max_enumeration == 0) throw InputError("max_enumeration must be positive");
}

template <class T>
T grid_slack(const GameConfig<T>& cfg, int resolution) {
  return (cfg.delta_f_max() + cfg.fine) / T(resolution);
}

template <class T>
std::vector<AuditPolicy<T>> allocate_budget(const std::vector<Strategy<T>>& strategies,
                                            const GameConfig<T>& cfg, const T& budget) {
  struct Entry {
    std::size_t user;
    std::size_t signal;
    T rho;
  };
  const std::size_t n = cfg.size();
  std::vector<AuditPolicy<T>> out(strategies.size(), AuditPolicy<T>::none(n));
  std::vector<Entry> violators;
  for (std::size_t i = 0; i < strategies.size(); ++i) {
    for (std::size_t s = 0; s < n; ++s) {
      const T gain = audit_gain_mass(strategies[i], s, cfg);
      const T cost = audit_cost_mass(strategies[i], s, cfg);
      if (!Num<T>::leq(gain, cost)) violators.push_back({i, s, gain - cost});
    }
  }
  std::stable_sort(violators.begin(), violators.end(),
                   [](const Entry& a, const Entry& b) { return Num<T>::lt(b.rho, a.rho); });
  const bool free_audits = cfg.audit_cost == 0;
  T remaining = free_audits ? T(0) : T(budget / cfg.audit_cost);
  for (std::size_t g = 0; g < violators.size();) {
    std::size_t h = g + 1;
    while (h < violators.size() && Num<T>::eq(violators[h].rho, violators[g].rho)) ++h;
    const T group = T(static_cast<long long>(h - g));
    T each{1};
    if (!free_audits) {
      each = remaining >= group ? T(1) : T(remaining / group);
      remaining = remaining >= group ? T(remaining - group) : T(0);
    }
    for (std::size_t e = g; e < h; ++e) out[violators[e].user].probs[violators[e].signal] = each;
    g = h;
  }
  return out;
}

namespace {

double count_compositions(int total, std::size_t parts) {
  if (parts == 0) return total == 0 ? 1.0 : 0.0;
  // C(total + parts - 1, parts - 1)
  double c = 1.0;
  for (std::size_t i = 1; i < parts; ++i) c = c * static_cast<double>(total + static_cast<int>(i)) / static_cast<double>(i);
  return c;
}

void for_each_composition(int total, std::size_t parts, const std::function<void(const std::vector<int>&)>& fn) {
  std::vector<int> counts(parts, 0);
  std::function<void(std::size_t, int)> rec = [&](std::size_t idx, int left) {
    if (idx + 1 == parts) {
      counts[idx] = left;
      fn(counts);
      return;
    }
    for (int v = 0; v <= left; ++v) {
      counts[idx] = v;
      rec(idx + 1, left - v);
    }
  };
  if (parts == 0) return;
  rec(0, total);
}

template <class T>
std::vector<T> quantized_row(const std::vector<int>& counts, const std::vector<std::size_t>& columns,
                             std::size_t n, int resolution) {
  std::vector<T> row(n, T(0));
  for (std::size_t i = 0; i < columns.size(); ++i) row[columns[i]] = ratio<T>(counts[i], resolution);
  return row;
}

}  // namespace

template <class T>
GridSearchResult<T> grid_best_strategy(const GameConfig<T>& cfg, const GridSpec& grid) {
  grid.validate();
  cfg.validate(false);
  const std::size_t n = cfg.size();

  std::vector<std::vector<std::size_t>> allowed(n);
  for (std::size_t m = 0; m < n; ++m)
    for (std::size_t s = 0; s < n; ++s)
      if (!(cfg.alloc[s] < cfg.alloc[m])) allowed[m].push_back(s);

  GridSearchResult<T> result;
  int resolution = grid.resolution;
  auto total_points = [&](int r) {
    double c = 1.0;
    for (const auto& cols : allowed) c *= count_compositions(r, cols.size());
    return c;
  };
  while (total_points(resolution) > static_cast<double>(grid.max_enumeration) && resolution > 1) {
    resolution /= 2;
    result.coarse = true;
  }
  result.effective_resolution = resolution;

  struct RowOption {
    std::vector<T> row;
    std::vector<T> pressure;  // gain − cost contribution per signal
    T objective;
  };
  std::vector<std::vector<RowOption>> options(n);
  for (std::size_t m = 0; m < n; ++m) {
    for_each_composition(resolution, allowed[m].size(), [&](const std::vector<int>& counts) {
      RowOption opt;
      opt.row = quantized_row<T>(counts, allowed[m], n, resolution);
      opt.pressure.assign(n, T(0));
      opt.objective = T(0);
      for (std::size_t s = 0; s < n; ++s) {
        const T& p = opt.row[s];
        if (p == 0) continue;
        const T mass = p * cfg.prior[m];
        T per_unit = -cfg.audit_cost;
        if (s != m) per_unit += cfg.fine + positive_part(T(cfg.alloc[s] - cfg.alloc[m]));
        opt.pressure[s] = mass * per_unit;
        opt.objective += mass * cfg.alloc[s];
      }
      options[m].push_back(std::move(opt));
    });
  }

  std::vector<std::size_t> choice(n, 0);
  std::vector<std::size_t> best_choice;
  bool found = false;
  std::vector<std::vector<T>> pressure_stack(n + 1, std::vector<T>(n, T(0)));
  std::vector<T> objective_stack(n + 1, T(0));
  std::function<void(std::size_t)> rec = [&](std::size_t m) {
    if (m == n) {
      ++result.evaluated;
      for (std::size_t s = 0; s < n; ++s)
        if (!Num<T>::leq(pressure_stack[n][s], T(0))) return;
      ++result.feasible;
      if (!found || objective_stack[n] > result.objective) {
        found = true;
        result.objective = objective_stack[n];
        best_choice = choice;
      }
      return;
    }
    for (std::size_t o = 0; o < options[m].size(); ++o) {
      const auto& opt = options[m][o];
      choice[m] = o;
      for (std::size_t s = 0; s < n; ++s) pressure_stack[m + 1][s] = pressure_stack[m][s] + opt.pressure[s];
      objective_stack[m + 1] = objective_stack[m] + opt.objective;
      rec(m + 1);
    }
  };
  rec(0);
  if (!found) throw InternalError("grid search found no unaudited strategy (truthful play is always on-grid)");
  result.strategy.matrix.resize(n);
  for (std::size_t m = 0; m < n; ++m) result.strategy.matrix[m] = options[m][best_choice[m]].row;
  return result;
}

template <class T>
T DeviationReport<T>::max_gain() const {
  if (gains.empty()) return T(0);
  return *std::max_element(gains.begin(), gains.end());
}

template <class T>
DeviationReport<T> deviation_search(const StrategyProfile<T>& profile, const GameConfig<T>& cfg,
                                    const GridSpec& grid) {
  grid.validate();
  cfg.validate(false);
  profile.validate(cfg.size());
  const std::size_t n = cfg.size();
  const bool shared_budget = profile.strategies.size() > 1 && cfg.budget.has_value();

  DeviationReport<T> report;
  int resolution = grid.resolution;
  while (count_compositions(resolution, n) > static_cast<double>(grid.max_enumeration) && resolution > 1) {
    resolution /= 2;
    report.coarse = true;
  }
  report.effective_resolution = resolution;
  report.slack = grid_slack(cfg, resolution);

  std::vector<std::size_t> all_columns(n);
  std::iota(all_columns.begin(), all_columns.end(), std::size_t{0});
  const Strategy<T>& base = profile.strategies.front();
  const AuditPolicy<T>& base_audit = profile.audits.front();

  for (std::size_t m = 0; m < n; ++m) {
    const T base_utility = user_utility_type(base, base_audit, m, cfg);
    bool have = false;
    T best_gain{0};
    std::vector<T> best_row;
    std::vector<Strategy<T>> strategies = profile.strategies;
    for_each_composition(resolution, n, [&](const std::vector<int>& counts) {
      strategies.front().matrix[m] = quantized_row<T>(counts, all_columns, n, resolution);
      AuditPolicy<T> sigma = shared_budget ? allocate_budget(strategies, cfg, *cfg.budget).front()
                                           : best_response(strategies.front(), cfg, cfg.budget);
      const T gain = user_utility_type(strategies.front(), sigma, m, cfg) - base_utility;
      if (!have || gain > best_gain) {
        have = true;
        best_gain = gain;
        best_row = strategies.front().matrix[m];
      }
    });
    report.gains.push_back(best_gain);
    report.best_rows.push_back(best_row);
  }
  return report;
}

ProbeReport nonexistence_probe(const GameConfig<Rational>& cfg, const GridSpec& grid) {
  using R = Rational;
  grid.validate();
  if (cfg.size() != 2) throw PreconditionError("non-existence probe needs exactly 2 types");
  if (cfg.num_users != 2) throw PreconditionError("non-existence probe needs exactly 2 users");
  if (!cfg.budget) throw PreconditionError("non-existence probe needs a budget");
  cfg.validate(false);
  const R& budget = *cfg.budget;
  const R threshold = two_type_budget_threshold(cfg);
  if (!(budget > 0))
    throw PreconditionError("non-existence probe needs a strictly positive budget (got " + format_exact(budget) + ")");
  if (!(budget < threshold))
    throw PreconditionError("budget " + format15(budget) + " is not below the two-type threshold " +
                            format15(threshold) + ": equilibria exist there");

  const auto [lo, hi] = two_type_indices(cfg);
  const R df = cfg.alloc[hi] - cfg.alloc[lo];
  const R rate = two_type_misreport_rate(cfg);
  const int res = grid.resolution;

  auto strategy_for = [&, lo = lo, hi = hi](const R& p) {
    Strategy<R> s = Strategy<R>::truthful(2);
    s(lo, hi) = p;
    s(lo, lo) = R(1) - p;
    return s;
  };
  auto utilities = [&, lo = lo](const R& p1, const R& p2) {
    std::vector<Strategy<R>> strategies{strategy_for(p1), strategy_for(p2)};
    const auto sigma = allocate_budget(strategies, cfg, budget);
    return std::pair<R, R>{user_utility_type(strategies[0], sigma[0], lo, cfg),
                           user_utility_type(strategies[1], sigma[1], lo, cfg)};
  };
  auto rho = [&, lo = lo, hi = hi](const R& p) {
    return cfg.prior[lo] * p * (cfg.fine + df) - (cfg.prior[hi] + cfg.prior[lo] * p) * cfg.audit_cost;
  };
  const R half_share = budget / (R(2) * cfg.audit_cost);

  ProbeReport report;
  report.resolution = res;
  report.budget = format_exact(budget);
  report.threshold_two_type = format_exact(threshold);
  report.misreport_rate = format_exact(rate);
  const std::size_t total = static_cast<std::size_t>(res + 1) * static_cast<std::size_t>(res + 1);
  const std::size_t sample_every = std::max<std::size_t>(1, total / 8);

  for (int a = 0; a <= res; ++a) {
    for (int b = 0; b <= res; ++b) {
      const R p1 = R(a) / R(res);
      const R p2 = R(b) / R(res);
      const auto current = utilities(p1, p2);
      ++report.profiles;

      ProbeTrace trace;
      trace.p1 = format_exact(p1);
      trace.p2 = format_exact(p2);
      trace.rho1 = format_exact(rho(p1));
      trace.rho2 = format_exact(rho(p2));
      bool certified = false;

      auto try_deviation = [&](int user, const R& candidate, const char* rule) {
        const R& own = user == 1 ? p1 : p2;
        if (certified || candidate == own || candidate < 0 || candidate > 1) return;
        const auto after = user == 1 ? utilities(candidate, p2) : utilities(p1, candidate);
        const R gain = user == 1 ? R(after.first - current.first) : R(after.second - current.second);
        if (gain > 0) {
          certified = true;
          trace.deviator = user;
          trace.deviation = format_exact(candidate);
          trace.rule = rule;
          trace.gain = format_exact(gain);
        }
      };

      for (int user = 1; user <= 2 && !certified; ++user) {
        const R& own = user == 1 ? p1 : p2;
        const R& other = user == 1 ? p2 : p1;
        try_deviation(user, R(1), "raise_to_one");
        if (certified) { ++report.by_raise_to_one; break; }
        try_deviation(user, rate, "raise_to_rate");
        if (certified) { ++report.by_raise_to_rate; break; }
        try_deviation(user, (own + other) / R(2), "midpoint");
        if (certified) { ++report.by_midpoint; break; }
        if (own == other && df > 0) {
          const R bound = max_of(R(own * (df - half_share * (cfg.fine + df)) / df), rate);
          if (bound < own) try_deviation(user, (bound + own) / R(2), "tie_undercut");
          if (certified) { ++report.by_tie_undercut; break; }
        }
      }
      for (int user = 1; user <= 2 && !certified; ++user) {
        for (int j = 0; j <= 2 * res && !certified; ++j) try_deviation(user, R(j) / R(2 * res), "grid_scan");
        if (certified) ++report.by_grid_scan;
      }

      if (certified) {
        ++report.certified;
        if ((report.profiles - 1) % sample_every == 0) report.samples.push_back(trace);
      } else if (report.uncertified.size() < 20) {
        report.uncertified.push_back(trace);
      }
    }
  }
  report.fraction = static_cast<double>(report.certified) / static_cast<double>(report.profiles);
  return report;
}

#define AUDITGAME_INSTANTIATE(T)                                                                   \
  template T grid_slack(const GameConfig<T>&, int);                                                \
  template std::vector<AuditPolicy<T>> allocate_budget(const std::vector<Strategy<T>>&,            \
                                                       const GameConfig<T>&, const T&);            \
  template GridSearchResult<T> grid_best_strategy(const GameConfig<T>&, const GridSpec&);          \
  template struct DeviationReport<T>;                                                              \
  template DeviationReport<T> deviation_search(const StrategyProfile<T>&, const GameConfig<T>&,    \
                                               const GridSpec&);

AUDITGAME_INSTANTIATE(Rational)
AUDITGAME_INSTANTIATE(double)

#undef AUDITGAME_INSTANTIATE

}  // namespace auditgame
