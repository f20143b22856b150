#include "auditgame/core.hpp"

#include <algorithm>
#include <set>

namespace auditgame {

namespace {

template <class T>
bool is_finite(const T& x) {
  if constexpr (std::is_same_v<T, double>) {
    return std::isfinite(x);
  } else {
    (void)x;
    return true;
  }
}

template <class T>
bool sums_to_one(const std::vector<T>& v) {
  T total{0};
  for (const auto& x : v) total += x;
  if constexpr (std::is_same_v<T, double>) {
    return std::fabs(total - 1.0) <= 1e-12;
  } else {
    return total == 1;
  }
}

template <class T>
void check_probability_vector(const std::vector<T>& v, std::size_t n, const char* what) {
  if (v.size() != n)
    throw InputError(std::string(what) + " has " + std::to_string(v.size()) + " entries, expected " +
                     std::to_string(n));
  for (const auto& x : v) {
    if (!is_finite(x) || x < 0 || x > 1) throw InputError(std::string(what) + " entry outside [0,1]");
  }
  if (!sums_to_one(v)) throw InputError(std::string(what) + " does not sum to 1");
}

}  // namespace

template <class T>
std::size_t GameConfig<T>::index_of(std::string_view label) const {
  for (std::size_t i = 0; i < types.size(); ++i)
    if (types[i] == label) return i;
  throw InputError("unknown type label '" + std::string(label) + "'");
}

template <class T>
T GameConfig<T>::max_alloc() const {
  if (alloc.empty()) throw InputError("empty allocation");
  return *std::max_element(alloc.begin(), alloc.end());
}

template <class T>
T GameConfig<T>::min_alloc() const {
  if (alloc.empty()) throw InputError("empty allocation");
  return *std::min_element(alloc.begin(), alloc.end());
}

template <class T>
T GameConfig<T>::expected_alloc() const {
  T total{0};
  for (std::size_t m = 0; m < size(); ++m) total += prior[m] * alloc[m];
  return total;
}

template <class T>
void GameConfig<T>::validate(bool require_fine_at_least_cost) const {
  if (types.size() < 2) throw InputError("types: need at least 2 types");
  std::set<std::string> seen(types.begin(), types.end());
  if (seen.size() != types.size()) throw InputError("types: duplicate label");
  check_probability_vector(prior, types.size(), "prior");
  if (alloc.size() != types.size()) throw InputError("alloc: size does not match types");
  for (const auto& f : alloc)
    if (!is_finite(f) || f < 0) throw InputError("alloc: values must be finite and >= 0");
  if (!is_finite(audit_cost) || audit_cost < 0) throw InputError("audit_cost: must be >= 0");
  if (!is_finite(fine)) throw InputError("fine: must be finite");
  if (fine < 0) throw InputError("fine: must be >= 0");
  if (require_fine_at_least_cost && fine < audit_cost)
    throw InputError("fine must be >= audit_cost (k >= c)");
  if (budget && (!is_finite(*budget) || *budget < 0)) throw InputError("budget: must be >= 0");
  if (num_users < 1) throw InputError("num_users: must be >= 1");
  if (coalition_size < 1 || coalition_size > num_users)
    throw InputError("coalition_size: must satisfy 1 <= l <= num_users");
}

GameConfig<double> to_double_config(const GameConfig<Rational>& cfg) {
  GameConfig<double> out;
  out.types = cfg.types;
  for (const auto& q : cfg.prior) out.prior.push_back(to_double(q));
  for (const auto& f : cfg.alloc) out.alloc.push_back(to_double(f));
  out.audit_cost = to_double(cfg.audit_cost);
  out.fine = to_double(cfg.fine);
  if (cfg.budget) out.budget = to_double(*cfg.budget);
  out.num_users = cfg.num_users;
  out.coalition_size = cfg.coalition_size;
  return out;
}

template <class T>
GameConfig<T> two_type_config(const T& q_low, const T& f_low, const T& f_high, const T& c,
                              const T& k) {
  GameConfig<T> cfg;
  cfg.types = {"L", "H"};
  cfg.prior = {q_low, T(1) - q_low};
  cfg.alloc = {f_low, f_high};
  cfg.audit_cost = c;
  cfg.fine = k;
  return cfg;
}

template <class T>
GameConfig<T> prune_zero_prior(const GameConfig<T>& cfg, std::vector<std::size_t>& kept) {
  kept.clear();
  GameConfig<T> out = cfg;
  out.types.clear();
  out.prior.clear();
  out.alloc.clear();
  for (std::size_t m = 0; m < cfg.size(); ++m) {
    if (Num<T>::is_zero(cfg.prior[m])) continue;
    kept.push_back(m);
    out.types.push_back(cfg.types[m]);
    out.prior.push_back(cfg.prior[m]);
    out.alloc.push_back(cfg.alloc[m]);
  }
  return out;
}

template <class T>
Strategy<T> Strategy<T>::truthful(std::size_t n) {
  Strategy<T> pi;
  pi.matrix.assign(n, std::vector<T>(n, T(0)));
  for (std::size_t m = 0; m < n; ++m) pi.matrix[m][m] = T(1);
  return pi;
}

template <class T>
void Strategy<T>::validate(std::size_t n) const {
  if (matrix.size() != n) throw InputError("strategy: wrong number of rows");
  for (const auto& row : matrix) check_probability_vector(row, n, "strategy row");
}

template <class T>
bool AuditPolicy<T>::is_zero() const {
  return std::all_of(probs.begin(), probs.end(), [](const T& x) { return x == 0; });
}

template <class T>
void AuditPolicy<T>::validate(std::size_t n) const {
  if (probs.size() != n) throw InputError("audit policy: wrong number of signals");
  for (const auto& x : probs)
    if (!is_finite(x) || x < 0 || x > 1) throw InputError("audit policy: entry outside [0,1]");
}

template <class T>
void StrategyProfile<T>::validate(std::size_t n) const {
  if (strategies.empty() || audits.empty()) throw InputError("profile: empty");
  for (const auto& s : strategies) s.validate(n);
  for (const auto& a : audits) a.validate(n);
}

namespace {

template <class T>
void check_indices(std::size_t signal, std::size_t truth, const GameConfig<T>& cfg) {
  if (signal >= cfg.size() || truth >= cfg.size()) throw InputError("type index out of range");
}

template <class T>
void check_dims(const Strategy<T>& pi, const AuditPolicy<T>& sigma, const GameConfig<T>& cfg) {
  const std::size_t n = cfg.size();
  if (pi.size() != n || sigma.probs.size() != n) throw InputError("dimension mismatch with config");
  for (const auto& row : pi.matrix)
    if (row.size() != n) throw InputError("dimension mismatch with config");
}

template <class T>
void check_audit_flag(int audit_flag) {
  if (audit_flag != 0 && audit_flag != 1) throw InputError("audit flag must be 0 or 1");
}

}  // namespace

template <class T>
T admin_payoff(int audit_flag, std::size_t signal, std::size_t truth, const GameConfig<T>& cfg) {
  check_audit_flag<T>(audit_flag);
  check_indices(signal, truth, cfg);
  const T& fs = cfg.alloc[signal];
  const T& fm = cfg.alloc[truth];
  if (audit_flag == 0) return -fs;
  if (signal == truth) return -cfg.audit_cost - fm;
  return cfg.fine - cfg.audit_cost - min_of(fm, fs);
}

template <class T>
T user_payoff(int audit_flag, std::size_t signal, std::size_t truth, const GameConfig<T>& cfg) {
  check_audit_flag<T>(audit_flag);
  check_indices(signal, truth, cfg);
  const T& fs = cfg.alloc[signal];
  const T& fm = cfg.alloc[truth];
  if (audit_flag == 0) return fs;
  if (signal == truth) return fm;
  return min_of(fm, fs) - cfg.fine;
}

template <class T>
T admin_utility(const Strategy<T>& pi, const AuditPolicy<T>& sigma, const GameConfig<T>& cfg) {
  check_dims(pi, sigma, cfg);
  const std::size_t n = cfg.size();
  T total{0};
  for (std::size_t m = 0; m < n; ++m) {
    for (std::size_t s = 0; s < n; ++s) {
      const T& p = pi(m, s);
      if (p == 0) continue;
      T audit_term = -cfg.audit_cost;
      if (s != m) audit_term += positive_part(T(cfg.alloc[s] - cfg.alloc[m])) + cfg.fine;
      total += cfg.prior[m] * p * (-cfg.alloc[s] + sigma.probs[s] * audit_term);
    }
  }
  return total;
}

template <class T>
T user_utility_type(const Strategy<T>& pi, const AuditPolicy<T>& sigma, std::size_t truth,
                    const GameConfig<T>& cfg) {
  check_dims(pi, sigma, cfg);
  if (truth >= cfg.size()) throw InputError("type index out of range");
  const std::size_t m = truth;
  T total{0};
  for (std::size_t s = 0; s < cfg.size(); ++s) {
    const T& p = pi(m, s);
    if (p == 0) continue;
    T value = cfg.alloc[s];
    if (s != m) value -= sigma.probs[s] * (positive_part(T(cfg.alloc[s] - cfg.alloc[m])) + cfg.fine);
    total += p * value;
  }
  return total;
}

template <class T>
T user_utility_avg(const Strategy<T>& pi, const AuditPolicy<T>& sigma, const GameConfig<T>& cfg) {
  T total{0};
  for (std::size_t m = 0; m < cfg.size(); ++m)
    total += cfg.prior[m] * user_utility_type(pi, sigma, m, cfg);
  return total;
}

template <class T>
T excess_payments(const Strategy<T>& pi, const AuditPolicy<T>& sigma, const GameConfig<T>& cfg) {
  check_dims(pi, sigma, cfg);
  const std::size_t n = cfg.size();
  T total{0};
  for (std::size_t m = 0; m < n; ++m) {
    for (std::size_t s = 0; s < n; ++s) {
      const T& p = pi(m, s);
      if (p == 0) continue;
      const T& fm = cfg.alloc[m];
      const T over_unaudited = positive_part(T(user_payoff(0, s, m, cfg) - fm));
      const T over_audited = positive_part(T(user_payoff(1, s, m, cfg) - fm));
      const T& a = sigma.probs[s];
      total += cfg.prior[m] * p * ((T(1) - a) * over_unaudited + a * over_audited);
    }
  }
  return total;
}

template <class T>
T audit_gain_mass(const Strategy<T>& pi, std::size_t s, const GameConfig<T>& cfg) {
  T lhs{0};
  for (std::size_t m = 0; m < cfg.size(); ++m) {
    if (m == s || pi(m, s) == 0) continue;
    lhs += pi(m, s) * cfg.prior[m] * (positive_part(T(cfg.alloc[s] - cfg.alloc[m])) + cfg.fine);
  }
  return lhs;
}

template <class T>
T audit_cost_mass(const Strategy<T>& pi, std::size_t s, const GameConfig<T>& cfg) {
  T mass{0};
  for (std::size_t m = 0; m < cfg.size(); ++m) mass += pi(m, s) * cfg.prior[m];
  return cfg.audit_cost * mass;
}

template <class T>
AuditPolicy<T> best_response(const Strategy<T>& pi, const GameConfig<T>& cfg,
                             const std::optional<T>& budget_cap) {
  const std::size_t n = cfg.size();
  if (pi.size() != n) throw InputError("dimension mismatch with config");
  if (budget_cap && *budget_cap < 0) throw InputError("budget cap must be >= 0");
  T audit_level{1};
  if (budget_cap && cfg.audit_cost > 0) audit_level = min_of(T(1), T(*budget_cap / cfg.audit_cost));
  AuditPolicy<T> sigma = AuditPolicy<T>::none(n);
  for (std::size_t s = 0; s < n; ++s) {
    const T lhs = audit_gain_mass(pi, s, cfg);
    const T rhs = audit_cost_mass(pi, s, cfg);
    if (!Num<T>::leq(lhs, rhs)) sigma.probs[s] = audit_level;
  }
  return sigma;
}

template <class T>
Strategy<T> redirect_to_truth(const Strategy<T>& pi, std::size_t signal, std::size_t truth) {
  Strategy<T> out = pi;
  if (signal == truth) return out;
  out(truth, truth) += out(truth, signal);
  out(truth, signal) = T(0);
  return out;
}

template <class T>
Strategy<T> remove_underreporting(const Strategy<T>& pi, const GameConfig<T>& cfg) {
  Strategy<T> out = pi;
  for (std::size_t m = 0; m < cfg.size(); ++m)
    for (std::size_t s = 0; s < cfg.size(); ++s)
      if (cfg.alloc[s] < cfg.alloc[m] && out(m, s) != 0) out = redirect_to_truth(out, s, m);
  return out;
}

#define AUDITGAME_INSTANTIATE(T)                                                                   \
  template struct GameConfig<T>;                                                                   \
  template struct Strategy<T>;                                                                     \
  template struct AuditPolicy<T>;                                                                  \
  template struct StrategyProfile<T>;                                                              \
  template GameConfig<T> two_type_config(const T&, const T&, const T&, const T&, const T&);        \
  template GameConfig<T> prune_zero_prior(const GameConfig<T>&, std::vector<std::size_t>&);        \
  template T admin_payoff(int, std::size_t, std::size_t, const GameConfig<T>&);                    \
  template T user_payoff(int, std::size_t, std::size_t, const GameConfig<T>&);                     \
  template T admin_utility(const Strategy<T>&, const AuditPolicy<T>&, const GameConfig<T>&);       \
  template T user_utility_type(const Strategy<T>&, const AuditPolicy<T>&, std::size_t,             \
                               const GameConfig<T>&);                                              \
  template T user_utility_avg(const Strategy<T>&, const AuditPolicy<T>&, const GameConfig<T>&);    \
  template T excess_payments(const Strategy<T>&, const AuditPolicy<T>&, const GameConfig<T>&);     \
  template T audit_gain_mass(const Strategy<T>&, std::size_t, const GameConfig<T>&);               \
  template T audit_cost_mass(const Strategy<T>&, std::size_t, const GameConfig<T>&);               \
  template AuditPolicy<T> best_response(const Strategy<T>&, const GameConfig<T>&,                  \
                                        const std::optional<T>&);                                  \
  template Strategy<T> redirect_to_truth(const Strategy<T>&, std::size_t, std::size_t);            \
  template Strategy<T> remove_underreporting(const Strategy<T>&, const GameConfig<T>&);

AUDITGAME_INSTANTIATE(Rational)
AUDITGAME_INSTANTIATE(double)

#undef AUDITGAME_INSTANTIATE

}  // namespace auditgame
