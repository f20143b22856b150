#pragma once

#include "auditgame/errors.hpp"
#include "auditgame/numeric.hpp"

#include <cstddef>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace auditgame {

/// One audit-game instance. `alloc[i]` is the credit f owed to type `types[i]`.
template <class T>
struct GameConfig {
  std::vector<std::string> types;
  std::vector<T> prior;
  std::vector<T> alloc;
  T audit_cost{0};
  T fine{0};
  std::optional<T> budget;
  long long num_users = 1;
  long long coalition_size = 1;

  std::size_t size() const { return types.size(); }
  std::size_t index_of(std::string_view label) const;
  T max_alloc() const;
  T min_alloc() const;
  T delta_f_max() const { return max_alloc() - min_alloc(); }
  /// Σ_m q_m f(m).
  T expected_alloc() const;

  /// Throws InputError on the first violated invariant. Sweeps over grids that
  /// contain k < c points pass `require_fine_at_least_cost = false`.
  void validate(bool require_fine_at_least_cost = true) const;
};

/// Element-wise conversion of every numeric field.
GameConfig<double> to_double_config(const GameConfig<Rational>& cfg);

/// Convenience for two-type games: types {L, H} with f(L) ≤ f(H).
template <class T>
GameConfig<T> two_type_config(const T& q_low, const T& f_low, const T& f_high, const T& c,
                              const T& k);

/// Drops types with zero prior mass. `kept` receives the surviving original indices.
template <class T>
GameConfig<T> prune_zero_prior(const GameConfig<T>& cfg, std::vector<std::size_t>& kept);

/// Row-stochastic signaling policy: matrix[m][s] = π(s | m).
template <class T>
struct Strategy {
  std::vector<std::vector<T>> matrix;

  static Strategy truthful(std::size_t n);
  std::size_t size() const { return matrix.size(); }
  const T& operator()(std::size_t m, std::size_t s) const { return matrix[m][s]; }
  T& operator()(std::size_t m, std::size_t s) { return matrix[m][s]; }
  void validate(std::size_t n) const;
  bool operator==(const Strategy&) const = default;
};

/// σ(s): probability of auditing signal s.
template <class T>
struct AuditPolicy {
  std::vector<T> probs;

  static AuditPolicy none(std::size_t n) { return AuditPolicy{std::vector<T>(n, T(0))}; }
  bool is_zero() const;
  void validate(std::size_t n) const;
  bool operator==(const AuditPolicy&) const = default;
};

/// One strategy and one audit policy per user (a single shared entry when users are symmetric).
template <class T>
struct StrategyProfile {
  std::vector<Strategy<T>> strategies;
  std::vector<AuditPolicy<T>> audits;

  void validate(std::size_t n) const;
};

// Payoffs of a single interaction. audit_flag is 0 or 1.
template <class T>
T admin_payoff(int audit_flag, std::size_t signal, std::size_t truth, const GameConfig<T>& cfg);
template <class T>
T admin_payoff(int audit_flag, std::string_view signal, std::string_view truth,
               const GameConfig<T>& cfg) {
  return admin_payoff(audit_flag, cfg.index_of(signal), cfg.index_of(truth), cfg);
}
template <class T>
T user_payoff(int audit_flag, std::size_t signal, std::size_t truth, const GameConfig<T>& cfg);
template <class T>
T user_payoff(int audit_flag, std::string_view signal, std::string_view truth,
              const GameConfig<T>& cfg) {
  return user_payoff(audit_flag, cfg.index_of(signal), cfg.index_of(truth), cfg);
}

/// Administrator's expected utility, summed over types weighted by the prior.
template <class T>
T admin_utility(const Strategy<T>& pi, const AuditPolicy<T>& sigma, const GameConfig<T>& cfg);

/// Expected utility of a user whose true type is `truth`.
template <class T>
T user_utility_type(const Strategy<T>& pi, const AuditPolicy<T>& sigma, std::size_t truth,
                    const GameConfig<T>& cfg);
template <class T>
T user_utility_type(const Strategy<T>& pi, const AuditPolicy<T>& sigma, std::string_view truth,
                    const GameConfig<T>& cfg) {
  return user_utility_type(pi, sigma, cfg.index_of(truth), cfg);
}

template <class T>
T user_utility_avg(const Strategy<T>& pi, const AuditPolicy<T>& sigma, const GameConfig<T>& cfg);

/// Expected overpayment E[max(user payoff − f(m), 0)], in closed form.
template <class T>
T excess_payments(const Strategy<T>& pi, const AuditPolicy<T>& sigma, const GameConfig<T>& cfg);

/// Misreport pressure on signal s: Σ_{m≠s} π(s|m) q_m ([f(s)−f(m)]₊ + k).
template <class T>
T audit_gain_mass(const Strategy<T>& pi, std::size_t s, const GameConfig<T>& cfg);
/// Audit cost mass on signal s: c Σ_m π(s|m) q_m.
template <class T>
T audit_cost_mass(const Strategy<T>& pi, std::size_t s, const GameConfig<T>& cfg);

/// Administrator's best response. Ties go to "no audit"; unsent signals are never audited.
/// With a cap B, a violated signal is audited with probability min(1, B/c).
template <class T>
AuditPolicy<T> best_response(const Strategy<T>& pi, const GameConfig<T>& cfg,
                             const std::optional<T>& budget_cap = std::nullopt);

/// Moves the mass of π(s|m) onto π(m|m). Used to eliminate under-reports.
template <class T>
Strategy<T> redirect_to_truth(const Strategy<T>& pi, std::size_t signal, std::size_t truth);

/// Applies redirect_to_truth to every under-reporting pair (f(s) < f(m)).
template <class T>
Strategy<T> remove_underreporting(const Strategy<T>& pi, const GameConfig<T>& cfg);

}  // namespace auditgame
