#include "auditgame/bounds.hpp"

namespace auditgame {

template <class T>
MisreportBound<T> misreport_prob_bound(const GameConfig<T>& cfg, std::size_t signal, std::size_t truth) {
  if (signal >= cfg.size() || truth >= cfg.size()) throw InputError("type index out of range");
  if (signal == truth) throw InputError("misreport bound needs signal != truth");
  MisreportBound<T> out;
  const T denom = cfg.prior[truth] * (cfg.fine - cfg.audit_cost + cfg.alloc[signal] - cfg.alloc[truth]);
  if (!(denom > 0)) {
    out.cap = T(1);
    out.vacuous = true;
    return out;
  }
  out.cap = min_of(T(1), T(cfg.prior[signal] * cfg.audit_cost / denom));
  return out;
}

template <class T>
T excess_payments_bound(const GameConfig<T>& cfg) {
  const T df = cfg.delta_f_max();
  const T denom = cfg.fine + df;
  if (!(denom > 0)) return T(0);
  return cfg.audit_cost * df / denom;
}

template <class T>
T fine_for_tolerance(const GameConfig<T>& cfg, const T& max_excess) {
  if (!(max_excess > 0)) throw InputError("max_excess must be > 0");
  const T& c = cfg.audit_cost;
  if (max_excess >= c) return c;
  const T k = cfg.delta_f_max() * (c / max_excess - T(1));
  return max_of(k, c);
}

template <class T>
BoundReport<T> bound_report(const GameConfig<T>& cfg, const Strategy<T>* strategy) {
  const std::size_t n = cfg.size();
  BoundReport<T> out;
  out.caps.assign(n, std::vector<T>(n, T(1)));
  out.vacuous.assign(n, std::vector<bool>(n, false));
  for (std::size_t m = 0; m < n; ++m) {
    for (std::size_t s = 0; s < n; ++s) {
      if (s == m) continue;
      const auto b = misreport_prob_bound(cfg, s, m);
      out.caps[m][s] = b.cap;
      out.vacuous[m][s] = b.vacuous;
      if (strategy && (*strategy)(m, s) > 0 && Num<T>::eq((*strategy)(m, s), b.cap))
        out.binding_pairs.emplace_back(s, m);
    }
  }
  out.excess_cap = excess_payments_bound(cfg);
  return out;
}

template <class T>
bool satisfies_bounds(const Strategy<T>& pi, const T& excess, const GameConfig<T>& cfg) {
  const std::size_t n = cfg.size();
  for (std::size_t m = 0; m < n; ++m)
    for (std::size_t s = 0; s < n; ++s)
      if (s != m && !Num<T>::leq(pi(m, s), misreport_prob_bound(cfg, s, m).cap)) return false;
  return Num<T>::leq(excess, excess_payments_bound(cfg));
}

#define AUDITGAME_INSTANTIATE(T)                                                               \
  template MisreportBound<T> misreport_prob_bound(const GameConfig<T>&, std::size_t, std::size_t); \
  template T excess_payments_bound(const GameConfig<T>&);                                      \
  template T fine_for_tolerance(const GameConfig<T>&, const T&);                               \
  template BoundReport<T> bound_report(const GameConfig<T>&, const Strategy<T>*);              \
  template bool satisfies_bounds(const Strategy<T>&, const T&, const GameConfig<T>&);

AUDITGAME_INSTANTIATE(Rational)
AUDITGAME_INSTANTIATE(double)

#undef AUDITGAME_INSTANTIATE

}  // namespace auditgame
