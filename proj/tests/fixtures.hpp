#pragma once

#include "auditgame/core.hpp"

#include <random>

namespace fixtures {

using auditgame::GameConfig;
using auditgame::Rational;
using auditgame::Strategy;

/// q = (1/2, 1/2), f = (50, 105), c = 25, k = 100.
inline GameConfig<Rational> cfg_a() {
  return auditgame::two_type_config<Rational>(Rational(1, 2), 50, 105, 25, 100);
}

/// Three equally likely types x, y, z with credits 0, 2, 4; c = 1, k = 2.
inline GameConfig<Rational> three_type() {
  GameConfig<Rational> cfg;
  cfg.types = {"x", "y", "z"};
  cfg.prior = {Rational(1, 3), Rational(1, 3), Rational(1, 3)};
  cfg.alloc = {0, 2, 4};
  cfg.audit_cost = 1;
  cfg.fine = 2;
  return cfg;
}

inline Strategy<Rational> two_type_strategy(const Rational& p_high_given_low) {
  auto pi = Strategy<Rational>::truthful(2);
  pi(0, 1) = p_high_given_low;
  pi(0, 0) = Rational(1) - p_high_given_low;
  return pi;
}

/// Random probability vector with small integer weights (exact).
inline std::vector<Rational> random_simplex(std::mt19937_64& rng, std::size_t n, int max_weight = 9,
                                            bool allow_zero = true) {
  std::uniform_int_distribution<int> w(allow_zero ? 0 : 1, max_weight);
  std::vector<int> weights(n);
  int total = 0;
  while (total == 0) {
    total = 0;
    for (auto& x : weights) {
      x = w(rng);
      total += x;
    }
  }
  std::vector<Rational> out;
  for (int x : weights) out.push_back(Rational(x, total));
  return out;
}

inline Strategy<Rational> random_strategy(std::mt19937_64& rng, std::size_t n) {
  Strategy<Rational> pi;
  for (std::size_t m = 0; m < n; ++m) pi.matrix.push_back(random_simplex(rng, n));
  return pi;
}

/// Random game with 2..4 types, positive prior, k >= c.
inline GameConfig<Rational> random_config(std::mt19937_64& rng, std::size_t min_types = 2, std::size_t max_types = 4) {
  std::uniform_int_distribution<std::size_t> nt(min_types, max_types);
  std::uniform_int_distribution<int> money(0, 120);
  const std::size_t n = nt(rng);
  GameConfig<Rational> cfg;
  for (std::size_t i = 0; i < n; ++i) {
    cfg.types.push_back("t" + std::to_string(i));
    cfg.alloc.push_back(money(rng));
  }
  cfg.prior = random_simplex(rng, n, 9, false);
  const int c = std::uniform_int_distribution<int>(1, 60)(rng);
  cfg.audit_cost = c;
  cfg.fine = c + std::uniform_int_distribution<int>(0, 200)(rng);
  return cfg;
}

}  // namespace fixtures
