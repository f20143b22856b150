#pragma once

#include "auditgame/bounds.hpp"
#include "auditgame/core.hpp"
#include "auditgame/cost.hpp"
#include "auditgame/equilibrium.hpp"
#include "auditgame/oracle.hpp"

#include <json.hpp>

#include <filesystem>
#include <string>

namespace auditgame {

/// Parses a JSON game document. Keys: types, prior, alloc, audit_cost, fine, budget,
/// num_users, coalition_size. prior/alloc are arrays in type order or objects keyed by
/// label. Numeric values may be JSON numbers or strings ("0.25", "5/26").
/// Enforces k >= c unless `allow_fine_below_cost`.
GameConfig<Rational> parse_config(const std::string& text, bool allow_fine_below_cost = false);
GameConfig<Rational> load_config(const std::filesystem::path& path, bool allow_fine_below_cost = false);

nlohmann::json config_to_json(const GameConfig<Rational>& cfg);

/// Rationals render as exact "p/q" strings, doubles as JSON numbers.
nlohmann::json number_json(const Rational& x);
nlohmann::json number_json(double x);

template <class T>
nlohmann::json result_to_json(const EquilibriumResult<T>& r, const GameConfig<T>& cfg);
template <class T>
nlohmann::json budget_to_json(const BudgetAnalysis<T>& b);
template <class T>
nlohmann::json bounds_to_json(const BoundReport<T>& b, const GameConfig<T>& cfg);
template <class T>
std::string bounds_to_csv(const BoundReport<T>& b, const GameConfig<T>& cfg);
template <class T>
nlohmann::json cost_to_json(const CostReport<T>& c);
template <class T>
nlohmann::json verification_to_json(const VerificationReport<T>& v, const GameConfig<T>& cfg);
nlohmann::json probe_to_json(const ProbeReport& p);

/// key,value lines for the scalar members of a JSON object (nested values are dumped inline).
std::string flat_csv(const nlohmann::json& doc);

}  // namespace auditgame
