#include "auditgame/config_io.hpp"

#include <fstream>
#include <set>
#include <sstream>

namespace auditgame {

using nlohmann::json;

namespace {

Rational rational_of(const json& v, const std::string& field) {
  if (v.is_string()) return parse_rational(v.get<std::string>());
  if (v.is_number_integer()) return Rational(v.get<long long>());
  if (v.is_number_unsigned()) return Rational(boost::multiprecision::mpz_int(std::to_string(v.get<unsigned long long>())));
  if (v.is_number_float()) return parse_rational(v.dump());
  throw InputError("field '" + field + "' must be a number or a numeric string");
}

long long integer_of(const json& v, const std::string& field) {
  if (v.is_number_integer()) return v.get<long long>();
  if (v.is_string()) {
    const Rational r = parse_rational(v.get<std::string>());
    if (boost::multiprecision::denominator(r) == 1) return boost::multiprecision::numerator(r).convert_to<long long>();
  }
  throw InputError("field '" + field + "' must be an integer");
}

std::vector<Rational> per_type(const json& v, const std::vector<std::string>& types, const std::string& field) {
  std::vector<Rational> out;
  if (v.is_array()) {
    if (v.size() != types.size()) throw InputError("field '" + field + "' must have one entry per type");
    for (const auto& x : v) out.push_back(rational_of(x, field));
  } else if (v.is_object()) {
    if (v.size() != types.size()) throw InputError("field '" + field + "' must have one entry per type");
    for (const auto& t : types) {
      if (!v.contains(t)) throw InputError("field '" + field + "' is missing type '" + t + "'");
      out.push_back(rational_of(v.at(t), field));
    }
  } else {
    throw InputError("field '" + field + "' must be an array or an object keyed by type");
  }
  return out;
}

}  // namespace

GameConfig<Rational> parse_config(const std::string& text, bool allow_fine_below_cost) {
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::parse_error& e) {
    throw InputError(std::string("config is not valid JSON: ") + e.what());
  }
  if (!doc.is_object()) throw InputError("config must be a JSON object");
  static const std::set<std::string> known{"types", "prior", "alloc", "audit_cost", "fine",
                                           "budget", "num_users", "coalition_size"};
  for (const auto& [key, _] : doc.items())
    if (!known.count(key)) throw InputError("unknown config field '" + key + "'");
  for (const char* required : {"types", "prior", "alloc", "audit_cost", "fine"})
    if (!doc.contains(required)) throw InputError(std::string("config is missing '") + required + "'");

  GameConfig<Rational> cfg;
  if (!doc["types"].is_array()) throw InputError("field 'types' must be an array of labels");
  for (const auto& t : doc["types"]) {
    if (!t.is_string()) throw InputError("type labels must be strings");
    cfg.types.push_back(t.get<std::string>());
  }
  cfg.prior = per_type(doc["prior"], cfg.types, "prior");
  cfg.alloc = per_type(doc["alloc"], cfg.types, "alloc");
  cfg.audit_cost = rational_of(doc["audit_cost"], "audit_cost");
  cfg.fine = rational_of(doc["fine"], "fine");
  if (doc.contains("budget") && !doc["budget"].is_null()) cfg.budget = rational_of(doc["budget"], "budget");
  if (doc.contains("num_users")) cfg.num_users = integer_of(doc["num_users"], "num_users");
  if (doc.contains("coalition_size")) cfg.coalition_size = integer_of(doc["coalition_size"], "coalition_size");
  cfg.validate(!allow_fine_below_cost);
  return cfg;
}

GameConfig<Rational> load_config(const std::filesystem::path& path, bool allow_fine_below_cost) {
  std::ifstream in(path);
  if (!in) throw InputError("cannot read config file '" + path.string() + "'");
  std::stringstream buf;
  buf << in.rdbuf();
  return parse_config(buf.str(), allow_fine_below_cost);
}

json number_json(const Rational& x) { return format_exact(x); }
json number_json(double x) { return x; }

namespace {

template <class T>
json vector_json(const std::vector<T>& v) {
  json out = json::array();
  for (const auto& x : v) out.push_back(number_json(x));
  return out;
}

template <class T>
json matrix_json(const std::vector<std::vector<T>>& m) {
  json out = json::array();
  for (const auto& row : m) out.push_back(vector_json(row));
  return out;
}

}  // namespace

json config_to_json(const GameConfig<Rational>& cfg) {
  json out;
  out["types"] = cfg.types;
  out["prior"] = vector_json(cfg.prior);
  out["alloc"] = vector_json(cfg.alloc);
  out["audit_cost"] = number_json(cfg.audit_cost);
  out["fine"] = number_json(cfg.fine);
  out["budget"] = cfg.budget ? number_json(*cfg.budget) : json(nullptr);
  out["num_users"] = cfg.num_users;
  out["coalition_size"] = cfg.coalition_size;
  return out;
}

template <class T>
json result_to_json(const EquilibriumResult<T>& r, const GameConfig<T>& cfg) {
  json out;
  out["types"] = cfg.types;
  json strategies = json::array();
  for (const auto& s : r.profile.strategies) strategies.push_back(matrix_json(s.matrix));
  json audits = json::array();
  for (const auto& a : r.profile.audits) audits.push_back(vector_json(a.probs));
  out["profile"] = {{"strategies", strategies}, {"audits", audits}};
  out["user_utilities"] = vector_json(r.user_utilities);
  out["user_utility_avg"] = number_json(r.user_utility_avg);
  out["admin_utility"] = number_json(r.admin_utility);
  out["excess"] = number_json(r.excess);
  out["total_excess"] = number_json(r.total_excess);
  out["objective"] = number_json(r.objective);
  out["provenance"] = to_string(r.provenance);
  out["multiplicity"] = r.multiplicity;
  out["unique"] = r.unique;
  out["notes"] = r.notes;
  return out;
}

template <class T>
json budget_to_json(const BudgetAnalysis<T>& b) {
  json out;
  out["threshold_general"] = number_json(b.threshold_general);
  out["threshold_two_type"] = b.threshold_two_type ? number_json(*b.threshold_two_type) : json(nullptr);
  out["threshold_coalition"] = number_json(b.threshold_coalition);
  out["regime"] = to_string(b.regime);
  return out;
}

template <class T>
json bounds_to_json(const BoundReport<T>& b, const GameConfig<T>& cfg) {
  json out;
  out["types"] = cfg.types;
  json caps = json::array();
  for (std::size_t m = 0; m < cfg.size(); ++m)
    for (std::size_t s = 0; s < cfg.size(); ++s)
      if (s != m)
        caps.push_back({{"signal", cfg.types[s]}, {"truth", cfg.types[m]}, {"cap", number_json(b.caps[m][s])},
                        {"vacuous", static_cast<bool>(b.vacuous[m][s])}});
  out["misreport_caps"] = caps;
  out["excess_cap"] = number_json(b.excess_cap);
  json binding = json::array();
  for (const auto& [s, m] : b.binding_pairs) binding.push_back({cfg.types[s], cfg.types[m]});
  out["binding_pairs"] = binding;
  return out;
}

template <class T>
std::string bounds_to_csv(const BoundReport<T>& b, const GameConfig<T>& cfg) {
  std::ostringstream out;
  out << "signal,truth,cap,vacuous,binding\n";
  for (std::size_t m = 0; m < cfg.size(); ++m) {
    for (std::size_t s = 0; s < cfg.size(); ++s) {
      if (s == m) continue;
      bool binding = false;
      for (const auto& p : b.binding_pairs) binding = binding || (p.first == s && p.second == m);
      out << cfg.types[s] << ',' << cfg.types[m] << ',' << format15(b.caps[m][s]) << ','
          << (b.vacuous[m][s] ? "true" : "false") << ',' << (binding ? "true" : "false") << '\n';
    }
  }
  out << "*,*," << format15(b.excess_cap) << ",false,false\n";
  return out.str();
}

template <class T>
json cost_to_json(const CostReport<T>& c) {
  json out;
  out["cost_no_audit"] = number_json(c.cost_no_audit);
  out["cost_audit"] = number_json(c.cost_audit);
  out["budget_component"] = number_json(c.budget_component);
  out["excess_component"] = number_json(c.excess_component);
  out["regime_note"] = c.regime_note;
  out["fine_threshold"] = c.fine_threshold ? number_json(*c.fine_threshold) : json(nullptr);
  out["fine_threshold_undefined"] = c.fine_threshold_undefined;
  out["dominates"] = c.dominates;
  out["verdict"] = c.verdict;
  return out;
}

template <class T>
json verification_to_json(const VerificationReport<T>& v, const GameConfig<T>& cfg) {
  json out;
  out["passed"] = v.passed;
  out["best_response_matches"] = v.best_response_matches;
  out["types"] = cfg.types;
  out["max_gain_per_type"] = vector_json(v.max_gain_per_type);
  out["best_rows"] = matrix_json(v.best_rows);
  out["max_gain"] = number_json(v.max_gain);
  out["slack"] = number_json(v.slack);
  out["resolution"] = v.resolution;
  out["coarse"] = v.coarse;
  out["messages"] = v.messages;
  return out;
}

json probe_to_json(const ProbeReport& p) {
  auto trace_json = [](const ProbeTrace& t) {
    return json{{"p1", t.p1},       {"p2", t.p2},   {"rho1", t.rho1},
                {"rho2", t.rho2},   {"deviator", t.deviator}, {"deviation", t.deviation},
                {"rule", t.rule},   {"gain", t.gain}};
  };
  json out;
  out["resolution"] = p.resolution;
  out["budget"] = p.budget;
  out["threshold_two_type"] = p.threshold_two_type;
  out["misreport_rate"] = p.misreport_rate;
  out["profiles"] = p.profiles;
  out["certified"] = p.certified;
  out["fraction"] = p.fraction;
  out["by_rule"] = {{"raise_to_one", p.by_raise_to_one},
                    {"raise_to_rate", p.by_raise_to_rate},
                    {"midpoint", p.by_midpoint},
                    {"tie_undercut", p.by_tie_undercut},
                    {"grid_scan", p.by_grid_scan}};
  json samples = json::array();
  for (const auto& t : p.samples) samples.push_back(trace_json(t));
  out["samples"] = samples;
  json unc = json::array();
  for (const auto& t : p.uncertified) unc.push_back(trace_json(t));
  out["uncertified"] = unc;
  return out;
}

std::string flat_csv(const json& doc) {
  std::ostringstream out;
  out << "key,value\n";
  for (const auto& [key, value] : doc.items()) {
    std::string text = value.is_string() ? value.get<std::string>() : value.dump();
    if (text.find_first_of(",\"\n") != std::string::npos) {
      std::string quoted = "\"";
      for (char ch : text) {
        if (ch == '"') quoted += '"';
        quoted += ch;
      }
      text = quoted + "\"";
    }
    out << key << ',' << text << '\n';
  }
  return out.str();
}

#define AUDITGAME_INSTANTIATE(T)                                                        \
  template json result_to_json(const EquilibriumResult<T>&, const GameConfig<T>&);      \
  template json budget_to_json(const BudgetAnalysis<T>&);                               \
  template json bounds_to_json(const BoundReport<T>&, const GameConfig<T>&);            \
  template std::string bounds_to_csv(const BoundReport<T>&, const GameConfig<T>&);      \
  template json cost_to_json(const CostReport<T>&);                                     \
  template json verification_to_json(const VerificationReport<T>&, const GameConfig<T>&);

AUDITGAME_INSTANTIATE(Rational)
AUDITGAME_INSTANTIATE(double)

#undef AUDITGAME_INSTANTIATE

}  // namespace auditgame
