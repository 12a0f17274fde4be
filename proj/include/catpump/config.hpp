#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <fstream>
#include <functional>
#include <sstream>
#include <string>

#include <json.hpp>

#include "circuit.hpp"
#include "errors.hpp"
#include "normal_modes.hpp"
#include "units.hpp"

namespace catpump {

inline constexpr const char* kVersion = "0.1.0";

// Config files use GHz for frequencies and energies, K for temperature.
inline nlohmann::json config_to_json(const CircuitConfig& c) {
  nlohmann::json j;
  j["omega_a_GHz"] = to_ghz(c.omega_a);
  j["omega_b_GHz"] = to_ghz(c.omega_b);
  j["E_J_GHz"] = to_ghz(c.E_J);
  j["E_L_GHz"] = to_ghz(c.E_L);
  j["E_Leta_eff_GHz"] = to_ghz(c.E_Leta_eff);
  j["E_Leps_eff_GHz"] = to_ghz(c.E_Leps_eff);
  j["phi_a"] = c.phi_a;
  j["phi_b"] = c.phi_b;
  j["eps_p"] = c.eps_p;
  j["eta_p"] = c.eta_p;
  j["eps_d_GHz"] = to_ghz(c.eps_d);
  j["cat_alpha_sq"] = c.cat_alpha_sq;
  j["u"] = c.u;
  j["kappa_b_GHz"] = to_ghz(c.kappa_b);
  j["temperature_K"] = c.temperature;
  j["truncation_order"] = c.truncation_order;
  j["dims"] = {c.dims.na, c.dims.nb};
  j["omega_p_GHz"] = c.omega_p ? nlohmann::json(to_ghz(*c.omega_p)) : nlohmann::json(nullptr);
  j["omega_d_GHz"] = c.omega_d ? nlohmann::json(to_ghz(*c.omega_d)) : nlohmann::json(nullptr);
  j["guard_factor"] = c.guard_factor;
  return j;
}

// Applies keys present in j on top of c; `g2_frac` sets eps_p.
inline CircuitConfig config_from_json(const nlohmann::json& j, CircuitConfig c = {}) {
  if (!j.is_object()) throw ConfigError("config must be a JSON object");
  const std::map<std::string, std::function<void(const nlohmann::json&)>> setters = {
      {"omega_a_GHz", [&](auto& v) { c.omega_a = ghz(v.template get<double>()); }},
      {"omega_b_GHz", [&](auto& v) { c.omega_b = ghz(v.template get<double>()); }},
      {"E_J_GHz", [&](auto& v) { c.E_J = ghz(v.template get<double>()); }},
      {"E_L_GHz", [&](auto& v) { c.E_L = ghz(v.template get<double>()); }},
      {"E_Leta_eff_GHz", [&](auto& v) { c.E_Leta_eff = ghz(v.template get<double>()); }},
      {"E_Leps_eff_GHz", [&](auto& v) { c.E_Leps_eff = ghz(v.template get<double>()); }},
      {"phi_a", [&](auto& v) { c.phi_a = v.template get<double>(); }},
      {"phi_b", [&](auto& v) { c.phi_b = v.template get<double>(); }},
      {"eps_p", [&](auto& v) { c.eps_p = v.template get<double>(); }},
      {"g2_frac", [&](auto& v) { c.eps_p = eps_p_for_g2_fraction(v.template get<double>()); }},
      {"eta_p", [&](auto& v) { c.eta_p = v.template get<double>(); }},
      {"eps_d_GHz", [&](auto& v) { c.eps_d = ghz(v.template get<double>()); }},
      {"cat_alpha_sq", [&](auto& v) { c.cat_alpha_sq = v.template get<double>(); }},
      {"u", [&](auto& v) { c.u = v.template get<double>(); }},
      {"kappa_b_GHz", [&](auto& v) { c.kappa_b = ghz(v.template get<double>()); }},
      {"temperature_K", [&](auto& v) { c.temperature = v.template get<double>(); }},
      {"truncation_order", [&](auto& v) { c.truncation_order = v.template get<int>(); }},
      {"dims", [&](auto& v) { c.dims = {v.at(0).template get<int>(), v.at(1).template get<int>()}; }},
      {"omega_p_GHz",
       [&](auto& v) { c.omega_p = v.is_null() ? std::nullopt : std::optional<double>(ghz(v.template get<double>())); }},
      {"omega_d_GHz",
       [&](auto& v) { c.omega_d = v.is_null() ? std::nullopt : std::optional<double>(ghz(v.template get<double>())); }},
      {"guard_factor", [&](auto& v) { c.guard_factor = v.template get<double>(); }},
  };
  for (auto it = j.begin(); it != j.end(); ++it) {
    const auto s = setters.find(it.key());
    if (s == setters.end()) throw ConfigError("unknown config key '" + it.key() + "'");
    try {
      s->second(it.value());
    } catch (const nlohmann::json::exception& e) {
      throw ConfigError("bad value for '" + it.key() + "': " + e.what());
    }
  }
  return c;
}

inline RawCircuit raw_circuit_from_json(const nlohmann::json& j) {
  RawCircuit r;
  const std::map<std::string, double*> fields = {
      {"C_0_fF", &r.C_0},     {"C_J1_fF", &r.C_J1},   {"C_J3_fF", &r.C_J3},   {"C_L_fF", &r.C_L},
      {"E_L0_GHz", &r.E_L0}, {"E_L_GHz", &r.E_L},    {"E_J1_GHz", &r.E_J1}, {"E_J3_GHz", &r.E_J3},
      {"gate_ratio", &r.gate_ratio}};
  for (auto it = j.begin(); it != j.end(); ++it) {
    const auto f = fields.find(it.key());
    if (f == fields.end()) throw ConfigError("unknown raw-circuit key '" + it.key() + "'");
    *f->second = it.value().get<double>();
  }
  return r;
}

inline nlohmann::json load_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config '" + path + "'");
  try {
    return nlohmann::json::parse(in);
  } catch (const nlohmann::json::parse_error& e) {
    throw ConfigError("config parse error in '" + path + "': " + e.what());
  }
}

struct Preset {
  CircuitConfig cfg;
  bool flux_cancel = false;
  std::string note;
};

// Named parameter sets; pump strengths default to g2/g2max = 0.1.
inline Preset preset(const std::string& name) {
  Preset p;
  CircuitConfig& c = p.cfg;
  c.eps_p = eps_p_for_g2_fraction(0.1);
  if (name == "fig2") {
    c.truncation_order = 8;
    c.cat_alpha_sq = 5.0;
    c.omega_p = ghz(0.95);
    c.omega_d = ghz(7.05);
    p.note = "collapse catalog at the undressed drive, eps_d = 5 g2";
  } else if (name == "fig3" || name == "fig6") {
    p.note = "Floquet cross-validation, eps_d = 0, drive from matching";
  } else if (name == "fig4") {
    c.truncation_order = 8;
    c.E_Leta_eff = ghz(62.4);
    c.E_Leps_eff = 0.0;
    p.flux_cancel = true;
    p.note = "flux-ratio cancellation of g11";
  } else if (name == "fig5") {
    c.truncation_order = 7;
    p.note = "collision map over omega_a / omega_b";
  } else if (name == "fig11") {
    c.u = 0.01;
    p.note = "memory Purcell crossover";
  } else {
    throw ConfigError("unknown preset '" + name + "'");
  }
  return p;
}

inline std::string config_hash(const nlohmann::json& j) {
  // FNV-1a over the canonical dump.
  std::uint64_t h = 1469598103934665603ull;
  for (unsigned char ch : j.dump()) {
    h ^= ch;
    h *= 1099511628211ull;
  }
  std::ostringstream os;
  os << std::hex << h;
  return os.str();
}

inline nlohmann::json warnings_to_json(const WarningLog& log) {
  nlohmann::json a = nlohmann::json::array();
  for (const auto& w : log) a.push_back({{"kind", w.kind}, {"detail", w.detail}, {"value", w.value}});
  return a;
}

}  // namespace catpump
