#pragma once

// Declarative run configuration. One JSON file drives every subcommand;
// each constant in it has a default matching the study setup (80 $/tCO2,
// 0.92 efficiency, 3000-cycle life, 4 MWh unit at 1 MW), so an empty file
// is a valid configuration and any single value can be overridden alone.
//
// Parsing is strict: unknown keys are rejected so a typo cannot silently
// fall back to a default.

#include <cstdint>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "essmei/dispatch.hpp"
#include "essmei/errors.hpp"
#include "essmei/grid.hpp"
#include "essmei/json_io.hpp"
#include "essmei/mei.hpp"
#include "essmei/synth.hpp"

namespace essmei {

struct RollingConfig {
  std::size_t window = 0;  // hours; 0 disables rolling solves
  std::size_t step = 1;
};

inline EssParams default_run_ess() {
  EssParams p;
  p.energy_capacity_mwh = 4.0;
  p.charge_limit_mw = 1.0;
  p.discharge_limit_mw = 1.0;
  return p;
}

struct RunConfig {
  std::string input_path;  // hourly grid CSV; mutually exclusive with synth
  bool use_synth = false;
  SynthParams synth;

  std::vector<Fuel> non_dispatchable = default_non_dispatchable();
  SegmentationConfig segmentation;
  EmissionFactors factors;
  ImportPolicy import_policy;
  ShareMethod share_method = ShareMethod::ChordSlope;

  EssParams ess = default_run_ess();
  double carbon_price = 80.0;
  CaseMode mode = CaseMode::Combined;
  double tie_break_epsilon = 1e-6;
  RollingConfig rolling;

  std::vector<double> sweep_capacities = {1.0, 2.0, 4.0, 8.0};
  std::vector<double> sweep_carbon_prices = {40.0, 80.0, 160.0};
  double sweep_c_rate = 1.0;

  std::string out_dir = "out";
};

namespace detail {

[[noreturn]] inline void config_fail(const std::string& msg) {
  raise(ErrorKind::ConfigError, msg);
}

inline void check_keys(const json& j, const char* where,
                       std::initializer_list<const char*> allowed) {
  if (!j.is_object()) config_fail(std::string(where) + " must be a JSON object");
  for (const auto& item : j.items()) {
    bool known = false;
    for (const char* key : allowed) {
      if (item.key() == key) {
        known = true;
        break;
      }
    }
    if (!known) config_fail("unknown key '" + item.key() + "' in " + where);
  }
}

template <typename T>
inline void read_if(const json& j, const char* key, T& out) {
  if (j.contains(key)) j.at(key).get_to(out);
}

inline ShareMethod parse_share_method(const std::string& name) {
  if (name == "chord_slope") return ShareMethod::ChordSlope;
  if (name == "segment_ols") return ShareMethod::SegmentOls;
  config_fail("share_method must be 'chord_slope' or 'segment_ols', got '" + name + "'");
}

inline CaseMode parse_case_mode(const std::string& name) {
  if (name == "electricity_only") return CaseMode::ElectricityOnly;
  if (name == "carbon_only") return CaseMode::CarbonOnly;
  if (name == "combined") return CaseMode::Combined;
  config_fail("mode must be 'electricity_only', 'carbon_only' or 'combined', got '" + name +
              "'");
}

inline TerminalPolicy parse_terminal_policy(const std::string& name) {
  if (name == "free") return TerminalPolicy::Free;
  if (name == "at_least_initial") return TerminalPolicy::AtLeastInitial;
  config_fail("terminal_policy must be 'free' or 'at_least_initial', got '" + name + "'");
}

inline void read_response_curve(const json& j, const char* where, ResponseCurve& curve) {
  check_keys(j, where, {"offset", "slope", "amplitude", "midpoint", "scale"});
  read_if(j, "offset", curve.offset);
  read_if(j, "slope", curve.slope);
  read_if(j, "amplitude", curve.amplitude);
  read_if(j, "midpoint", curve.midpoint);
  read_if(j, "scale", curve.scale);
}

inline void read_synth_params(const json& j, SynthParams& p) {
  check_keys(j, "synth",
             {"start", "horizon_hours", "seed", "noise_scale", "price_floor", "residual",
              "gas_curve", "hydro_curve", "imports_curve", "price_curve"});
  read_if(j, "start", p.start);
  read_if(j, "horizon_hours", p.horizon_hours);
  read_if(j, "seed", p.seed);
  read_if(j, "noise_scale", p.noise_scale);
  read_if(j, "price_floor", p.price_floor);
  if (j.contains("residual")) {
    const json& r = j.at("residual");
    check_keys(r, "synth.residual",
               {"mid", "daily_amplitude", "seasonal_amplitude", "noise_sigma"});
    read_if(r, "mid", p.residual.mid);
    read_if(r, "daily_amplitude", p.residual.daily_amplitude);
    read_if(r, "seasonal_amplitude", p.residual.seasonal_amplitude);
    read_if(r, "noise_sigma", p.residual.noise_sigma);
  }
  if (j.contains("gas_curve")) read_response_curve(j.at("gas_curve"), "gas_curve", p.gas_curve);
  if (j.contains("hydro_curve")) {
    read_response_curve(j.at("hydro_curve"), "hydro_curve", p.hydro_curve);
  }
  if (j.contains("imports_curve")) {
    read_response_curve(j.at("imports_curve"), "imports_curve", p.imports_curve);
  }
  if (j.contains("price_curve")) {
    read_response_curve(j.at("price_curve"), "price_curve", p.price_curve);
  }
}

inline void read_ess_params(const json& j, EssParams& p) {
  check_keys(j, "ess",
             {"energy_capacity_mwh", "charge_limit_mw", "discharge_limit_mw",
              "charge_efficiency", "discharge_efficiency", "initial_soc", "cycle_life_efc",
              "terminal_policy"});
  read_if(j, "energy_capacity_mwh", p.energy_capacity_mwh);
  read_if(j, "charge_limit_mw", p.charge_limit_mw);
  read_if(j, "discharge_limit_mw", p.discharge_limit_mw);
  read_if(j, "charge_efficiency", p.charge_efficiency);
  read_if(j, "discharge_efficiency", p.discharge_efficiency);
  read_if(j, "initial_soc", p.initial_soc);
  read_if(j, "cycle_life_efc", p.cycle_life_efc);
  if (j.contains("terminal_policy")) {
    p.terminal_policy = parse_terminal_policy(j.at("terminal_policy").get<std::string>());
  }
}

inline void read_import_policy(const json& j, ImportPolicy& policy) {
  check_keys(j, "import_policy", {"rule", "segments"});
  if (j.contains("rule")) {
    const std::string rule = j.at("rule").get<std::string>();
    if (rule == "explicit_segments") {
      policy.rule = ImportRule::ExplicitSegments;
    } else if (rule == "auto_by_mean_imports") {
      policy.rule = ImportRule::AutoByMeanImports;
    } else {
      config_fail("import_policy.rule must be 'explicit_segments' or 'auto_by_mean_imports'");
    }
  }
  read_if(j, "segments", policy.segments);
}

}  // namespace detail

inline RunConfig run_config_from_json(const json& j) {
  detail::check_keys(j, "config",
                     {"input", "synth", "non_dispatchable", "segmentation", "emission_factors",
                      "import_policy", "share_method", "ess", "carbon_price", "mode",
                      "tie_break_epsilon", "rolling", "sweep", "out_dir"});
  RunConfig cfg;
  try {
    detail::read_if(j, "input", cfg.input_path);
    if (j.contains("synth")) {
      cfg.use_synth = true;
      detail::read_synth_params(j.at("synth"), cfg.synth);
    }
    if (j.contains("non_dispatchable")) {
      cfg.non_dispatchable.clear();
      for (const auto& name : j.at("non_dispatchable")) {
        cfg.non_dispatchable.push_back(fuel_from_name(name.get<std::string>()));
      }
    }
    if (j.contains("segmentation")) j.at("segmentation").get_to(cfg.segmentation);
    if (j.contains("emission_factors")) j.at("emission_factors").get_to(cfg.factors);
    if (j.contains("import_policy")) {
      detail::read_import_policy(j.at("import_policy"), cfg.import_policy);
    }
    if (j.contains("share_method")) {
      cfg.share_method = detail::parse_share_method(j.at("share_method").get<std::string>());
    }
    if (j.contains("ess")) detail::read_ess_params(j.at("ess"), cfg.ess);
    detail::read_if(j, "carbon_price", cfg.carbon_price);
    if (j.contains("mode")) {
      cfg.mode = detail::parse_case_mode(j.at("mode").get<std::string>());
    }
    detail::read_if(j, "tie_break_epsilon", cfg.tie_break_epsilon);
    if (j.contains("rolling")) {
      const json& r = j.at("rolling");
      detail::check_keys(r, "rolling", {"window", "step"});
      detail::read_if(r, "window", cfg.rolling.window);
      detail::read_if(r, "step", cfg.rolling.step);
    }
    if (j.contains("sweep")) {
      const json& s = j.at("sweep");
      detail::check_keys(s, "sweep", {"capacities", "carbon_prices", "c_rate"});
      detail::read_if(s, "capacities", cfg.sweep_capacities);
      detail::read_if(s, "carbon_prices", cfg.sweep_carbon_prices);
      detail::read_if(s, "c_rate", cfg.sweep_c_rate);
    }
    detail::read_if(j, "out_dir", cfg.out_dir);
  } catch (const json::exception& e) {
    detail::config_fail(std::string("bad config value: ") + e.what());
  } catch (const Error& e) {
    if (e.kind() == ErrorKind::ConfigError) throw;
    detail::config_fail(e.what());
  }

  if (!cfg.input_path.empty() && cfg.use_synth) {
    detail::config_fail("config sets both 'input' and 'synth'; choose one data source");
  }
  return cfg;
}

inline RunConfig load_run_config(const std::string& path) {
  json j;
  try {
    j = load_json_file(path);
  } catch (const Error& e) {
    detail::config_fail(e.what());
  }
  return run_config_from_json(j);
}

}  // namespace essmei
