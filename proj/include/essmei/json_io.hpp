#pragma once

// JSON bindings for the public value types, via nlohmann::json ADL hooks.
// Doubles survive a dump/parse cycle exactly (the writer emits shortest
// round-trip decimal forms), so table round-trips are lossless.

#include <fstream>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "essmei/accounting.hpp"
#include "essmei/errors.hpp"
#include "essmei/mei.hpp"
#include "essmei/polyfit.hpp"

namespace essmei {

using json = nlohmann::json;

inline void to_json(json& j, const SegmentationConfig& cfg) {
  j = json{{"first_upper_bound", cfg.first_upper_bound},
           {"width", cfg.width},
           {"count", cfg.count}};
}

inline void from_json(const json& j, SegmentationConfig& cfg) {
  j.at("first_upper_bound").get_to(cfg.first_upper_bound);
  j.at("width").get_to(cfg.width);
  j.at("count").get_to(cfg.count);
  validate(cfg);
}

inline void to_json(json& j, const EmissionFactors& f) {
  j = json{{"gas", f.gas}, {"imports", f.imports}, {"hydro", f.hydro}};
}

inline void from_json(const json& j, EmissionFactors& f) {
  j.at("gas").get_to(f.gas);
  j.at("imports").get_to(f.imports);
  j.at("hydro").get_to(f.hydro);
  validate(f);
}

inline void to_json(json& j, const SegmentShare& s) {
  j = json{{"gas", s.gas},
           {"hydro", s.hydro},
           {"imports", s.imports},
           {"total", s.total},
           {"mean_net_imports", s.mean_net_imports},
           {"sample_count", s.sample_count}};
}

inline void from_json(const json& j, SegmentShare& s) {
  j.at("gas").get_to(s.gas);
  j.at("hydro").get_to(s.hydro);
  j.at("imports").get_to(s.imports);
  j.at("total").get_to(s.total);
  j.at("mean_net_imports").get_to(s.mean_net_imports);
  j.at("sample_count").get_to(s.sample_count);
}

inline void to_json(json& j, const SupplyShareTable& t) {
  j = json{{"segmentation", t.config}, {"segments", t.segments}};
}

inline void from_json(const json& j, SupplyShareTable& t) {
  j.at("segmentation").get_to(t.config);
  j.at("segments").get_to(t.segments);
  if (t.segments.size() != static_cast<std::size_t>(t.config.count)) {
    raise(ErrorKind::InvalidValue,
          "share table has " + std::to_string(t.segments.size()) +
              " segment rows but the segmentation declares " + std::to_string(t.config.count));
  }
}

inline void to_json(json& j, const MeiTable& t) {
  json rows = json::array();
  for (std::size_t i = 0; i < t.mei.size(); ++i) {
    rows.push_back(json{{"segment", i + 1},
                        {"mei", t.mei[i]},
                        {"import_counted", static_cast<bool>(t.import_counted[i])}});
  }
  j = json{{"segmentation", t.config}, {"emission_factors", t.factors}, {"segments", rows}};
}

inline void from_json(const json& j, MeiTable& t) {
  j.at("segmentation").get_to(t.config);
  j.at("emission_factors").get_to(t.factors);
  t.mei.clear();
  t.import_counted.clear();
  for (const auto& row : j.at("segments")) {
    t.mei.push_back(row.at("mei").get<double>());
    t.import_counted.push_back(row.at("import_counted").get<bool>());
  }
  if (t.mei.size() != static_cast<std::size_t>(t.config.count)) {
    raise(ErrorKind::InvalidValue,
          "intensity table has " + std::to_string(t.mei.size()) +
              " segment rows but the segmentation declares " + std::to_string(t.config.count));
  }
}

inline void to_json(json& j, const CubicFit& f) {
  j = json{{"c0", f.c0},
           {"c1", f.c1},
           {"c2", f.c2},
           {"c3", f.c3},
           {"r_squared", f.r_squared},
           {"domain", json::array({f.domain_min, f.domain_max})},
           {"sample_count", f.sample_count}};
}

inline void from_json(const json& j, CubicFit& f) {
  j.at("c0").get_to(f.c0);
  j.at("c1").get_to(f.c1);
  j.at("c2").get_to(f.c2);
  j.at("c3").get_to(f.c3);
  j.at("r_squared").get_to(f.r_squared);
  const auto& dom = j.at("domain");
  f.domain_min = dom.at(0).get<double>();
  f.domain_max = dom.at(1).get<double>();
  j.at("sample_count").get_to(f.sample_count);
}

inline void to_json(json& j, const OperationReport& r) {
  j = json{{"elec_revenue", r.elec_revenue},
           {"carbon_revenue", r.carbon_revenue},
           {"total_revenue", r.total_revenue},
           {"emission_reduction", r.emission_reduction},
           {"epc_quantity", r.epc_quantity},
           {"epc_value", r.epc_value},
           {"fec", r.fec},
           {"remaining_lifetime", r.remaining_lifetime}};
}

inline void from_json(const json& j, OperationReport& r) {
  j.at("elec_revenue").get_to(r.elec_revenue);
  j.at("carbon_revenue").get_to(r.carbon_revenue);
  j.at("total_revenue").get_to(r.total_revenue);
  j.at("emission_reduction").get_to(r.emission_reduction);
  j.at("epc_quantity").get_to(r.epc_quantity);
  j.at("epc_value").get_to(r.epc_value);
  j.at("fec").get_to(r.fec);
  j.at("remaining_lifetime").get_to(r.remaining_lifetime);
}

inline json load_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) raise(ErrorKind::IoError, "cannot open '" + path + "' for reading");
  json j;
  try {
    in >> j;
  } catch (const json::exception& e) {
    raise(ErrorKind::InvalidValue, "malformed JSON in '" + path + "': " + e.what());
  }
  return j;
}

inline void write_json_file(const json& j, const std::string& path) {
  std::ofstream out(path);
  if (!out) raise(ErrorKind::IoError, "cannot open '" + path + "' for writing");
  out << j.dump(2) << '\n';
  if (!out.good()) raise(ErrorKind::IoError, "write failed for '" + path + "'");
}

}  // namespace essmei
