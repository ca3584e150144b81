#pragma once

// Hourly grid observations: in-memory model, CSV ingest/serialization and the
// residual demand transform.
//
// Residual demand for hour t is total demand minus generation from a chosen
// set of non-dispatchable sources. The default set is {nuclear, wind, solar,
// biofuel}; hydro is treated as dispatchable in this market and therefore
// stays in, and imports are handled separately downstream. The value may be
// negative when must-run generation exceeds demand.

#include <array>
#include <cmath>
#include <cstdint>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include "essmei/errors.hpp"
#include "essmei/text.hpp"
#include "essmei/timestamp.hpp"

namespace essmei {

enum class Fuel : int { Nuclear = 0, Hydro, Wind, Solar, Biofuel, Gas };

inline constexpr int kFuelCount = 6;

inline constexpr std::array<std::string_view, kFuelCount> kFuelNames = {
    "nuclear", "hydro", "wind", "solar", "biofuel", "gas"};

inline std::string_view fuel_name(Fuel f) { return kFuelNames[static_cast<int>(f)]; }

inline Fuel fuel_from_name(std::string_view name) {
  for (int i = 0; i < kFuelCount; ++i) {
    if (kFuelNames[i] == name) return static_cast<Fuel>(i);
  }
  raise(ErrorKind::UnknownFuel, "unknown fuel '" + std::string(name) + "'");
}

// One observed hour. Power values are MWh over the hour (numerically equal to
// average MW). net_imports and price are signed.
struct HourlyGridRecord {
  Timestamp timestamp;
  double total_demand = 0.0;
  std::array<double, kFuelCount> gen{};
  double net_imports = 0.0;
  double price = 0.0;

  double generation(Fuel f) const { return gen[static_cast<int>(f)]; }

  friend bool operator==(const HourlyGridRecord& a, const HourlyGridRecord& b) {
    return a.timestamp == b.timestamp && a.total_demand == b.total_demand && a.gen == b.gen &&
           a.net_imports == b.net_imports && a.price == b.price;
  }
};

struct GridSeries {
  std::vector<HourlyGridRecord> records;

  size_t size() const { return records.size(); }
  bool empty() const { return records.empty(); }
  const HourlyGridRecord& operator[](size_t i) const { return records[i]; }
  HourlyGridRecord& operator[](size_t i) { return records[i]; }

  friend bool operator==(const GridSeries& a, const GridSeries& b) {
    return a.records == b.records;
  }
};

// Enforces the series invariants: at least one record and consecutive
// timestamps exactly 3600 s apart (which implies strict ordering).
inline void validate_series(const GridSeries& series) {
  if (series.empty()) raise(ErrorKind::EmptySeries, "grid series has no records");
  for (size_t i = 1; i < series.size(); ++i) {
    const int64_t gap =
        series[i].timestamp.epoch_seconds - series[i - 1].timestamp.epoch_seconds;
    if (gap != 3600) {
      raise(ErrorKind::NonHourlySpacing,
            "gap of " + std::to_string(gap) + " s before " +
                format_timestamp(series[i].timestamp));
    }
  }
}

inline std::vector<Fuel> default_non_dispatchable() {
  return {Fuel::Nuclear, Fuel::Wind, Fuel::Solar, Fuel::Biofuel};
}

inline double residual_demand(const HourlyGridRecord& rec, const std::vector<Fuel>& subtract) {
  double rd = rec.total_demand;
  for (Fuel f : subtract) rd -= rec.generation(f);
  return rd;
}

inline double residual_demand(const HourlyGridRecord& rec) {
  return residual_demand(rec, default_non_dispatchable());
}

inline std::vector<double> residual_series(const GridSeries& series,
                                           const std::vector<Fuel>& subtract) {
  std::vector<double> out;
  out.reserve(series.size());
  for (const auto& rec : series.records) out.push_back(residual_demand(rec, subtract));
  return out;
}

inline std::vector<double> residual_series(const GridSeries& series) {
  return residual_series(series, default_non_dispatchable());
}

// ---------------------------------------------------------------------------
// CSV schema (fixed):
// timestamp,total_demand,nuclear,hydro,wind,solar,biofuel,gas,net_imports,price

namespace detail {

inline constexpr std::array<std::string_view, 10> kGridColumns = {
    "timestamp", "total_demand", "nuclear", "hydro",       "wind",
    "solar",     "biofuel",      "gas",     "net_imports", "price"};

inline double parse_cell(std::string_view token, size_t row, std::string_view column) {
  double v;
  if (!parse_double(token, v) || !std::isfinite(v)) {
    raise(ErrorKind::NonNumericCell, "row " + std::to_string(row) + ", column '" +
                                         std::string(column) + "': cannot parse '" +
                                         std::string(token) + "'");
  }
  return v;
}

}  // namespace detail

inline GridSeries parse_grid_csv(std::istream& in) {
  std::string line;
  if (!std::getline(in, line)) raise(ErrorKind::EmptySeries, "input has no header line");

  const auto header = split_csv_line(line);
  std::array<int, 10> col_pos;
  col_pos.fill(-1);
  for (size_t i = 0; i < header.size(); ++i) {
    bool known = false;
    for (size_t c = 0; c < detail::kGridColumns.size(); ++c) {
      if (header[i] == detail::kGridColumns[c]) {
        if (col_pos[c] != -1) {
          raise(ErrorKind::InvalidValue, "duplicate column '" + std::string(header[i]) + "'");
        }
        col_pos[c] = static_cast<int>(i);
        known = true;
        break;
      }
    }
    if (!known) {
      raise(ErrorKind::InvalidValue, "unexpected column '" + std::string(header[i]) + "'");
    }
  }
  for (size_t c = 0; c < detail::kGridColumns.size(); ++c) {
    if (col_pos[c] < 0) {
      raise(ErrorKind::MissingColumn, "column '" + std::string(detail::kGridColumns[c]) +
                                          "' not found in header");
    }
  }

  GridSeries series;
  size_t row = 1;  // header was row 1
  while (std::getline(in, line)) {
    ++row;
    if (trim(line).empty()) continue;
    const auto cells = split_csv_line(line);
    if (cells.size() != header.size()) {
      raise(ErrorKind::InvalidValue, "row " + std::to_string(row) + ": expected " +
                                         std::to_string(header.size()) + " cells, got " +
                                         std::to_string(cells.size()));
    }
    HourlyGridRecord rec;
    rec.timestamp = parse_timestamp(cells[col_pos[0]]);
    rec.total_demand = detail::parse_cell(cells[col_pos[1]], row, "total_demand");
    for (int f = 0; f < kFuelCount; ++f) {
      rec.gen[f] = detail::parse_cell(cells[col_pos[2 + f]], row, kFuelNames[f]);
      if (rec.gen[f] < 0.0) {
        raise(ErrorKind::InvalidValue, "row " + std::to_string(row) + ": negative " +
                                           std::string(kFuelNames[f]) + " generation");
      }
    }
    if (rec.total_demand < 0.0) {
      raise(ErrorKind::InvalidValue, "row " + std::to_string(row) + ": negative total_demand");
    }
    rec.net_imports = detail::parse_cell(cells[col_pos[8]], row, "net_imports");
    rec.price = detail::parse_cell(cells[col_pos[9]], row, "price");
    series.records.push_back(rec);
  }

  validate_series(series);
  return series;
}

inline GridSeries parse_grid_csv(const std::string& text) {
  std::istringstream in(text);
  return parse_grid_csv(in);
}

inline GridSeries parse_grid_csv_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) raise(ErrorKind::IoError, "cannot open '" + path + "' for reading");
  return parse_grid_csv(in);
}

inline void write_grid_csv(const GridSeries& series, std::ostream& out) {
  for (size_t c = 0; c < detail::kGridColumns.size(); ++c) {
    if (c) out << ',';
    out << detail::kGridColumns[c];
  }
  out << '\n';
  for (const auto& rec : series.records) {
    out << format_timestamp(rec.timestamp) << ',' << format_double(rec.total_demand);
    for (int f = 0; f < kFuelCount; ++f) out << ',' << format_double(rec.gen[f]);
    out << ',' << format_double(rec.net_imports) << ',' << format_double(rec.price) << '\n';
  }
}

inline std::string grid_csv_string(const GridSeries& series) {
  std::ostringstream out;
  write_grid_csv(series, out);
  return out.str();
}

inline void write_grid_csv_file(const GridSeries& series, const std::string& path) {
  std::ofstream out(path);
  if (!out) raise(ErrorKind::IoError, "cannot open '" + path + "' for writing");
  write_grid_csv(series, out);
  if (!out.good()) raise(ErrorKind::IoError, "write failed for '" + path + "'");
}

}  // namespace essmei
