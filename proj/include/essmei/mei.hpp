#pragma once

// Marginal emission intensity estimation.
//
// Pipeline: residual demand series -> cubic response fits for the three
// balancing sources (gas, hydro, net imports) -> per-segment marginal supply
// shares -> per-segment emission intensity. The residual demand axis is cut
// into `count` segments: segment 1 is the open tail below `first_upper_bound`,
// then fixed-width bins, and the last segment absorbs everything above. All
// bins are half open from below, so a value sitting exactly on a boundary
// belongs to the bin above it.
//
// A source's share in a segment is the chord slope of its fitted response
// across the segment window, i.e. marginal MWh of that source per marginal
// MWh of residual demand. Intensity per segment is the emission-factor
// weighted sum of shares; the import share only participates in segments
// where imports are actually on the margin (fixed list or sign-of-mean rule).

#include <cmath>
#include <cstddef>
#include <limits>
#include <string>
#include <vector>

#include "essmei/errors.hpp"
#include "essmei/grid.hpp"
#include "essmei/polyfit.hpp"

namespace essmei {

struct SegmentationConfig {
  double first_upper_bound = -1000.0;  // MWh; segment 1 = (-inf, this)
  double width = 1000.0;               // MWh per interior segment
  int count = 15;
};

inline void validate(const SegmentationConfig& cfg) {
  if (!(cfg.width > 0.0) || cfg.count < 2 || !std::isfinite(cfg.first_upper_bound)) {
    raise(ErrorKind::InvalidParams, "segmentation needs finite bound, width > 0, count >= 2");
  }
}

// 1-based segment index; total over all of R.
inline int segment_index(double rd, const SegmentationConfig& cfg) {
  if (rd < cfg.first_upper_bound) return 1;
  const int s = 2 + static_cast<int>(std::floor((rd - cfg.first_upper_bound) / cfg.width));
  return s < cfg.count ? s : cfg.count;
}

struct SegmentBounds {
  double lower;  // -inf for segment 1
  double upper;  // +inf for the last segment
};

inline SegmentBounds segment_bounds(int s, const SegmentationConfig& cfg) {
  if (s < 1 || s > cfg.count) {
    raise(ErrorKind::InvalidValue, "segment index " + std::to_string(s) + " out of range");
  }
  const double inf = std::numeric_limits<double>::infinity();
  SegmentBounds b;
  b.lower = s == 1 ? -inf : cfg.first_upper_bound + (s - 2) * cfg.width;
  b.upper = s == cfg.count ? inf : cfg.first_upper_bound + (s - 1) * cfg.width;
  return b;
}

struct EmissionFactors {
  double gas = 0.37;      // tCO2 per MWh
  double imports = 0.44;  // tCO2 per MWh, grid-average of the exporting side
  double hydro = 0.0;
};

inline void validate(const EmissionFactors& f) {
  if (!std::isfinite(f.gas) || !std::isfinite(f.imports) || !std::isfinite(f.hydro)) {
    raise(ErrorKind::InvalidParams, "emission factors must be finite");
  }
}

// Marginal share of each source within one residual-demand segment.
struct SegmentShare {
  double gas = 0.0;
  double hydro = 0.0;
  double imports = 0.0;
  double total = 0.0;             // gas + hydro + imports
  double mean_net_imports = 0.0;  // over observations falling in the segment
  std::size_t sample_count = 0;

  friend bool operator==(const SegmentShare&, const SegmentShare&) = default;
};

struct SupplyShareTable {
  SegmentationConfig config;
  std::vector<SegmentShare> segments;  // size == config.count

  friend bool operator==(const SupplyShareTable& a, const SupplyShareTable& b) {
    return a.config.first_upper_bound == b.config.first_upper_bound &&
           a.config.width == b.config.width && a.config.count == b.config.count &&
           a.segments == b.segments;
  }
};

enum class ShareMethod {
  ChordSlope,  // slope of the full-domain cubic across the segment window
  SegmentOls,  // per-segment linear regression on the raw points
};

enum class ImportRule {
  ExplicitSegments,    // fixed list of segment indices
  AutoByMeanImports,   // counted where mean net imports over the segment > 0
};

struct ImportPolicy {
  ImportRule rule = ImportRule::ExplicitSegments;
  std::vector<int> segments = {14, 15};  // used by ExplicitSegments
};

struct MeiTable {
  SegmentationConfig config;
  EmissionFactors factors;
  std::vector<double> mei;            // tCO2 per MWh, per segment
  std::vector<bool> import_counted;   // per segment

  friend bool operator==(const MeiTable& a, const MeiTable& b) {
    return a.config.first_upper_bound == b.config.first_upper_bound &&
           a.config.width == b.config.width && a.config.count == b.config.count &&
           a.factors.gas == b.factors.gas && a.factors.imports == b.factors.imports &&
           a.factors.hydro == b.factors.hydro && a.mei == b.mei &&
           a.import_counted == b.import_counted;
  }
};

namespace detail {

// Chord window for a segment, with the open tails clipped to one bin width
// or to the observed domain, whichever is tighter on the finite side.
inline std::pair<double, double> chord_window(int s, const SegmentationConfig& cfg,
                                              double domain_min, double domain_max) {
  const auto b = segment_bounds(s, cfg);
  double lo = b.lower, hi = b.upper;
  if (s == 1) lo = std::max(domain_min, b.upper - cfg.width);
  if (s == cfg.count) hi = std::min(domain_max, b.lower + cfg.width);
  if (hi < domain_min || lo > domain_max || !(lo < hi)) {
    raise(ErrorKind::EmptySegmentDomain,
          "segment " + std::to_string(s) + " lies outside the fitted domain [" +
              std::to_string(domain_min) + ", " + std::to_string(domain_max) + "]");
  }
  return {lo, hi};
}

}  // namespace detail

// Estimates per-segment marginal shares from aligned series. rd is residual
// demand; gas/hydro/imports are the balancing source outputs at the same hours.
inline SupplyShareTable supply_shares(const std::vector<double>& rd,
                                      const std::vector<double>& gas,
                                      const std::vector<double>& hydro,
                                      const std::vector<double>& imports,
                                      const SegmentationConfig& cfg,
                                      ShareMethod method = ShareMethod::ChordSlope) {
  validate(cfg);
  if (rd.size() != gas.size() || rd.size() != hydro.size() || rd.size() != imports.size()) {
    raise(ErrorKind::LengthMismatch, "share estimation inputs differ in length");
  }
  if (rd.empty()) raise(ErrorKind::EmptySeries, "share estimation got an empty series");

  SupplyShareTable table;
  table.config = cfg;
  table.segments.resize(cfg.count);

  // Segment membership statistics are method independent.
  for (std::size_t i = 0; i < rd.size(); ++i) {
    auto& seg = table.segments[segment_index(rd[i], cfg) - 1];
    seg.mean_net_imports += imports[i];
    ++seg.sample_count;
  }
  for (auto& seg : table.segments) {
    if (seg.sample_count) seg.mean_net_imports /= static_cast<double>(seg.sample_count);
  }

  if (method == ShareMethod::ChordSlope) {
    const CubicFit fg = fit_cubic(rd, gas);
    const CubicFit fh = fit_cubic(rd, hydro);
    const CubicFit fi = fit_cubic(rd, imports);
    for (int s = 1; s <= cfg.count; ++s) {
      const auto [lo, hi] = detail::chord_window(s, cfg, fg.domain_min, fg.domain_max);
      auto& seg = table.segments[s - 1];
      seg.gas = (evaluate(fg, hi) - evaluate(fg, lo)) / (hi - lo);
      seg.hydro = (evaluate(fh, hi) - evaluate(fh, lo)) / (hi - lo);
      seg.imports = (evaluate(fi, hi) - evaluate(fi, lo)) / (hi - lo);
      seg.total = seg.gas + seg.hydro + seg.imports;
    }
  } else {
    std::vector<std::vector<double>> xs(cfg.count), gs(cfg.count), hs(cfg.count), is(cfg.count);
    for (std::size_t i = 0; i < rd.size(); ++i) {
      const int s = segment_index(rd[i], cfg) - 1;
      xs[s].push_back(rd[i]);
      gs[s].push_back(gas[i]);
      hs[s].push_back(hydro[i]);
      is[s].push_back(imports[i]);
    }
    for (int s = 0; s < cfg.count; ++s) {
      if (xs[s].size() < 2) {
        raise(ErrorKind::EmptySegmentDomain,
              "segment " + std::to_string(s + 1) + " has " + std::to_string(xs[s].size()) +
                  " observations, need at least 2 for per-segment regression");
      }
      auto& seg = table.segments[s];
      seg.gas = fit_linear(xs[s], gs[s]).slope;
      seg.hydro = fit_linear(xs[s], hs[s]).slope;
      seg.imports = fit_linear(xs[s], is[s]).slope;
      seg.total = seg.gas + seg.hydro + seg.imports;
    }
  }
  return table;
}

inline bool import_counted_in(int segment, const SegmentShare& share, const ImportPolicy& policy) {
  if (policy.rule == ImportRule::ExplicitSegments) {
    for (int s : policy.segments) {
      if (s == segment) return true;
    }
    return false;
  }
  return share.mean_net_imports > 0.0;
}

inline MeiTable mei_table(const SupplyShareTable& shares, const EmissionFactors& factors,
                          const ImportPolicy& policy = {}) {
  validate(factors);
  MeiTable table;
  table.config = shares.config;
  table.factors = factors;
  table.mei.reserve(shares.segments.size());
  table.import_counted.reserve(shares.segments.size());
  for (std::size_t i = 0; i < shares.segments.size(); ++i) {
    const auto& seg = shares.segments[i];
    const bool counted = import_counted_in(static_cast<int>(i) + 1, seg, policy);
    double m = seg.gas * factors.gas + seg.hydro * factors.hydro;
    if (counted) m += seg.imports * factors.imports;
    table.mei.push_back(m);
    table.import_counted.push_back(counted);
  }
  return table;
}

// Hourly intensity: look up each hour's residual demand segment.
inline std::vector<double> mei_series(const std::vector<double>& rd, const MeiTable& table) {
  if (table.mei.size() != static_cast<std::size_t>(table.config.count)) {
    raise(ErrorKind::InvalidParams, "intensity table is inconsistent with its segmentation");
  }
  std::vector<double> out;
  out.reserve(rd.size());
  for (double v : rd) out.push_back(table.mei[segment_index(v, table.config) - 1]);
  return out;
}

// Bundle produced by the full estimation pass over a grid series.
struct MeiEstimate {
  CubicFit gas_fit;
  CubicFit hydro_fit;
  CubicFit imports_fit;
  SupplyShareTable shares;
  MeiTable table;
  std::vector<double> residual;   // per hour
  std::vector<double> intensity;  // per hour
};

struct MeiOptions {
  std::vector<Fuel> non_dispatchable = default_non_dispatchable();
  SegmentationConfig segmentation;
  EmissionFactors factors;
  ImportPolicy import_policy;
  ShareMethod method = ShareMethod::ChordSlope;
};

inline MeiEstimate estimate_mei(const GridSeries& series, const MeiOptions& opt = {}) {
  validate_series(series);
  MeiEstimate est;
  est.residual = residual_series(series, opt.non_dispatchable);
  std::vector<double> gas, hydro, imports;
  gas.reserve(series.size());
  hydro.reserve(series.size());
  imports.reserve(series.size());
  for (const auto& rec : series.records) {
    gas.push_back(rec.generation(Fuel::Gas));
    hydro.push_back(rec.generation(Fuel::Hydro));
    imports.push_back(rec.net_imports);
  }
  est.gas_fit = fit_cubic(est.residual, gas);
  est.hydro_fit = fit_cubic(est.residual, hydro);
  est.imports_fit = fit_cubic(est.residual, imports);
  est.shares = supply_shares(est.residual, gas, hydro, imports, opt.segmentation, opt.method);
  est.table = mei_table(est.shares, opt.factors, opt.import_policy);
  est.intensity = mei_series(est.residual, est.table);
  return est;
}

}  // namespace essmei
