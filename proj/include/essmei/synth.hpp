#pragma once

// Deterministic synthetic grid series.
//
// The generator works backwards from the quantity the estimator cares about:
// an hourly residual-demand signal (daily plus seasonal sinusoids plus noise)
// is drawn first, then the balancing sources (gas, hydro, net imports) and the
// price are placed on configurable response curves of that signal, and finally
// the observable total demand is assembled as residual plus the non
// dispatchable block (nuclear, wind, solar, biofuel). With noise disabled the
// balancing sources sit exactly on their curves, which gives estimation tests
// a known ground truth.
//
// All randomness flows through one mt19937_64 with a fixed draw order and a
// hand-rolled Box-Muller transform, so a seed pins the output bit for bit
// across platforms (std::normal_distribution is not portable).
//
// Extreme noise settings can push clamped series (wind, gas, hydro, demand)
// into their zero floors, which weakens the exact curve linkage; the default
// magnitudes stay far from the clamps.

#include <cmath>
#include <cstdint>
#include <random>
#include <string>

#include "essmei/errors.hpp"
#include "essmei/grid.hpp"

namespace essmei {

// offset + slope*x + amplitude * logistic((x - midpoint) / scale).
// amplitude = 0 degenerates to an exact linear response.
struct ResponseCurve {
  double offset = 0.0;
  double slope = 0.0;
  double amplitude = 0.0;
  double midpoint = 0.0;
  double scale = 1.0;
};

inline double evaluate(const ResponseCurve& c, double x) {
  return c.offset + c.slope * x + c.amplitude / (1.0 + std::exp(-(x - c.midpoint) / c.scale));
}

inline void validate(const ResponseCurve& c) {
  if (!(c.scale > 0.0) || !std::isfinite(c.offset) || !std::isfinite(c.slope) ||
      !std::isfinite(c.amplitude) || !std::isfinite(c.midpoint)) {
    raise(ErrorKind::InvalidParams, "response curve needs finite parameters and scale > 0");
  }
}

struct ResidualSignal {
  double mid = 5500.0;                // MWh
  double daily_amplitude = 4500.0;    // peak-to-mid daily swing
  double seasonal_amplitude = 3800.0; // peak-to-mid seasonal swing
  double noise_sigma = 600.0;
};

struct SynthParams {
  std::string start = "2024-01-01T00:00:00+00:00";
  std::size_t horizon_hours = 4380;
  std::uint64_t seed = 1;
  double noise_scale = 1.0;   // multiplies every noise sigma; 0 disables noise
  double price_floor = 5.0;   // $/MWh

  ResidualSignal residual;
  // Defaults give a supply mix whose marginal share moves from hydro-heavy at
  // low residual demand to gas-heavy in the mid range to import-heavy at the
  // top, and whose residual demand covers all fifteen default segments.
  ResponseCurve gas_curve = {300.0, 0.02, 6500.0, 5500.0, 2200.0};
  ResponseCurve hydro_curve = {1500.0, 0.12, 1500.0, 3000.0, 3000.0};
  ResponseCurve imports_curve = {-800.0, 0.15, 2500.0, 9000.0, 1800.0};
  ResponseCurve price_curve = {18.0, 0.0035, 40.0, 9500.0, 1500.0};
};

inline void validate(const SynthParams& p) {
  if (p.horizon_hours < 24) {
    raise(ErrorKind::InvalidParams, "synthetic horizon must be at least 24 hours, got " +
                                        std::to_string(p.horizon_hours));
  }
  if (!(p.noise_scale >= 0.0) || !std::isfinite(p.noise_scale)) {
    raise(ErrorKind::InvalidParams, "noise_scale must be a finite non-negative number");
  }
  if (!std::isfinite(p.price_floor)) {
    raise(ErrorKind::InvalidParams, "price_floor must be finite");
  }
  if (!(p.residual.noise_sigma >= 0.0)) {
    raise(ErrorKind::InvalidParams, "residual noise sigma must be non-negative");
  }
  validate(p.gas_curve);
  validate(p.hydro_curve);
  validate(p.imports_curve);
  validate(p.price_curve);
}

namespace detail {

// Uniform in [0, 1) from the top 53 bits; portable across standard libraries.
class NoiseSource {
 public:
  explicit NoiseSource(std::uint64_t seed) : rng_(seed) {}

  double uniform01() { return static_cast<double>(rng_() >> 11) * 0x1.0p-53; }

  // One Box-Muller normal per call; the sine partner is discarded so that the
  // draw order stays a simple one-per-quantity sequence.
  double gauss() {
    const double u1 = 1.0 - uniform01();  // in (0, 1]
    const double u2 = uniform01();
    return std::sqrt(-2.0 * std::log(u1)) * std::cos(6.283185307179586476925287 * u2);
  }

 private:
  std::mt19937_64 rng_;
};

}  // namespace detail

inline GridSeries synth_generate(const SynthParams& params) {
  validate(params);
  const Timestamp t0 = parse_timestamp(params.start);
  detail::NoiseSource noise(params.seed);

  constexpr double kTwoPi = 6.283185307179586476925287;
  constexpr double kDailyPeriod = 24.0;
  constexpr double kSeasonalPeriod = 8760.0;

  GridSeries series;
  series.records.reserve(params.horizon_hours);
  for (std::size_t t = 0; t < params.horizon_hours; ++t) {
    const double h = static_cast<double>(t);
    // Seasonal phase -pi/2: a half-year horizon still sweeps trough to peak.
    const double seasonal = std::sin(kTwoPi * h / kSeasonalPeriod - 1.5707963267948966);
    const double daily = std::sin(kTwoPi * h / kDailyPeriod - 2.0);

    const double rd = params.residual.mid + params.residual.seasonal_amplitude * seasonal +
                      params.residual.daily_amplitude * daily +
                      params.residual.noise_sigma * params.noise_scale * noise.gauss();

    // Non-dispatchable block; wind is the only noisy one.
    const double nuclear = 8800.0 + 250.0 * seasonal;
    const double wind = std::max(
        0.0, 1800.0 + 1200.0 * std::sin(kTwoPi * h / 72.0 + 0.9) +
                 250.0 * params.noise_scale * noise.gauss());
    const double hour_of_day = static_cast<double>(t % 24);
    const double solar =
        hour_of_day >= 6.0 && hour_of_day <= 18.0
            ? (900.0 + 250.0 * seasonal) * std::sin((hour_of_day - 6.0) / 12.0 * 3.141592653589793)
            : 0.0;
    const double biofuel = 120.0 + 30.0 * std::sin(kTwoPi * h / 168.0);

    HourlyGridRecord rec;
    rec.timestamp = t0;
    rec.timestamp.epoch_seconds += static_cast<int64_t>(t) * 3600;
    rec.gen[static_cast<int>(Fuel::Nuclear)] = nuclear;
    rec.gen[static_cast<int>(Fuel::Wind)] = wind;
    rec.gen[static_cast<int>(Fuel::Solar)] = std::max(0.0, solar);
    rec.gen[static_cast<int>(Fuel::Biofuel)] = biofuel;
    rec.total_demand =
        std::max(0.0, rd + nuclear + wind + rec.gen[static_cast<int>(Fuel::Solar)] + biofuel);

    // Evaluate the response curves on the residual recovered the same way the
    // estimator recovers it, so the zero-noise curve linkage is exact to the
    // last bit rather than exact up to re-association rounding.
    const double rd_observed = residual_demand(rec);
    rec.gen[static_cast<int>(Fuel::Gas)] =
        std::max(0.0, evaluate(params.gas_curve, rd_observed) +
                          180.0 * params.noise_scale * noise.gauss());
    rec.gen[static_cast<int>(Fuel::Hydro)] =
        std::max(0.0, evaluate(params.hydro_curve, rd_observed) +
                          120.0 * params.noise_scale * noise.gauss());
    rec.net_imports = evaluate(params.imports_curve, rd_observed) +
                      150.0 * params.noise_scale * noise.gauss();
    rec.price = std::max(params.price_floor, evaluate(params.price_curve, rd_observed) +
                                                 4.0 * params.noise_scale * noise.gauss());
    series.records.push_back(rec);
  }
  return series;
}

}  // namespace essmei
