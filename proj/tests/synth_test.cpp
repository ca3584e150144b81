#include "essmei/synth.hpp"

#include <gtest/gtest.h>

#include <set>

#include "essmei/mei.hpp"

namespace {

using namespace essmei;

TEST(ResponseCurve, LinearWhenAmplitudeIsZero) {
  ResponseCurve c{100.0, 0.5, 0.0, 0.0, 1.0};
  for (double x : {-2000.0, -1.0, 0.0, 3.5, 12000.0}) {
    EXPECT_DOUBLE_EQ(evaluate(c, x), 100.0 + 0.5 * x);
  }
}

TEST(ResponseCurve, LogisticLimitsAndMidpoint) {
  ResponseCurve c{0.0, 0.0, 1000.0, 500.0, 100.0};
  EXPECT_NEAR(evaluate(c, 500.0), 500.0, 1e-9);            // half amplitude
  EXPECT_NEAR(evaluate(c, 500.0 + 2000.0), 1000.0, 1e-3);  // saturates high
  EXPECT_NEAR(evaluate(c, 500.0 - 2000.0), 0.0, 1e-3);     // saturates low
  EXPECT_THROW(validate(ResponseCurve{0, 0, 1, 0, 0}), Error);
}

TEST(SynthGenerate, DeterministicForSeed) {
  SynthParams p;
  p.horizon_hours = 240;
  p.seed = 123;
  const GridSeries a = synth_generate(p);
  const GridSeries b = synth_generate(p);
  EXPECT_TRUE(a == b);

  p.seed = 124;
  const GridSeries c = synth_generate(p);
  EXPECT_FALSE(a == c);
}

TEST(SynthGenerate, HonorsHorizonAndSpacing) {
  SynthParams p;
  p.horizon_hours = 72;
  const GridSeries s = synth_generate(p);
  ASSERT_EQ(s.size(), 72u);
  validate_series(s);  // hourly, non-empty
  EXPECT_EQ(format_timestamp(s[0].timestamp), "2024-01-01T00:00:00+00:00");
}

TEST(SynthGenerate, RejectsShortHorizon) {
  SynthParams p;
  p.horizon_hours = 23;
  try {
    synth_generate(p);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::InvalidParams);
  }
}

TEST(SynthGenerate, ZeroNoisePutsGasExactlyOnCurve) {
  SynthParams p;
  p.horizon_hours = 480;
  p.noise_scale = 0.0;
  const GridSeries s = synth_generate(p);
  const auto rd = residual_series(s);
  for (size_t t = 0; t < s.size(); ++t) {
    EXPECT_DOUBLE_EQ(s[t].generation(Fuel::Gas), evaluate(p.gas_curve, rd[t])) << "hour " << t;
    EXPECT_DOUBLE_EQ(s[t].generation(Fuel::Hydro), evaluate(p.hydro_curve, rd[t]));
    EXPECT_DOUBLE_EQ(s[t].net_imports, evaluate(p.imports_curve, rd[t]));
  }
}

TEST(SynthGenerate, SeriesIsPhysicallyValid) {
  SynthParams p;
  p.horizon_hours = 1000;
  p.seed = 9;
  const GridSeries s = synth_generate(p);
  for (const auto& rec : s.records) {
    EXPECT_GE(rec.total_demand, 0.0);
    for (double g : rec.gen) EXPECT_GE(g, 0.0);
    EXPECT_GE(rec.price, p.price_floor);
  }
}

TEST(SynthGenerate, DefaultHorizonCoversAllSegments) {
  const GridSeries s = synth_generate(SynthParams{});
  ASSERT_EQ(s.size(), 4380u);
  const auto rd = residual_series(s);
  const SegmentationConfig cfg;
  std::array<int, 15> counts{};
  for (double v : rd) ++counts[segment_index(v, cfg) - 1];
  for (int seg = 0; seg < 15; ++seg) {
    EXPECT_GE(counts[seg], 50) << "segment " << seg + 1 << " is underpopulated";
  }
}

TEST(SynthGenerate, DefaultsFeedTheEstimatorCleanly) {
  // End to end: the default synthetic half-year supports a full 15-segment
  // estimation without degenerate or empty windows.
  const GridSeries s = synth_generate(SynthParams{});
  const MeiEstimate est = estimate_mei(s);
  ASSERT_EQ(est.table.mei.size(), 15u);
  for (double m : est.table.mei) EXPECT_TRUE(std::isfinite(m));
  // Gas responds strongly in the mid segments on the default curves.
  EXPECT_GT(est.shares.segments[6].gas, 0.2);
}

}  // namespace
