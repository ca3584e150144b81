#include "essmei/harness.hpp"

#include <gtest/gtest.h>

#include <array>
#include <string>
#include <vector>

#include "essmei/dispatch.hpp"
#include "essmei/mei.hpp"
#include "essmei/synth.hpp"

namespace essmei {
namespace {

EssParams month_params() {
  EssParams p;
  p.energy_capacity_mwh = 2.0;
  p.charge_limit_mw = 1.0;
  p.discharge_limit_mw = 1.0;
  return p;
}

// A 720-hour slice for dispatch work plus an MEI table fitted on a long
// enough window to populate every segment.
struct SyntheticMonth {
  GridSeries series;
  MeiTable table;
};

const SyntheticMonth& synthetic_month() {
  static const SyntheticMonth fixture = [] {
    SyntheticMonth f;
    SynthParams sp;
    GridSeries full = synth_generate(sp);
    f.table = estimate_mei(full).table;
    f.series.records.assign(full.records.begin(), full.records.begin() + 720);
    return f;
  }();
  return fixture;
}

TEST(BuildSignals, CopiesPricesAndLooksUpIntensity) {
  const auto& m = synthetic_month();
  PriceSignals sig = build_signals(m.series, m.table, 80.0);

  ASSERT_EQ(sig.grid_price.size(), 720u);
  std::vector<double> expected =
      mei_series(residual_series(m.series, default_non_dispatchable()), m.table);
  for (std::size_t t = 0; t < sig.grid_price.size(); ++t) {
    EXPECT_EQ(sig.grid_price[t], m.series.records[t].price);
    EXPECT_EQ(sig.intensity[t], expected[t]);
    EXPECT_EQ(sig.carbon_price[t], 80.0);
  }
}

TEST(RunCases, ZeroIntensityIdlesCaseTwoAndMergesOneWithThree) {
  PriceSignals sig;
  sig.grid_price = {10.0, 120.0, 15.0, 90.0, 5.0, 60.0, 200.0, 1.0};
  sig.carbon_price.assign(8, 80.0);
  sig.intensity.assign(8, 0.0);

  CaseStudyResult study = run_cases(month_params(), sig);
  const DispatchSchedule& carbon = study.cases[1].schedule;
  for (std::size_t t = 0; t < carbon.horizon(); ++t) {
    EXPECT_EQ(carbon.charge_mw[t], 0.0);
    EXPECT_EQ(carbon.discharge_mw[t], 0.0);
  }
  EXPECT_EQ(study.cases[0].schedule.grid_mw, study.cases[2].schedule.grid_mw);
  EXPECT_EQ(study.cases[0].schedule.soc, study.cases[2].schedule.soc);
  EXPECT_TRUE(study.dominance_ok) << study.dominance_note;
}

TEST(RunCases, ZeroGridPriceIdlesCaseOneAndMergesTwoWithThree) {
  PriceSignals sig;
  sig.grid_price.assign(8, 0.0);
  sig.carbon_price.assign(8, 80.0);
  sig.intensity = {0.05, 0.30, 0.02, 0.25, 0.01, 0.20, 0.35, 0.0};

  // With the tie-break at zero both remaining cases price action
  // identically, so they must walk the same pivot path.
  CaseStudyResult study = run_cases(month_params(), sig, 0.0);
  const DispatchSchedule& elec = study.cases[0].schedule;
  for (std::size_t t = 0; t < elec.horizon(); ++t) {
    EXPECT_EQ(elec.grid_mw[t], 0.0);
  }
  EXPECT_EQ(study.cases[1].schedule.charge_mw, study.cases[2].schedule.charge_mw);
  EXPECT_EQ(study.cases[1].schedule.discharge_mw, study.cases[2].schedule.discharge_mw);
  EXPECT_EQ(study.cases[1].schedule.grid_mw, study.cases[2].schedule.grid_mw);
  EXPECT_TRUE(study.dominance_ok) << study.dominance_note;
}

TEST(RunCases, DominanceChainHoldsOnSyntheticMonth) {
  const auto& m = synthetic_month();
  CaseStudyResult study = run_cases(m.series, m.table, month_params(), 80.0, 0.0);

  EXPECT_TRUE(study.dominance_ok) << study.dominance_note;
  const OperationReport& r1 = study.cases[0].report;
  const OperationReport& r2 = study.cases[1].report;
  const OperationReport& r3 = study.cases[2].report;
  EXPECT_GE(r1.elec_revenue + 1e-6, r3.elec_revenue);
  EXPECT_GE(r3.elec_revenue + 1e-6, r2.elec_revenue);
  EXPECT_GE(r2.emission_reduction + 1e-6, r3.emission_reduction);
  EXPECT_GE(r3.emission_reduction + 1e-6, r1.emission_reduction);
  EXPECT_GE(r3.total_revenue + 1e-6, r1.total_revenue);
  EXPECT_GE(r3.total_revenue + 1e-6, r2.total_revenue);

  // The cases genuinely differ on this data, so the chain is not vacuous.
  EXPECT_GT(r1.elec_revenue, r2.elec_revenue + 1.0);
  EXPECT_GT(r2.emission_reduction, r1.emission_reduction + 1.0);
}

TEST(RunCases, DefaultTieBreakKeepsChainWithinSlack) {
  const auto& m = synthetic_month();
  CaseStudyResult study = run_cases(m.series, m.table, month_params(), 80.0);
  EXPECT_TRUE(study.dominance_ok) << study.dominance_note;
}

TEST(RunCases, CaseTwoScheduleInvariantToCarbonPriceLevel) {
  const auto& m = synthetic_month();
  CaseStudyResult low = run_cases(m.series, m.table, month_params(), 40.0);
  CaseStudyResult high = run_cases(m.series, m.table, month_params(), 160.0);

  EXPECT_EQ(low.cases[1].schedule.charge_mw, high.cases[1].schedule.charge_mw);
  EXPECT_EQ(low.cases[1].schedule.discharge_mw, high.cases[1].schedule.discharge_mw);
  EXPECT_EQ(low.cases[1].schedule.grid_mw, high.cases[1].schedule.grid_mw);
  EXPECT_EQ(low.cases[1].schedule.soc, high.cases[1].schedule.soc);
  EXPECT_EQ(low.cases[1].report.emission_reduction, high.cases[1].report.emission_reduction);
}

TEST(NormalizedPerformance, TableShapedFixturePicksTheExpectedWinners) {
  std::array<OperationReport, 3> reports;
  const double revenue[3] = {17.30, 1.99, 17.67};
  const double reduction[3] = {-6.62, 9.75, 1.94};
  const double lifetime[3] = {0.68, 0.88, 0.75};
  for (int i = 0; i < 3; ++i) {
    reports[i].total_revenue = revenue[i];
    reports[i].emission_reduction = reduction[i];
    reports[i].remaining_lifetime = lifetime[i];
  }

  auto norm = normalized_performance(reports);
  EXPECT_EQ(norm[2].revenue, 1.0);
  EXPECT_EQ(norm[1].revenue, 0.0);
  EXPECT_DOUBLE_EQ(norm[0].revenue, (17.30 - 1.99) / (17.67 - 1.99));
  EXPECT_EQ(norm[1].emission_reduction, 1.0);
  EXPECT_EQ(norm[0].emission_reduction, 0.0);
  EXPECT_DOUBLE_EQ(norm[2].emission_reduction, (1.94 - -6.62) / (9.75 - -6.62));
  EXPECT_EQ(norm[1].lifetime, 1.0);
  EXPECT_EQ(norm[0].lifetime, 0.0);
  EXPECT_DOUBLE_EQ(norm[2].lifetime, (0.75 - 0.68) / (0.88 - 0.68));
}

TEST(NormalizedPerformance, TiesMapToOneAndRampIsLinear) {
  std::array<OperationReport, 3> reports;
  for (auto& r : reports) {
    r.total_revenue = 5.0;
    r.emission_reduction = -1.0;
    r.remaining_lifetime = 0.9;
  }
  for (const auto& triple : normalized_performance(reports)) {
    EXPECT_EQ(triple.revenue, 1.0);
    EXPECT_EQ(triple.emission_reduction, 1.0);
    EXPECT_EQ(triple.lifetime, 1.0);
  }

  reports[0].total_revenue = 1.0;
  reports[1].total_revenue = 2.0;
  reports[2].total_revenue = 3.0;
  auto norm = normalized_performance(reports);
  EXPECT_EQ(norm[0].revenue, 0.0);
  EXPECT_EQ(norm[1].revenue, 0.5);
  EXPECT_EQ(norm[2].revenue, 1.0);
  EXPECT_EQ(norm[0].emission_reduction, 1.0);
  EXPECT_EQ(norm[2].lifetime, 1.0);
}

TEST(SensitivitySweep, RowMajorOrderWithCapacityCoupledPower) {
  const auto& m = synthetic_month();
  SweepGrid grid = sensitivity_sweep(m.series, m.table, month_params(), {1.0, 2.0},
                                     {40.0, 160.0}, CaseMode::CarbonOnly);

  ASSERT_EQ(grid.cells.size(), 4u);
  EXPECT_EQ(grid.cells[0].capacity_mwh, 1.0);
  EXPECT_EQ(grid.cells[0].carbon_price, 40.0);
  EXPECT_EQ(grid.cells[1].capacity_mwh, 1.0);
  EXPECT_EQ(grid.cells[1].carbon_price, 160.0);
  EXPECT_EQ(grid.cells[2].capacity_mwh, 2.0);
  EXPECT_EQ(grid.cells[2].carbon_price, 40.0);
  EXPECT_EQ(grid.cells[3].capacity_mwh, 2.0);
  EXPECT_EQ(grid.cells[3].carbon_price, 160.0);

  // Carbon-only abatement does not move with the price level and never
  // shrinks when the unit gets bigger at fixed C-rate.
  EXPECT_EQ(grid.cells[0].emissions, grid.cells[1].emissions);
  EXPECT_EQ(grid.cells[2].emissions, grid.cells[3].emissions);
  EXPECT_LE(grid.cells[2].emissions, grid.cells[0].emissions + 1e-9);
}

TEST(SensitivitySweep, SingleCellMatchesRunCasesSlice) {
  const auto& m = synthetic_month();
  EssParams params = month_params();
  params.energy_capacity_mwh = 2.0;
  params.charge_limit_mw = 2.0;
  params.discharge_limit_mw = 2.0;

  CaseStudyResult study = run_cases(m.series, m.table, params, 80.0);
  SweepGrid grid = sensitivity_sweep(m.series, m.table, month_params(), {2.0}, {80.0},
                                     CaseMode::Combined);

  ASSERT_EQ(grid.cells.size(), 1u);
  EXPECT_EQ(grid.cells[0].emissions, -study.cases[2].report.emission_reduction);
  EXPECT_EQ(grid.cells[0].revenue, study.cases[2].report.total_revenue);
}

TEST(SensitivitySweep, RejectsBadAxesAndModes) {
  const auto& m = synthetic_month();
  auto sweep = [&](std::vector<double> caps, std::vector<double> prices, CaseMode mode,
                   double c_rate) {
    return sensitivity_sweep(m.series, m.table, month_params(), caps, prices, mode, c_rate);
  };
  EXPECT_THROW(sweep({1.0}, {40.0}, CaseMode::ElectricityOnly, 1.0), Error);
  EXPECT_THROW(sweep({}, {40.0}, CaseMode::CarbonOnly, 1.0), Error);
  EXPECT_THROW(sweep({1.0}, {}, CaseMode::CarbonOnly, 1.0), Error);
  EXPECT_THROW(sweep({1.0}, {-40.0}, CaseMode::CarbonOnly, 1.0), Error);
  EXPECT_THROW(sweep({1.0}, {40.0}, CaseMode::CarbonOnly, 0.0), Error);

  try {
    sweep({1.0}, {40.0}, CaseMode::ElectricityOnly, 1.0);
    FAIL() << "expected mode rejection";
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::InvalidParams);
  }
}

TEST(SensitivitySweep, FailedCellReportsItsCoordinates) {
  const auto& m = synthetic_month();
  try {
    sensitivity_sweep(m.series, m.table, month_params(), {1.0, -1.0}, {40.0},
                      CaseMode::CarbonOnly);
    FAIL() << "expected the negative-capacity cell to abort the sweep";
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::InvalidParams);
    const std::string msg = e.what();
    EXPECT_NE(msg.find("capacity=-1"), std::string::npos) << msg;
    EXPECT_NE(msg.find("carbon_price=40"), std::string::npos) << msg;
  }
}

TEST(SweepCsv, RoundTripsExactly) {
  const auto& m = synthetic_month();
  SweepGrid grid = sensitivity_sweep(m.series, m.table, month_params(), {1.0, 2.0}, {80.0},
                                     CaseMode::Combined);

  std::vector<SweepCell> parsed = parse_sweep_csv(sweep_csv_string(grid));
  ASSERT_EQ(parsed.size(), grid.cells.size());
  for (std::size_t i = 0; i < parsed.size(); ++i) {
    EXPECT_EQ(parsed[i].capacity_mwh, grid.cells[i].capacity_mwh);
    EXPECT_EQ(parsed[i].carbon_price, grid.cells[i].carbon_price);
    EXPECT_EQ(parsed[i].emissions, grid.cells[i].emissions);
    EXPECT_EQ(parsed[i].revenue, grid.cells[i].revenue);
  }

  EXPECT_THROW(parse_sweep_csv("wrong,header\n1,2\n"), Error);
  EXPECT_THROW(parse_sweep_csv("capacity,carbon_price,emissions,revenue\n1,2,3\n"), Error);
  EXPECT_THROW(parse_sweep_csv("capacity,carbon_price,emissions,revenue\n1,2,3,x\n"), Error);
}

TEST(ScheduleCsv, RoundTripsExactly) {
  EssParams params = month_params();
  std::vector<double> price = {10.0, 120.0, 15.0, 90.0, 5.0, 60.0};
  DispatchSchedule sched = solve_dispatch(params, price);

  DispatchSchedule parsed = parse_schedule_csv(schedule_csv_string(sched));
  EXPECT_EQ(parsed.charge_mw, sched.charge_mw);
  EXPECT_EQ(parsed.discharge_mw, sched.discharge_mw);
  EXPECT_EQ(parsed.grid_mw, sched.grid_mw);
  EXPECT_EQ(parsed.soc, sched.soc);

  EXPECT_THROW(parse_schedule_csv("nope\n"), Error);
  EXPECT_THROW(parse_schedule_csv("hour,charge_mw,discharge_mw,grid_mw,soc\n1,0,0,0,0\n"),
               Error);
}

}  // namespace
}  // namespace essmei
