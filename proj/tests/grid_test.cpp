#include "essmei/grid.hpp"

#include <gtest/gtest.h>

#include <random>
#include <sstream>

#include "essmei/timestamp.hpp"

namespace {

using namespace essmei;

HourlyGridRecord make_record(int hour) {
  HourlyGridRecord rec;
  rec.timestamp = parse_timestamp("2024-10-01T00:00:00-04:00");
  rec.timestamp.epoch_seconds += hour * 3600;
  rec.total_demand = 15000.0;
  rec.gen[static_cast<int>(Fuel::Nuclear)] = 9000.0;
  rec.gen[static_cast<int>(Fuel::Hydro)] = 3000.0;
  rec.gen[static_cast<int>(Fuel::Wind)] = 2000.0;
  rec.gen[static_cast<int>(Fuel::Solar)] = 500.0;
  rec.gen[static_cast<int>(Fuel::Biofuel)] = 100.0;
  rec.gen[static_cast<int>(Fuel::Gas)] = 1200.0;
  rec.net_imports = -250.0;
  rec.price = 42.5;
  return rec;
}

TEST(Timestamp, ParseFormatRoundTrip) {
  for (const char* text : {"2024-10-01T00:00:00-04:00", "2024-06-30T23:59:59+02:00",
                           "2000-02-29T12:00:00+00:00", "1999-12-31T23:00:00-10:30"}) {
    const Timestamp ts = parse_timestamp(text);
    EXPECT_EQ(format_timestamp(ts), text);
    EXPECT_EQ(parse_timestamp(format_timestamp(ts)), ts);
  }
}

TEST(Timestamp, ZuluNormalizesToExplicitOffset) {
  const Timestamp ts = parse_timestamp("2024-10-01T04:00:00Z");
  EXPECT_EQ(ts.offset_minutes, 0);
  EXPECT_EQ(format_timestamp(ts), "2024-10-01T04:00:00+00:00");
  // Same instant as midnight at -04:00.
  EXPECT_EQ(ts.epoch_seconds, parse_timestamp("2024-10-01T00:00:00-04:00").epoch_seconds);
}

TEST(Timestamp, KnownEpochValue) {
  EXPECT_EQ(parse_timestamp("1970-01-01T00:00:00+00:00").epoch_seconds, 0);
  EXPECT_EQ(parse_timestamp("1970-01-02T00:00:00+00:00").epoch_seconds, 86400);
  EXPECT_EQ(parse_timestamp("2024-10-01T00:00:00-04:00").epoch_seconds, 1727755200);
}

TEST(Timestamp, RejectsMalformedText) {
  for (const char* text :
       {"", "2024-10-01", "2024-10-01 00:00:00-04:00", "2024-13-01T00:00:00Z",
        "2024-10-01T24:00:00Z", "2024-10-01T00:00:00", "2024-10-01T00:00:00-0400",
        "garbage", "2024-10-01T00:00:00-04:0x"}) {
    try {
      parse_timestamp(text);
      FAIL() << "accepted '" << text << "'";
    } catch (const Error& e) {
      EXPECT_EQ(e.kind(), ErrorKind::InvalidValue) << text;
    }
  }
}

TEST(ResidualDemand, DefaultSetMatchesWorkedExample) {
  // 15000 - (9000 nuclear + 2000 wind + 500 solar + 100 biofuel) = 3400.
  // Hydro and gas stay in; imports are not part of the transform.
  const auto rec = make_record(0);
  EXPECT_DOUBLE_EQ(residual_demand(rec), 3400.0);
}

TEST(ResidualDemand, NegativeValuesAreLegitimate) {
  HourlyGridRecord rec = make_record(0);
  rec.total_demand = 8000.0;  // 8000 - 11600 = -3600
  EXPECT_DOUBLE_EQ(residual_demand(rec), -3600.0);

  rec.total_demand = 5000.0;
  rec.gen[static_cast<int>(Fuel::Nuclear)] = 6000.0;
  EXPECT_DOUBLE_EQ(residual_demand(rec, {Fuel::Nuclear}), -1000.0);
}

TEST(ResidualDemand, EmptySubtractionSetIsTotalDemand) {
  const auto rec = make_record(0);
  EXPECT_DOUBLE_EQ(residual_demand(rec, {}), rec.total_demand);
}

TEST(ResidualDemand, LinearUnderScaling) {
  std::mt19937_64 rng(20241001);
  std::uniform_real_distribution<double> u(0.0, 20000.0);
  std::uniform_real_distribution<double> alpha_dist(0.1, 5.0);
  for (int trial = 0; trial < 200; ++trial) {
    HourlyGridRecord rec;
    rec.total_demand = u(rng);
    for (auto& g : rec.gen) g = u(rng) * 0.2;
    const double alpha = alpha_dist(rng);
    HourlyGridRecord scaled = rec;
    scaled.total_demand *= alpha;
    for (auto& g : scaled.gen) g *= alpha;
    EXPECT_NEAR(residual_demand(scaled), alpha * residual_demand(rec),
                1e-9 * (1.0 + std::abs(residual_demand(rec))));
  }
}

TEST(FuelNames, RoundTripAndUnknown) {
  for (int i = 0; i < kFuelCount; ++i) {
    const Fuel f = static_cast<Fuel>(i);
    EXPECT_EQ(fuel_from_name(fuel_name(f)), f);
  }
  try {
    fuel_from_name("coal");
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::UnknownFuel);
  }
}

TEST(GridCsv, ParsesCanonicalDocument) {
  const std::string csv =
      "timestamp,total_demand,nuclear,hydro,wind,solar,biofuel,gas,net_imports,price\n"
      "2024-10-01T00:00:00-04:00,15000,9000,3000,2000,500,100,1200,-250,42.5\n"
      "2024-10-01T01:00:00-04:00,14000,9000,2800,2100,0,100,900,150,39.1\n";
  const GridSeries series = parse_grid_csv(csv);
  ASSERT_EQ(series.size(), 2u);
  EXPECT_DOUBLE_EQ(series[0].total_demand, 15000.0);
  EXPECT_DOUBLE_EQ(series[0].generation(Fuel::Gas), 1200.0);
  EXPECT_DOUBLE_EQ(series[0].net_imports, -250.0);
  EXPECT_DOUBLE_EQ(series[1].price, 39.1);
  EXPECT_EQ(series[1].timestamp.epoch_seconds - series[0].timestamp.epoch_seconds, 3600);
}

TEST(GridCsv, AcceptsShuffledColumnsAndBlankLines) {
  const std::string csv =
      "price,timestamp,total_demand,gas,nuclear,hydro,wind,solar,biofuel,net_imports\n"
      "42.5,2024-10-01T00:00:00-04:00,15000,1200,9000,3000,2000,500,100,-250\n"
      "\n";
  const GridSeries series = parse_grid_csv(csv);
  ASSERT_EQ(series.size(), 1u);
  EXPECT_DOUBLE_EQ(series[0].price, 42.5);
  EXPECT_DOUBLE_EQ(series[0].generation(Fuel::Gas), 1200.0);
}

TEST(GridCsv, MissingColumnNamesTheColumn) {
  const std::string csv =
      "timestamp,total_demand,nuclear,hydro,wind,solar,biofuel,net_imports,price\n"
      "2024-10-01T00:00:00-04:00,15000,9000,3000,2000,500,100,-250,42.5\n";
  try {
    parse_grid_csv(csv);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::MissingColumn);
    EXPECT_NE(std::string(e.what()).find("gas"), std::string::npos);
  }
}

TEST(GridCsv, NonNumericCellNamesRowAndColumn) {
  const std::string csv =
      "timestamp,total_demand,nuclear,hydro,wind,solar,biofuel,gas,net_imports,price\n"
      "2024-10-01T00:00:00-04:00,15000,9000,3000,2000,500,100,12x0,-250,42.5\n";
  try {
    parse_grid_csv(csv);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::NonNumericCell);
    const std::string what = e.what();
    EXPECT_NE(what.find("row 2"), std::string::npos);
    EXPECT_NE(what.find("gas"), std::string::npos);
  }
}

TEST(GridCsv, RejectsNonFiniteCells) {
  const std::string csv =
      "timestamp,total_demand,nuclear,hydro,wind,solar,biofuel,gas,net_imports,price\n"
      "2024-10-01T00:00:00-04:00,15000,9000,3000,2000,500,100,inf,-250,42.5\n";
  EXPECT_THROW(parse_grid_csv(csv), Error);
}

TEST(GridCsv, EmptySeriesRejected) {
  const std::string csv =
      "timestamp,total_demand,nuclear,hydro,wind,solar,biofuel,gas,net_imports,price\n";
  try {
    parse_grid_csv(csv);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::EmptySeries);
  }
}

TEST(GridCsv, NonHourlySpacingNamesOffendingTimestamp) {
  const std::string csv =
      "timestamp,total_demand,nuclear,hydro,wind,solar,biofuel,gas,net_imports,price\n"
      "2024-10-01T00:00:00-04:00,15000,9000,3000,2000,500,100,1200,-250,42.5\n"
      "2024-10-01T02:00:00-04:00,14000,9000,2800,2100,0,100,900,150,39.1\n";
  try {
    parse_grid_csv(csv);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::NonHourlySpacing);
    EXPECT_NE(std::string(e.what()).find("2024-10-01T02:00:00-04:00"), std::string::npos);
  }
}

TEST(GridCsv, HourlyAcrossOffsetChangeIsAccepted) {
  // 01:30-04:00 to 01:30-05:00 is one real hour (fall-back changeover).
  const std::string csv =
      "timestamp,total_demand,nuclear,hydro,wind,solar,biofuel,gas,net_imports,price\n"
      "2024-11-03T01:30:00-04:00,15000,9000,3000,2000,500,100,1200,-250,42.5\n"
      "2024-11-03T01:30:00-05:00,14000,9000,2800,2100,0,100,900,150,39.1\n";
  EXPECT_EQ(parse_grid_csv(csv).size(), 2u);
}

TEST(GridCsv, NegativeGenerationRejected) {
  const std::string csv =
      "timestamp,total_demand,nuclear,hydro,wind,solar,biofuel,gas,net_imports,price\n"
      "2024-10-01T00:00:00-04:00,15000,9000,3000,-2000,500,100,1200,-250,42.5\n";
  try {
    parse_grid_csv(csv);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::InvalidValue);
  }
}

TEST(GridCsv, SerializeParseRoundTripIsExact) {
  std::mt19937_64 rng(77);
  std::uniform_real_distribution<double> u(0.0, 30000.0);
  std::uniform_real_distribution<double> signed_u(-5000.0, 5000.0);
  GridSeries series;
  Timestamp t0 = parse_timestamp("2024-03-01T00:00:00+01:00");
  for (int i = 0; i < 500; ++i) {
    HourlyGridRecord rec;
    rec.timestamp = t0;
    rec.timestamp.epoch_seconds += static_cast<int64_t>(i) * 3600;
    // Awkward decimals on purpose: the writer must emit shortest round-trip forms.
    rec.total_demand = u(rng) / 3.0;
    for (auto& g : rec.gen) g = u(rng) / 7.0;
    rec.net_imports = signed_u(rng) / 11.0;
    rec.price = signed_u(rng) / 13.0;
    series.records.push_back(rec);
  }
  const GridSeries reparsed = parse_grid_csv(grid_csv_string(series));
  EXPECT_TRUE(reparsed == series);
}

TEST(GridCsv, FileRoundTrip) {
  GridSeries series;
  series.records.push_back(make_record(0));
  series.records.push_back(make_record(1));
  const std::string path = ::testing::TempDir() + "/grid_roundtrip.csv";
  write_grid_csv_file(series, path);
  EXPECT_TRUE(parse_grid_csv_file(path) == series);
}

}  // namespace
