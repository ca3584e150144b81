#pragma once

// Command-line front end. Five subcommands wire the library stages together:
//
//   synth     generate a synthetic hourly grid series CSV
//   fit       estimate the segment intensity table from a series
//   dispatch  solve one operating mode and settle the schedule
//   cases     run all three modes on shared inputs and compare them
//   sweep     grid of solves over capacity and carbon price
//
// Every file a command writes is re-read and schema-checked before the
// process exits, so a zero exit code means the outputs on disk parse back.
// Exit codes: 0 success, 2 configuration error, 3 data error, 4 solver
// error.

#include <cstdint>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "essmei/accounting.hpp"
#include "essmei/config.hpp"
#include "essmei/dispatch.hpp"
#include "essmei/errors.hpp"
#include "essmei/grid.hpp"
#include "essmei/harness.hpp"
#include "essmei/json_io.hpp"
#include "essmei/mei.hpp"
#include "essmei/synth.hpp"
#include "essmei/text.hpp"

namespace essmei {

inline int exit_code_for(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::ConfigError:
    case ErrorKind::InvalidParams:
      return 2;
    case ErrorKind::Infeasible:
    case ErrorKind::BudgetExceeded:
    case ErrorKind::SolverFailure:
      return 4;
    default:
      return 3;
  }
}

struct CliOptions {
  std::string config_path;
  std::string out_dir;  // overrides the config when non-empty
  std::string shares_file;
  std::uint64_t seed = 0;
  bool seed_set = false;
};

namespace cli_detail {

inline RunConfig effective_config(const CliOptions& opts) {
  RunConfig cfg;
  if (!opts.config_path.empty()) cfg = load_run_config(opts.config_path);
  if (!opts.out_dir.empty()) cfg.out_dir = opts.out_dir;
  if (opts.seed_set) cfg.synth.seed = opts.seed;
  return cfg;
}

inline std::filesystem::path ensure_out_dir(const RunConfig& cfg) {
  std::filesystem::path dir(cfg.out_dir);
  std::error_code ec;
  std::filesystem::create_directories(dir, ec);
  if (ec) {
    raise(ErrorKind::ConfigError,
          "cannot create output directory '" + cfg.out_dir + "': " + ec.message());
  }
  return dir;
}

inline GridSeries load_series(const RunConfig& cfg) {
  if (cfg.use_synth) return synth_generate(cfg.synth);
  if (cfg.input_path.empty()) {
    raise(ErrorKind::ConfigError,
          "no data source: the config must set exactly one of 'input' or 'synth'");
  }
  return parse_grid_csv_file(cfg.input_path);
}

struct TableSource {
  MeiTable table;
  SupplyShareTable shares;
  bool fitted = false;  // true when the cubics were fitted here
  CubicFit gas_fit, hydro_fit, imports_fit;
};

// Either fits the regression pipeline on the series or, when a shares file
// is given, converts published supply shares straight into a table.
inline TableSource make_table(const RunConfig& cfg, const GridSeries* series,
                              const std::string& shares_file) {
  TableSource src;
  if (!shares_file.empty()) {
    load_json_file(shares_file).get_to(src.shares);
    src.table = mei_table(src.shares, cfg.factors, cfg.import_policy);
    return src;
  }
  MeiOptions opt;
  opt.non_dispatchable = cfg.non_dispatchable;
  opt.segmentation = cfg.segmentation;
  opt.factors = cfg.factors;
  opt.import_policy = cfg.import_policy;
  opt.method = cfg.share_method;
  MeiEstimate est = estimate_mei(*series, opt);
  src.table = est.table;
  src.shares = est.shares;
  src.fitted = true;
  src.gas_fit = est.gas_fit;
  src.hydro_fit = est.hydro_fit;
  src.imports_fit = est.imports_fit;
  return src;
}

inline void write_text_file(const std::filesystem::path& path, const std::string& content) {
  std::ofstream out(path);
  if (!out) raise(ErrorKind::IoError, "cannot open '" + path.string() + "' for writing");
  out << content;
  if (!out.good()) raise(ErrorKind::IoError, "write failed for '" + path.string() + "'");
}

inline std::string read_text_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) raise(ErrorKind::IoError, "cannot open '" + path.string() + "' for reading");
  std::string content((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
  return content;
}

inline double mode_epsilon(const RunConfig& cfg, const PriceSignals& signals) {
  if (cfg.mode == CaseMode::CarbonOnly) {
    return detail::carbon_scaled_epsilon(cfg.tie_break_epsilon, signals.carbon_price);
  }
  return cfg.tie_break_epsilon;
}

inline std::string signals_csv_string(const PriceSignals& sig) {
  std::string out =
      "hour,grid_price,carbon_price,intensity,effective_electricity_only,"
      "effective_carbon_only,effective_combined\n";
  std::vector<double> elec = effective_price(sig, CaseMode::ElectricityOnly);
  std::vector<double> carbon = effective_price(sig, CaseMode::CarbonOnly);
  std::vector<double> combined = effective_price(sig, CaseMode::Combined);
  for (std::size_t t = 0; t < sig.grid_price.size(); ++t) {
    out += std::to_string(t);
    for (double v : {sig.grid_price[t], sig.carbon_price[t], sig.intensity[t], elec[t],
                     carbon[t], combined[t]}) {
      out += ',';
      out += format_double(v);
    }
    out += '\n';
  }
  return out;
}

inline void check_signals_csv(const std::string& text, std::size_t horizon) {
  std::istringstream in(text);
  std::string line;
  if (!std::getline(in, line) ||
      trim(line) !=
          "hour,grid_price,carbon_price,intensity,effective_electricity_only,"
          "effective_carbon_only,effective_combined") {
    raise(ErrorKind::MissingColumn, "signals CSV header mismatch");
  }
  std::size_t rows = 0;
  while (std::getline(in, line)) {
    if (trim(line).empty()) continue;
    auto fields = split_csv_line(line);
    if (fields.size() != 7) {
      raise(ErrorKind::InvalidValue, "signals CSV row has " + std::to_string(fields.size()) +
                                         " fields, expected 7");
    }
    double v = 0.0;
    for (const auto& f : fields) {
      if (!parse_double(trim(f), v)) {
        raise(ErrorKind::NonNumericCell, "signals CSV contains a non-numeric field");
      }
    }
    ++rows;
  }
  if (rows != horizon) {
    raise(ErrorKind::InvalidValue, "signals CSV has " + std::to_string(rows) +
                                       " rows, expected " + std::to_string(horizon));
  }
}

inline int cmd_synth(const CliOptions& opts) {
  RunConfig cfg = effective_config(opts);
  auto dir = ensure_out_dir(cfg);
  GridSeries series = synth_generate(cfg.synth);
  const auto path = dir / "grid.csv";
  write_grid_csv_file(series, path.string());

  GridSeries parsed = parse_grid_csv_file(path.string());
  if (parsed.size() != series.size() || !(parsed.records.front() == series.records.front()) ||
      !(parsed.records.back() == series.records.back())) {
    raise(ErrorKind::IoError, "re-parse of '" + path.string() + "' does not match");
  }
  std::cout << "wrote " << path.string() << " (" << series.size() << " hourly records, seed "
            << cfg.synth.seed << ")\n";
  return 0;
}

inline int cmd_fit(const CliOptions& opts) {
  RunConfig cfg = effective_config(opts);
  auto dir = ensure_out_dir(cfg);

  GridSeries series;
  const GridSeries* series_ptr = nullptr;
  if (opts.shares_file.empty()) {
    series = load_series(cfg);
    series_ptr = &series;
  }
  TableSource src = make_table(cfg, series_ptr, opts.shares_file);

  const auto table_path = dir / "mei_table.json";
  write_json_file(json(src.table), table_path.string());

  json diag{{"shares", src.shares}};
  if (src.fitted) {
    diag["fits"] = json{{"gas", src.gas_fit},
                        {"hydro", src.hydro_fit},
                        {"imports", src.imports_fit}};
  }
  const auto diag_path = dir / "fit_diagnostics.json";
  write_json_file(diag, diag_path.string());

  MeiTable table_back;
  load_json_file(table_path.string()).get_to(table_back);
  if (!(table_back == src.table)) {
    raise(ErrorKind::IoError, "re-parse of '" + table_path.string() + "' does not match");
  }
  SupplyShareTable shares_back;
  json diag_back = load_json_file(diag_path.string());
  diag_back.at("shares").get_to(shares_back);
  if (src.fitted) {
    CubicFit fit_back;
    diag_back.at("fits").at("gas").get_to(fit_back);
  }

  std::cout << "wrote " << table_path.string() << " (" << src.table.mei.size()
            << " segments)\n";
  if (src.fitted) {
    std::cout << "fit R^2: gas " << format_double(src.gas_fit.r_squared) << ", hydro "
              << format_double(src.hydro_fit.r_squared) << ", imports "
              << format_double(src.imports_fit.r_squared) << "\n";
  }
  return 0;
}

inline int cmd_dispatch(const CliOptions& opts) {
  RunConfig cfg = effective_config(opts);
  validate(cfg.ess);
  auto dir = ensure_out_dir(cfg);
  GridSeries series = load_series(cfg);
  TableSource src = make_table(cfg, &series, opts.shares_file);

  PriceSignals signals =
      build_signals(series, src.table, cfg.carbon_price, cfg.non_dispatchable);
  std::vector<double> price = effective_price(signals, cfg.mode);
  const double eps = mode_epsilon(cfg, signals);

  DispatchSchedule schedule;
  if (cfg.rolling.window > 0) {
    schedule = rolling_horizon(cfg.ess, price, cfg.rolling.window, cfg.rolling.step, eps);
  } else {
    schedule = solve_dispatch(cfg.ess, price, eps);
  }
  OperationReport report = evaluate(cfg.ess, signals, schedule);

  const auto sched_path = dir / "schedule.csv";
  const auto report_path = dir / "report.json";
  const auto signals_path = dir / "signals.csv";
  write_text_file(sched_path, schedule_csv_string(schedule));
  write_json_file(json(report), report_path.string());
  write_text_file(signals_path, signals_csv_string(signals));

  DispatchSchedule sched_back = parse_schedule_csv(read_text_file(sched_path));
  if (sched_back.grid_mw != schedule.grid_mw) {
    raise(ErrorKind::IoError, "re-parse of '" + sched_path.string() + "' does not match");
  }
  OperationReport report_back;
  load_json_file(report_path.string()).get_to(report_back);
  check_signals_csv(read_text_file(signals_path), signals.grid_price.size());

  std::cout << "mode " << case_mode_name(cfg.mode) << ": objective "
            << format_double(schedule.objective) << ", total revenue "
            << format_double(report.total_revenue) << ", emission reduction "
            << format_double(report.emission_reduction) << " tCO2\n";
  std::cout << "wrote " << sched_path.string() << ", " << report_path.string() << ", "
            << signals_path.string() << "\n";
  return 0;
}

inline int cmd_cases(const CliOptions& opts) {
  RunConfig cfg = effective_config(opts);
  validate(cfg.ess);
  auto dir = ensure_out_dir(cfg);
  GridSeries series = load_series(cfg);
  TableSource src = make_table(cfg, &series, opts.shares_file);

  PriceSignals signals =
      build_signals(series, src.table, cfg.carbon_price, cfg.non_dispatchable);
  CaseStudyResult study = run_cases(cfg.ess, signals, cfg.tie_break_epsilon);
  auto normalized = normalized_performance(study);

  json bundle;
  bundle["dominance_ok"] = study.dominance_ok;
  bundle["dominance_note"] = study.dominance_note;
  json case_rows = json::array();
  for (std::size_t i = 0; i < study.cases.size(); ++i) {
    case_rows.push_back(
        json{{"mode", std::string(case_mode_name(study.cases[i].mode))},
             {"report", study.cases[i].report},
             {"normalized", json{{"revenue", normalized[i].revenue},
                                 {"emission_reduction", normalized[i].emission_reduction},
                                 {"lifetime", normalized[i].lifetime}}}});
  }
  bundle["cases"] = case_rows;

  const auto bundle_path = dir / "cases.json";
  write_json_file(bundle, bundle_path.string());
  const auto signals_path = dir / "signals.csv";
  write_text_file(signals_path, signals_csv_string(signals));
  std::vector<std::filesystem::path> sched_paths;
  for (std::size_t i = 0; i < study.cases.size(); ++i) {
    auto path = dir / ("schedule_case" + std::to_string(i + 1) + ".csv");
    write_text_file(path, schedule_csv_string(study.cases[i].schedule));
    sched_paths.push_back(path);
  }

  json bundle_back = load_json_file(bundle_path.string());
  if (bundle_back.at("cases").size() != 3) {
    raise(ErrorKind::IoError, "re-parse of '" + bundle_path.string() + "' does not match");
  }
  for (std::size_t i = 0; i < sched_paths.size(); ++i) {
    DispatchSchedule back = parse_schedule_csv(read_text_file(sched_paths[i]));
    if (back.grid_mw != study.cases[i].schedule.grid_mw) {
      raise(ErrorKind::IoError,
            "re-parse of '" + sched_paths[i].string() + "' does not match");
    }
    OperationReport report_back;
    bundle_back.at("cases").at(i).at("report").get_to(report_back);
  }
  check_signals_csv(read_text_file(signals_path), signals.grid_price.size());

  for (std::size_t i = 0; i < study.cases.size(); ++i) {
    const OperationReport& r = study.cases[i].report;
    std::cout << "case " << case_mode_name(study.cases[i].mode) << ": total revenue "
              << format_double(r.total_revenue) << ", emission reduction "
              << format_double(r.emission_reduction) << " tCO2, remaining lifetime "
              << format_double(r.remaining_lifetime) << "\n";
  }
  if (study.dominance_ok) {
    std::cout << "dominance chain holds\n";
  } else {
    std::cerr << "dominance chain violated: " << study.dominance_note << "\n";
  }
  std::cout << "wrote " << bundle_path.string() << " and per-case schedule CSVs\n";
  return 0;
}

inline int cmd_sweep(const CliOptions& opts) {
  RunConfig cfg = effective_config(opts);
  validate(cfg.ess);
  if (cfg.mode != CaseMode::CarbonOnly && cfg.mode != CaseMode::Combined) {
    raise(ErrorKind::InvalidParams, "sweep mode must be carbon_only or combined");
  }
  auto dir = ensure_out_dir(cfg);
  GridSeries series = load_series(cfg);
  TableSource src = make_table(cfg, &series, opts.shares_file);

  SweepGrid grid = sensitivity_sweep(series, src.table, cfg.ess, cfg.sweep_capacities,
                                     cfg.sweep_carbon_prices, cfg.mode, cfg.sweep_c_rate,
                                     cfg.tie_break_epsilon, cfg.non_dispatchable);

  const auto path = dir / "sweep.csv";
  write_text_file(path, sweep_csv_string(grid));

  std::vector<SweepCell> back = parse_sweep_csv(read_text_file(path));
  if (back.size() != grid.cells.size()) {
    raise(ErrorKind::IoError, "re-parse of '" + path.string() + "' does not match");
  }

  std::cout << "wrote " << path.string() << " (" << grid.cells.size() << " cells, mode "
            << case_mode_name(grid.mode) << ")\n";
  return 0;
}

}  // namespace cli_detail

inline int run_cli(int argc, const char* const* argv) {
  CLI::App app{"battery storage dispatch against marginal grid emission intensity"};
  app.require_subcommand(1);

  CliOptions opts;
  auto add_common = [&opts](CLI::App* sub, bool wants_shares) {
    sub->add_option("--config", opts.config_path, "run configuration JSON file");
    sub->add_option("--out", opts.out_dir, "output directory (overrides the config)");
    sub->add_option("--seed", opts.seed, "synthetic-data seed (overrides the config)");
    if (wants_shares) {
      sub->add_option("--shares-file", opts.shares_file,
                      "supply share table JSON; skips the regression stage");
    }
  };
  add_common(app.add_subcommand("synth", "generate a synthetic hourly grid series"), false);
  add_common(app.add_subcommand("fit", "estimate the segment intensity table"), true);
  add_common(app.add_subcommand("dispatch", "solve one operating mode and settle it"), true);
  add_common(app.add_subcommand("cases", "run and compare all three operating modes"), true);
  add_common(app.add_subcommand("sweep", "sweep capacity against carbon price"), true);

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 2;
  }

  const CLI::App* sub = app.get_subcommands().front();
  opts.seed_set = sub->count("--seed") > 0;

  try {
    const std::string name = sub->get_name();
    if (name == "synth") return cli_detail::cmd_synth(opts);
    if (name == "fit") return cli_detail::cmd_fit(opts);
    if (name == "dispatch") return cli_detail::cmd_dispatch(opts);
    if (name == "cases") return cli_detail::cmd_cases(opts);
    return cli_detail::cmd_sweep(opts);
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return exit_code_for(e.kind());
  } catch (const std::exception& e) {
    std::cerr << "unexpected error: " << e.what() << "\n";
    return 1;
  }
}

}  // namespace essmei
