#pragma once

// Profit-optimal storage dispatch against an hourly price signal.
//
// The problem: choose hourly charge/discharge power within rating limits so
// that revenue sum_t c_t * (p_dis - p_ch) is maximal while the state of
// charge, driven by soc_{t+1} = soc_t + eta_ch*p_ch/E - p_dis/(eta_dis*E),
// stays in [0, 1]. A tiny throughput penalty epsilon is added to the search
// objective to break ties toward the laziest schedule; it is excluded from
// the reported objective.
//
// This linear program is solved exactly as a min-cost flow: one node per
// hour plus a ground node, charge/discharge arcs between each hour and
// ground (costs carry the price), unit-capacity carry arcs linking
// consecutive hours (their flow is the state of charge), and a terminal arc
// implementing the end-of-horizon policy. The all-idle schedule provides a
// feasible initial spanning tree (the carry chain), so no artificial
// variables are needed. Flow conservation is the SoC recursion, hence the
// flow optimum is the dispatch optimum, and the solver's primal/dual
// certificate applies verbatim.
//
// Hours are uniform with dt = 1 h, so MW and MWh per hour coincide.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <string>
#include <vector>

#include "essmei/errors.hpp"
#include "essmei/network_simplex.hpp"

namespace essmei {

enum class TerminalPolicy { Free, AtLeastInitial };

enum class CaseMode { ElectricityOnly, CarbonOnly, Combined };

inline const char* case_mode_name(CaseMode m) {
  switch (m) {
    case CaseMode::ElectricityOnly: return "electricity_only";
    case CaseMode::CarbonOnly: return "carbon_only";
    case CaseMode::Combined: return "combined";
  }
  return "unknown";
}

struct EssParams {
  double energy_capacity_mwh = 1.0;    // E
  double charge_limit_mw = 1.0;        // max charging power
  double discharge_limit_mw = 1.0;     // max discharging power
  double charge_efficiency = 0.92;     // eta_ch in (0, 1]
  double discharge_efficiency = 0.92;  // eta_dis in (0, 1]
  double initial_soc = 0.0;            // fraction of E
  double cycle_life_efc = 3000.0;      // rated equivalent full cycles
  TerminalPolicy terminal_policy = TerminalPolicy::Free;
};

inline void validate(const EssParams& p) {
  const bool ok = p.energy_capacity_mwh > 0.0 && std::isfinite(p.energy_capacity_mwh) &&
                  p.charge_limit_mw >= 0.0 && std::isfinite(p.charge_limit_mw) &&
                  p.discharge_limit_mw >= 0.0 && std::isfinite(p.discharge_limit_mw) &&
                  p.charge_efficiency > 0.0 && p.charge_efficiency <= 1.0 &&
                  p.discharge_efficiency > 0.0 && p.discharge_efficiency <= 1.0 &&
                  p.initial_soc >= 0.0 && p.initial_soc <= 1.0 && p.cycle_life_efc > 0.0;
  if (!ok) {
    raise(ErrorKind::InvalidParams,
          "storage parameters need E > 0, power limits >= 0, efficiencies in (0, 1], "
          "initial SoC in [0, 1] and a positive cycle life");
  }
}

struct PriceSignals {
  std::vector<double> grid_price;    // $/MWh
  std::vector<double> carbon_price;  // $/tCO2
  std::vector<double> intensity;     // tCO2/MWh
};

inline void validate(const PriceSignals& s) {
  if (s.grid_price.empty()) raise(ErrorKind::EmptySeries, "price signals are empty");
  if (s.carbon_price.size() != s.grid_price.size() ||
      s.intensity.size() != s.grid_price.size()) {
    raise(ErrorKind::LengthMismatch,
          "price signal lengths differ: grid " + std::to_string(s.grid_price.size()) +
              ", carbon " + std::to_string(s.carbon_price.size()) + ", intensity " +
              std::to_string(s.intensity.size()));
  }
}

// Per-hour price the storage actually optimizes against in each case.
inline std::vector<double> effective_price(const PriceSignals& s, CaseMode mode) {
  validate(s);
  std::vector<double> out(s.grid_price.size());
  for (std::size_t t = 0; t < out.size(); ++t) {
    switch (mode) {
      case CaseMode::ElectricityOnly:
        out[t] = s.grid_price[t];
        break;
      case CaseMode::CarbonOnly:
        out[t] = s.carbon_price[t] * s.intensity[t];
        break;
      case CaseMode::Combined:
        out[t] = s.grid_price[t] + s.carbon_price[t] * s.intensity[t];
        break;
    }
  }
  return out;
}

struct DispatchSchedule {
  std::vector<double> charge_mw;
  std::vector<double> discharge_mw;
  std::vector<double> grid_mw;  // discharge - charge, positive = exporting
  std::vector<double> soc;      // state of charge after each hour
  double objective = 0.0;       // sum of price * grid_mw, tie-break free

  std::size_t horizon() const { return grid_mw.size(); }
};

namespace detail {

inline void check_price_vector(const std::vector<double>& price) {
  if (price.empty()) raise(ErrorKind::EmptySeries, "dispatch horizon is empty");
  for (double c : price) {
    if (!std::isfinite(c)) raise(ErrorKind::InvalidValue, "price signal contains a non-finite value");
  }
}

}  // namespace detail

// Globally optimal schedule for one effective price vector.
inline DispatchSchedule solve_dispatch(const EssParams& params, const std::vector<double>& price,
                                       double tie_break_epsilon = 1e-6) {
  validate(params);
  detail::check_price_vector(price);
  if (!(tie_break_epsilon >= 0.0) || !std::isfinite(tie_break_epsilon)) {
    raise(ErrorKind::InvalidParams, "tie-break epsilon must be non-negative and finite");
  }

  const int horizon = static_cast<int>(price.size());
  const int ground = horizon;
  const double energy = params.energy_capacity_mwh;
  const double eta_c = params.charge_efficiency;
  const double eta_d = params.discharge_efficiency;

  NetworkSimplex flow(horizon + 1);
  flow.add_supply(0, params.initial_soc);
  flow.add_supply(ground, -params.initial_soc);

  // Arc capacities and costs are in SoC units: charging p MW for an hour
  // deposits eta_c*p/E, discharging p MW withdraws p/(eta_d*E).
  std::vector<int> charge_arc(horizon), discharge_arc(horizon);
  for (int t = 0; t < horizon; ++t) {
    charge_arc[t] = flow.add_arc(ground, t, 0.0, eta_c * params.charge_limit_mw / energy,
                                 (price[t] + tie_break_epsilon) * energy / eta_c);
    discharge_arc[t] = flow.add_arc(t, ground, 0.0, params.discharge_limit_mw / (eta_d * energy),
                                    -(price[t] - tie_break_epsilon) * eta_d * energy);
  }
  std::vector<int> tree;
  tree.reserve(horizon);
  for (int t = 0; t + 1 < horizon; ++t) {
    tree.push_back(flow.add_arc(t, t + 1, 0.0, 1.0, 0.0));
  }
  const double terminal_floor =
      params.terminal_policy == TerminalPolicy::AtLeastInitial ? params.initial_soc : 0.0;
  tree.push_back(flow.add_arc(horizon - 1, ground, terminal_floor, 1.0, 0.0));

  flow.solve(tree);
  const auto cert = flow.verify();
  if (!cert.ok(1e-7 * (1.0 + energy))) {
    raise(ErrorKind::SolverFailure, "optimality certificate failed after dispatch solve");
  }

  DispatchSchedule sched;
  sched.charge_mw.resize(horizon);
  sched.discharge_mw.resize(horizon);
  sched.grid_mw.resize(horizon);
  sched.soc.resize(horizon);
  double soc = params.initial_soc;
  for (int t = 0; t < horizon; ++t) {
    const double p_ch = flow.flow(charge_arc[t]) * energy / eta_c;
    const double p_dis = flow.flow(discharge_arc[t]) * eta_d * energy;
    sched.charge_mw[t] = p_ch;
    sched.discharge_mw[t] = p_dis;
    sched.grid_mw[t] = p_dis - p_ch;
    soc += eta_c * p_ch / energy - p_dis / (eta_d * energy);
    sched.soc[t] = soc;
    sched.objective += price[t] * sched.grid_mw[t];
  }
  return sched;
}

// Receding-horizon variant: optimize `window` hours, commit `step`, carry the
// resulting state forward. The terminal policy applies to each window
// relative to that window's own starting state, which keeps every
// subproblem trivially feasible (the idle schedule satisfies it). A window
// covering the whole horizon is solved once, making the result exactly the
// one-shot solve.
inline DispatchSchedule rolling_horizon(const EssParams& params, const std::vector<double>& price,
                                        std::size_t window, std::size_t step = 1,
                                        double tie_break_epsilon = 1e-6) {
  validate(params);
  detail::check_price_vector(price);
  if (window < 1 || step < 1 || step > window) {
    raise(ErrorKind::InvalidParams, "rolling horizon needs 1 <= step <= window");
  }
  const std::size_t total = price.size();
  if (window >= total) return solve_dispatch(params, price, tie_break_epsilon);

  DispatchSchedule out;
  out.charge_mw.reserve(total);
  out.discharge_mw.reserve(total);
  out.grid_mw.reserve(total);
  out.soc.reserve(total);

  double running_soc = params.initial_soc;
  std::size_t t0 = 0;
  while (t0 < total) {
    const std::size_t w = std::min(window, total - t0);
    EssParams local = params;
    local.initial_soc = running_soc;
    const std::vector<double> slice(price.begin() + t0, price.begin() + t0 + w);
    const DispatchSchedule part = solve_dispatch(local, slice, tie_break_epsilon);
    const std::size_t commit = std::min(step, w);
    for (std::size_t i = 0; i < commit; ++i) {
      out.charge_mw.push_back(part.charge_mw[i]);
      out.discharge_mw.push_back(part.discharge_mw[i]);
      out.grid_mw.push_back(part.grid_mw[i]);
      out.soc.push_back(part.soc[i]);
      out.objective += price[t0 + i] * part.grid_mw[i];
    }
    running_soc = part.soc[commit - 1];
    t0 += commit;
  }
  return out;
}

}  // namespace essmei
