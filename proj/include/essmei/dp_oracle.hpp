#pragma once

// Discretized dynamic-programming reference for the dispatch problem.
//
// This is an intentionally independent second route to the same optimum: a
// backward value iteration over a uniform SoC grid and a uniform action grid,
// with linear interpolation of the value function between SoC points. Because
// the exact (continuous) value function of the dispatch LP is concave in the
// state of charge, interpolating it between grid points can only
// under-estimate it, and the forward trace applies exactly feasible actions,
// so the reported objective is a true lower bound on the LP optimum. The gap
// closes as the grids are refined.
//
// Action set per state: the full charge x discharge product grid (both
// nonzero is allowed, which matters when prices go negative), plus two
// state-dependent boundary moves (charge exactly to full, discharge exactly
// to empty) that remove most of the discretization error at the SoC limits.

#include <algorithm>
#include <cmath>
#include <limits>
#include <vector>

#include "essmei/dispatch.hpp"
#include "essmei/errors.hpp"

namespace essmei {

struct DpOracleParams {
  int soc_steps = 200;        // SoC grid resolution (>= 10)
  int power_steps = 50;       // per-direction action resolution (>= 2)
  double tie_break_epsilon = 1e-6;
  double budget = 2.0e9;      // max transition evaluations before refusing
};

inline DispatchSchedule dp_oracle(const EssParams& params, const std::vector<double>& price,
                                  const DpOracleParams& opt = {}) {
  validate(params);
  detail::check_price_vector(price);
  if (opt.soc_steps < 10 || opt.power_steps < 2) {
    raise(ErrorKind::InvalidParams, "dp oracle needs soc_steps >= 10 and power_steps >= 2");
  }

  const std::size_t horizon = price.size();
  const int S = opt.soc_steps;
  const int P = opt.power_steps;
  const double work = static_cast<double>(horizon) * (S + 1) *
                      (static_cast<double>(P) + 2.0) * (static_cast<double>(P) + 2.0);
  if (work > opt.budget) {
    raise(ErrorKind::BudgetExceeded,
          "dp oracle would evaluate about " + std::to_string(work) +
              " transitions, over the budget of " + std::to_string(opt.budget));
  }

  const double energy = params.energy_capacity_mwh;
  const double eta_c = params.charge_efficiency;
  const double eta_d = params.discharge_efficiency;
  const double soc_tol = 1e-12;
  const double neg_inf = -std::numeric_limits<double>::infinity();

  // Grid actions and their SoC deltas are state independent.
  std::vector<double> act_ch(P + 1), act_dis(P + 1), d_ch(P + 1), d_dis(P + 1);
  for (int j = 0; j <= P; ++j) {
    act_ch[j] = params.charge_limit_mw * j / P;
    act_dis[j] = params.discharge_limit_mw * j / P;
    d_ch[j] = eta_c * act_ch[j] / energy;
    d_dis[j] = act_dis[j] / (eta_d * energy);
  }

  // Interpolated continuation value; -inf neighbors poison the estimate,
  // which keeps the bound conservative near infeasible terminal states.
  auto interp = [&](const std::vector<double>& v, double soc) -> double {
    const double pos = soc * S;
    int k = static_cast<int>(std::floor(pos));
    if (k < 0) k = 0;
    if (k >= S) k = S - 1;
    const double frac = pos - k;
    const double lo = v[k], hi = v[k + 1];
    if (lo == neg_inf || hi == neg_inf) {
      if (frac <= 1e-12) return lo;
      if (frac >= 1.0 - 1e-12) return hi;
      return neg_inf;
    }
    return lo + frac * (hi - lo);
  };

  // Best epsilon-augmented action value from exact state `soc` against the
  // continuation values `next`; optionally reports the chosen action.
  auto best_action = [&](double soc, double c, const std::vector<double>& next, double* out_ch,
                         double* out_dis) -> double {
    double best = neg_inf;
    double best_ch = 0.0, best_dis = 0.0;
    auto consider = [&](double p_ch, double p_dis) {
      const double soc_next = soc + eta_c * p_ch / energy - p_dis / (eta_d * energy);
      if (soc_next < -soc_tol || soc_next > 1.0 + soc_tol) return;
      const double clamped = std::min(std::max(soc_next, 0.0), 1.0);
      const double cont = interp(next, clamped);
      if (cont == neg_inf) return;
      const double val = c * (p_dis - p_ch) -
                         opt.tie_break_epsilon * (p_ch + p_dis) + cont;
      if (val > best) {
        best = val;
        best_ch = p_ch;
        best_dis = p_dis;
      }
    };
    // Boundary moves, exact within power limits.
    const double ch_to_full = (1.0 - soc) * energy / eta_c;
    const double dis_to_empty = soc * eta_d * energy;
    const bool have_full = ch_to_full <= params.charge_limit_mw + 1e-15;
    const bool have_empty = dis_to_empty <= params.discharge_limit_mw + 1e-15;
    for (int j = 0; j <= P; ++j) {
      for (int k = 0; k <= P; ++k) consider(act_ch[j], act_dis[k]);
      if (have_full) consider(ch_to_full, act_dis[j]);
      if (have_empty) consider(act_ch[j], dis_to_empty);
    }
    if (have_full && have_empty) consider(ch_to_full, dis_to_empty);
    if (out_ch) *out_ch = best_ch;
    if (out_dis) *out_dis = best_dis;
    return best;
  };

  // Terminal values.
  std::vector<std::vector<double>> value(horizon + 1, std::vector<double>(S + 1, 0.0));
  if (params.terminal_policy == TerminalPolicy::AtLeastInitial) {
    for (int k = 0; k <= S; ++k) {
      if (static_cast<double>(k) / S < params.initial_soc - 1e-9) value[horizon][k] = neg_inf;
    }
  }

  for (std::size_t t = horizon; t-- > 0;) {
    for (int k = 0; k <= S; ++k) {
      value[t][k] = best_action(static_cast<double>(k) / S, price[t], value[t + 1],
                                nullptr, nullptr);
    }
  }

  // Forward trace from the exact initial state.
  DispatchSchedule sched;
  sched.charge_mw.resize(horizon);
  sched.discharge_mw.resize(horizon);
  sched.grid_mw.resize(horizon);
  sched.soc.resize(horizon);
  double soc = params.initial_soc;
  for (std::size_t t = 0; t < horizon; ++t) {
    double p_ch = 0.0, p_dis = 0.0;
    const double val = best_action(soc, price[t], value[t + 1], &p_ch, &p_dis);
    if (val == neg_inf) {
      // Idle is always feasible; reaching this means the terminal floor is
      // unreachable from the current state under the discretization.
      p_ch = 0.0;
      p_dis = 0.0;
    }
    sched.charge_mw[t] = p_ch;
    sched.discharge_mw[t] = p_dis;
    sched.grid_mw[t] = p_dis - p_ch;
    soc += eta_c * p_ch / energy - p_dis / (eta_d * energy);
    soc = std::min(std::max(soc, 0.0), 1.0);
    sched.soc[t] = soc;
    sched.objective += price[t] * sched.grid_mw[t];
  }
  return sched;
}

}  // namespace essmei
