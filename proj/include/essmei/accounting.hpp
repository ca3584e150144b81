#pragma once

// Revenue, abatement and wear accounting for a dispatched schedule.
//
// Emission reduction counts avoided grid emissions: exporting p MW for an
// hour in a segment with intensity rho displaces rho*p tons, importing adds
// them. Certified abatement (epc_quantity) is the horizon total floored at
// zero, valued at the mean carbon price over the horizon. Battery wear uses
// the discharge-throughput convention for full equivalent cycles, so the
// remaining-lifetime figure can go negative when a schedule overshoots the
// rated cycle count; it is reported as computed, not clamped.

#include <cstddef>
#include <string>
#include <vector>

#include "essmei/dispatch.hpp"
#include "essmei/errors.hpp"

namespace essmei {

struct OperationReport {
  double elec_revenue = 0.0;        // $
  double carbon_revenue = 0.0;      // $
  double total_revenue = 0.0;       // $
  double emission_reduction = 0.0;  // tCO2, signed
  double epc_quantity = 0.0;        // tCO2 eligible for certification
  double epc_value = 0.0;           // $
  double fec = 0.0;                 // full equivalent cycles consumed
  double remaining_lifetime = 0.0;  // fraction of rated cycle life left
};

inline OperationReport evaluate(const EssParams& params, const PriceSignals& signals,
                                const DispatchSchedule& schedule) {
  validate(params);
  validate(signals);
  if (schedule.horizon() != signals.grid_price.size()) {
    raise(ErrorKind::LengthMismatch,
          "schedule covers " + std::to_string(schedule.horizon()) + " hours but signals cover " +
              std::to_string(signals.grid_price.size()));
  }

  OperationReport rep;
  double discharged_mwh = 0.0;
  double carbon_price_sum = 0.0;
  for (std::size_t t = 0; t < schedule.horizon(); ++t) {
    const double g = schedule.grid_mw[t];
    rep.elec_revenue += signals.grid_price[t] * g;
    rep.carbon_revenue += signals.carbon_price[t] * signals.intensity[t] * g;
    rep.emission_reduction += signals.intensity[t] * g;
    discharged_mwh += schedule.discharge_mw[t];
    carbon_price_sum += signals.carbon_price[t];
  }
  rep.total_revenue = rep.elec_revenue + rep.carbon_revenue;
  rep.epc_quantity = rep.emission_reduction > 0.0 ? rep.emission_reduction : 0.0;
  rep.epc_value =
      rep.epc_quantity * (carbon_price_sum / static_cast<double>(schedule.horizon()));
  rep.fec = discharged_mwh / params.energy_capacity_mwh;
  rep.remaining_lifetime = 1.0 - rep.fec / params.cycle_life_efc;
  return rep;
}

}  // namespace essmei
