#pragma once

// Shared reference fixture: published supply-share table for the 15 residual
// demand segments (gas, hydro, imports) and the intensity column derived from
// it with factors gas=0.37, imports=0.44, hydro=0 and imports counted in
// segments 14 and 15 only.

#include <array>

#include "essmei/mei.hpp"

namespace fixtures {

struct ShareRow {
  double gas, hydro, imports, mei;
};

inline constexpr std::array<ShareRow, 15> kReferenceTable = {{
    {-0.144, 0.500, 0.677, -0.053},
    {0.054, 0.437, 0.531, 0.020},
    {0.236, 0.377, 0.400, 0.087},
    {0.407, 0.318, 0.280, 0.151},
    {0.540, 0.267, 0.190, 0.200},
    {0.637, 0.224, 0.131, 0.236},
    {0.698, 0.189, 0.101, 0.258},
    {0.726, 0.163, 0.098, 0.269},
    {0.718, 0.144, 0.125, 0.266},
    {0.677, 0.133, 0.179, 0.250},
    {0.599, 0.129, 0.265, 0.222},
    {0.485, 0.134, 0.379, 0.179},
    {0.344, 0.146, 0.515, 0.127},
    {0.178, 0.164, 0.671, 0.361},
    {-0.049, 0.194, 0.880, 0.369},
}};

// Builds the share table with segment-mean net imports chosen positive only in
// the two import-marginal segments, so the sign-based and explicit import
// policies agree on this fixture.
inline essmei::SupplyShareTable make_reference_share_table() {
  essmei::SupplyShareTable table;
  table.config = essmei::SegmentationConfig{};
  table.segments.resize(15);
  for (int s = 0; s < 15; ++s) {
    auto& seg = table.segments[s];
    seg.gas = kReferenceTable[s].gas;
    seg.hydro = kReferenceTable[s].hydro;
    seg.imports = kReferenceTable[s].imports;
    seg.total = seg.gas + seg.hydro + seg.imports;
    seg.mean_net_imports = s >= 13 ? 500.0 : -200.0;
    seg.sample_count = 100;
  }
  return table;
}

}  // namespace fixtures
