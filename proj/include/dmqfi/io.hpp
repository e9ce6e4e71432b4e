#pragma once

#include <iosfwd>
#include <string>

#include <json.hpp>

#include "dmqfi/sweep.hpp"

namespace dmqfi {

/// 17 significant digits; re-parsing yields the same double.
std::string format_number(double x);

/// Header "<axis1>,<axis2>,qfi,c_max,useful" (axis columns named by their
/// parameter), then one LF-terminated row per cell; useful is 0 or 1.
void write_csv(const SweepTable& table, std::ostream& out);

/// {"metadata": {...}, "rows": [{"<axis1>": .., "<axis2>": .., "qfi": ..,
///  "c_max": .., "useful": bool}, ...]}
nlohmann::ordered_json to_json(const SweepTable& table);
nlohmann::ordered_json to_json(const ModelParams& params);
nlohmann::ordered_json to_json(const AxisSpec& axis);

}  // namespace dmqfi
