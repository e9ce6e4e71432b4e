#include "dmqfi/io.hpp"

#include <cstdio>
#include <ostream>

namespace dmqfi {

std::string format_number(double x) {
  char buffer[32];
  std::snprintf(buffer, sizeof buffer, "%.17g", x);
  return buffer;
}

void write_csv(const SweepTable& table, std::ostream& out) {
  out << to_string(table.spec.axis1.param) << ',' << to_string(table.spec.axis2.param) << ",qfi,c_max,useful\n";
  for (const SweepRow& row : table.rows) {
    out << format_number(row.axis1) << ',' << format_number(row.axis2) << ',' << format_number(row.qfi) << ','
        << format_number(row.c_max) << ',' << (row.useful ? '1' : '0') << '\n';
  }
}

nlohmann::ordered_json to_json(const ModelParams& params) {
  return {{"J", params.J}, {"B", params.B}, {"b", params.b}, {"D", params.D}, {"T", params.T}, {"N", params.N}};
}

nlohmann::ordered_json to_json(const AxisSpec& axis) {
  return {{"param", to_string(axis.param)}, {"min", axis.min}, {"max", axis.max}, {"count", axis.count}};
}

nlohmann::ordered_json to_json(const SweepTable& table) {
  const SweepSpec& spec = table.spec;
  nlohmann::ordered_json fixed = to_json(spec.fixed);
  fixed.erase(to_string(spec.axis1.param));
  fixed.erase(to_string(spec.axis2.param));

  nlohmann::ordered_json doc;
  doc["metadata"] = {{"label", spec.label},
                     {"version", table.version},
                     {"axis1", to_json(spec.axis1)},
                     {"axis2", to_json(spec.axis2)},
                     {"fixed", fixed},
                     {"row_count", table.rows.size()}};
  nlohmann::ordered_json rows = nlohmann::ordered_json::array();
  const std::string a1 = to_string(spec.axis1.param), a2 = to_string(spec.axis2.param);
  for (const SweepRow& row : table.rows)
    rows.push_back({{a1, row.axis1}, {a2, row.axis2}, {"qfi", row.qfi}, {"c_max", row.c_max}, {"useful", row.useful}});
  doc["rows"] = std::move(rows);
  return doc;
}

}  // namespace dmqfi
