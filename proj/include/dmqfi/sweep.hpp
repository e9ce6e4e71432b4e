#pragma once

#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "dmqfi/qfi.hpp"

namespace dmqfi {

inline constexpr std::string_view kVersion = "1.0.0";

/// Sweepable model parameters. Names are case-sensitive: "B" is the
/// homogeneous field, "b" the inhomogeneous one.
enum class Param { T, B, b, D, J };

std::string to_string(Param p);
/// Throws std::invalid_argument for an unknown name.
Param parse_param(std::string_view name);

double get(const ModelParams& params, Param p);
void set(ModelParams& params, Param p, double value);

/// Uniform grid including both endpoints.
struct AxisSpec {
  Param param = Param::T;
  double min = 0.0;
  double max = 1.0;
  int count = 2;

  double value(int index) const;
};

struct SweepSpec {
  AxisSpec axis1;
  AxisSpec axis2{Param::D, 0.0, 3.0, 2};
  ModelParams fixed;
  std::string label;

  /// Throws std::invalid_argument on repeated axes, count < 2, max <= min,
  /// non-positive temperatures or invalid fixed parameters.
  void validate() const;
  ModelParams cell(int i1, int i2) const;
};

struct SweepRow {
  double axis1 = 0.0;
  double axis2 = 0.0;
  double qfi = 0.0;
  double c_max = 0.0;
  bool useful = false;
};

/// Rows in (axis1, axis2) order: row i1 * count2 + i2.
struct SweepTable {
  SweepSpec spec;
  std::string version{kVersion};
  std::vector<SweepRow> rows;
};

/// A cell failed; the sweep is aborted.
class SweepError : public std::runtime_error {
 public:
  SweepError(int i1, int i2, const std::string& what)
      : std::runtime_error(what), index1(i1), index2(i2) {}
  int index1;
  int index2;
};

/// Evaluates every cell with qfi(). Cells are distributed over `workers`
/// threads (0 = hardware concurrency) and written to fixed slots, so the
/// table does not depend on scheduling. On failure throws SweepError for
/// the lowest-indexed failing cell.
SweepTable run_sweep(const SweepSpec& spec, unsigned workers = 0);

enum class Sign { ferro, antiferro };

/// J = -1 for ferro, +1 for antiferro.
double coupling(Sign sign);
Sign parse_sign(std::string_view name);
std::string to_string(Sign sign);

inline constexpr int kDefaultAxisCount = 64;
inline constexpr double kDefaultTMin = 0.05;
inline constexpr double kDefaultTMax = 3.0;
inline constexpr double kDefaultFieldMax = 3.0;
inline constexpr double kPresetTemperature = 0.7;

/// Names: fig1_TD, fig1_TB, fig1_Tb, fig2_Db, fig2_bB.
std::vector<std::string> preset_names();
/// Throws std::invalid_argument for an unknown name.
SweepSpec preset(std::string_view name, Sign sign);

}  // namespace dmqfi
