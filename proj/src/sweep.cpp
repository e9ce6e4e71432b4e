#include "dmqfi/sweep.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <exception>
#include <thread>

namespace dmqfi {

std::string to_string(Param p) {
  switch (p) {
    case Param::T: return "T";
    case Param::B: return "B";
    case Param::b: return "b";
    case Param::D: return "D";
    case Param::J: return "J";
  }
  return "?";
}

Param parse_param(std::string_view name) {
  for (Param p : {Param::T, Param::B, Param::b, Param::D, Param::J})
    if (name == to_string(p)) return p;
  throw std::invalid_argument("unknown sweep parameter '" + std::string(name) + "' (expected T, B, b, D or J)");
}

double get(const ModelParams& params, Param p) {
  switch (p) {
    case Param::T: return params.T;
    case Param::B: return params.B;
    case Param::b: return params.b;
    case Param::D: return params.D;
    case Param::J: return params.J;
  }
  return 0.0;
}

void set(ModelParams& params, Param p, double value) {
  switch (p) {
    case Param::T: params.T = value; break;
    case Param::B: params.B = value; break;
    case Param::b: params.b = value; break;
    case Param::D: params.D = value; break;
    case Param::J: params.J = value; break;
  }
}

double AxisSpec::value(int index) const {
  if (index == count - 1) return max;
  return min + (max - min) * static_cast<double>(index) / static_cast<double>(count - 1);
}

void SweepSpec::validate() const {
  if (axis1.param == axis2.param) throw std::invalid_argument("sweep axes must be distinct parameters");
  for (const AxisSpec* axis : {&axis1, &axis2}) {
    const std::string name = to_string(axis->param);
    if (axis->count < 2) throw std::invalid_argument("axis " + name + ": count must be >= 2");
    if (!std::isfinite(axis->min) || !std::isfinite(axis->max) || !(axis->max > axis->min))
      throw std::invalid_argument("axis " + name + ": need finite min < max");
    if (axis->param == Param::T && !(axis->min > 0.0))
      throw std::invalid_argument("axis T: minimum temperature must be positive");
  }
  ModelParams probe = cell(0, 0);
  probe.validate_thermal();
}

ModelParams SweepSpec::cell(int i1, int i2) const {
  ModelParams p = fixed;
  set(p, axis1.param, axis1.value(i1));
  set(p, axis2.param, axis2.value(i2));
  return p;
}

SweepTable run_sweep(const SweepSpec& spec, unsigned workers) {
  spec.validate();
  const int n1 = spec.axis1.count, n2 = spec.axis2.count;
  const std::size_t cells = static_cast<std::size_t>(n1) * static_cast<std::size_t>(n2);

  SweepTable table;
  table.spec = spec;
  table.rows.resize(cells);
  std::vector<std::exception_ptr> errors(cells);

  std::atomic<std::size_t> next{0};
  auto work = [&] {
    for (std::size_t k = next++; k < cells; k = next++) {
      const int i1 = static_cast<int>(k / static_cast<std::size_t>(n2));
      const int i2 = static_cast<int>(k % static_cast<std::size_t>(n2));
      try {
        const QfiResult r = qfi(spec.cell(i1, i2));
        table.rows[k] = SweepRow{spec.axis1.value(i1), spec.axis2.value(i2), r.qfi_per_particle, r.c_max,
                                 r.useful()};
      } catch (...) {
        errors[k] = std::current_exception();
      }
    }
  };

  if (workers == 0) workers = std::max(1u, std::thread::hardware_concurrency());
  workers = static_cast<unsigned>(std::min<std::size_t>(workers, cells));
  {
    std::vector<std::jthread> pool;
    for (unsigned w = 1; w < workers; ++w) pool.emplace_back(work);
    work();
  }

  for (std::size_t k = 0; k < cells; ++k) {
    if (!errors[k]) continue;
    const int i1 = static_cast<int>(k / static_cast<std::size_t>(n2));
    const int i2 = static_cast<int>(k % static_cast<std::size_t>(n2));
    std::string message = "sweep cell (" + to_string(spec.axis1.param) + "=" +
                          std::to_string(spec.axis1.value(i1)) + ", " + to_string(spec.axis2.param) + "=" +
                          std::to_string(spec.axis2.value(i2)) + ") failed";
    try {
      std::rethrow_exception(errors[k]);
    } catch (const std::exception& e) {
      message += ": ";
      message += e.what();
    } catch (...) {
    }
    throw SweepError(i1, i2, message);
  }
  return table;
}

double coupling(Sign sign) { return sign == Sign::ferro ? -1.0 : 1.0; }

Sign parse_sign(std::string_view name) {
  if (name == "ferro") return Sign::ferro;
  if (name == "antiferro") return Sign::antiferro;
  throw std::invalid_argument("unknown sign '" + std::string(name) + "' (expected ferro or antiferro)");
}

std::string to_string(Sign sign) { return sign == Sign::ferro ? "ferro" : "antiferro"; }

std::vector<std::string> preset_names() { return {"fig1_TD", "fig1_TB", "fig1_Tb", "fig2_Db", "fig2_bB"}; }

SweepSpec preset(std::string_view name, Sign sign) {
  const AxisSpec temperature{Param::T, kDefaultTMin, kDefaultTMax, kDefaultAxisCount};
  auto field = [](Param p) { return AxisSpec{p, 0.0, kDefaultFieldMax, kDefaultAxisCount}; };

  SweepSpec spec;
  spec.fixed = ModelParams{coupling(sign), 0.0, 0.0, 0.0, kPresetTemperature, 2};
  spec.label = std::string(name) + "/" + to_string(sign);

  if (name == "fig1_TD") {
    spec.axis1 = temperature;
    spec.axis2 = field(Param::D);
  } else if (name == "fig1_TB") {
    spec.axis1 = temperature;
    spec.axis2 = field(Param::B);
  } else if (name == "fig1_Tb") {
    spec.axis1 = temperature;
    spec.axis2 = field(Param::b);
  } else if (name == "fig2_Db") {
    spec.axis1 = field(Param::D);
    spec.axis2 = field(Param::b);
  } else if (name == "fig2_bB") {
    spec.axis1 = field(Param::b);
    spec.axis2 = field(Param::B);
  } else {
    throw std::invalid_argument("unknown preset '" + std::string(name) + "'");
  }
  return spec;
}

}  // namespace dmqfi
