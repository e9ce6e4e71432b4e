#include "dmqfi/cli.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <thread>

#include <CLI11.hpp>

#include "dmqfi/io.hpp"
#include "dmqfi/qfi.hpp"
#include "dmqfi/sweep.hpp"
#include "dmqfi/thermal_state.hpp"
#include "dmqfi/verify.hpp"

namespace dmqfi::cli {

namespace {

using Json = nlohmann::ordered_json;

// Raised for bad flag combinations detected after parsing.
class UsageError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

struct Config {
  ModelParams params;
  std::string format;
  std::string out_path;
  unsigned workers = 0;
  bool quick = false;
  bool zero_temperature = false;
  bool inject_fault = false;
  bool verbose = false;

  std::string preset;
  std::string sign = "ferro";
  std::string axis1, axis2;
  std::optional<double> min1, max1, min2, max2;
  std::optional<int> count1, count2;
};

struct ModelFlags {
  CLI::Option* J = nullptr;
  CLI::Option* B = nullptr;
  CLI::Option* b = nullptr;
  CLI::Option* D = nullptr;
  CLI::Option* T = nullptr;
  CLI::Option* N = nullptr;
};

ModelFlags add_model_flags(CLI::App* sub, Config& cfg) {
  ModelFlags f;
  f.J = sub->add_option("--J", cfg.params.J, "exchange coupling (J<0 ferromagnetic)")->capture_default_str();
  f.B = sub->add_option("--B", cfg.params.B, "homogeneous magnetic field")->capture_default_str();
  f.b = sub->add_option("--b", cfg.params.b, "inhomogeneous magnetic field")->capture_default_str();
  f.D = sub->add_option("--D", cfg.params.D, "Dzyaloshinskii-Moriya strength")->capture_default_str();
  f.T = sub->add_option("--T", cfg.params.T, "temperature (k = 1)")->capture_default_str();
  f.N = sub->add_option("--N", cfg.params.N, "number of spins")->capture_default_str();
  return f;
}

void add_output_flags(CLI::App* sub, Config& cfg, std::vector<std::string> formats) {
  sub->add_option("--format", cfg.format, "output format")
      ->check(CLI::IsMember(formats))
      ->default_str(formats.front());
  sub->add_option("--out", cfg.out_path, "output file (default: standard output)");
  sub->add_flag("-v,--verbose", cfg.verbose, "report progress on standard error");
}

std::string fmt(double x, int digits = 12) {
  if (x == 0.0) x = 0.0;  // no "-0" in text output
  char buffer[40];
  std::snprintf(buffer, sizeof buffer, "%.*g", digits, x);
  return buffer;
}

std::string fmt(Complex z) {
  std::string s = fmt(z.real());
  if (z.imag() >= 0.0 || std::isnan(z.imag())) s += "+";
  return s + fmt(z.imag()) + "i";
}

Json complex_json(Complex z) { return Json::array({z.real(), z.imag()}); }

Json matrix_json(const ComplexMatrix& m) {
  Json rows = Json::array();
  for (Eigen::Index r = 0; r < m.rows(); ++r) {
    Json row = Json::array();
    for (Eigen::Index c = 0; c < m.cols(); ++c) row.push_back(complex_json(m(r, c)));
    rows.push_back(std::move(row));
  }
  return rows;
}

std::string basis_label(Eigen::Index index, int n_sites) {
  std::string s = "|";
  for (int bit = n_sites - 1; bit >= 0; --bit) s += ((index >> bit) & 1) ? '1' : '0';
  return s + ">";
}

// Writes to --out when given, else to `out`.
class Sink {
 public:
  Sink(const Config& cfg, std::ostream& out) : out_(&out) {
    if (!cfg.out_path.empty()) {
      file_.open(cfg.out_path, std::ios::binary | std::ios::trunc);
      if (!file_) throw UsageError("cannot open output file '" + cfg.out_path + "'");
      out_ = &file_;
    }
  }
  std::ostream& stream() { return *out_; }

 private:
  std::ofstream file_;
  std::ostream* out_;
};

int cmd_spectrum(const Config& cfg, std::ostream& out) {
  const ModelParams& p = cfg.params;
  p.validate();
  Sink sink(cfg, out);
  std::ostream& os = sink.stream();
  const Eigen::Index dim = Eigen::Index{1} << p.N;

  if (p.N == 2) {
    const AnalyticSpectrum s = analytic_spectrum(p);
    if (cfg.format == "json") {
      Json doc{{"N", p.N}, {"branch", s.degenerate_branch ? "degenerate" : "analytic"}, {"gamma", s.gamma},
               {"norm1", s.norm1}, {"norm2", s.norm2}};
      Json levels = Json::array();
      for (std::size_t k = 0; k < 4; ++k) {
        Json vec = Json::array();
        for (Eigen::Index i = 0; i < 4; ++i) vec.push_back(complex_json(s.vectors[k](i)));
        levels.push_back({{"energy", s.energies[k]}, {"vector", vec}});
      }
      doc["levels"] = std::move(levels);
      os << doc.dump(2) << '\n';
    } else if (cfg.format == "csv") {
      os << "energy";
      for (Eigen::Index i = 0; i < 4; ++i) os << ",re" << i << ",im" << i;
      os << '\n';
      for (std::size_t k = 0; k < 4; ++k) {
        os << format_number(s.energies[k]);
        for (Eigen::Index i = 0; i < 4; ++i)
          os << ',' << format_number(s.vectors[k](i).real()) << ',' << format_number(s.vectors[k](i).imag());
        os << '\n';
      }
    } else {
      os << "branch: " << (s.degenerate_branch ? "degenerate (J = 0, middle block diagonal)" : "analytic") << '\n';
      os << "gamma = " << fmt(s.gamma) << '\n';
      os << "N1 = " << fmt(s.norm1) << '\n';
      os << "N2 = " << fmt(s.norm2) << '\n';
      os << "energy           vector (|00>, |01>, |10>, |11>)\n";
      for (std::size_t k = 0; k < 4; ++k) {
        std::string e = fmt(s.energies[k]);
        e.resize(std::max<std::size_t>(e.size(), 16), ' ');
        os << e << " (";
        for (Eigen::Index i = 0; i < 4; ++i) os << (i ? ", " : "") << fmt(s.vectors[k](i));
        os << ")\n";
      }
      std::array<double, 4> sorted = s.energies;
      std::sort(sorted.begin(), sorted.end());
      os << "sorted energies:";
      for (double e : sorted) os << ' ' << fmt(e);
      os << '\n';
    }
    return kSuccess;
  }

  const EigenSystem es = eigh(build_hamiltonian(p));
  const bool with_vectors = dim <= 16;
  if (cfg.format == "json") {
    Json doc{{"N", p.N}, {"branch", "numeric"}};
    Json levels = Json::array();
    for (Eigen::Index k = 0; k < dim; ++k) {
      Json level{{"energy", es.values(k)}};
      if (with_vectors) {
        Json vec = Json::array();
        for (Eigen::Index i = 0; i < dim; ++i) vec.push_back(complex_json(es.vectors(i, k)));
        level["vector"] = std::move(vec);
      }
      levels.push_back(std::move(level));
    }
    doc["levels"] = std::move(levels);
    os << doc.dump(2) << '\n';
  } else if (cfg.format == "csv") {
    os << "energy\n";
    for (Eigen::Index k = 0; k < dim; ++k) os << format_number(es.values(k)) << '\n';
  } else {
    os << "branch: numeric (N = " << p.N << ", open chain)\n";
    for (Eigen::Index k = 0; k < dim; ++k) {
      os << fmt(es.values(k));
      if (with_vectors) {
        os << "  ";
        bool first = true;
        for (Eigen::Index i = 0; i < dim; ++i) {
          if (std::abs(es.vectors(i, k)) < 1e-12) continue;
          os << (first ? "" : " + ") << '(' << fmt(es.vectors(i, k)) << ')' << basis_label(i, p.N);
          first = false;
        }
      }
      os << '\n';
    }
  }
  return kSuccess;
}

int cmd_state(const Config& cfg, std::ostream& out) {
  const ModelParams& p = cfg.params;
  p.validate_thermal();
  Sink sink(cfg, out);
  std::ostream& os = sink.stream();

  const DensityMatrix numeric = gibbs_state(build_hamiltonian(p), p.T);
  std::optional<DensityMatrix> closed;
  if (p.N == 2) closed = closed_form_state(p);
  const double difference =
      closed ? (closed->matrix().matrix() - numeric.matrix().matrix()).cwiseAbs().maxCoeff() : 0.0;
  const Eigen::Index dim = numeric.dim();

  if (cfg.format == "json") {
    Json doc{{"params", to_json(p)}};
    doc["closed_form"] = closed ? matrix_json(closed->matrix().matrix()) : Json(nullptr);
    doc["numeric"] = matrix_json(numeric.matrix().matrix());
    doc["max_abs_difference"] = closed ? Json(difference) : Json(nullptr);
    os << doc.dump(2) << '\n';
  } else if (cfg.format == "csv") {
    os << "row,col,closed_re,closed_im,numeric_re,numeric_im\n";
    for (Eigen::Index r = 0; r < dim; ++r) {
      for (Eigen::Index c = 0; c < dim; ++c) {
        os << r << ',' << c << ',';
        if (closed)
          os << format_number((*closed)(r, c).real()) << ',' << format_number((*closed)(r, c).imag());
        else
          os << ',';
        os << ',' << format_number(numeric(r, c).real()) << ',' << format_number(numeric(r, c).imag()) << '\n';
      }
    }
  } else {
    auto dump = [&](const char* title, const DensityMatrix& rho) {
      os << title << '\n';
      for (Eigen::Index r = 0; r < dim; ++r) {
        os << "  ";
        for (Eigen::Index c = 0; c < dim; ++c) os << (c ? "  " : "") << fmt(rho(r, c));
        os << '\n';
      }
    };
    if (closed) {
      const ClosedFormFactors f = closed_form_factors(p);
      os << "gamma = " << fmt(p.gamma()) << ", gamma_c = " << fmt(f.gamma_c) << ", gamma_s = " << fmt(f.gamma_s)
         << ", Z = " << fmt(f.Z) << '\n';
      dump("closed form:", *closed);
    }
    dump("numeric (matrix exponential):", numeric);
    if (closed) os << "max |closed - numeric| = " << fmt(difference, 3) << '\n';
  }
  return kSuccess;
}

int cmd_qfi(const Config& cfg, std::ostream& out) {
  const ModelParams& p = cfg.params;
  QfiOptions options;
  options.zero_temperature = cfg.zero_temperature;
  const QfiResult r = qfi(p, options);
  std::optional<double> bound;
  try {
    bound = cramer_rao({1, r.total_fisher(), 0.0});
  } catch (const UnboundedUncertainty&) {
  }

  Sink sink(cfg, out);
  std::ostream& os = sink.stream();
  const Vec3& n = r.n_opt.vector();
  if (cfg.format == "json") {
    Json c = Json::array();
    for (int k = 0; k < 3; ++k) c.push_back(Json::array({r.c(k, 0), r.c(k, 1), r.c(k, 2)}));
    Json doc{{"params", to_json(p)},
             {"zero_temperature", cfg.zero_temperature},
             {"C", c},
             {"c_max", r.c_max},
             {"qfi", r.qfi_per_particle},
             {"n_opt", Json::array({n(0), n(1), n(2)})},
             {"useful", r.useful()},
             {"delta_phi_qcb", bound ? Json(*bound) : Json(nullptr)}};
    os << doc.dump(2) << '\n';
  } else if (cfg.format == "csv") {
    os << "J,B,b,D,T,N,C_xx,C_xy,C_xz,C_yy,C_yz,C_zz,c_max,qfi,n_x,n_y,n_z,useful,delta_phi_qcb\n";
    os << format_number(p.J) << ',' << format_number(p.B) << ',' << format_number(p.b) << ','
       << format_number(p.D) << ',' << format_number(p.T) << ',' << p.N;
    for (auto [k, l] : {std::pair{0, 0}, {0, 1}, {0, 2}, {1, 1}, {1, 2}, {2, 2}}) os << ',' << format_number(r.c(k, l));
    os << ',' << format_number(r.c_max) << ',' << format_number(r.qfi_per_particle);
    for (int k = 0; k < 3; ++k) os << ',' << format_number(n(k));
    os << ',' << (r.useful() ? 1 : 0) << ',' << (bound ? format_number(*bound) : std::string("inf")) << '\n';
  } else {
    os << "C =\n";
    for (int k = 0; k < 3; ++k)
      os << "  [" << fmt(r.c(k, 0)) << ", " << fmt(r.c(k, 1)) << ", " << fmt(r.c(k, 2)) << "]\n";
    os << "c_max = " << fmt(r.c_max) << '\n';
    os << "qfi = " << fmt(r.qfi_per_particle) << '\n';
    os << "n_opt = (" << fmt(n(0)) << ", " << fmt(n(1)) << ", " << fmt(n(2)) << ")\n";
    os << "useful = " << (r.useful() ? "true" : "false") << '\n';
    os << "delta_phi_qcb = " << (bound ? fmt(*bound) : std::string("unbounded (zero Fisher information)"))
       << " (N_m = 1)\n";
  }
  return kSuccess;
}

AxisSpec default_axis(Param p) {
  if (p == Param::T) return {p, kDefaultTMin, kDefaultTMax, kDefaultAxisCount};
  return {p, 0.0, kDefaultFieldMax, kDefaultAxisCount};
}

void apply_overrides(AxisSpec& axis, const std::optional<double>& min, const std::optional<double>& max,
                     const std::optional<int>& count) {
  if (min) axis.min = *min;
  if (max) axis.max = *max;
  if (count) axis.count = *count;
}

SweepSpec build_sweep_spec(const Config& cfg, const ModelFlags& flags) {
  SweepSpec spec;
  if (!cfg.preset.empty()) {
    if (!cfg.axis1.empty() || !cfg.axis2.empty()) throw UsageError("--axis1/--axis2 cannot be combined with --preset");
    spec = preset(cfg.preset, parse_sign(cfg.sign));
    // Explicit model flags override the preset's fixed values.
    if (flags.J->count()) spec.fixed.J = cfg.params.J;
    if (flags.B->count()) spec.fixed.B = cfg.params.B;
    if (flags.b->count()) spec.fixed.b = cfg.params.b;
    if (flags.D->count()) spec.fixed.D = cfg.params.D;
    if (flags.T->count()) spec.fixed.T = cfg.params.T;
    if (flags.N->count()) spec.fixed.N = cfg.params.N;
  } else {
    if (cfg.axis1.empty() || cfg.axis2.empty()) throw UsageError("sweep needs --preset or both --axis1 and --axis2");
    spec.axis1 = default_axis(parse_param(cfg.axis1));
    spec.axis2 = default_axis(parse_param(cfg.axis2));
    spec.fixed = cfg.params;
    spec.label = "custom";
  }
  apply_overrides(spec.axis1, cfg.min1, cfg.max1, cfg.count1);
  apply_overrides(spec.axis2, cfg.min2, cfg.max2, cfg.count2);
  spec.validate();
  return spec;
}

int cmd_sweep(const Config& cfg, const ModelFlags& flags, std::ostream& out, std::ostream& err) {
  const SweepSpec spec = build_sweep_spec(cfg, flags);
  const SweepTable table = run_sweep(spec, cfg.workers);
  Sink sink(cfg, out);
  if (cfg.format == "json")
    sink.stream() << to_json(table).dump(2) << '\n';
  else
    write_csv(table, sink.stream());
  if (cfg.verbose)
    err << "sweep " << spec.label << ": " << table.rows.size() << " cells"
        << (cfg.out_path.empty() ? "" : " written to " + cfg.out_path) << '\n';
  return kSuccess;
}

int cmd_verify(const Config& cfg, std::ostream& out) {
  const std::vector<PropertyResult> results = run_verification({cfg.quick, cfg.inject_fault});
  bool all = true;
  for (const PropertyResult& r : results) all = all && r.passed;

  Sink sink(cfg, out);
  std::ostream& os = sink.stream();
  if (cfg.format == "json") {
    Json rows = Json::array();
    for (const PropertyResult& r : results) rows.push_back({{"name", r.name}, {"passed", r.passed}, {"detail", r.detail}});
    os << Json{{"passed", all}, {"quick", cfg.quick}, {"properties", rows}}.dump(2) << '\n';
  } else {
    std::size_t passed = 0;
    for (const PropertyResult& r : results) {
      os << (r.passed ? "PASS " : "FAIL ") << r.name << ": " << r.detail << '\n';
      passed += r.passed ? 1 : 0;
    }
    os << passed << "/" << results.size() << " properties passed\n";
  }
  return all ? kSuccess : kVerificationFailure;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Quantum Fisher information of thermal two-spin XX chains with DM interaction", "dmqfi"};
  app.require_subcommand(1);
  app.set_version_flag("--version", std::string(kVersion));

  Config cfg;
  CLI::App* spectrum = app.add_subcommand("spectrum", "eigenvalues and eigenvectors of H");
  CLI::App* state = app.add_subcommand("state", "thermal density matrix, closed form and numeric");
  CLI::App* qfi_cmd = app.add_subcommand("qfi", "C matrix, per-particle QFI and Cramer-Rao bound");
  CLI::App* sweep = app.add_subcommand("sweep", "QFI over a 2-D parameter grid");
  CLI::App* verify = app.add_subcommand("verify", "run the invariant suite");

  add_model_flags(spectrum, cfg);
  add_output_flags(spectrum, cfg, {"text", "csv", "json"});
  add_model_flags(state, cfg);
  add_output_flags(state, cfg, {"text", "csv", "json"});
  add_model_flags(qfi_cmd, cfg);
  add_output_flags(qfi_cmd, cfg, {"text", "csv", "json"});
  qfi_cmd->add_flag("--zero-temperature", cfg.zero_temperature, "use the T -> 0 ground-state mixture");

  const ModelFlags sweep_flags = add_model_flags(sweep, cfg);
  add_output_flags(sweep, cfg, {"csv", "json"});
  sweep->add_option("--preset", cfg.preset, "fig1_TD, fig1_TB, fig1_Tb, fig2_Db or fig2_bB")
      ->check(CLI::IsMember(preset_names()));
  sweep->add_option("--sign", cfg.sign, "ferro (J = -1) or antiferro (J = +1)")
      ->check(CLI::IsMember({"ferro", "antiferro"}))
      ->capture_default_str();
  sweep->add_option("--axis1", cfg.axis1, "first swept parameter (T, B, b, D, J)");
  sweep->add_option("--axis2", cfg.axis2, "second swept parameter (T, B, b, D, J)");
  sweep->add_option("--min1", cfg.min1);
  sweep->add_option("--max1", cfg.max1);
  sweep->add_option("--count1", cfg.count1);
  sweep->add_option("--min2", cfg.min2);
  sweep->add_option("--max2", cfg.max2);
  sweep->add_option("--count2", cfg.count2);
  sweep->add_option("--workers", cfg.workers, "worker threads (0 = all cores)")->capture_default_str();

  add_output_flags(verify, cfg, {"text", "json"});
  verify->add_flag("--quick", cfg.quick, "reduced suite, a few seconds");
  verify->add_flag("--inject-fault", cfg.inject_fault, "perturb the C-matrix weights (self-test)")->group("");

  std::vector<const char*> argv;
  for (const std::string& a : args) argv.push_back(a.c_str());
  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::CallForHelp& e) {
    out << app.help();
    return kSuccess;
  } catch (const CLI::CallForVersion&) {
    out << kVersion << '\n';
    return kSuccess;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << '\n';
    err << "run with --help for usage\n";
    return kUsageError;
  }

  if (cfg.format.empty()) cfg.format = sweep->parsed() ? "csv" : "text";

  try {
    if (spectrum->parsed()) return cmd_spectrum(cfg, out);
    if (state->parsed()) return cmd_state(cfg, out);
    if (qfi_cmd->parsed()) return cmd_qfi(cfg, out);
    if (sweep->parsed()) return cmd_sweep(cfg, sweep_flags, out, err);
    if (verify->parsed()) return cmd_verify(cfg, out);
  } catch (const std::invalid_argument& e) {
    err << "error: " << e.what() << '\n';
    return kUsageError;
  } catch (const std::out_of_range& e) {
    err << "error: " << e.what() << '\n';
    return kUsageError;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kVerificationFailure;
  }
  return kUsageError;
}

}  // namespace dmqfi::cli
