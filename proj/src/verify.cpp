#include "dmqfi/verify.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <sstream>

#include "dmqfi/io.hpp"
#include "dmqfi/qfi.hpp"
#include "dmqfi/sweep.hpp"
#include "dmqfi/thermal_state.hpp"

namespace dmqfi {

namespace {

constexpr std::uint64_t kSeed = 20160415;

// Tracks the worst deviation seen and the first offending case.
class Tally {
 public:
  Tally(std::string name, double tolerance) : name_(std::move(name)), tolerance_(tolerance) {}

  void observe(double error, const std::string& where) {
    if (!std::isfinite(error) || error > worst_) {
      worst_ = std::isfinite(error) ? error : INFINITY;
      worst_where_ = where;
    }
    ++checked_;
  }

  PropertyResult result() const {
    std::ostringstream os;
    os << checked_ << " checks, worst " << format_number(worst_) << " (tolerance " << tolerance_ << ")";
    if (!passed()) os << " at " << worst_where_;
    return {name_, passed(), os.str()};
  }

  bool passed() const { return checked_ > 0 && worst_ <= tolerance_; }

 private:
  std::string name_;
  double tolerance_;
  double worst_ = 0.0;
  std::string worst_where_;
  long checked_ = 0;
};

std::string describe(const ModelParams& p) {
  std::ostringstream os;
  os << "J=" << format_number(p.J) << " B=" << format_number(p.B) << " b=" << format_number(p.b)
     << " D=" << format_number(p.D) << " T=" << format_number(p.T);
  return os.str();
}

class Sampler {
 public:
  explicit Sampler(std::uint64_t seed) : rng_(seed) {}

  double uniform(double lo, double hi) { return std::uniform_real_distribution<double>(lo, hi)(rng_); }

  // J, B, b, D in [-3, 3] with |J| bounded away from zero, T in [t_lo, t_hi].
  ModelParams params(double t_lo, double t_hi) {
    ModelParams p;
    do p.J = uniform(-3.0, 3.0);
    while (std::abs(p.J) < 1e-3);
    p.B = uniform(-3.0, 3.0);
    p.b = uniform(-3.0, 3.0);
    p.D = uniform(-3.0, 3.0);
    p.T = uniform(t_lo, t_hi);
    return p;
  }

  HermitianMatrix hermitian(Eigen::Index dim) {
    ComplexMatrix m(dim, dim);
    for (Eigen::Index c = 0; c < dim; ++c)
      for (Eigen::Index r = 0; r < dim; ++r) m(r, c) = Complex(uniform(-1.0, 1.0), uniform(-1.0, 1.0));
    return HermitianMatrix(m);
  }

  Direction direction() {
    Vec3 v;
    do v = Vec3(uniform(-1.0, 1.0), uniform(-1.0, 1.0), uniform(-1.0, 1.0));
    while (v.norm() < 1e-3 || v.norm() > 1.0);
    return Direction::normalized(v);
  }

 private:
  std::mt19937_64 rng_;
};

struct Context {
  bool quick;
  QfiOptions qfi_options;

  int draws(int full, int reduced) const { return quick ? reduced : full; }
  QfiResult evaluate(const ModelParams& p) const { return qfi(p, qfi_options); }
};

PropertyResult eigensolver_residuals(const Context& ctx) {
  // Residuals are divided by their tolerances (1e-12 relative, 1e-11 for
  // orthonormality).
  Tally tally("eigensolver_residuals", 1.0);
  Sampler s(kSeed);
  for (int trial = 0; trial < ctx.draws(20, 5); ++trial) {
    for (Eigen::Index dim : {2, 4, 8, 16}) {
      const HermitianMatrix m = s.hermitian(dim);
      const EigenSystem es = eigh(m);
      const double scale = m.frobenius_norm();
      const std::string where = "dim " + std::to_string(dim) + " trial " + std::to_string(trial);
      tally.observe(
          (m.matrix() * es.vectors - es.vectors * es.values.cast<Complex>().asDiagonal()).norm() / scale / 1e-12,
          where);
      tally.observe((es.reconstruct() - m.matrix()).cwiseAbs().maxCoeff() / scale / 1e-12, where);
      tally.observe(orthonormality_error(es.vectors) / 1e-11, where);
    }
  }
  return tally.result();
}

PropertyResult spectrum_equivalence(const Context& ctx) {
  Tally tally("spectrum_equivalence", 1e-12);
  Sampler s(kSeed + 1);
  for (int k = 0; k < ctx.draws(1000, 100); ++k) {
    const ModelParams p = s.params(0.05, 5.0);
    const HermitianMatrix h = build_hamiltonian(p);
    const AnalyticSpectrum a = analytic_spectrum(p);
    const EigenSystem es = eigh(h);
    std::array<double, 4> energies = a.energies;
    std::sort(energies.begin(), energies.end());
    for (int i = 0; i < 4; ++i) {
      tally.observe(std::abs(energies[static_cast<std::size_t>(i)] - es.values(i)), describe(p));
      const ComplexVector& v = a.vectors[static_cast<std::size_t>(i)];
      tally.observe((h.matrix() * v - a.energies[static_cast<std::size_t>(i)] * v).norm(), describe(p));
    }
  }
  return tally.result();
}

PropertyResult state_equivalence(const Context& ctx) {
  Tally tally("state_equivalence", 1e-10);
  Sampler s(kSeed + 2);
  for (int k = 0; k < ctx.draws(1000, 100); ++k) {
    const ModelParams p = s.params(0.05, 5.0);
    const DensityMatrix closed = closed_form_state(p);
    const DensityMatrix numeric = gibbs_state(build_hamiltonian(p), p.T);
    tally.observe((closed.matrix().matrix() - numeric.matrix().matrix()).cwiseAbs().maxCoeff(), describe(p));
  }
  return tally.result();
}

PropertyResult c_matrix_structure(const Context& ctx) {
  Tally tally("c_matrix_structure", 1e-10);
  Sampler s(kSeed + 2);
  for (int k = 0; k < ctx.draws(1000, 100); ++k) {
    const ModelParams p = s.params(0.05, 5.0);
    const SymmetricMatrix3 c = ctx.evaluate(p).c;
    for (double e : {c(2, 2), c(0, 1), c(0, 2), c(1, 2), c(0, 0) - c(1, 1)}) tally.observe(std::abs(e), describe(p));
  }
  return tally.result();
}

PropertyResult quadratic_form_consistency(const Context& ctx) {
  Tally tally("quadratic_form_consistency", 1e-10);
  Sampler s(kSeed + 3);
  for (int k = 0; k < ctx.draws(200, 30); ++k) {
    const ModelParams p = s.params(0.1, 2.0);
    const DensityMatrix state = closed_form_state(p);
    const SymmetricMatrix3 c = c_matrix(state, 2, ctx.qfi_options.weight_scale);
    const Direction n = s.direction();
    tally.observe(std::abs(c.quadratic_form(n.vector()) / 2.0 - fisher_in_direction(state, n, 2)), describe(p));
  }
  return tally.result();
}

PropertyResult temperature_limits(const Context& ctx) {
  Tally tally("temperature_limits", 1e-3);
  ModelParams ferro{-1.0, 0.0, 0.0, 0.0, 0.01, 2};
  ModelParams anti{1.0, 0.0, 0.0, 0.0, 0.01, 2};
  tally.observe(std::abs(ctx.evaluate(ferro).qfi_per_particle - 2.0), "ferro T=0.01");
  tally.observe(std::abs(ctx.evaluate(anti).qfi_per_particle), "antiferro T=0.01");
  Sampler s(kSeed + 4);
  for (int k = 0; k < ctx.draws(200, 30); ++k) {
    ModelParams p = s.params(1.0, 2.0);
    p.T = 1e3;
    tally.observe(ctx.evaluate(p).qfi_per_particle, describe(p));
  }
  return tally.result();
}

PropertyResult b_d_equivalence(const Context& ctx) {
  Tally tally("b_D_equivalence", 1e-10);
  const int points = ctx.draws(32, 8);
  for (double J : {-1.0, 1.0}) {
    for (double B : {0.0, 1.0}) {
      for (double T : {0.3, 0.7, 1.5}) {
        for (int i = 0; i < points; ++i) {
          const double x = 3.0 * i / (points - 1);
          const ModelParams with_b{J, B, x, 0.0, T, 2};
          const ModelParams with_d{J, B, 0.0, x, T, 2};
          tally.observe(std::abs(ctx.evaluate(with_b).qfi_per_particle - ctx.evaluate(with_d).qfi_per_particle),
                        describe(with_b));
        }
      }
    }
  }
  return tally.result();
}

PropertyResult oracle_agreement(const Context& ctx) {
  // Errors are normalized by each comparison's own tolerance, so the
  // property passes when the worst ratio is <= 1.
  Tally tally("oracle_agreement", 1.0);
  Sampler s(kSeed + 5);
  for (int k = 0; k < ctx.draws(200, 10); ++k) {
    const ModelParams p = s.params(0.1, 2.0);
    const DensityMatrix state = closed_form_state(p);
    const QfiResult r = ctx.evaluate(p);
    const GridMaximum grid = direction_grid_max(state, 2, 128);
    tally.observe(std::abs(grid.value - r.qfi_per_particle) / 1e-3, describe(p) + " (grid)");
    const double oracle = fidelity_qfi_oracle(state, r.n_opt, 2);
    const double tolerance = std::max(1e-4, 1e-2 * std::abs(r.qfi_per_particle));
    tally.observe(std::abs(oracle - r.qfi_per_particle) / tolerance, describe(p) + " (fidelity)");
  }
  return tally.result();
}

PropertyResult parity_symmetry(const Context& ctx) {
  Tally tally("parity_symmetry", 1e-10);
  Sampler s(kSeed + 6);
  for (int k = 0; k < ctx.draws(200, 30); ++k) {
    const ModelParams p = s.params(0.1, 2.0);
    const double base = ctx.evaluate(p).qfi_per_particle;
    ModelParams all = p;
    all.B = -p.B;
    all.b = -p.b;
    all.D = -p.D;
    ModelParams d_only = p;
    d_only.D = -p.D;
    tally.observe(std::abs(base - ctx.evaluate(all).qfi_per_particle), describe(p) + " (B,b,D flip)");
    tally.observe(std::abs(base - ctx.evaluate(d_only).qfi_per_particle), describe(p) + " (D flip)");
  }
  return tally.result();
}

PropertyResult shot_noise_claim(const Context& ctx) {
  const int count = ctx.draws(kDefaultAxisCount, 16);
  double ferro_max = 0.0, anti_max = 0.0;
  for (Sign sign : {Sign::ferro, Sign::antiferro}) {
    SweepSpec spec = preset("fig2_Db", sign);
    spec.axis1.count = spec.axis2.count = count;
    double& best = sign == Sign::ferro ? ferro_max : anti_max;
    for (int i1 = 0; i1 < count; ++i1)
      for (int i2 = 0; i2 < count; ++i2) best = std::max(best, ctx.evaluate(spec.cell(i1, i2)).qfi_per_particle);
  }
  const bool passed = ferro_max > 1.0 && anti_max <= 1.0 + 1e-9;
  return {"shot_noise_claim", passed,
          "ferro max " + format_number(ferro_max) + ", antiferro max " + format_number(anti_max)};
}

PropertyResult field_preference(const Context& ctx) {
  std::vector<std::string> violations;
  const int points = 16;
  for (int i = 1; i <= points; ++i) {
    const double x = 3.0 * i / points;
    const double ferro_b = ctx.evaluate({-1.0, 0.0, x, 0.0, 0.7, 2}).qfi_per_particle;
    const double ferro_B = ctx.evaluate({-1.0, x, 0.0, 0.0, 0.7, 2}).qfi_per_particle;
    const double anti_b = ctx.evaluate({1.0, 0.0, x, 0.0, 0.7, 2}).qfi_per_particle;
    const double anti_B = ctx.evaluate({1.0, x, 0.0, 0.0, 0.7, 2}).qfi_per_particle;
    if (ferro_b < ferro_B - 1e-9)
      violations.push_back("ferro x=" + format_number(x) + ": b " + format_number(ferro_b) + " < B " +
                           format_number(ferro_B));
    if (anti_B < anti_b - 1e-9)
      violations.push_back("antiferro x=" + format_number(x) + ": B " + format_number(anti_B) + " < b " +
                           format_number(anti_b));
  }
  std::string detail = std::to_string(2 * points) + " comparisons";
  for (const std::string& v : violations) detail += "; " + v;
  return {"field_preference", violations.empty(), detail};
}

PropertyResult cramer_rao_anchors(const Context&) {
  Tally tally("cramer_rao_anchors", 1e-15);
  tally.observe(std::abs(cramer_rao({1, 4.0, 0.0}) - 0.5), "F=4");
  tally.observe(std::abs(cramer_rao({1, 2.0, 0.0}) - 1.0 / std::sqrt(2.0)), "SNL N=2");
  tally.observe(std::abs(cramer_rao({100, 4.0, 0.0}) - 0.05), "F=4 N_m=100");
  return tally.result();
}

PropertyResult sweep_determinism(const Context& ctx) {
  SweepSpec spec = preset("fig1_TD", Sign::ferro);
  spec.axis1.count = spec.axis2.count = ctx.quick ? 8 : 24;
  std::string reference;
  bool identical = true;
  for (unsigned workers : {1u, 4u, 8u}) {
    std::ostringstream os;
    write_csv(run_sweep(spec, workers), os);
    if (reference.empty())
      reference = os.str();
    else
      identical = identical && os.str() == reference;
  }
  return {"sweep_determinism", identical, "workers 1, 4, 8"};
}

}  // namespace

std::vector<PropertyResult> run_verification(const VerifyOptions& options) {
  Context ctx{options.quick, QfiOptions{}};
  if (options.inject_fault) ctx.qfi_options.weight_scale = 1.05;

  using Property = PropertyResult (*)(const Context&);
  const std::vector<std::pair<std::string, Property>> properties = {
      {"eigensolver_residuals", eigensolver_residuals},
      {"spectrum_equivalence", spectrum_equivalence},
      {"state_equivalence", state_equivalence},
      {"c_matrix_structure", c_matrix_structure},
      {"quadratic_form_consistency", quadratic_form_consistency},
      {"temperature_limits", temperature_limits},
      {"b_D_equivalence", b_d_equivalence},
      {"oracle_agreement", oracle_agreement},
      {"parity_symmetry", parity_symmetry},
      {"shot_noise_claim", shot_noise_claim},
      {"field_preference", field_preference},
      {"cramer_rao_anchors", cramer_rao_anchors},
      {"sweep_determinism", sweep_determinism}};

  std::vector<PropertyResult> results;
  for (const auto& [name, property] : properties) {
    try {
      results.push_back(property(ctx));
    } catch (const std::exception& e) {
      results.push_back({name, false, std::string("exception: ") + e.what()});
    }
  }
  return results;
}

}  // namespace dmqfi
