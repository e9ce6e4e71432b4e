#include "dmqfi/qfi.hpp"

#include <array>
#include <cmath>
#include <numbers>
#include <string>

#include "dmqfi/thermal_state.hpp"

namespace dmqfi {

namespace {

void check_particles(const DensityMatrix& state, int n_particles) {
  if (n_particles < 1 || n_particles > kMaxSites || state.dim() != (Eigen::Index{1} << n_particles))
    throw std::invalid_argument("state dimension does not match " + std::to_string(n_particles) +
                                " spins");
}

// (p_i - p_j)^2 / (p_i + p_j), zero on the diagonal and for pairs whose
// total weight is below the degenerate-pair threshold.
Eigen::MatrixXd pair_weights(const RealVector& p, double scale) {
  const Eigen::Index n = p.size();
  Eigen::MatrixXd w = Eigen::MatrixXd::Zero(n, n);
  for (Eigen::Index i = 0; i < n; ++i) {
    for (Eigen::Index j = 0; j < n; ++j) {
      const double sum = p(i) + p(j);
      if (i == j || sum < kDegeneratePairThreshold) continue;
      const double diff = p(i) - p(j);
      w(i, j) = scale * diff * diff / sum;
    }
  }
  return w;
}

// <psi_i|op|psi_j> in the eigenbasis of the state.
ComplexMatrix in_eigenbasis(const DensityMatrix& state, const HermitianMatrix& op) {
  const ComplexMatrix& v = state.spectrum().vectors;
  return v.adjoint() * op.matrix() * v;
}

double spectral_fisher_sum(const Eigen::MatrixXd& w, const ComplexMatrix& a) {
  double total = 0.0;
  for (Eigen::Index j = 0; j < a.cols(); ++j)
    for (Eigen::Index i = 0; i < a.rows(); ++i)
      if (w(i, j) != 0.0) total += w(i, j) * std::norm(a(i, j));
  return 2.0 * total;
}

}  // namespace

SymmetricMatrix3 c_matrix(const DensityMatrix& state, int n_particles, double weight_scale) {
  check_particles(state, n_particles);
  const Eigen::MatrixXd w = pair_weights(state.probabilities(), weight_scale);
  std::array<ComplexMatrix, 3> a;
  for (int k = 0; k < 3; ++k)
    a[static_cast<std::size_t>(k)] =
        in_eigenbasis(state, collective_operator(Direction::along(static_cast<Axis>(k)), n_particles));

  SymmetricMatrix3 c;
  for (int k = 0; k < 3; ++k) {
    for (int l = k; l < 3; ++l) {
      const ComplexMatrix& ak = a[static_cast<std::size_t>(k)];
      const ComplexMatrix& al = a[static_cast<std::size_t>(l)];
      double sum = 0.0;
      for (Eigen::Index j = 0; j < ak.cols(); ++j) {
        for (Eigen::Index i = 0; i < ak.rows(); ++i) {
          if (w(i, j) == 0.0) continue;
          // <i|J_k|j><j|J_l|i> + <i|J_l|j><j|J_k|i> = 2 Re(<i|J_k|j> conj(<i|J_l|j>))
          sum += w(i, j) * 2.0 * std::real(ak(i, j) * std::conj(al(i, j)));
        }
      }
      c.at(k, l) = sum;
    }
  }
  return c;
}

QfiResult qfi(const ModelParams& params, const QfiOptions& options) {
  if (options.zero_temperature) {
    params.validate();
  } else {
    params.validate_thermal();
  }
  const DensityMatrix state = options.zero_temperature ? ground_state_limit(params)
                              : params.N == 2         ? closed_form_state(params)
                                                      : gibbs_state(build_hamiltonian(params), params.T);
  QfiResult r;
  r.params = params;
  r.c = c_matrix(state, params.N, options.weight_scale);
  const TopEigenpair top = max_eig_sym3(r.c);
  r.c_max = top.value;
  r.qfi_per_particle = top.value / params.N;
  r.n_opt = Direction::normalized(top.direction);
  return r;
}

double fisher_in_direction(const DensityMatrix& state, const Direction& n, int n_particles) {
  check_particles(state, n_particles);
  const Eigen::MatrixXd w = pair_weights(state.probabilities(), 1.0);
  const ComplexMatrix a = in_eigenbasis(state, collective_operator(n, n_particles));
  return spectral_fisher_sum(w, a) / n_particles;
}

double fidelity_qfi_oracle(const DensityMatrix& state, const Direction& n, int n_particles,
                           const FidelityOracleOptions& options) {
  check_particles(state, n_particles);
  if (!(options.step > 0.0) || options.step > 1e-2)
    throw std::invalid_argument("fidelity_qfi_oracle: step must lie in (0, 1e-2]");

  const EigenSystem generator = eigh(collective_operator(n, n_particles));
  auto estimate = [&](double phi) {
    ComplexVector phases(generator.dim());
    for (Eigen::Index k = 0; k < generator.dim(); ++k)
      phases(k) = std::exp(Complex(0.0, -phi * generator.values(k)));
    const ComplexMatrix u = generator.vectors * phases.asDiagonal() * generator.vectors.adjoint();
    const double f = fidelity(state, state.rotated(u));
    return 8.0 * (1.0 - std::sqrt(f)) / (phi * phi) / n_particles;
  };

  const double coarse = estimate(options.step);
  if (!options.richardson) return coarse;
  const double fine = estimate(0.5 * options.step);
  return (4.0 * fine - coarse) / 3.0;
}

GridMaximum direction_grid_max(const DensityMatrix& state, int n_particles, int resolution) {
  check_particles(state, n_particles);
  if (resolution < 16) throw std::invalid_argument("direction_grid_max: resolution must be >= 16");

  const Eigen::MatrixXd w = pair_weights(state.probabilities(), 1.0);
  std::array<ComplexMatrix, 3> a;
  for (int k = 0; k < 3; ++k)
    a[static_cast<std::size_t>(k)] =
        in_eigenbasis(state, collective_operator(Direction::along(static_cast<Axis>(k)), n_particles));

  const long count = static_cast<long>(resolution) * resolution;
  const double golden_angle = std::numbers::pi * (3.0 - std::sqrt(5.0));
  GridMaximum best;
  bool first = true;
  for (long k = 0; k < count; ++k) {
    const double z = 1.0 - (2.0 * static_cast<double>(k) + 1.0) / static_cast<double>(count);
    const double r = std::sqrt(std::max(0.0, 1.0 - z * z));
    const double phi = golden_angle * static_cast<double>(k);
    const Vec3 n = Vec3(r * std::cos(phi), r * std::sin(phi), z).normalized();
    const ComplexMatrix jn = n(0) * a[0] + n(1) * a[1] + n(2) * a[2];
    const double value = spectral_fisher_sum(w, jn) / n_particles;
    if (first || value > best.value) {
      best.value = value;
      best.direction = Direction(n);
      first = false;
    }
  }
  return best;
}

double cramer_rao(const EstimationSetup& setup) {
  if (setup.n_measurements < 1) throw std::invalid_argument("cramer_rao: need at least one measurement");
  if (!std::isfinite(setup.total_fisher) || setup.total_fisher < 0.0)
    throw std::invalid_argument("cramer_rao: Fisher information must be finite and non-negative");
  if (setup.total_fisher == 0.0)
    throw UnboundedUncertainty("cramer_rao: zero Fisher information, phase uncertainty is unbounded");
  return 1.0 / std::sqrt(static_cast<double>(setup.n_measurements) * setup.total_fisher);
}

}  // namespace dmqfi
