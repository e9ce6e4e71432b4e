#pragma once

// Quantum Fisher information of thermal states for phase rotations
// exp(i phi J_n) generated by the collective spin J_n = 1/2 sum_i n . sigma^i.
//
// The direction-resolved Fisher information is the quadratic form of the
// 3x3 matrix
//
//   C_kl = sum_{i != j} (p_i - p_j)^2 / (p_i + p_j)
//          [<i|J_k|j><j|J_l|i> + <i|J_l|j><j|J_k|i>]
//
// so the best direction gives c_max, the top eigenvalue of C. Values are
// reported per particle, c_max / N: 1 is the shot-noise limit and N the
// Heisenberg limit.

#include <stdexcept>

#include "dmqfi/density_matrix.hpp"
#include "dmqfi/spin_model.hpp"

namespace dmqfi {

/// Pairs with p_i + p_j below this contribute nothing to C.
inline constexpr double kDegeneratePairThreshold = 1e-12;

struct QfiOptions {
  /// Use the T -> 0 ground-state mixture instead of a thermal state.
  bool zero_temperature = false;
  /// Multiplies every (p_i - p_j)^2 / (p_i + p_j) weight. Fault-injection
  /// hook for the verification suite; 1 in normal use.
  double weight_scale = 1.0;
};

struct QfiResult {
  SymmetricMatrix3 c;
  double c_max = 0.0;
  double qfi_per_particle = 0.0;
  Direction n_opt = Direction::along(Axis::x);
  ModelParams params;

  /// Total Fisher information F_q = N * qfi_per_particle = c_max.
  double total_fisher() const { return c_max; }
  /// Per-particle QFI above the shot-noise limit witnesses entanglement.
  bool useful() const { return qfi_per_particle > 1.0; }
};

struct EstimationSetup {
  long n_measurements = 1;
  double total_fisher = 0.0;
  double phase = 0.0;
};

/// Signals that a zero Fisher information leaves the phase unconstrained.
class UnboundedUncertainty : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

SymmetricMatrix3 c_matrix(const DensityMatrix& state, int n_particles, double weight_scale = 1.0);

/// Thermal state of `params` (closed form for N = 2, matrix exponential
/// otherwise), its C matrix and the maximal per-particle QFI.
QfiResult qfi(const ModelParams& params, const QfiOptions& options = {});

/// Per-particle Fisher information for rotations about `n`, evaluated as
/// 2 sum_{i != j} (p_i - p_j)^2/(p_i + p_j) |<i|J_n|j>|^2 / N.
double fisher_in_direction(const DensityMatrix& state, const Direction& n, int n_particles);

struct FidelityOracleOptions {
  double step = 1e-3;
  /// Combine steps h and h/2 as (4 F(h/2) - F(h)) / 3.
  bool richardson = false;
};

/// Per-particle Fisher information from the fidelity between rho and
/// rho_phi = exp(-i phi J_n) rho exp(i phi J_n):
///   F ~ 8 (1 - sqrt(fidelity)) / phi^2.
/// Throws std::invalid_argument unless 0 < step <= 1e-2.
double fidelity_qfi_oracle(const DensityMatrix& state, const Direction& n, int n_particles,
                           const FidelityOracleOptions& options = {});

struct GridMaximum {
  double value = 0.0;
  Direction direction = Direction::along(Axis::x);
};

/// Largest per-particle Fisher information over ~resolution^2 directions on
/// a Fibonacci sphere. Throws std::invalid_argument for resolution < 16.
GridMaximum direction_grid_max(const DensityMatrix& state, int n_particles, int resolution);

/// Quantum Cramer-Rao bound 1 / sqrt(N_m F_q). Throws UnboundedUncertainty
/// when F_q = 0 and std::invalid_argument for N_m < 1 or negative F_q.
double cramer_rao(const EstimationSetup& setup);

}  // namespace dmqfi
