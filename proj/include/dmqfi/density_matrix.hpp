#pragma once

#include "dmqfi/numerics.hpp"

namespace dmqfi {

/// Trace-one positive semidefinite Hermitian matrix together with its
/// spectral decomposition {p_i, |psi_i>}.
///
/// Eigenvalues in (-1e-12, 0) are clamped to zero and the spectrum is
/// renormalized to sum to one. The cached spectrum is ascending in p.
class DensityMatrix {
 public:
  static constexpr double kClampTolerance = 1e-12;

  /// Diagonalizes `m`. Throws std::invalid_argument if the trace is not one
  /// (within 1e-10) or an eigenvalue is below -kClampTolerance.
  static DensityMatrix from_matrix(const HermitianMatrix& m);

  /// Builds sum_i p_i |v_i><v_i| from weights and orthonormal columns.
  /// Weights are normalized to sum to one; negative weights below the clamp
  /// tolerance are rejected.
  static DensityMatrix from_spectrum(const RealVector& weights, const ComplexMatrix& vectors);

  static DensityMatrix maximally_mixed(Eigen::Index dim);
  static DensityMatrix pure(const ComplexVector& psi);

  Eigen::Index dim() const { return matrix_.dim(); }
  const HermitianMatrix& matrix() const { return matrix_; }
  const EigenSystem& spectrum() const { return spectrum_; }
  const RealVector& probabilities() const { return spectrum_.values; }
  Complex operator()(Eigen::Index r, Eigen::Index c) const { return matrix_(r, c); }

  /// V sqrt(P) V^dagger from the cached spectrum.
  HermitianMatrix sqrt() const;

  /// U rho U^dagger, carried out on the eigenvectors so the spectrum is
  /// preserved exactly.
  DensityMatrix rotated(const ComplexMatrix& unitary) const;

 private:
  DensityMatrix(HermitianMatrix m, EigenSystem s) : matrix_(std::move(m)), spectrum_(std::move(s)) {}

  HermitianMatrix matrix_;
  EigenSystem spectrum_;
};

/// Uhlmann fidelity (Tr sqrt(sqrt(rho) sigma sqrt(rho)))^2, evaluated as the
/// squared trace norm of sqrt(rho) sqrt(sigma). Throws std::invalid_argument
/// on dimension mismatch.
double fidelity(const DensityMatrix& rho, const DensityMatrix& sigma);

}  // namespace dmqfi
