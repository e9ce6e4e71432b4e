#pragma once

// Dense linear algebra for small Hermitian matrices (dimension 2^N, N <= 12).
//
// Eigendecompositions use a cyclic Jacobi kernel shared between the complex
// Hermitian case and the real symmetric 3x3 case. All types are immutable
// values; every function is pure.

#include <array>
#include <complex>
#include <functional>
#include <stdexcept>

#include <Eigen/Dense>

namespace dmqfi {

using Complex = std::complex<double>;
using ComplexMatrix = Eigen::MatrixXcd;
using ComplexVector = Eigen::VectorXcd;
using RealVector = Eigen::VectorXd;
using Vec3 = Eigen::Vector3d;

/// Raised when the Jacobi sweep cap is reached before convergence.
class ConvergenceError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Complex Hermitian matrix. Construction rejects non-square or non-finite
/// input and symmetrizes the entries, so M(j,k) == conj(M(k,j)) exactly.
class HermitianMatrix {
 public:
  HermitianMatrix() = default;
  explicit HermitianMatrix(ComplexMatrix m);

  static HermitianMatrix zero(Eigen::Index dim);
  static HermitianMatrix identity(Eigen::Index dim);
  static HermitianMatrix diagonal(const RealVector& d);

  Eigen::Index dim() const { return m_.rows(); }
  const ComplexMatrix& matrix() const { return m_; }
  Complex operator()(Eigen::Index r, Eigen::Index c) const { return m_(r, c); }

  double trace() const { return m_.diagonal().real().sum(); }
  double frobenius_norm() const { return m_.norm(); }

  HermitianMatrix operator+(const HermitianMatrix& o) const;
  HermitianMatrix operator-(const HermitianMatrix& o) const;
  HermitianMatrix operator*(double s) const;

 private:
  ComplexMatrix m_;
};

/// Real eigenvalues in ascending order with orthonormal eigenvectors stored
/// as the columns of `vectors` (column k pairs with values[k]).
struct EigenSystem {
  RealVector values;
  ComplexMatrix vectors;

  Eigen::Index dim() const { return values.size(); }
  ComplexMatrix reconstruct() const;
};

/// 3x3 real symmetric matrix indexed by the axes x, y, z (0, 1, 2).
/// Only the upper triangle is stored, so symmetry holds exactly.
class SymmetricMatrix3 {
 public:
  SymmetricMatrix3() = default;
  static SymmetricMatrix3 from_dense(const Eigen::Matrix3d& m);

  double operator()(int r, int c) const { return v_[index(r, c)]; }
  double& at(int r, int c) { return v_[index(r, c)]; }

  Eigen::Matrix3d dense() const;
  double quadratic_form(const Vec3& n) const;

 private:
  static int index(int r, int c);
  // xx, xy, xz, yy, yz, zz
  std::array<double, 6> v_{};
};

struct TopEigenpair {
  double value = 0.0;
  Vec3 direction = Vec3::UnitX();
};

/// Jacobi convergence controls: stop once the off-diagonal Frobenius norm
/// falls below `relative_tolerance * ||M||_F`.
struct JacobiControl {
  double relative_tolerance = 1e-13;
  int max_sweeps = 100;
};

/// Eigendecomposition of a Hermitian matrix by cyclic Jacobi rotations.
///
/// Eigenvalues come out ascending. Each eigenvector is phase-fixed so that
/// its first non-negligible component is real and positive; eigenvectors of
/// numerically tied eigenvalues are ordered lexicographically by their
/// (re, im) entries. Identical input gives bit-identical output.
EigenSystem eigh(const HermitianMatrix& m, JacobiControl control = {});

/// V f(Lambda) V^dagger. Throws std::domain_error if f yields a non-finite
/// value on the spectrum.
HermitianMatrix mat_func(const HermitianMatrix& m, const std::function<double(double)>& f);
HermitianMatrix mat_func(const EigenSystem& es, const std::function<double(double)>& f);

HermitianMatrix mat_exp(const HermitianMatrix& m);

/// Square root of a positive semidefinite matrix. Eigenvalues in
/// [-1e-12 * max(1, ||M||_F), 0) are treated as zero; anything more negative
/// throws std::domain_error.
HermitianMatrix mat_sqrt(const HermitianMatrix& m);

/// Largest eigenvalue of a real symmetric 3x3 matrix and a unit eigenvector.
///
/// When the top eigenspace contains x-hat (within 1e-10) the direction is
/// reported as x-hat exactly; otherwise the eigenvector is sign-fixed so its
/// first non-negligible component is positive.
TopEigenpair max_eig_sym3(const SymmetricMatrix3& c);

/// Orthonormality residual max_{jk} |(V^dagger V - I)_{jk}|.
double orthonormality_error(const ComplexMatrix& v);

/// max_k ||M v_k - lambda_k v_k||_2.
double eigen_residual(const HermitianMatrix& m, const EigenSystem& es);

}  // namespace dmqfi
