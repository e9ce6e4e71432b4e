#include <cmath>
#include <numbers>
#include <random>

#include <gtest/gtest.h>

#include "dmqfi/density_matrix.hpp"
#include "dmqfi/numerics.hpp"
#include "dmqfi/spin_model.hpp"

using namespace dmqfi;

namespace {

HermitianMatrix random_hermitian(std::mt19937_64& rng, Eigen::Index dim) {
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  ComplexMatrix m(dim, dim);
  for (Eigen::Index c = 0; c < dim; ++c)
    for (Eigen::Index r = 0; r < dim; ++r) m(r, c) = Complex(u(rng), u(rng));
  return HermitianMatrix(m);
}

DensityMatrix random_state(std::mt19937_64& rng, Eigen::Index dim) {
  const ComplexMatrix g = random_hermitian(rng, dim).matrix();
  ComplexMatrix rho = g * g.adjoint();
  rho /= rho.trace().real();
  return DensityMatrix::from_matrix(HermitianMatrix(rho));
}

DensityMatrix pure_basis_state(Eigen::Index dim, Eigen::Index index) {
  ComplexVector v = ComplexVector::Zero(dim);
  v(index) = 1.0;
  return DensityMatrix::pure(v);
}

// Fibonacci-sphere directions; independent of the Jacobi kernel.
double sampled_rayleigh_max(const SymmetricMatrix3& c, int count) {
  const double golden = std::numbers::pi * (3.0 - std::sqrt(5.0));
  double best = -INFINITY;
  for (int k = 0; k < count; ++k) {
    const double z = 1.0 - (2.0 * k + 1.0) / count;
    const double r = std::sqrt(1.0 - z * z);
    best = std::max(best, c.quadratic_form(Vec3(r * std::cos(golden * k), r * std::sin(golden * k), z)));
  }
  return best;
}

}  // namespace

TEST(HermitianMatrix, SymmetrizesOnConstruction) {
  ComplexMatrix m(2, 2);
  m << Complex(1, 0.5), Complex(2, 1), Complex(2, -1 + 1e-14), Complex(3, 0);
  const HermitianMatrix h(m);
  EXPECT_EQ(h(0, 1), std::conj(h(1, 0)));
  EXPECT_EQ(h(0, 0).imag(), 0.0);
}

TEST(HermitianMatrix, RejectsNonFiniteAndNonSquare) {
  ComplexMatrix bad = ComplexMatrix::Identity(2, 2);
  bad(0, 1) = Complex(NAN, 0);
  EXPECT_THROW(HermitianMatrix{bad}, std::invalid_argument);
  EXPECT_THROW(HermitianMatrix{ComplexMatrix::Zero(2, 3)}, std::invalid_argument);
}

TEST(Eigh, DiagonalInput) {
  const EigenSystem es = eigh(HermitianMatrix::diagonal(Eigen::Vector2d(3.0, -1.0)));
  EXPECT_EQ(es.values(0), -1.0);
  EXPECT_EQ(es.values(1), 3.0);
  EXPECT_EQ(es.vectors.col(0), ComplexVector::Unit(2, 1));
  EXPECT_EQ(es.vectors.col(1), ComplexVector::Unit(2, 0));
}

TEST(Eigh, TwoSpinXX) {
  ModelParams p;
  p.J = 1.0;
  const EigenSystem es = eigh(build_hamiltonian(p));
  const double expected[] = {-1.0, 0.0, 0.0, 1.0};
  for (int k = 0; k < 4; ++k) EXPECT_NEAR(es.values(k), expected[k], 1e-15);
}

TEST(Eigh, RandomMatricesMatchIndependentSolver) {
  std::mt19937_64 rng(7);
  for (int trial = 0; trial < 25; ++trial) {
    for (Eigen::Index dim : {1, 2, 3, 4, 7, 16, 32}) {
      const HermitianMatrix m = random_hermitian(rng, dim);
      const EigenSystem es = eigh(m);
      const double scale = m.frobenius_norm();

      const ComplexMatrix residual = m.matrix() * es.vectors - es.vectors * es.values.cast<Complex>().asDiagonal();
      EXPECT_LT(residual.norm() / scale, 1e-12);
      EXPECT_LT((es.reconstruct() - m.matrix()).cwiseAbs().maxCoeff(), 1e-11 * scale);
      EXPECT_LT(orthonormality_error(es.vectors), 1e-11);
      for (Eigen::Index k = 1; k < dim; ++k) EXPECT_LE(es.values(k - 1), es.values(k));

      const Eigen::SelfAdjointEigenSolver<ComplexMatrix> oracle(m.matrix());
      EXPECT_LT((oracle.eigenvalues() - es.values).cwiseAbs().maxCoeff(), 1e-12 * scale);
    }
  }
}

TEST(Eigh, DeterministicAndPhaseFixed) {
  std::mt19937_64 rng(11);
  const HermitianMatrix m = random_hermitian(rng, 8);
  const EigenSystem a = eigh(m);
  const EigenSystem b = eigh(m);
  EXPECT_EQ(a.values, b.values);
  EXPECT_EQ(a.vectors, b.vectors);
  for (Eigen::Index k = 0; k < 8; ++k) {
    Eigen::Index anchor = 0;
    while (std::abs(a.vectors(anchor, k)) <= 1e-10) ++anchor;
    EXPECT_EQ(a.vectors(anchor, k).imag(), 0.0);
    EXPECT_GT(a.vectors(anchor, k).real(), 0.0);
  }
}

TEST(Eigh, DegenerateVectorsOrderedLexicographically) {
  const EigenSystem es = eigh(HermitianMatrix::identity(3));
  // Ascending (re, im) lexicographic order over phase-fixed unit vectors.
  EXPECT_EQ(es.vectors.col(0), ComplexVector::Unit(3, 2));
  EXPECT_EQ(es.vectors.col(1), ComplexVector::Unit(3, 1));
  EXPECT_EQ(es.vectors.col(2), ComplexVector::Unit(3, 0));
}

TEST(Eigh, ZeroMatrix) {
  const EigenSystem es = eigh(HermitianMatrix::zero(4));
  EXPECT_EQ(es.values, RealVector::Zero(4));
  EXPECT_LT(orthonormality_error(es.vectors), 1e-15);
}

TEST(Eigh, SweepCapRaisesConvergenceError) {
  std::mt19937_64 rng(3);
  EXPECT_THROW(eigh(random_hermitian(rng, 6), JacobiControl{1e-13, 0}), ConvergenceError);
}

TEST(MatFunc, ExpOfZeroIsIdentity) {
  EXPECT_LT((mat_exp(HermitianMatrix::zero(4)).matrix() - ComplexMatrix::Identity(4, 4)).norm(), 1e-15);
}

TEST(MatFunc, SqrtOfDiagonal) {
  const HermitianMatrix r = mat_sqrt(HermitianMatrix::diagonal(Eigen::Vector2d(4.0, 9.0)));
  EXPECT_NEAR(r(0, 0).real(), 2.0, 1e-15);
  EXPECT_NEAR(r(1, 1).real(), 3.0, 1e-15);
  EXPECT_EQ(r(0, 1), Complex(0.0));
}

TEST(MatFunc, BoltzmannTraceOfTwoSpinHamiltonian) {
  ModelParams p;
  p.J = 1.0;
  const HermitianMatrix weights = mat_exp(build_hamiltonian(p) * -1.0);
  // Spectrum {1, 0, 0, -1}: e^{-1} + 1 + 1 + e.
  const double expected = std::exp(-1.0) + 2.0 + std::exp(1.0);
  EXPECT_NEAR(weights.trace(), expected, 1e-14);
  EXPECT_NEAR(weights.trace(), 2.0 + 2.0 * std::cosh(1.0), 1e-14);
}

TEST(MatFunc, ExpTraceEqualsSumOfExponentials) {
  std::mt19937_64 rng(5);
  for (int trial = 0; trial < 20; ++trial) {
    const HermitianMatrix m = random_hermitian(rng, 8);
    const EigenSystem es = eigh(m);
    const double expected = es.values.array().exp().sum();
    EXPECT_NEAR(mat_exp(m).trace(), expected, 1e-11 * expected);
    EXPECT_TRUE(mat_exp(m).matrix().isApprox(mat_exp(m).matrix().adjoint()));
  }
}

TEST(MatFunc, SqrtClampsRoundoffButRejectsNegative) {
  EXPECT_NO_THROW(mat_sqrt(HermitianMatrix::diagonal(Eigen::Vector2d(1.0, -1e-14))));
  EXPECT_THROW(mat_sqrt(HermitianMatrix::diagonal(Eigen::Vector2d(1.0, -1e-3))), std::domain_error);
  EXPECT_THROW(mat_func(HermitianMatrix::diagonal(Eigen::Vector2d(0.0, 1.0)), [](double x) { return std::log(x); }),
               std::domain_error);
}

TEST(DensityMatrix, ClampsAndNormalizes) {
  const DensityMatrix rho = DensityMatrix::from_spectrum(Eigen::Vector3d(2.0, -1e-13, 2.0), ComplexMatrix::Identity(3, 3));
  EXPECT_EQ(rho.probabilities()(0), 0.0);
  EXPECT_NEAR(rho.probabilities().sum(), 1.0, 1e-15);
  EXPECT_NEAR(rho.matrix().trace(), 1.0, 1e-15);
  EXPECT_THROW(DensityMatrix::from_spectrum(Eigen::Vector2d(1.0, -1e-6), ComplexMatrix::Identity(2, 2)),
               std::invalid_argument);
  EXPECT_THROW(DensityMatrix::from_matrix(HermitianMatrix::identity(2)), std::invalid_argument);
}

TEST(Fidelity, SelfOverlapIsOne) {
  std::mt19937_64 rng(13);
  for (int trial = 0; trial < 20; ++trial) {
    const DensityMatrix rho = random_state(rng, 4);
    EXPECT_NEAR(fidelity(rho, rho), 1.0, 1e-12);
  }
  const DensityMatrix pure = pure_basis_state(4, 1);
  EXPECT_NEAR(fidelity(pure, pure), 1.0, 1e-12);
}

TEST(Fidelity, OrthogonalPureStates) {
  EXPECT_NEAR(fidelity(pure_basis_state(4, 0), pure_basis_state(4, 3)), 0.0, 1e-15);
}

TEST(Fidelity, MaximallyMixedVersusPure) {
  ComplexVector psi(2);
  psi << Complex(0.6, 0.0), Complex(0.0, 0.8);
  EXPECT_NEAR(fidelity(DensityMatrix::maximally_mixed(2), DensityMatrix::pure(psi)), 0.5, 1e-14);
}

TEST(Fidelity, SymmetricBoundedAndAgreesWithEigenvalueRoute) {
  std::mt19937_64 rng(17);
  for (int trial = 0; trial < 50; ++trial) {
    const DensityMatrix rho = random_state(rng, 4);
    const DensityMatrix sigma = random_state(rng, 4);
    const double f = fidelity(rho, sigma);
    EXPECT_GE(f, 0.0);
    EXPECT_LE(f, 1.0 + 1e-10);
    EXPECT_NEAR(f, fidelity(sigma, rho), 1e-10);

    // (sum_k sqrt(lambda_k(sqrt(rho) sigma sqrt(rho))))^2 with an independent solver.
    const Eigen::SelfAdjointEigenSolver<ComplexMatrix> root(rho.matrix().matrix());
    const ComplexMatrix sqrt_rho = root.operatorSqrt();
    const Eigen::SelfAdjointEigenSolver<ComplexMatrix> inner(sqrt_rho * sigma.matrix().matrix() * sqrt_rho);
    const double trace_norm = inner.eigenvalues().cwiseMax(0.0).cwiseSqrt().sum();
    EXPECT_NEAR(f, trace_norm * trace_norm, 1e-9);
  }
}

TEST(Fidelity, DimensionMismatch) {
  EXPECT_THROW(fidelity(DensityMatrix::maximally_mixed(2), DensityMatrix::maximally_mixed(4)), std::invalid_argument);
}

TEST(SymmetricMatrix3, StoresUpperTriangleOnly) {
  SymmetricMatrix3 c;
  c.at(2, 0) = 5.0;
  EXPECT_EQ(c(0, 2), 5.0);
  EXPECT_EQ(c.dense(), c.dense().transpose());
  EXPECT_THROW(c(3, 0), std::out_of_range);
}

TEST(MaxEigSym3, DegenerateTopContainsXHat) {
  const TopEigenpair top = max_eig_sym3(SymmetricMatrix3::from_dense(Eigen::Vector3d(4.0, 4.0, 0.0).asDiagonal()));
  EXPECT_NEAR(top.value, 4.0, 1e-15);
  EXPECT_EQ(top.direction, Vec3::UnitX());
}

TEST(MaxEigSym3, ZeroMatrix) {
  const TopEigenpair top = max_eig_sym3(SymmetricMatrix3{});
  EXPECT_EQ(top.value, 0.0);
  EXPECT_EQ(top.direction, Vec3::UnitX());
}

TEST(MaxEigSym3, DegenerateTopWithoutXHat) {
  const TopEigenpair top = max_eig_sym3(SymmetricMatrix3::from_dense(Eigen::Vector3d(0.0, 4.0, 4.0).asDiagonal()));
  EXPECT_NEAR(top.value, 4.0, 1e-15);
  EXPECT_NEAR(top.direction(0), 0.0, 1e-15);
  EXPECT_NEAR(top.direction.norm(), 1.0, 1e-12);
}

TEST(MaxEigSym3, DominatesSampledDirections) {
  std::mt19937_64 rng(19);
  std::uniform_real_distribution<double> u(-0.5, 0.5);
  for (int trial = 0; trial < 100; ++trial) {
    Eigen::Matrix3d m;
    for (int r = 0; r < 3; ++r)
      for (int c = 0; c < 3; ++c) m(r, c) = u(rng);
    const SymmetricMatrix3 c = SymmetricMatrix3::from_dense(m);
    const TopEigenpair top = max_eig_sym3(c);
    const double sampled = sampled_rayleigh_max(c, 10000);
    EXPECT_GE(top.value, sampled - 1e-10);
    EXPECT_NEAR(top.value, sampled, 1e-3);
    EXPECT_NEAR(top.direction.norm(), 1.0, 1e-12);
    EXPECT_NEAR(c.quadratic_form(top.direction), top.value, 1e-10);
    EXPECT_NEAR(top.value, Eigen::SelfAdjointEigenSolver<Eigen::Matrix3d>(c.dense()).eigenvalues()(2), 1e-13);
  }
}
