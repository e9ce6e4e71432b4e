#include "dmqfi/numerics.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <vector>

namespace dmqfi {

namespace {

// Components smaller than this are skipped when choosing the phase anchor.
constexpr double kPhaseAnchorTolerance = 1e-10;

bool all_finite(const ComplexMatrix& m) {
  for (Eigen::Index c = 0; c < m.cols(); ++c)
    for (Eigen::Index r = 0; r < m.rows(); ++r)
      if (!std::isfinite(m(r, c).real()) || !std::isfinite(m(r, c).imag())) return false;
  return true;
}

double conj_if_complex(double x) { return x; }
Complex conj_if_complex(Complex x) { return std::conj(x); }
double abs_value(double x) { return std::abs(x); }
double abs_value(Complex x) { return std::abs(x); }

template <typename Scalar>
using DenseMatrix = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>;

template <typename Scalar>
double off_diagonal_norm(const DenseMatrix<Scalar>& a) {
  double sum = 0.0;
  for (Eigen::Index c = 0; c < a.cols(); ++c)
    for (Eigen::Index r = 0; r < a.rows(); ++r)
      if (r != c) sum += std::norm(a(r, c));
  return std::sqrt(sum);
}

// Cyclic Jacobi on a Hermitian (or real symmetric) matrix. On return `a` is
// diagonal to within the requested tolerance and `v` holds the accumulated
// rotations, so that a_in = v diag(a) v^dagger.
//
// Each rotation is G = D R with D = diag(1, conj(a_pq)/|a_pq|) making the
// (p, q) element real, followed by the classical real Jacobi rotation R.
template <typename Scalar>
void jacobi_diagonalize(DenseMatrix<Scalar>& a, DenseMatrix<Scalar>& v, JacobiControl control) {
  const Eigen::Index n = a.rows();
  v = DenseMatrix<Scalar>::Identity(n, n);
  const double scale = a.norm();
  const double threshold = control.relative_tolerance * scale;

  for (int sweep = 0;; ++sweep) {
    if (off_diagonal_norm(a) <= threshold) return;
    if (sweep == control.max_sweeps)
      throw ConvergenceError("eigh: Jacobi iteration did not converge within " +
                             std::to_string(control.max_sweeps) + " sweeps");

    for (Eigen::Index p = 0; p < n - 1; ++p) {
      for (Eigen::Index q = p + 1; q < n; ++q) {
        const Scalar apq = a(p, q);
        const double mag = abs_value(apq);
        if (mag == 0.0) continue;
        const double app = std::real(a(p, p));
        const double aqq = std::real(a(q, q));
        const Scalar phase = conj_if_complex(apq) / mag;
        const double theta = (aqq - app) / (2.0 * mag);
        double t = 1.0 / (std::abs(theta) + std::sqrt(theta * theta + 1.0));
        if (theta < 0.0) t = -t;
        const double c = 1.0 / std::sqrt(t * t + 1.0);
        const double s = t * c;

        const Scalar g00 = Scalar(c);
        const Scalar g01 = Scalar(s);
        const Scalar g10 = Scalar(-s) * phase;
        const Scalar g11 = Scalar(c) * phase;

        for (Eigen::Index k = 0; k < n; ++k) {
          const Scalar akp = a(k, p);
          const Scalar akq = a(k, q);
          a(k, p) = akp * g00 + akq * g10;
          a(k, q) = akp * g01 + akq * g11;
        }
        for (Eigen::Index k = 0; k < n; ++k) {
          const Scalar apk = a(p, k);
          const Scalar aqk = a(q, k);
          a(p, k) = conj_if_complex(g00) * apk + conj_if_complex(g10) * aqk;
          a(q, k) = conj_if_complex(g01) * apk + conj_if_complex(g11) * aqk;
        }
        a(p, q) = Scalar(0);
        a(q, p) = Scalar(0);
        a(p, p) = Scalar(std::real(a(p, p)));
        a(q, q) = Scalar(std::real(a(q, q)));

        for (Eigen::Index k = 0; k < n; ++k) {
          const Scalar vkp = v(k, p);
          const Scalar vkq = v(k, q);
          v(k, p) = vkp * g00 + vkq * g10;
          v(k, q) = vkp * g01 + vkq * g11;
        }
      }
    }
  }
}

template <typename Scalar>
void fix_phase(Eigen::Ref<Eigen::Matrix<Scalar, Eigen::Dynamic, 1>> col) {
  Eigen::Index anchor = 0;
  double best = 0.0;
  for (Eigen::Index k = 0; k < col.size(); ++k) {
    const double mag = abs_value(col(k));
    if (mag > kPhaseAnchorTolerance) {
      anchor = k;
      break;
    }
    if (mag > best) {
      best = mag;
      anchor = k;
    }
  }
  const double mag = abs_value(col(anchor));
  if (mag == 0.0) return;
  col *= conj_if_complex(col(anchor)) / mag;
  col(anchor) = Scalar(mag);
}

template <typename Scalar>
bool lexicographic_less(const Eigen::Matrix<Scalar, Eigen::Dynamic, 1>& x,
                        const Eigen::Matrix<Scalar, Eigen::Dynamic, 1>& y) {
  for (Eigen::Index k = 0; k < x.size(); ++k) {
    const double xr = std::real(x(k)), yr = std::real(y(k));
    if (xr != yr) return xr < yr;
    const double xi = std::imag(x(k)), yi = std::imag(y(k));
    if (xi != yi) return xi < yi;
  }
  return false;
}

// Sorts eigenpairs ascending, phase-fixes the vectors and orders vectors of
// tied eigenvalues lexicographically.
template <typename Scalar>
void canonicalize(RealVector& values, DenseMatrix<Scalar>& vectors) {
  using Column = Eigen::Matrix<Scalar, Eigen::Dynamic, 1>;
  const Eigen::Index n = values.size();
  for (Eigen::Index k = 0; k < n; ++k) fix_phase<Scalar>(vectors.col(k));

  std::vector<Eigen::Index> order(static_cast<std::size_t>(n));
  std::iota(order.begin(), order.end(), Eigen::Index{0});
  std::stable_sort(order.begin(), order.end(),
                   [&](Eigen::Index i, Eigen::Index j) { return values(i) < values(j); });

  RealVector sorted_values(n);
  DenseMatrix<Scalar> sorted_vectors(vectors.rows(), n);
  for (Eigen::Index k = 0; k < n; ++k) {
    sorted_values(k) = values(order[static_cast<std::size_t>(k)]);
    sorted_vectors.col(k) = vectors.col(order[static_cast<std::size_t>(k)]);
  }

  const double tie = 1e-12 * std::max(1.0, sorted_values.cwiseAbs().maxCoeff());
  Eigen::Index start = 0;
  while (start < n) {
    Eigen::Index end = start + 1;
    while (end < n && sorted_values(end) - sorted_values(end - 1) <= tie) ++end;
    if (end - start > 1) {
      std::vector<Column> cluster;
      for (Eigen::Index k = start; k < end; ++k) cluster.emplace_back(sorted_vectors.col(k));
      std::stable_sort(cluster.begin(), cluster.end(), lexicographic_less<Scalar>);
      for (Eigen::Index k = start; k < end; ++k)
        sorted_vectors.col(k) = cluster[static_cast<std::size_t>(k - start)];
    }
    start = end;
  }
  values = std::move(sorted_values);
  vectors = std::move(sorted_vectors);
}

}  // namespace

HermitianMatrix::HermitianMatrix(ComplexMatrix m) {
  if (m.rows() != m.cols()) throw std::invalid_argument("HermitianMatrix: matrix is not square");
  if (m.rows() == 0) throw std::invalid_argument("HermitianMatrix: empty matrix");
  if (!all_finite(m)) throw std::invalid_argument("HermitianMatrix: non-finite entry");
  m_ = 0.5 * (m + m.adjoint());
}

HermitianMatrix HermitianMatrix::zero(Eigen::Index dim) {
  return HermitianMatrix(ComplexMatrix::Zero(dim, dim));
}

HermitianMatrix HermitianMatrix::identity(Eigen::Index dim) {
  return HermitianMatrix(ComplexMatrix::Identity(dim, dim));
}

HermitianMatrix HermitianMatrix::diagonal(const RealVector& d) {
  return HermitianMatrix(d.cast<Complex>().asDiagonal().toDenseMatrix());
}

HermitianMatrix HermitianMatrix::operator+(const HermitianMatrix& o) const {
  return HermitianMatrix(m_ + o.m_);
}

HermitianMatrix HermitianMatrix::operator-(const HermitianMatrix& o) const {
  return HermitianMatrix(m_ - o.m_);
}

HermitianMatrix HermitianMatrix::operator*(double s) const { return HermitianMatrix(m_ * s); }

ComplexMatrix EigenSystem::reconstruct() const {
  return vectors * values.cast<Complex>().asDiagonal() * vectors.adjoint();
}

SymmetricMatrix3 SymmetricMatrix3::from_dense(const Eigen::Matrix3d& m) {
  SymmetricMatrix3 s;
  for (int r = 0; r < 3; ++r)
    for (int c = r; c < 3; ++c) s.at(r, c) = 0.5 * (m(r, c) + m(c, r));
  return s;
}

int SymmetricMatrix3::index(int r, int c) {
  if (r < 0 || r > 2 || c < 0 || c > 2) throw std::out_of_range("SymmetricMatrix3: axis index");
  if (r > c) std::swap(r, c);
  static constexpr int kOffset[3] = {0, 3, 5};
  return kOffset[r] + (c - r);
}

Eigen::Matrix3d SymmetricMatrix3::dense() const {
  Eigen::Matrix3d m;
  for (int r = 0; r < 3; ++r)
    for (int c = 0; c < 3; ++c) m(r, c) = (*this)(r, c);
  return m;
}

double SymmetricMatrix3::quadratic_form(const Vec3& n) const { return n.dot(dense() * n); }

EigenSystem eigh(const HermitianMatrix& m, JacobiControl control) {
  ComplexMatrix a = m.matrix();
  ComplexMatrix v;
  jacobi_diagonalize<Complex>(a, v, control);
  RealVector values = a.diagonal().real();
  canonicalize<Complex>(values, v);
  return EigenSystem{std::move(values), std::move(v)};
}

HermitianMatrix mat_func(const EigenSystem& es, const std::function<double(double)>& f) {
  RealVector fv(es.dim());
  for (Eigen::Index k = 0; k < es.dim(); ++k) {
    fv(k) = f(es.values(k));
    if (!std::isfinite(fv(k)))
      throw std::domain_error("mat_func: function undefined at eigenvalue " +
                              std::to_string(es.values(k)));
  }
  return HermitianMatrix(es.vectors * fv.cast<Complex>().asDiagonal() * es.vectors.adjoint());
}

HermitianMatrix mat_func(const HermitianMatrix& m, const std::function<double(double)>& f) {
  return mat_func(eigh(m), f);
}

HermitianMatrix mat_exp(const HermitianMatrix& m) {
  return mat_func(m, [](double x) { return std::exp(x); });
}

HermitianMatrix mat_sqrt(const HermitianMatrix& m) {
  const double floor = -1e-12 * std::max(1.0, m.frobenius_norm());
  return mat_func(m, [floor](double x) {
    if (x < 0.0 && x >= floor) return 0.0;
    return std::sqrt(x);  // NaN for genuinely negative input
  });
}

TopEigenpair max_eig_sym3(const SymmetricMatrix3& c) {
  Eigen::MatrixXd a = c.dense();
  Eigen::MatrixXd v;
  jacobi_diagonalize<double>(a, v, JacobiControl{});
  RealVector values = a.diagonal();
  canonicalize<double>(values, v);

  TopEigenpair top;
  top.value = values(2);

  // Projector onto the top eigenspace.
  const double tie = 1e-10 * std::max(1.0, std::abs(top.value));
  Eigen::Matrix3d projector = Eigen::Matrix3d::Zero();
  for (int k = 2; k >= 0 && top.value - values(k) <= tie; --k)
    projector += v.col(k) * v.col(k).transpose();
  const Vec3 x_hat = Vec3::UnitX();
  if ((projector * x_hat - x_hat).norm() <= 1e-10) {
    top.direction = x_hat;
  } else {
    top.direction = v.col(2);
    top.direction.normalize();
  }
  return top;
}

double orthonormality_error(const ComplexMatrix& v) {
  const ComplexMatrix g = v.adjoint() * v - ComplexMatrix::Identity(v.cols(), v.cols());
  return g.cwiseAbs().maxCoeff();
}

double eigen_residual(const HermitianMatrix& m, const EigenSystem& es) {
  double worst = 0.0;
  for (Eigen::Index k = 0; k < es.dim(); ++k) {
    const ComplexVector r = m.matrix() * es.vectors.col(k) - es.values(k) * es.vectors.col(k);
    worst = std::max(worst, r.norm());
  }
  return worst;
}

}  // namespace dmqfi
