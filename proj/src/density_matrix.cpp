#include "dmqfi/density_matrix.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>
#include <vector>

namespace dmqfi {

namespace {

// Clamps small negative weights, rejects larger ones, renormalizes to one.
RealVector clamp_and_normalize(RealVector p) {
  for (Eigen::Index k = 0; k < p.size(); ++k) {
    if (!std::isfinite(p(k))) throw std::invalid_argument("DensityMatrix: non-finite eigenvalue");
    if (p(k) < -DensityMatrix::kClampTolerance)
      throw std::invalid_argument("DensityMatrix: negative eigenvalue " + std::to_string(p(k)));
    if (p(k) < 0.0) p(k) = 0.0;
  }
  const double total = p.sum();
  if (!(total > 0.0)) throw std::invalid_argument("DensityMatrix: zero trace");
  return p / total;
}

}  // namespace

DensityMatrix DensityMatrix::from_matrix(const HermitianMatrix& m) {
  if (std::abs(m.trace() - 1.0) > 1e-10)
    throw std::invalid_argument("DensityMatrix: trace " + std::to_string(m.trace()) + " != 1");
  EigenSystem es = eigh(m);
  es.values = clamp_and_normalize(std::move(es.values));
  return DensityMatrix(m, std::move(es));
}

DensityMatrix DensityMatrix::from_spectrum(const RealVector& weights, const ComplexMatrix& vectors) {
  if (vectors.cols() != weights.size() || vectors.rows() != vectors.cols())
    throw std::invalid_argument("DensityMatrix: spectrum shape mismatch");
  const RealVector p = clamp_and_normalize(weights);

  std::vector<Eigen::Index> order(static_cast<std::size_t>(p.size()));
  std::iota(order.begin(), order.end(), Eigen::Index{0});
  std::stable_sort(order.begin(), order.end(), [&](Eigen::Index i, Eigen::Index j) { return p(i) < p(j); });

  EigenSystem es{RealVector(p.size()), ComplexMatrix(vectors.rows(), vectors.cols())};
  for (Eigen::Index k = 0; k < p.size(); ++k) {
    es.values(k) = p(order[static_cast<std::size_t>(k)]);
    es.vectors.col(k) = vectors.col(order[static_cast<std::size_t>(k)]);
  }
  HermitianMatrix m(es.reconstruct());
  return DensityMatrix(std::move(m), std::move(es));
}

DensityMatrix DensityMatrix::maximally_mixed(Eigen::Index dim) {
  return from_spectrum(RealVector::Constant(dim, 1.0), ComplexMatrix::Identity(dim, dim));
}

DensityMatrix DensityMatrix::pure(const ComplexVector& psi) {
  const double norm = psi.norm();
  if (!(norm > 0.0)) throw std::invalid_argument("DensityMatrix::pure: zero vector");
  const Eigen::Index dim = psi.size();
  // Complete psi to an orthonormal basis; the remaining columns carry zero weight.
  ComplexMatrix basis(dim, dim);
  basis.col(0) = psi / norm;
  Eigen::HouseholderQR<ComplexMatrix> qr(basis.col(0).eval());
  ComplexMatrix q = qr.householderQ() * ComplexMatrix::Identity(dim, dim);
  basis.rightCols(dim - 1) = q.rightCols(dim - 1);
  RealVector weights = RealVector::Zero(dim);
  weights(0) = 1.0;
  return from_spectrum(weights, basis);
}

HermitianMatrix DensityMatrix::sqrt() const {
  return mat_func(spectrum_, [](double p) { return std::sqrt(p); });
}

DensityMatrix DensityMatrix::rotated(const ComplexMatrix& unitary) const {
  return from_spectrum(spectrum_.values, unitary * spectrum_.vectors);
}

double fidelity(const DensityMatrix& rho, const DensityMatrix& sigma) {
  if (rho.dim() != sigma.dim()) throw std::invalid_argument("fidelity: dimension mismatch");
  const ComplexMatrix overlap = rho.sqrt().matrix() * sigma.sqrt().matrix();
  const Eigen::JacobiSVD<ComplexMatrix> svd(overlap);
  const double trace_norm = svd.singularValues().sum();
  return trace_norm * trace_norm;
}

}  // namespace dmqfi
