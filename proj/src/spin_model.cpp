#include "dmqfi/spin_model.hpp"

#include <cmath>
#include <stdexcept>

namespace dmqfi {

namespace {

constexpr Complex kI{0.0, 1.0};

ComplexMatrix kron(const ComplexMatrix& a, const ComplexMatrix& b) {
  ComplexMatrix out(a.rows() * b.rows(), a.cols() * b.cols());
  for (Eigen::Index r = 0; r < a.rows(); ++r)
    for (Eigen::Index c = 0; c < a.cols(); ++c)
      out.block(r * b.rows(), c * b.cols(), b.rows(), b.cols()) = a(r, c) * b;
  return out;
}

ComplexMatrix site_operator(const ComplexMatrix& op, int site, int n_sites) {
  ComplexMatrix out = ComplexMatrix::Identity(1, 1);
  const ComplexMatrix id = ComplexMatrix::Identity(2, 2);
  for (int s = 1; s <= n_sites; ++s) out = kron(out, s == site ? op : id);
  return out;
}

void check_sites(int n_sites) {
  if (n_sites < 1 || n_sites > kMaxSites)
    throw std::invalid_argument("number of sites must be in [1, " + std::to_string(kMaxSites) + "]");
}

HermitianMatrix two_spin_hamiltonian(const ModelParams& p) {
  ComplexMatrix h = ComplexMatrix::Zero(4, 4);
  h(0, 0) = p.B;
  h(1, 1) = p.b;
  h(2, 2) = -p.b;
  h(3, 3) = -p.B;
  h(1, 2) = p.J * Complex(1.0, p.D);
  h(2, 1) = p.J * Complex(1.0, -p.D);
  return HermitianMatrix(h);
}

HermitianMatrix chain_hamiltonian(const ModelParams& p) {
  const int n = p.N;
  const Eigen::Index dim = Eigen::Index{1} << n;
  ComplexMatrix h = ComplexMatrix::Zero(dim, dim);
  const ComplexMatrix sx = pauli(Axis::x), sy = pauli(Axis::y), sz = pauli(Axis::z);
  for (int i = 1; i < n; ++i) {
    const ComplexMatrix xi = site_operator(sx, i, n), xj = site_operator(sx, i + 1, n);
    const ComplexMatrix yi = site_operator(sy, i, n), yj = site_operator(sy, i + 1, n);
    h += 0.5 * p.J * (xi * xj + yi * yj + p.D * (xi * yj - yi * xj));
  }
  for (int i = 1; i <= n; ++i) {
    const double field = (i % 2 == 1) ? p.B + p.b : p.B - p.b;
    h += 0.5 * field * site_operator(sz, i, n);
  }
  return HermitianMatrix(h);
}

ComplexVector basis_state(Eigen::Index index) {
  ComplexVector v = ComplexVector::Zero(4);
  v(index) = 1.0;
  return v;
}

}  // namespace

void ModelParams::validate() const {
  for (double v : {J, B, b, D, T})
    if (!std::isfinite(v)) throw std::invalid_argument("ModelParams: non-finite parameter");
  if (N < 2 || N > kMaxSites)
    throw std::invalid_argument("ModelParams: N must be in [2, " + std::to_string(kMaxSites) + "]");
}

void ModelParams::validate_thermal() const {
  validate();
  if (!(T > 0.0)) throw std::invalid_argument("ModelParams: temperature must be positive");
}

double ModelParams::gamma() const { return std::sqrt(b * b + J * J * (1.0 + D * D)); }

Direction::Direction(const Vec3& n) : n_(n) {
  if (!n.allFinite() || std::abs(n.norm() - 1.0) > 1e-12)
    throw std::invalid_argument("Direction: vector is not unit length");
}

Direction Direction::normalized(const Vec3& v) {
  const double norm = v.norm();
  if (!(norm > 0.0) || !std::isfinite(norm)) throw std::invalid_argument("Direction: zero vector");
  return Direction(v / norm);
}

Direction Direction::along(Axis axis) { return Direction(Vec3::Unit(static_cast<int>(axis))); }

std::string to_string(Axis axis) {
  switch (axis) {
    case Axis::x: return "x";
    case Axis::y: return "y";
    case Axis::z: return "z";
  }
  return "?";
}

ComplexMatrix pauli(Axis axis) {
  ComplexMatrix s = ComplexMatrix::Zero(2, 2);
  switch (axis) {
    case Axis::x:
      s(0, 1) = 1.0;
      s(1, 0) = 1.0;
      break;
    case Axis::y:
      s(0, 1) = -kI;
      s(1, 0) = kI;
      break;
    case Axis::z:
      s(0, 0) = 1.0;
      s(1, 1) = -1.0;
      break;
  }
  return s;
}

HermitianMatrix pauli_site(Axis axis, int site, int n_sites) {
  check_sites(n_sites);
  if (site < 1 || site > n_sites) throw std::out_of_range("pauli_site: site out of range");
  return HermitianMatrix(site_operator(pauli(axis), site, n_sites));
}

HermitianMatrix build_hamiltonian(const ModelParams& params) {
  params.validate();
  return params.N == 2 ? two_spin_hamiltonian(params) : chain_hamiltonian(params);
}

HermitianMatrix collective_operator(const Direction& n, int n_sites) {
  check_sites(n_sites);
  const ComplexMatrix single = n[0] * pauli(Axis::x) + n[1] * pauli(Axis::y) + n[2] * pauli(Axis::z);
  const Eigen::Index dim = Eigen::Index{1} << n_sites;
  ComplexMatrix out = ComplexMatrix::Zero(dim, dim);
  for (int i = 1; i <= n_sites; ++i) out += site_operator(single, i, n_sites);
  return HermitianMatrix(0.5 * out);
}

AnalyticSpectrum analytic_spectrum(const ModelParams& params) {
  params.validate();
  if (params.N != 2) throw std::invalid_argument("analytic_spectrum: requires N = 2");
  const double J = params.J, B = params.B, b = params.b, D = params.D;

  AnalyticSpectrum s;
  s.gamma = params.gamma();
  s.energies = {-B, B, -s.gamma, s.gamma};
  s.vectors[0] = basis_state(3);
  s.vectors[1] = basis_state(0);

  if (J == 0.0) {
    // Middle block diag(b, -b): |01> has energy b, |10> has energy -b.
    s.degenerate_branch = true;
    const bool b_nonnegative = b >= 0.0;
    s.vectors[2] = basis_state(b_nonnegative ? 2 : 1);
    s.vectors[3] = basis_state(b_nonnegative ? 1 : 2);
    return s;
  }

  // gamma - b and gamma + b, each evaluated without cancellation using
  // (gamma - b)(gamma + b) = J^2 (1 + D^2).
  const double jj = J * J * (1.0 + D * D);
  const double gamma_minus_b = b > 0.0 ? jj / (s.gamma + b) : s.gamma - b;
  const double gamma_plus_b = b < 0.0 ? jj / (s.gamma - b) : s.gamma + b;

  const Complex jd = J * (kI + D);
  s.norm1 = std::sqrt(1.0 + std::norm(gamma_minus_b / jd));
  s.norm2 = std::sqrt(1.0 + std::norm(gamma_plus_b / jd));

  ComplexVector low = ComplexVector::Zero(4);
  low(1) = -kI * gamma_minus_b / jd;
  low(2) = 1.0;
  ComplexVector high = ComplexVector::Zero(4);
  high(1) = kI * gamma_plus_b / jd;
  high(2) = 1.0;
  s.vectors[2] = low / s.norm1;
  s.vectors[3] = high / s.norm2;
  return s;
}

}  // namespace dmqfi
