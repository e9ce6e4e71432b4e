#include "dmqfi/thermal_state.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace dmqfi {

namespace {

constexpr double kGroundDegeneracy = 1e-10;

// sinh(x)/x near zero.
double sinhc_small(double x) { return 1.0 + x * x / 6.0; }

}  // namespace

ClosedFormFactors closed_form_factors(const ModelParams& params) {
  params.validate_thermal();
  const double g = params.gamma() / params.T;
  ClosedFormFactors f;
  f.gamma_c = std::cosh(g);
  f.gamma_s = std::sinh(g);
  f.Z = 2.0 * std::cosh(params.B / params.T) + 2.0 * f.gamma_c;
  return f;
}

DensityMatrix gibbs_state(const HermitianMatrix& h, double temperature) {
  if (!(temperature > 0.0) || !std::isfinite(temperature))
    throw std::invalid_argument("gibbs_state: temperature must be positive and finite");
  const EigenSystem es = eigh(h);
  const double e_min = es.values(0);
  RealVector weights(es.dim());
  for (Eigen::Index k = 0; k < es.dim(); ++k) weights(k) = std::exp(-(es.values(k) - e_min) / temperature);
  return DensityMatrix::from_spectrum(weights, es.vectors);
}

DensityMatrix closed_form_state(const ModelParams& params) {
  params.validate_thermal();
  if (params.N != 2) throw std::invalid_argument("closed_form_state: requires N = 2");
  const double J = params.J, B = params.B, b = params.b, D = params.D, T = params.T;
  const double gamma = params.gamma();
  const double beta_b = B / T;
  const double beta_g = gamma / T;
  const double shift = std::max(std::abs(beta_b), beta_g);

  // Every quantity below carries an extra factor exp(-shift).
  const double e_minus_b = std::exp(-beta_b - shift);
  const double e_plus_b = std::exp(beta_b - shift);
  const double cosh_b = 0.5 * (e_plus_b + e_minus_b);
  const double gamma_c = 0.5 * (std::exp(beta_g - shift) + std::exp(-beta_g - shift));
  // gamma_s / gamma, continuous through gamma = 0.
  const double gamma_s_over_gamma =
      beta_g < 1e-4 ? std::exp(-shift) * sinhc_small(beta_g) / T
                    : 0.5 * (std::exp(beta_g - shift) - std::exp(-beta_g - shift)) / gamma;

  const double denominator = 2.0 * (cosh_b + gamma_c);
  const Complex i{0.0, 1.0};

  ComplexMatrix rho = ComplexMatrix::Zero(4, 4);
  rho(0, 0) = e_minus_b / denominator;
  rho(1, 1) = (gamma_c - b * gamma_s_over_gamma) / denominator;
  rho(2, 2) = (gamma_c + b * gamma_s_over_gamma) / denominator;
  rho(3, 3) = e_plus_b / denominator;
  rho(1, 2) = i * (i - D) * J * gamma_s_over_gamma / denominator;
  rho(2, 1) = i * (i + D) * J * gamma_s_over_gamma / denominator;
  return DensityMatrix::from_matrix(HermitianMatrix(rho));
}

DensityMatrix ground_state_limit(const ModelParams& params) {
  params.validate();
  const EigenSystem es = eigh(build_hamiltonian(params));
  const double e_min = es.values(0);
  RealVector weights(es.dim());
  for (Eigen::Index k = 0; k < es.dim(); ++k)
    weights(k) = es.values(k) - e_min <= kGroundDegeneracy ? 1.0 : 0.0;
  return DensityMatrix::from_spectrum(weights, es.vectors);
}

}  // namespace dmqfi
