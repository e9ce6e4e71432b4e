#pragma once

#include "dmqfi/density_matrix.hpp"
#include "dmqfi/spin_model.hpp"

namespace dmqfi {

/// gamma_c = cosh(gamma/T), gamma_s = sinh(gamma/T) and the partition
/// function Z = 2 cosh(B/T) + 2 gamma_c of the two-spin model. These
/// overflow to +inf once gamma/T or |B|/T exceed ~710; closed_form_state
/// does not use them directly for that reason.
struct ClosedFormFactors {
  double gamma_c = 1.0;
  double gamma_s = 0.0;
  double Z = 4.0;
};

ClosedFormFactors closed_form_factors(const ModelParams& params);

/// exp(-H/T) / Tr exp(-H/T). The exponent is shifted by the smallest
/// eigenvalue of H so no weight overflows. Throws std::invalid_argument for
/// T <= 0; use ground_state_limit for zero temperature.
DensityMatrix gibbs_state(const HermitianMatrix& h, double temperature);

/// The two-spin thermal state written out entry by entry:
///
///   rho_11 = e^{-B/T} / 2(cosh B/T + gamma_c)
///   rho_22 = (gamma_c - b gamma_s/gamma) / 2(cosh B/T + gamma_c)
///   rho_33 = (gamma_c + b gamma_s/gamma) / 2(cosh B/T + gamma_c)
///   rho_44 = e^{B/T} / 2(cosh B/T + gamma_c)
///   rho_23 = i(i - D) J gamma_s / 2 gamma (cosh B/T + gamma_c),  rho_32 = conj
///
/// Numerator and denominator are scaled by exp(-max(|B|, gamma)/T) before
/// evaluation. At gamma = 0 the ratio gamma_s/gamma takes its limit 1/T.
DensityMatrix closed_form_state(const ModelParams& params);

/// Equal-weight mixture over the eigenvectors of H whose energies lie
/// within 1e-10 of the minimum.
DensityMatrix ground_state_limit(const ModelParams& params);

}  // namespace dmqfi
