#pragma once

// Two-spin (and open-chain) Heisenberg XX model with a z-axis
// Dzyaloshinskii-Moriya term and homogeneous/inhomogeneous z fields:
//
//   H = 1/2 { J [sx1 sx2 + sy1 sy2 + D (sx1 sy2 - sy1 sx2)]
//             + (B + b) sz1 + (B - b) sz2 }
//
// Basis convention: |s1 s2 ... sN> with site 1 as the most significant bit
// and sz|0> = +|0>. For two spins the basis order is |00>, |01>, |10>, |11>.
// Energies are in units with the Boltzmann constant k = 1.

#include <array>
#include <string>

#include "dmqfi/numerics.hpp"

namespace dmqfi {

inline constexpr int kMaxSites = 12;

enum class Axis { x = 0, y = 1, z = 2 };

struct ModelParams {
  double J = -1.0;  ///< exchange coupling (J < 0 ferromagnetic, J > 0 antiferromagnetic)
  double B = 0.0;   ///< homogeneous field
  double b = 0.0;   ///< inhomogeneous field
  double D = 0.0;   ///< DM strength along z
  double T = 0.7;   ///< temperature
  int N = 2;        ///< number of spins

  /// Throws std::invalid_argument on non-finite fields or N outside [2, 12].
  void validate() const;
  /// validate() plus T > 0.
  void validate_thermal() const;

  double gamma() const;
};

/// Unit 3-vector, normalized within 1e-12.
class Direction {
 public:
  /// Throws std::invalid_argument unless ||n|| = 1 within 1e-12.
  explicit Direction(const Vec3& n);
  /// Normalizes any non-zero vector.
  static Direction normalized(const Vec3& v);
  static Direction along(Axis axis);

  const Vec3& vector() const { return n_; }
  double operator[](int k) const { return n_(k); }

 private:
  Vec3 n_;
};

/// Exact eigensystem of the two-spin Hamiltonian.
///
/// energies = (-B, B, -gamma, gamma) with eigenvectors |11>, |00> and the two
/// middle-block states normalized by norm1 (N1) and norm2 (N2). With J = 0
/// the middle block is diagonal: energies are -|b|, |b| on |01>, |10>.
struct AnalyticSpectrum {
  double gamma = 0.0;
  std::array<double, 4> energies{};
  std::array<ComplexVector, 4> vectors;
  double norm1 = 1.0;
  double norm2 = 1.0;
  bool degenerate_branch = false;
};

/// 2x2 Pauli matrix.
ComplexMatrix pauli(Axis axis);

/// I x ... x sigma_axis x ... x I with sigma at 1-based `site` of `n_sites`.
HermitianMatrix pauli_site(Axis axis, int site, int n_sites);

/// Two-spin H for N = 2; open chain with (B + b) on odd and (B - b) on even
/// sites for N > 2.
HermitianMatrix build_hamiltonian(const ModelParams& params);

/// J_n = 1/2 sum_i n . sigma^i.
HermitianMatrix collective_operator(const Direction& n, int n_sites);

AnalyticSpectrum analytic_spectrum(const ModelParams& params);

std::string to_string(Axis axis);

}  // namespace dmqfi
