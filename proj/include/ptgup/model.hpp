#pragma once

#include <array>
#include <compare>
#include <complex>
#include <string_view>

namespace ptgup {

using cplx = std::complex<double>;

/// Physical inputs of the coupled oscillator, in natural units (hbar = 1):
///   H = (p_x^2 + p_y^2)/(2m) + (m/2)(wx^2 x^2 + wy^2 y^2) + i*lambda*x*y
/// plus the minimal-length deformation (beta/m)(dx^4 + dy^4 + 2 dx^2 dy^2)
/// treated at first order.
struct ModelParams {
  double mass = 1.0;         // m > 0
  double omega_x = 1.0;      // >= 0
  double omega_y = 2.0;      // >= 0
  double coupling = 0.0;     // lambda, real
  double deformation = 0.0;  // beta >= 0, units length^2

  /// Throws InvalidParameter when a field violates its range.
  void validate() const;
};

/// Quantum-number pair labelling a product eigenstate.
struct StateIndex {
  int n1 = 0;
  int n2 = 0;

  auto operator<=>(const StateIndex&) const = default;
};

enum class PhaseClass {
  Unbroken,            // anisotropic, |lambda| < lambda_c: real spectrum
  Critical,            // |lambda| = lambda_c within tolerance: exceptional point
  Broken,              // |lambda| > lambda_c: conjugate-pair spectrum
  IsotropicBroken,     // wx = wy with lambda != 0: no unbroken window
  DecoupledIsotropic,  // wx = wy, lambda = 0: plain isotropic oscillator
};

/// Lowercase label used in serialized documents.
std::string_view phase_name(PhaseClass phase);

/// Relative half-width of the band around lambda_c classified as Critical.
inline constexpr double kCriticalBandTolerance = 1e-9;

/// 2x2 complex matrix in row-major order, mapping (x,y) -> (X,Y).
struct Rotation2 {
  std::array<cplx, 4> m{};  // [ m[0] m[1] ; m[2] m[3] ]

  std::array<cplx, 2> apply(cplx x, cplx y) const {
    return {m[0] * x + m[1] * y, m[2] * x + m[3] * y};
  }
  /// Transpose, which is the inverse whenever the matrix is orthogonal.
  Rotation2 transposed() const { return Rotation2{{m[0], m[2], m[1], m[3]}}; }
};

/// Everything derived from ModelParams: normal-mode frequencies c1, c2 with
/// alpha_i^2 = m*c_i, the coordinate rotation, and the phase label.
///
/// All complex square roots are taken on the principal branch, which makes
/// c2 = conj(c1) in the broken phase.  For the isotropic system with
/// lambda != 0 the closed-form parametrization is singular; such modes carry
/// modes_available = false and accessors throw ModesUnavailable.
struct DerivedModes {
  double omega_plus_sq = 0.0;   // wy^2 + wx^2
  double omega_minus_sq = 0.0;  // wy^2 - wx^2
  double lambda_crit = 0.0;     // m|w-^2|/2
  PhaseClass phase = PhaseClass::Unbroken;
  bool modes_available = true;

  cplx k_inv{};       // sqrt(1 - 4 lambda^2 / (m^2 w-^4))
  cplx c1{};          // normal-mode frequency of X
  cplx c2{};          // normal-mode frequency of Y
  cplx alpha1_sq{};   // m*c1
  cplx alpha2_sq{};   // m*c2
  Rotation2 rotation{};

  /// True when the rotation is the 45-degree limiting convention used inside
  /// the critical band, where the exact transformation degenerates.  The
  /// choice is convention-dependent (the exceptional point admits none).
  bool rotation_is_limit_convention = false;

  double mass = 1.0;

  /// Throws ModesUnavailable when c1/c2 were withheld.
  void require_available() const;
};

/// Computes all derived quantities.  Never returns NaN: the isotropic
/// coupled case is flagged unavailable instead.
DerivedModes derive_modes(const ModelParams& params);

/// Unperturbed eigenvalue (n1 + 1/2) c1 + (n2 + 1/2) c2.  The imaginary
/// part is exactly zero whenever c1, c2 are real.
cplx energy(const DerivedModes& modes, StateIndex state);

/// Phase classification without computing the full mode data.
PhaseClass classify_phase(const ModelParams& params);

/// Applies the normal-mode rotation to a point.  Complex entries appear in
/// every phase with lambda != 0; the transformation is complex-orthogonal,
/// so X^2 + Y^2 = x^2 + y^2 is preserved exactly.
std::array<cplx, 2> rotate_to_normal(const DerivedModes& modes, double x, double y);

/// Principal-branch square root used throughout: exact for real inputs
/// (negative reals map to +i sqrt|.|, the cut approached from above).
cplx principal_sqrt(cplx z);

}  // namespace ptgup
