#pragma once

#include <cstdint>
#include <map>
#include <vector>

#include "ptgup/model.hpp"
#include "ptgup/rational.hpp"

namespace ptgup {

/// Exact number-basis matrix element of a ladder monomial, stored as
/// factor * sqrt(radicand) so the tables stay exact until evaluation.
struct LadderElement {
  std::int64_t factor = 0;
  std::int64_t radicand = 1;

  double value() const;
};

/// <m|(a + a*)|n>  (single power; used for position couplings).
LadderElement ladder_position_element(int m, int n);
/// <m|(a + a*)^2|n>: diagonal +(2n+1), offsets +-2 carry sqrt factors.
LadderElement ladder_position_sq_element(int m, int n);
/// <m|(a - a*)^2|n>: diagonal -(2n+1); derivative realization d = alpha/sqrt2 (a - a*).
LadderElement ladder_derivative_sq_element(int m, int n);
/// <m|(a - a*)^4|n>: diagonal 3(2n^2+2n+1); support at offsets {0,+-2,+-4}.
LadderElement ladder_derivative_quartic_element(int m, int n);

/// Offset pairs (m1-n1, m2-n2) at which the deformation operator has
/// support; 12 off-diagonal pairs plus the diagonal.
std::vector<StateIndex> selection_rule_offsets();
bool selection_rule_allows(StateIndex bra, StateIndex ket);

/// Exact rational weights of the first-order energy shift,
///   dE = (beta/2m) [ a1 * alpha1^4 + a2 * alpha2^4 + cross * alpha1^2 alpha2^2 ],
/// a_i = 3(n_i^2 + n_i + 1/2), cross = (2 n1 + 1)(2 n2 + 1).
struct DeltaEnergyWeights {
  Rational alpha1_quartic;
  Rational alpha2_quartic;
  Rational cross;
};

DeltaEnergyWeights delta_energy_weights(StateIndex state);

/// Test hook for the verification harness: Alpha1Only intentionally weighs
/// both quartic terms with alpha1^4 so the oracle can demonstrate it
/// discriminates against that (wrong) variant.
enum class DeltaEnergyVariant { Standard, Alpha1Only };

/// Closed-form first-order energy shift.  Throws ModesUnavailable.
cplx delta_energy(const DerivedModes& modes, StateIndex state, const ModelParams& params,
                  DeltaEnergyVariant variant = DeltaEnergyVariant::Standard);

/// <psi_bra| H_I |psi_ket> under the bilinear (non-conjugating) pairing,
/// evaluated by exact ladder algebra at the (possibly complex) mode
/// parameters.  Exactly zero outside the selection rule.
cplx h_int_matrix_element(const DerivedModes& modes, StateIndex bra, StateIndex ket,
                          const ModelParams& params);

/// Relative tolerance below which a first-order denominator counts as zero.
inline constexpr double kDegeneracyTolerance = 1e-9;

/// First-order correction data for one state.
struct CorrectionReport {
  StateIndex state;
  cplx delta_E{};
  /// Selection-allowed elements <psi_m|H_I|psi_n>, diagonal included.
  std::map<StateIndex, cplx> matrix_elements;
  /// Mixing coefficients M_m = <psi_m|H_I|psi_n> / (E_n - E_m), diagonal excluded.
  std::map<StateIndex, cplx> M_coefficients;
  bool pt_preserved = false;
};

/// Builds the full report.  Throws DegeneracyError inside the critical band
/// and whenever a selection-allowed denominator vanishes (the message names
/// the offending pair); throws ModesUnavailable for withheld modes.
CorrectionReport wavefunction_correction(const DerivedModes& modes, StateIndex state,
                                         const ModelParams& params);

/// psi_{n1,n2}(x,y) = N exp(-alpha1^2 X^2/2 - alpha2^2 Y^2/2)
///                      H_{n1}(alpha1 X) H_{n2}(alpha2 Y)
/// with N = sqrt(alpha1 alpha2 / (n1! n2! pi 2^{n1+n2})) and (X,Y) the
/// rotated coordinates.  include_correction adds sum_m M_m psi_m.
cplx evaluate_wavefunction(const DerivedModes& modes, StateIndex state, double x, double y,
                           bool include_correction, const ModelParams& params);

/// Samples on a rectangular grid, value(ix, iy) = values[ix * ys.size() + iy].
struct GridSamples {
  std::vector<double> xs;
  std::vector<double> ys;
  std::vector<cplx> values;

  cplx& at(std::size_t ix, std::size_t iy) { return values[ix * ys.size() + iy]; }
  const cplx& at(std::size_t ix, std::size_t iy) const { return values[ix * ys.size() + iy]; }
};

enum class ParityAxis { X, Y };

/// Symmetric grid [-extent, extent] with an odd point count per axis.
GridSamples make_symmetric_grid(int points_per_axis, double extent);

/// Auto extent covering the Gaussian support of low-lying states.
double default_grid_extent(const DerivedModes& modes);

/// Samples psi (optionally corrected) over the grid coordinates.
void sample_wavefunction(const DerivedModes& modes, StateIndex state, const ModelParams& params,
                         bool include_correction, GridSamples& grid);

/// (PT psi)(x,y) = conj(psi(-x,y)) or conj(psi(x,-y)).  The grid must be
/// symmetric under the chosen parity; otherwise AsymmetricGrid is thrown.
GridSamples pt_apply(const GridSamples& samples, ParityAxis axis);

/// Least-squares scalar s with PT psi ~ s psi plus the worst pointwise
/// deviation, normalized by the largest sample magnitude.
struct PtEigenvalueEstimate {
  cplx eigenvalue{};
  double max_relative_deviation = 0.0;
};

PtEigenvalueEstimate pt_eigenvalue(const GridSamples& samples, ParityAxis axis);

}  // namespace ptgup
