#pragma once

#include <complex>
#include <vector>

#include "ptgup/model.hpp"

namespace ptgup::oracle {

/// Default per-mode cutoff: 900x900 matrices diagonalize in well under a
/// second and leave a comfortable convergence margin for n1+n2 <= 6.
inline constexpr int kDefaultCutoff = 30;
/// Default cap on the matrix dimension N^2.
inline constexpr int kDefaultMaxRows = 4096;

/// Full deformed Hamiltonian projected onto the decoupled (wx, wy) product
/// oscillator basis |n1, n2>, n1, n2 < cutoff.  Entries come from exact
/// ladder formulas of the untruncated operator, so the matrix is the exact
/// projection P H P.  Storage is column-major; the matrix is complex
/// symmetric (H^T = H), so the layout never matters for correctness.
struct TruncatedHamiltonian {
  int cutoff = 0;
  ModelParams params;
  std::vector<cplx> matrix;  // dimension() x dimension(), column-major

  int dimension() const { return cutoff * cutoff; }
  int row_of(StateIndex state) const { return state.n1 * cutoff + state.n2; }
  StateIndex state_of(int row) const { return {row / cutoff, row % cutoff}; }
  cplx entry(int row, int col) const {
    return matrix[static_cast<std::size_t>(col) * dimension() + row];
  }
};

/// Assembles the projected Hamiltonian.  Throws ZeroFrequency when either
/// reference frequency vanishes and CutoffTooSmall for cutoff < 8.
TruncatedHamiltonian build_hamiltonian(const ModelParams& params, int cutoff);

/// Dense non-symmetric eigendecomposition, sorted by (Re, Im).
struct Eigensystem {
  std::vector<cplx> values;
  std::vector<cplx> vectors;  // column j is the right eigenvector of values[j]
  int dimension = 0;
  double max_residual = 0.0;  // max_j ||H v_j - E_j v_j|| / ||v_j||

  const cplx* vector(int j) const {
    return vectors.data() + static_cast<std::size_t>(j) * dimension;
  }
};

/// LAPACK zgeev on the dense matrix, plus an explicit residual check
/// (threshold 1e-8).  Throws ResourceGuard when dimension() > max_rows and
/// ConvergenceFailure when the solver or the residual check fails.
Eigensystem diagonalize(const TruncatedHamiltonian& h, int max_rows = kDefaultMaxRows);

/// Finite-difference dE/dbeta at beta = 0 for the eigenvalue belonging to
/// `state`, via a one-sided third-order stencil over beta = 0, h, 2h, 3h
/// (the deformation domain is beta >= 0).  The state is located at beta = 0
/// as the eigenvalue nearest the closed-form energy; at shifted beta it is
/// followed by maximal eigenvector overlap.  Throws TrackingAmbiguous below
/// 0.9 overlap.
cplx beta_slope(const ModelParams& params, StateIndex state, int cutoff, double step);

/// 2D Gauss-Hermite evaluation of <psi_bra| H_I |psi_ket> in normal-mode
/// coordinates, using the fourth-derivative identity for the integrand.
/// Requires real mode parameters (throws BrokenPhaseUnsupported otherwise).
cplx quadrature_matrix_element(const DerivedModes& modes, StateIndex bra, StateIndex ket,
                               const ModelParams& params, int order);

/// Side-by-side comparison of closed-form and numeric eigenvalues.
struct SpectrumComparison {
  std::vector<StateIndex> states;       // compared states, n1+n2 <= max_total
  std::vector<cplx> analytic;           // closed-form energies, sorted by (Re, Im)
  std::vector<cplx> numeric;            // matched numeric eigenvalues (injective match)
  double max_abs_deviation = 0.0;
  double max_rel_deviation = 0.0;
  int cutoff = 0;
  int compared = 0;
};

/// Diagonalizes at the given cutoff and matches every analytic energy with
/// n1+n2 <= max_total to its nearest unused numeric eigenvalue.  max_total
/// must stay within the truncation-safe zone (n1+n2 <= cutoff/2).
SpectrumComparison compare_spectrum(const ModelParams& params, int cutoff, int max_total,
                                    int max_rows = kDefaultMaxRows);

}  // namespace ptgup::oracle
