#include "ptgup/perturbation.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

#include "ptgup/errors.hpp"
#include "ptgup/hermite.hpp"

namespace ptgup {

namespace {

using std::int64_t;

std::string pair_str(StateIndex s) {
  return "(" + std::to_string(s.n1) + "," + std::to_string(s.n2) + ")";
}

}  // namespace

double LadderElement::value() const {
  return static_cast<double>(factor) * std::sqrt(static_cast<double>(radicand));
}

LadderElement ladder_position_element(int m, int n) {
  if (m < 0 || n < 0) return {0, 1};
  if (m == n + 1) return {1, static_cast<int64_t>(n) + 1};
  if (m == n - 1) return {1, n};
  return {0, 1};
}

LadderElement ladder_position_sq_element(int m, int n) {
  if (m < 0 || n < 0) return {0, 1};
  const auto k = static_cast<int64_t>(n);
  if (m == n) return {2 * k + 1, 1};
  if (m == n + 2) return {1, (k + 1) * (k + 2)};
  if (m == n - 2) return {1, k * (k - 1)};
  return {0, 1};
}

LadderElement ladder_derivative_sq_element(int m, int n) {
  if (m < 0 || n < 0) return {0, 1};
  const auto k = static_cast<int64_t>(n);
  if (m == n) return {-(2 * k + 1), 1};
  if (m == n + 2) return {1, (k + 1) * (k + 2)};
  if (m == n - 2) return {1, k * (k - 1)};
  return {0, 1};
}

LadderElement ladder_derivative_quartic_element(int m, int n) {
  if (m < 0 || n < 0) return {0, 1};
  const auto k = static_cast<int64_t>(n);
  if (m == n) return {3 * (2 * k * k + 2 * k + 1), 1};
  if (m == n + 2) return {-2 * (2 * k + 3), (k + 1) * (k + 2)};
  if (m == n - 2) return {-2 * (2 * k - 1), k * (k - 1)};
  if (m == n + 4) return {1, (k + 1) * (k + 2) * (k + 3) * (k + 4)};
  if (m == n - 4) return {1, k * (k - 1) * (k - 2) * (k - 3)};
  return {0, 1};
}

std::vector<StateIndex> selection_rule_offsets() {
  return {{0, 0},  {2, 0},  {-2, 0}, {4, 0},  {-4, 0}, {0, 2},  {0, -2},
          {0, 4},  {0, -4}, {2, 2},  {-2, -2}, {2, -2}, {-2, 2}};
}

bool selection_rule_allows(StateIndex bra, StateIndex ket) {
  const int d1 = bra.n1 - ket.n1;
  const int d2 = bra.n2 - ket.n2;
  if (d1 % 2 != 0 || d2 % 2 != 0) return false;
  return std::abs(d1) + std::abs(d2) <= 4;
}

DeltaEnergyWeights delta_energy_weights(StateIndex state) {
  const auto n1 = static_cast<int64_t>(state.n1);
  const auto n2 = static_cast<int64_t>(state.n2);
  return {
      Rational(6 * n1 * n1 + 6 * n1 + 3, 2),  // 3(n1^2 + n1 + 1/2)
      Rational(6 * n2 * n2 + 6 * n2 + 3, 2),
      Rational((2 * n1 + 1) * (2 * n2 + 1)),
  };
}

cplx delta_energy(const DerivedModes& modes, StateIndex state, const ModelParams& params,
                  DeltaEnergyVariant variant) {
  modes.require_available();
  const DeltaEnergyWeights w = delta_energy_weights(state);
  const cplx a1_sq = modes.alpha1_sq;
  const cplx a2_sq = variant == DeltaEnergyVariant::Alpha1Only ? modes.alpha1_sq : modes.alpha2_sq;
  const cplx sum = w.alpha1_quartic.value() * a1_sq * a1_sq +
                   w.alpha2_quartic.value() * a2_sq * a2_sq +
                   w.cross.value() * modes.alpha1_sq * modes.alpha2_sq;
  return params.deformation / (2.0 * params.mass) * sum;
}

cplx h_int_matrix_element(const DerivedModes& modes, StateIndex bra, StateIndex ket,
                          const ModelParams& params) {
  modes.require_available();

  // d/dX = sqrt(alpha1^2/2) (a - a*), so dX^4 -> (alpha1^4/4) F and
  // dX^2 -> (alpha1^2/2) G per mode; the deformation is rotation-invariant:
  // dx^4 + dy^4 + 2 dx^2 dy^2 = dX^4 + dY^4 + 2 dX^2 dY^2.  Every factor is
  // an exact ladder table, so elements outside the selection rule come out
  // exactly zero without a short-circuit.
  cplx total = 0.0;
  const cplx a1_sq = modes.alpha1_sq;
  const cplx a2_sq = modes.alpha2_sq;
  if (bra.n2 == ket.n2) {
    total += 0.25 * a1_sq * a1_sq * ladder_derivative_quartic_element(bra.n1, ket.n1).value();
  }
  if (bra.n1 == ket.n1) {
    total += 0.25 * a2_sq * a2_sq * ladder_derivative_quartic_element(bra.n2, ket.n2).value();
  }
  total += 0.5 * a1_sq * a2_sq * ladder_derivative_sq_element(bra.n1, ket.n1).value() *
           ladder_derivative_sq_element(bra.n2, ket.n2).value();
  return params.deformation / params.mass * total;
}

CorrectionReport wavefunction_correction(const DerivedModes& modes, StateIndex state,
                                         const ModelParams& params) {
  modes.require_available();
  if (state.n1 < 0 || state.n2 < 0) throw InvalidParameter("state indices must be nonnegative");
  if (modes.phase == PhaseClass::Critical) {
    throw DegeneracyError("critical coupling: modes coalesce (c1 = c2), first-order "
                          "denominators for pairs like " +
                          pair_str({state.n1 + 2, state.n2}) + " <-> " +
                          pair_str({state.n1, state.n2 + 2}) + " vanish");
  }

  CorrectionReport report;
  report.state = state;
  report.delta_E = delta_energy(modes, state, params);

  const cplx e_state = energy(modes, state);
  const double scale = std::max(1.0, std::abs(e_state));

  for (const StateIndex offset : selection_rule_offsets()) {
    const StateIndex m{state.n1 + offset.n1, state.n2 + offset.n2};
    if (m.n1 < 0 || m.n2 < 0) continue;
    const cplx element = h_int_matrix_element(modes, m, state, params);
    report.matrix_elements[m] = element;
    if (m == state) continue;
    const cplx denom = e_state - energy(modes, m);
    if (std::abs(denom) < kDegeneracyTolerance * scale) {
      throw DegeneracyError("vanishing first-order denominator: E" + pair_str(state) +
                            " - E" + pair_str(m) + " = 0 within tolerance");
    }
    report.M_coefficients[m] = element / denom;
  }

  // Observation: in a PT-unbroken spectrum the mixing coefficients are real,
  // so the corrected state keeps the PT eigenvalue of the bare state.
  double max_im = std::abs(report.delta_E.imag());
  double max_mag = std::abs(report.delta_E);
  for (const auto& [key, value] : report.M_coefficients) {
    max_im = std::max(max_im, std::abs(value.imag()));
    max_mag = std::max(max_mag, std::abs(value));
  }
  report.pt_preserved = max_im <= 1e-12 * std::max(1.0, max_mag);
  return report;
}

namespace {

// Expanded form of a (possibly corrected) eigenfunction: basis states of the
// shared mode system with scalar coefficients.
struct WavefunctionTerms {
  std::vector<std::pair<StateIndex, cplx>> terms;
  cplx alpha1;  // principal sqrt of alpha1_sq
  cplx alpha2;
};

cplx normalization(cplx alpha1, cplx alpha2, StateIndex s) {
  const double n_fact = std::tgamma(s.n1 + 1.0) * std::tgamma(s.n2 + 1.0);
  const double two_pow = std::pow(2.0, s.n1 + s.n2);
  return principal_sqrt(alpha1 * alpha2 / (n_fact * std::numbers::pi * two_pow));
}

WavefunctionTerms collect_terms(const DerivedModes& modes, StateIndex state,
                                const ModelParams& params, bool include_correction) {
  modes.require_available();
  if (state.n1 < 0 || state.n2 < 0) throw InvalidParameter("state indices must be nonnegative");
  WavefunctionTerms wf;
  wf.alpha1 = principal_sqrt(modes.alpha1_sq);
  wf.alpha2 = principal_sqrt(modes.alpha2_sq);
  wf.terms.emplace_back(state, cplx{1.0, 0.0});
  if (include_correction) {
    const CorrectionReport report = wavefunction_correction(modes, state, params);
    for (const auto& [m, coeff] : report.M_coefficients) {
      if (coeff != cplx{0.0, 0.0}) wf.terms.emplace_back(m, coeff);
    }
  }
  for (auto& [s, coeff] : wf.terms) coeff *= normalization(wf.alpha1, wf.alpha2, s);
  return wf;
}

cplx evaluate_terms(const DerivedModes& modes, const WavefunctionTerms& wf, double x, double y) {
  const auto [X, Y] = modes.rotation.apply(x, y);
  const cplx s1 = wf.alpha1 * X;
  const cplx s2 = wf.alpha2 * Y;
  const cplx gauss = std::exp(-0.5 * (modes.alpha1_sq * X * X + modes.alpha2_sq * Y * Y));
  cplx acc = 0.0;
  for (const auto& [s, coeff] : wf.terms) {
    acc += coeff * hermite::hermite_eval(s.n1, s1) * hermite::hermite_eval(s.n2, s2);
  }
  return acc * gauss;
}

}  // namespace

cplx evaluate_wavefunction(const DerivedModes& modes, StateIndex state, double x, double y,
                           bool include_correction, const ModelParams& params) {
  const WavefunctionTerms wf = collect_terms(modes, state, params, include_correction);
  return evaluate_terms(modes, wf, x, y);
}

GridSamples make_symmetric_grid(int points_per_axis, double extent) {
  if (points_per_axis < 3 || points_per_axis % 2 == 0) {
    throw InvalidParameter("grid needs an odd point count >= 3 per axis");
  }
  if (!(extent > 0.0) || !std::isfinite(extent)) {
    throw InvalidParameter("grid extent must be positive and finite");
  }
  GridSamples grid;
  grid.xs.assign(points_per_axis, 0.0);
  // Build from the positive half so xs[i] == -xs[last - i] holds bitwise.
  for (int i = 0; i < points_per_axis / 2; ++i) {
    const double v =
        extent * static_cast<double>(points_per_axis - 1 - 2 * i) / (points_per_axis - 1);
    grid.xs[i] = -v;
    grid.xs[points_per_axis - 1 - i] = v;
  }
  grid.ys = grid.xs;
  grid.values.assign(static_cast<std::size_t>(points_per_axis) * points_per_axis, cplx{});
  return grid;
}

double default_grid_extent(const DerivedModes& modes) {
  modes.require_available();
  const double a = std::min(modes.alpha1_sq.real(), modes.alpha2_sq.real());
  return 4.5 / std::sqrt(std::max(a, 1e-6));
}

void sample_wavefunction(const DerivedModes& modes, StateIndex state, const ModelParams& params,
                         bool include_correction, GridSamples& grid) {
  const WavefunctionTerms wf = collect_terms(modes, state, params, include_correction);
  for (std::size_t ix = 0; ix < grid.xs.size(); ++ix) {
    for (std::size_t iy = 0; iy < grid.ys.size(); ++iy) {
      grid.at(ix, iy) = evaluate_terms(modes, wf, grid.xs[ix], grid.ys[iy]);
    }
  }
}

namespace {

void require_mirror(const std::vector<double>& axis, const char* name) {
  const std::size_t n = axis.size();
  const double scale = n == 0 ? 1.0 : std::max(1.0, std::abs(axis.front()));
  for (std::size_t i = 0; i < n; ++i) {
    if (std::abs(axis[i] + axis[n - 1 - i]) > 1e-12 * scale) {
      throw AsymmetricGrid(std::string(name) + " axis is not symmetric about zero");
    }
  }
}

}  // namespace

GridSamples pt_apply(const GridSamples& samples, ParityAxis axis) {
  GridSamples out;
  out.xs = samples.xs;
  out.ys = samples.ys;
  out.values.assign(samples.values.size(), cplx{});
  const std::size_t nx = samples.xs.size();
  const std::size_t ny = samples.ys.size();
  if (axis == ParityAxis::X) {
    require_mirror(samples.xs, "x");
  } else {
    require_mirror(samples.ys, "y");
  }
  for (std::size_t ix = 0; ix < nx; ++ix) {
    for (std::size_t iy = 0; iy < ny; ++iy) {
      const cplx source =
          axis == ParityAxis::X ? samples.at(nx - 1 - ix, iy) : samples.at(ix, ny - 1 - iy);
      out.at(ix, iy) = std::conj(source);
    }
  }
  return out;
}

PtEigenvalueEstimate pt_eigenvalue(const GridSamples& samples, ParityAxis axis) {
  const GridSamples transformed = pt_apply(samples, axis);
  cplx inner = 0.0;
  double norm_sq = 0.0;
  double peak = 0.0;
  for (std::size_t i = 0; i < samples.values.size(); ++i) {
    inner += transformed.values[i] * std::conj(samples.values[i]);
    norm_sq += std::norm(samples.values[i]);
    peak = std::max(peak, std::abs(samples.values[i]));
  }
  PtEigenvalueEstimate estimate;
  if (norm_sq == 0.0 || peak == 0.0) return estimate;
  estimate.eigenvalue = inner / norm_sq;
  for (std::size_t i = 0; i < samples.values.size(); ++i) {
    const double dev = std::abs(transformed.values[i] - estimate.eigenvalue * samples.values[i]);
    estimate.max_relative_deviation = std::max(estimate.max_relative_deviation, dev / peak);
  }
  return estimate;
}

}  // namespace ptgup
