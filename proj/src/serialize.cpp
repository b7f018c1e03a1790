#include "ptgup/serialize.hpp"

#include <charconv>
#include <cmath>
#include <limits>
#include <system_error>

#include "ptgup/errors.hpp"
#include "ptgup/oracle.hpp"

namespace ptgup::serialize {

std::string format_double(double v) {
  char buf[40];
  const auto res = std::to_chars(buf, buf + sizeof(buf), v, std::chars_format::general, 17);
  return std::string(buf, res.ptr);
}

json params_json(const ModelParams& params) {
  return json{{"m", params.mass},
              {"wx", params.omega_x},
              {"wy", params.omega_y},
              {"lambda", params.coupling},
              {"beta", params.deformation}};
}

json spectrum_json(const ModelParams& params, int n_max) {
  if (n_max < 0) throw InvalidParameter("n_max must be nonnegative");
  const DerivedModes modes = derive_modes(params);
  modes.require_available();

  json states = json::array();
  for (int total = 0; total <= n_max; ++total) {
    for (int n1 = 0; n1 <= total; ++n1) {
      const StateIndex s{n1, total - n1};
      const cplx e = energy(modes, s);
      const cplx de = delta_energy(modes, s, params);
      states.push_back(json{{"n1", s.n1},
                            {"n2", s.n2},
                            {"E_re", e.real()},
                            {"E_im", e.imag()},
                            {"dE_re", de.real()},
                            {"dE_im", de.imag()}});
    }
  }
  return json{{"params", params_json(params)},
              {"phase", std::string(phase_name(modes.phase))},
              {"lambda_crit", modes.lambda_crit},
              {"states", states}};
}

std::string sweep_csv(const ModelParams& base, double lambda_lo, double lambda_hi, int steps) {
  if (!(lambda_lo <= lambda_hi)) throw InvalidParameter("sweep needs lambda_lo <= lambda_hi");
  if (steps < 2) throw InvalidParameter("sweep needs at least 2 steps");
  if (lambda_lo == lambda_hi) throw InvalidParameter("sweep range is a single point");

  std::string out = "lambda,phase,c1_re,c1_im,c2_re,c2_im,E00_re,E00_im,dE00_re,dE00_im\n";
  const double nan = std::numeric_limits<double>::quiet_NaN();
  for (int i = 0; i < steps; ++i) {
    ModelParams p = base;
    p.coupling = lambda_lo + (lambda_hi - lambda_lo) * static_cast<double>(i) / (steps - 1);
    const DerivedModes modes = derive_modes(p);
    cplx c1{nan, nan}, c2{nan, nan}, e{nan, nan}, de{nan, nan};
    if (modes.modes_available) {
      c1 = modes.c1;
      c2 = modes.c2;
      e = energy(modes, {0, 0});
      de = delta_energy(modes, {0, 0}, p);
    }
    out += format_double(p.coupling);
    out += ',';
    out += phase_name(modes.phase);
    for (const double v : {c1.real(), c1.imag(), c2.real(), c2.imag(), e.real(), e.imag(),
                           de.real(), de.imag()}) {
      out += ',';
      out += format_double(v);
    }
    out += '\n';
  }
  return out;
}

namespace {

json state_value_array(const std::map<StateIndex, cplx>& entries) {
  json arr = json::array();
  for (const auto& [s, v] : entries) {
    arr.push_back(json{{"m1", s.n1}, {"m2", s.n2}, {"re", v.real()}, {"im", v.imag()}});
  }
  return arr;
}

}  // namespace

json correction_json(const ModelParams& params, StateIndex state) {
  const DerivedModes modes = derive_modes(params);
  const CorrectionReport report = wavefunction_correction(modes, state, params);
  return json{{"params", params_json(params)},
              {"phase", std::string(phase_name(modes.phase))},
              {"n1", state.n1},
              {"n2", state.n2},
              {"dE_re", report.delta_E.real()},
              {"dE_im", report.delta_E.imag()},
              {"matrix_elements", state_value_array(report.matrix_elements)},
              {"M_coefficients", state_value_array(report.M_coefficients)},
              {"pt_preserved", report.pt_preserved}};
}

namespace {

json pt_fields(const GridSamples& grid, ParityAxis axis) {
  const PtEigenvalueEstimate est = pt_eigenvalue(grid, axis);
  return json{{"re", est.eigenvalue.real()},
              {"im", est.eigenvalue.imag()},
              {"max_dev", est.max_relative_deviation}};
}

}  // namespace

json wavefunction_json(const ModelParams& params, StateIndex state, int points_per_axis,
                       double extent) {
  const DerivedModes modes = derive_modes(params);
  modes.require_available();
  if (extent <= 0.0) extent = default_grid_extent(modes);

  GridSamples bare = make_symmetric_grid(points_per_axis, extent);
  sample_wavefunction(modes, state, params, false, bare);
  GridSamples corrected = make_symmetric_grid(points_per_axis, extent);
  sample_wavefunction(modes, state, params, true, corrected);

  json psi_re = json::array(), psi_im = json::array();
  json cor_re = json::array(), cor_im = json::array();
  for (std::size_t i = 0; i < bare.values.size(); ++i) {
    psi_re.push_back(bare.values[i].real());
    psi_im.push_back(bare.values[i].imag());
    cor_re.push_back(corrected.values[i].real());
    cor_im.push_back(corrected.values[i].imag());
  }

  return json{{"params", params_json(params)},
              {"n1", state.n1},
              {"n2", state.n2},
              {"grid", json{{"points_per_axis", points_per_axis},
                            {"extent", extent},
                            {"xs", bare.xs},
                            {"ys", bare.ys},
                            {"layout", "row-major over (x, y)"}}},
              {"psi_re", psi_re},
              {"psi_im", psi_im},
              {"corrected_re", cor_re},
              {"corrected_im", cor_im},
              {"pt_x", pt_fields(bare, ParityAxis::X)},
              {"pt_y", pt_fields(bare, ParityAxis::Y)},
              {"corrected_pt_x", pt_fields(corrected, ParityAxis::X)},
              {"corrected_pt_y", pt_fields(corrected, ParityAxis::Y)}};
}

json verify_json(const verify::VerifyReport& report) {
  json checks = json::array();
  for (const auto& c : report.checks) {
    json entry{{"name", c.name},
               {"pass", c.pass},
               {"max_dev", c.max_dev},
               {"tolerance", c.tolerance}};
    if (!c.detail.empty()) entry["detail"] = c.detail;
    checks.push_back(entry);
  }
  return json{{"checks", checks}, {"all_pass", report.all_pass}};
}

}  // namespace ptgup::serialize
