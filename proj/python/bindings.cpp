#include <complex>

#include <pybind11/complex.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "ptgup/errors.hpp"
#include "ptgup/model.hpp"
#include "ptgup/oracle.hpp"
#include "ptgup/perturbation.hpp"
#include "ptgup/verify.hpp"

namespace py = pybind11;
using namespace pybind11::literals;

using ptgup::cplx;
using ptgup::DerivedModes;
using ptgup::ModelParams;
using ptgup::StateIndex;

namespace {

ModelParams make_params(double m, double wx, double wy, double lam, double beta) {
  ModelParams p;
  p.mass = m;
  p.omega_x = wx;
  p.omega_y = wy;
  p.coupling = lam;
  p.deformation = beta;
  p.validate();
  return p;
}

}  // namespace

PYBIND11_MODULE(_core, mod) {
  mod.doc() = "2D oscillator with imaginary xy coupling: exact spectrum, PT phases, "
              "first-order minimal-length corrections, and a dense-basis oracle";

  py::register_exception<ptgup::Error>(mod, "DomainError");

  py::class_<ModelParams>(mod, "ModelParams")
      .def(py::init(&make_params), "m"_a = 1.0, "wx"_a = 1.0, "wy"_a = 2.0, "lam"_a = 0.0,
           "beta"_a = 0.0)
      .def_readonly("m", &ModelParams::mass)
      .def_readonly("wx", &ModelParams::omega_x)
      .def_readonly("wy", &ModelParams::omega_y)
      .def_readonly("lam", &ModelParams::coupling)
      .def_readonly("beta", &ModelParams::deformation)
      .def("__repr__", [](const ModelParams& p) {
        return "ModelParams(m=" + std::to_string(p.mass) + ", wx=" + std::to_string(p.omega_x) +
               ", wy=" + std::to_string(p.omega_y) + ", lam=" + std::to_string(p.coupling) +
               ", beta=" + std::to_string(p.deformation) + ")";
      });

  py::class_<DerivedModes>(mod, "DerivedModes")
      .def_readonly("omega_plus_sq", &DerivedModes::omega_plus_sq)
      .def_readonly("omega_minus_sq", &DerivedModes::omega_minus_sq)
      .def_readonly("lambda_crit", &DerivedModes::lambda_crit)
      .def_readonly("modes_available", &DerivedModes::modes_available)
      .def_readonly("k_inv", &DerivedModes::k_inv)
      .def_readonly("c1", &DerivedModes::c1)
      .def_readonly("c2", &DerivedModes::c2)
      .def_readonly("alpha1_sq", &DerivedModes::alpha1_sq)
      .def_readonly("alpha2_sq", &DerivedModes::alpha2_sq)
      .def_property_readonly("phase", [](const DerivedModes& m) {
        return std::string(ptgup::phase_name(m.phase));
      })
      .def_property_readonly("rotation", [](const DerivedModes& m) {
        return std::vector<cplx>(m.rotation.m.begin(), m.rotation.m.end());
      });

  mod.def(
      "derive_modes", [](const ModelParams& p) { return ptgup::derive_modes(p); }, "params"_a,
      "normal-mode frequencies, rotation and phase label");
  mod.def(
      "classify_phase",
      [](const ModelParams& p) { return std::string(ptgup::phase_name(ptgup::classify_phase(p))); },
      "params"_a);
  mod.def(
      "energy",
      [](const ModelParams& p, int n1, int n2) {
        return ptgup::energy(ptgup::derive_modes(p), {n1, n2});
      },
      "params"_a, "n1"_a, "n2"_a, "unperturbed eigenvalue (n1+1/2)c1 + (n2+1/2)c2");
  mod.def(
      "delta_energy",
      [](const ModelParams& p, int n1, int n2) {
        return ptgup::delta_energy(ptgup::derive_modes(p), {n1, n2}, p);
      },
      "params"_a, "n1"_a, "n2"_a, "first-order minimal-length energy shift");
  mod.def(
      "h_int_matrix_element",
      [](const ModelParams& p, std::pair<int, int> bra, std::pair<int, int> ket) {
        return ptgup::h_int_matrix_element(ptgup::derive_modes(p), {bra.first, bra.second},
                                           {ket.first, ket.second}, p);
      },
      "params"_a, "bra"_a, "ket"_a);
  mod.def(
      "mixing_coefficients",
      [](const ModelParams& p, int n1, int n2) {
        const auto report = ptgup::wavefunction_correction(ptgup::derive_modes(p), {n1, n2}, p);
        std::map<std::pair<int, int>, cplx> out;
        for (const auto& [s, v] : report.M_coefficients) out[{s.n1, s.n2}] = v;
        return out;
      },
      "params"_a, "n1"_a, "n2"_a, "first-order mixing coefficients keyed by (m1, m2)");
  mod.def(
      "evaluate_wavefunction",
      [](const ModelParams& p, int n1, int n2, double x, double y, bool corrected) {
        return ptgup::evaluate_wavefunction(ptgup::derive_modes(p), {n1, n2}, x, y, corrected, p);
      },
      "params"_a, "n1"_a, "n2"_a, "x"_a, "y"_a, "corrected"_a = false);
  mod.def(
      "oracle_spectrum",
      [](const ModelParams& p, int cutoff, int count) {
        const auto eig = ptgup::oracle::diagonalize(ptgup::oracle::build_hamiltonian(p, cutoff));
        const int n = std::min<int>(count, static_cast<int>(eig.values.size()));
        return std::vector<cplx>(eig.values.begin(), eig.values.begin() + n);
      },
      "params"_a, "cutoff"_a = ptgup::oracle::kDefaultCutoff, "count"_a = 10,
      "lowest eigenvalues of the dense truncated Hamiltonian, sorted by (Re, Im)");
  mod.def(
      "verify",
      [](int cutoff, int nmax, unsigned seed) {
        ptgup::verify::VerifyOptions opt;
        opt.cutoff = cutoff;
        opt.max_total = nmax;
        opt.seed = seed;
        const auto report = ptgup::verify::run(opt);
        py::list checks;
        for (const auto& c : report.checks) {
          checks.append(py::dict("name"_a = c.name, "pass"_a = c.pass, "max_dev"_a = c.max_dev,
                                 "tolerance"_a = c.tolerance, "detail"_a = c.detail));
        }
        return py::dict("checks"_a = checks, "all_pass"_a = report.all_pass);
      },
      "cutoff"_a = ptgup::oracle::kDefaultCutoff, "nmax"_a = 4, "seed"_a = 20240915u,
      "run the oracle cross-check suite and return its report");
}
