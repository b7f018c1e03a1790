#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <complex>
#include <numbers>
#include <vector>

#include "ptgup/errors.hpp"
#include "ptgup/model.hpp"
#include "ptgup/perturbation.hpp"

using namespace ptgup;

namespace {

ModelParams params(double m, double wx, double wy, double lam, double beta = 0.0) {
  ModelParams p;
  p.mass = m;
  p.omega_x = wx;
  p.omega_y = wy;
  p.coupling = lam;
  p.deformation = beta;
  return p;
}

// Dense number-basis oracle for the ladder tables: a|n> = sqrt(n)|n-1>,
// built explicitly and raised to powers by matrix multiplication.  Entries
// with max(m, n) + 4 < dim are free of truncation effects.
struct DenseOp {
  int dim;
  std::vector<double> m;  // row-major dim x dim

  double& at(int r, int c) { return m[static_cast<std::size_t>(r) * dim + c]; }
  double at(int r, int c) const { return m[static_cast<std::size_t>(r) * dim + c]; }

  DenseOp operator*(const DenseOp& o) const {
    DenseOp out{dim, std::vector<double>(m.size(), 0.0)};
    for (int r = 0; r < dim; ++r)
      for (int k = 0; k < dim; ++k)
        for (int c = 0; c < dim; ++c) out.at(r, c) += at(r, k) * o.at(k, c);
    return out;
  }
  DenseOp operator+(const DenseOp& o) const {
    DenseOp out = *this;
    for (std::size_t i = 0; i < m.size(); ++i) out.m[i] += o.m[i];
    return out;
  }
  DenseOp operator-(const DenseOp& o) const {
    DenseOp out = *this;
    for (std::size_t i = 0; i < m.size(); ++i) out.m[i] -= o.m[i];
    return out;
  }
};

DenseOp lowering(int dim) {
  DenseOp a{dim, std::vector<double>(static_cast<std::size_t>(dim) * dim, 0.0)};
  for (int n = 1; n < dim; ++n) a.at(n - 1, n) = std::sqrt(static_cast<double>(n));
  return a;
}

DenseOp raising(int dim) {
  DenseOp ad{dim, std::vector<double>(static_cast<std::size_t>(dim) * dim, 0.0)};
  for (int n = 0; n + 1 < dim; ++n) ad.at(n + 1, n) = std::sqrt(n + 1.0);
  return ad;
}

}  // namespace

TEST_CASE("ladder tables match dense matrix powers") {
  const int dim = 16;
  const DenseOp a = lowering(dim);
  const DenseOp ad = raising(dim);
  const DenseOp pos = a + ad;            // a + a+
  const DenseOp neg = a - ad;            // a - a+
  const DenseOp pos2 = pos * pos;
  const DenseOp neg2 = neg * neg;
  const DenseOp neg4 = neg2 * neg2;

  for (int m = 0; m <= 11; ++m) {
    for (int n = 0; n <= 11; ++n) {
      CHECK(ladder_position_element(m, n).value() ==
            doctest::Approx(pos.at(m, n)).epsilon(1e-13));
      CHECK(ladder_position_sq_element(m, n).value() ==
            doctest::Approx(pos2.at(m, n)).epsilon(1e-13));
      CHECK(ladder_derivative_sq_element(m, n).value() ==
            doctest::Approx(neg2.at(m, n)).epsilon(1e-13));
      CHECK(ladder_derivative_quartic_element(m, n).value() ==
            doctest::Approx(neg4.at(m, n)).epsilon(1e-13));
    }
  }
}

TEST_CASE("ladder table entries are exact where integral") {
  // Diagonals are integers: factor * sqrt(1).
  for (int n : {0, 1, 2, 7, 20}) {
    const auto quartic = ladder_derivative_quartic_element(n, n);
    CHECK(quartic.radicand == 1);
    CHECK(quartic.factor == 3 * (2 * static_cast<std::int64_t>(n) * n + 2 * n + 1));
    const auto sq = ladder_derivative_sq_element(n, n);
    CHECK(sq.factor == -(2 * static_cast<std::int64_t>(n) + 1));
    CHECK(ladder_position_sq_element(n, n).factor == 2 * static_cast<std::int64_t>(n) + 1);
  }
  // <n+2|(a-a+)^2|n> = +sqrt((n+1)(n+2)) -- radicand carries the product.
  const auto up2 = ladder_derivative_sq_element(5, 3);
  CHECK(up2.factor == 1);
  CHECK(up2.radicand == 4 * 5);
}

TEST_CASE("selection rule offsets") {
  const auto offsets = selection_rule_offsets();
  CHECK(offsets.size() == 13);
  const std::vector<StateIndex> expected = {
      {0, 0},  {2, 0},  {-2, 0}, {0, 2},  {0, -2}, {4, 0},   {-4, 0},
      {0, 4},  {0, -4}, {2, 2},  {2, -2}, {-2, 2}, {-2, -2}};
  for (const StateIndex off : expected) {
    CHECK(std::find(offsets.begin(), offsets.end(), off) != offsets.end());
    CHECK(selection_rule_allows({10 + off.n1, 10 + off.n2}, {10, 10}));
  }
  CHECK_FALSE(selection_rule_allows({1, 0}, {0, 0}));   // odd offset
  CHECK_FALSE(selection_rule_allows({3, 1}, {0, 0}));   // odd offsets
  CHECK_FALSE(selection_rule_allows({4, 2}, {0, 0}));   // |d1|+|d2| = 6
  CHECK_FALSE(selection_rule_allows({6, 0}, {0, 0}));
}

TEST_CASE("energy-shift weights reproduce the general formula") {
  for (int n1 : {0, 1, 2, 5}) {
    for (int n2 : {0, 1, 3, 4}) {
      const DeltaEnergyWeights w = delta_energy_weights({n1, n2});
      CHECK(w.alpha1_quartic == Rational(3 * (2 * n1 * n1 + 2 * n1 + 1), 2));
      CHECK(w.alpha2_quartic == Rational(3 * (2 * n2 * n2 + 2 * n2 + 1), 2));
      CHECK(w.cross == Rational((2 * n1 + 1) * (2 * n2 + 1)));
    }
  }
}

TEST_CASE("ground-state shift at the reference point") {
  // (m, wx, wy) = (1, 1, 2), lambda = 0, beta = 0.01:
  // dE = (beta/2)[3/2 * 1 + 3/2 * 4 + 1 * 2] = 0.0475.
  const ModelParams p = params(1.0, 1.0, 2.0, 0.0, 0.01);
  const cplx d = delta_energy(derive_modes(p), {0, 0}, p);
  CHECK(d.real() == doctest::Approx(0.0475).epsilon(1e-14));
  CHECK(d.imag() == 0.0);
}

TEST_CASE("shift equals the diagonal interaction element") {
  for (double lambda : {0.0, 0.7, 1.3, 2.0}) {
    const ModelParams p = params(1.0, 1.0, 2.0, lambda, 0.02);
    const DerivedModes modes = derive_modes(p);
    for (const StateIndex s : {StateIndex{0, 0}, StateIndex{1, 2}, StateIndex{3, 3}}) {
      const cplx closed = delta_energy(modes, s, p);
      const cplx diag = h_int_matrix_element(modes, s, s, p);
      CHECK(std::abs(closed - diag) <= 1e-13 * std::max(1.0, std::abs(diag)));
    }
  }
}

TEST_CASE("intentionally wrong variant differs whenever the modes differ") {
  const ModelParams p = params(1.0, 1.0, 2.0, 0.5, 0.01);
  const DerivedModes modes = derive_modes(p);
  const cplx right = delta_energy(modes, {0, 1}, p, DeltaEnergyVariant::Standard);
  const cplx wrong = delta_energy(modes, {0, 1}, p, DeltaEnergyVariant::Alpha1Only);
  CHECK(std::abs(right - wrong) > 1e-3);
}

TEST_CASE("interaction element reproduces the documented (4,0)<-(0,0) value") {
  // At lambda = 0 the element is (beta/m) * (sqrt(6)/2) * alpha1^4.
  const ModelParams p = params(1.0, 1.0, 2.0, 0.0, 0.01);
  const DerivedModes modes = derive_modes(p);
  const cplx v = h_int_matrix_element(modes, {4, 0}, {0, 0}, p);
  CHECK(v.real() == doctest::Approx(0.01 * std::sqrt(6.0) / 2.0).epsilon(1e-14));
  CHECK(v.imag() == 0.0);
}

TEST_CASE("interaction element is bilinear-symmetric and zero off the rule") {
  const ModelParams p = params(1.0, 1.0, 2.0, 1.1, 0.02);
  const DerivedModes modes = derive_modes(p);
  const std::vector<std::pair<StateIndex, StateIndex>> allowed = {
      {{2, 0}, {0, 0}}, {{2, 2}, {0, 0}}, {{5, 1}, {3, 3}}, {{4, 4}, {2, 2}}};
  for (const auto& [bra, ket] : allowed) {
    const cplx ab = h_int_matrix_element(modes, bra, ket, p);
    const cplx ba = h_int_matrix_element(modes, ket, bra, p);
    CHECK(std::abs(ab) > 0.0);
    CHECK(std::abs(ab - ba) <= 1e-14 * std::abs(ab));
  }
  const std::vector<std::pair<StateIndex, StateIndex>> forbidden = {
      {{1, 0}, {0, 0}}, {{3, 2}, {0, 1}}, {{4, 2}, {0, 0}}, {{6, 0}, {0, 0}}, {{5, 5}, {1, 1}}};
  for (const auto& [bra, ket] : forbidden) {
    CHECK(h_int_matrix_element(modes, bra, ket, p) == cplx(0.0, 0.0));
  }
}

TEST_CASE("correction report structure") {
  const ModelParams p = params(1.0, 1.0, 2.0, 1.0, 0.01);
  const DerivedModes modes = derive_modes(p);
  const CorrectionReport report = wavefunction_correction(modes, {2, 2}, p);

  CHECK(report.state == StateIndex{2, 2});
  CHECK(report.M_coefficients.size() <= 12);
  CHECK_FALSE(report.M_coefficients.contains(StateIndex{2, 2}));
  CHECK(report.matrix_elements.contains(StateIndex{2, 2}));
  CHECK(report.pt_preserved);

  // Interior state: all 12 off-diagonal offsets reachable.
  CHECK(wavefunction_correction(modes, {4, 4}, p).M_coefficients.size() == 12);
  // Ground state: only upward offsets (5 of them) survive.
  CHECK(wavefunction_correction(modes, {0, 0}, p).M_coefficients.size() == 5);

  // Each coefficient is element / (E_n - E_m).
  const cplx e_n = energy(modes, {2, 2});
  for (const auto& [m, coef] : report.M_coefficients) {
    const cplx element = report.matrix_elements.at(m);
    const cplx expected = element / (e_n - energy(modes, m));
    CHECK(std::abs(coef - expected) <= 1e-15 * std::max(1.0, std::abs(expected)));
  }
}

TEST_CASE("mixing coefficient reproduces the documented ground-state value") {
  const ModelParams p = params(1.0, 1.0, 2.0, 0.0, 0.01);
  const DerivedModes modes = derive_modes(p);
  const CorrectionReport report = wavefunction_correction(modes, {0, 0}, p);
  // M_(4,0) = [(beta/m) sqrt(6)/2 alpha1^4] / (E00 - E40) = (0.01 sqrt6/2) / (-4).
  const cplx m40 = report.M_coefficients.at({4, 0});
  CHECK(m40.real() == doctest::Approx(0.01 * std::sqrt(6.0) / 2.0 / -4.0).epsilon(1e-13));
  CHECK(std::abs(m40.imag()) < 1e-18);
}

TEST_CASE("correction refuses the critical band") {
  const ModelParams p = params(1.0, 1.0, 2.0, 1.5, 0.01);
  const DerivedModes modes = derive_modes(p);
  CHECK_THROWS_AS((void)wavefunction_correction(modes, {0, 0}, p), DegeneracyError);
  try {
    (void)wavefunction_correction(modes, {0, 0}, p);
  } catch (const DegeneracyError& e) {
    CHECK(std::string(e.what()).find("(") != std::string::npos);  // names a pair
  }
}

TEST_CASE("wavefunction value at the origin") {
  // Ground state, decoupled: psi(0,0) = sqrt(alpha1 alpha2 / pi).
  const ModelParams p = params(1.0, 1.0, 2.0, 0.0, 0.0);
  const DerivedModes modes = derive_modes(p);
  const cplx v = evaluate_wavefunction(modes, {0, 0}, 0.0, 0.0, false, p);
  const double expected = std::sqrt(std::sqrt(2.0) / std::numbers::pi);
  CHECK(v.real() == doctest::Approx(expected).epsilon(1e-14));
  CHECK(v.imag() == 0.0);
}

TEST_CASE("bilinear norm is one on a wide grid") {
  // The c-product integral of psi^2 over the real plane equals 1 in the
  // unbroken phase; a uniform Riemann sum on a wide grid is spectrally
  // accurate for the Gaussian integrand.
  const ModelParams p = params(1.0, 1.0, 2.0, 1.0, 0.0);
  const DerivedModes modes = derive_modes(p);
  GridSamples grid = make_symmetric_grid(161, 1.6 * default_grid_extent(modes));
  sample_wavefunction(modes, {1, 0}, p, false, grid);
  const double h = grid.xs[1] - grid.xs[0];
  cplx acc = 0.0;
  for (const cplx& v : grid.values) acc += v * v;
  acc *= h * h;
  CHECK(std::abs(acc - 1.0) < 1e-6);
}

TEST_CASE("grid construction") {
  CHECK_THROWS_AS((void)make_symmetric_grid(4, 1.0), InvalidParameter);
  CHECK_THROWS_AS((void)make_symmetric_grid(1, 1.0), InvalidParameter);
  CHECK_THROWS_AS((void)make_symmetric_grid(5, 0.0), InvalidParameter);
  const GridSamples grid = make_symmetric_grid(9, 2.5);
  REQUIRE(grid.xs.size() == 9);
  CHECK(grid.xs[4] == 0.0);
  for (int i = 0; i < 9; ++i) CHECK(grid.xs[i] == -grid.xs[8 - i]);
  CHECK(grid.xs.back() == 2.5);
  CHECK(grid.values.size() == 81);
}

TEST_CASE("PT eigenvalues of sampled states") {
  const ModelParams p = params(1.0, 1.0, 2.0, 1.0, 0.0);
  const DerivedModes modes = derive_modes(p);
  GridSamples grid = make_symmetric_grid(41, default_grid_extent(modes));

  sample_wavefunction(modes, {1, 0}, p, false, grid);
  const auto x_est = pt_eigenvalue(grid, ParityAxis::X);
  CHECK(std::abs(x_est.eigenvalue - cplx(-1.0, 0.0)) < 1e-10);
  CHECK(x_est.max_relative_deviation < 1e-10);
  const auto y_est = pt_eigenvalue(grid, ParityAxis::Y);
  CHECK(std::abs(y_est.eigenvalue - cplx(1.0, 0.0)) < 1e-10);

  sample_wavefunction(modes, {2, 1}, p, false, grid);
  CHECK(std::abs(pt_eigenvalue(grid, ParityAxis::X).eigenvalue - cplx(1.0, 0.0)) < 1e-10);
  CHECK(std::abs(pt_eigenvalue(grid, ParityAxis::Y).eigenvalue - cplx(-1.0, 0.0)) < 1e-10);
}

TEST_CASE("PT application rejects asymmetric grids") {
  GridSamples grid = make_symmetric_grid(5, 1.0);
  grid.xs[0] = -1.25;  // break the mirror symmetry
  CHECK_THROWS_AS((void)pt_apply(grid, ParityAxis::X), AsymmetricGrid);
}

TEST_CASE("PT application conjugates and mirrors") {
  GridSamples grid = make_symmetric_grid(5, 2.0);
  for (std::size_t ix = 0; ix < 5; ++ix)
    for (std::size_t iy = 0; iy < 5; ++iy)
      grid.at(ix, iy) = cplx(grid.xs[ix], grid.ys[iy]);  // f(x,y) = x + i y

  const GridSamples px = pt_apply(grid, ParityAxis::X);
  for (std::size_t ix = 0; ix < 5; ++ix)
    for (std::size_t iy = 0; iy < 5; ++iy)
      CHECK(px.at(ix, iy) == cplx(-grid.xs[ix], -grid.ys[iy]));

  const GridSamples py = pt_apply(grid, ParityAxis::Y);
  for (std::size_t ix = 0; ix < 5; ++ix)
    for (std::size_t iy = 0; iy < 5; ++iy)
      CHECK(py.at(ix, iy) == cplx(grid.xs[ix], grid.ys[iy]));
}
