#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <complex>

#include "ptgup/errors.hpp"
#include "ptgup/model.hpp"

using ptgup::classify_phase;
using ptgup::cplx;
using ptgup::derive_modes;
using ptgup::DerivedModes;
using ptgup::ModelParams;
using ptgup::PhaseClass;
using ptgup::principal_sqrt;

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

// Independent oracle: eigenvalues of the potential quadratic form
// A = [[m wx^2, i lam], [i lam, m wy^2]] from the characteristic polynomial.
// The derived modes must satisfy {m c1^2, m c2^2} = eig(A) as a set.
std::pair<cplx, cplx> quadratic_form_eigenvalues(const ModelParams& p) {
  const cplx a(p.mass * p.omega_x * p.omega_x, 0.0);
  const cplx d(p.mass * p.omega_y * p.omega_y, 0.0);
  const cplx b(0.0, p.coupling);
  const cplx disc = principal_sqrt((a - d) * (a - d) + 4.0 * b * b);
  return {(a + d - disc) / 2.0, (a + d + disc) / 2.0};
}

double mode_pair_deviation(const ModelParams& p) {
  const DerivedModes modes = derive_modes(p);
  const auto [mu1, mu2] = quadratic_form_eigenvalues(p);
  const cplx e1 = p.mass * modes.c1 * modes.c1;
  const cplx e2 = p.mass * modes.c2 * modes.c2;
  const double direct = std::max(std::abs(e1 - mu1), std::abs(e2 - mu2));
  const double swapped = std::max(std::abs(e1 - mu2), std::abs(e2 - mu1));
  return std::min(direct, swapped) / std::max(1.0, std::abs(mu1) + std::abs(mu2));
}

}  // namespace

TEST_CASE("parameter validation") {
  CHECK_NOTHROW(params(1.0, 1.0, 2.0, 0.5).validate());
  CHECK_THROWS_AS(params(0.0, 1.0, 2.0, 0.0).validate(), ptgup::InvalidParameter);
  CHECK_THROWS_AS(params(-1.0, 1.0, 2.0, 0.0).validate(), ptgup::InvalidParameter);
  CHECK_THROWS_AS(params(1.0, -0.1, 2.0, 0.0).validate(), ptgup::InvalidParameter);
  CHECK_THROWS_AS(params(1.0, 1.0, -2.0, 0.0).validate(), ptgup::InvalidParameter);
  CHECK_THROWS_AS(params(1.0, 1.0, 2.0, 0.0, -1e-3).validate(), ptgup::InvalidParameter);
  ModelParams nan_param = params(1.0, 1.0, 2.0, 0.0);
  nan_param.coupling = std::nan("");
  CHECK_THROWS_AS(nan_param.validate(), ptgup::InvalidParameter);
}

TEST_CASE("principal square root is exact on the real axis") {
  CHECK(principal_sqrt(cplx(9.0, 0.0)) == cplx(3.0, 0.0));
  CHECK(principal_sqrt(cplx(-4.0, 0.0)) == cplx(0.0, 2.0));
  CHECK(principal_sqrt(cplx(0.0, 0.0)) == cplx(0.0, 0.0));
  const cplx z = principal_sqrt(cplx(3.0, 4.0));
  CHECK(std::abs(z * z - cplx(3.0, 4.0)) < 1e-14);
  CHECK(z.real() > 0.0);
}

TEST_CASE("phase classification across the coupling range") {
  // lambda_c = m|wy^2 - wx^2|/2 = 1.5 for (1, 1, 2).
  CHECK(classify_phase(params(1.0, 1.0, 2.0, 0.0)) == PhaseClass::Unbroken);
  CHECK(classify_phase(params(1.0, 1.0, 2.0, 1.49)) == PhaseClass::Unbroken);
  CHECK(classify_phase(params(1.0, 1.0, 2.0, 1.5)) == PhaseClass::Critical);
  CHECK(classify_phase(params(1.0, 1.0, 2.0, -1.5)) == PhaseClass::Critical);
  CHECK(classify_phase(params(1.0, 1.0, 2.0, 1.51)) == PhaseClass::Broken);
  CHECK(classify_phase(params(1.0, 1.0, 2.0, -2.0)) == PhaseClass::Broken);
  CHECK(classify_phase(params(1.0, 2.0, 2.0, 0.0)) == PhaseClass::DecoupledIsotropic);
  CHECK(classify_phase(params(1.0, 2.0, 2.0, 1e-6)) == PhaseClass::IsotropicBroken);
  // The critical band is relative: half-width 1e-9 * max(1, lambda_c).
  CHECK(classify_phase(params(1.0, 1.0, 2.0, 1.5 * (1.0 + 0.5e-9))) == PhaseClass::Critical);
  CHECK(classify_phase(params(1.0, 1.0, 2.0, 1.5 * (1.0 + 1e-8))) == PhaseClass::Broken);
  CHECK(classify_phase(params(1.0, 1.0, 2.0, 1.5 * (1.0 - 1e-8))) == PhaseClass::Unbroken);
}

TEST_CASE("uncoupled limit is exact") {
  const DerivedModes modes = derive_modes(params(2.0, 0.7, 1.9, 0.0));
  CHECK(modes.phase == PhaseClass::Unbroken);
  CHECK(modes.c1 == cplx(0.7, 0.0));
  CHECK(modes.c2 == cplx(1.9, 0.0));
  CHECK(modes.k_inv == cplx(1.0, 0.0));
  CHECK(modes.alpha1_sq == cplx(2.0 * 0.7, 0.0));
  CHECK(modes.alpha2_sq == cplx(2.0 * 1.9, 0.0));
  CHECK(modes.rotation.m[0] == cplx(1.0, 0.0));
  CHECK(modes.rotation.m[1] == cplx(0.0, 0.0));
  CHECK(modes.rotation.m[2] == cplx(0.0, 0.0));
  CHECK(modes.rotation.m[3] == cplx(1.0, 0.0));
}

TEST_CASE("normal-mode frequencies solve the quadratic-form eigenproblem") {
  // Unbroken, broken, both coupling signs, different masses and orderings.
  CHECK(mode_pair_deviation(params(1.0, 1.0, 2.0, 0.5)) < 1e-14);
  CHECK(mode_pair_deviation(params(1.0, 1.0, 2.0, -1.2)) < 1e-14);
  CHECK(mode_pair_deviation(params(1.0, 1.0, 2.0, 2.0)) < 1e-14);
  CHECK(mode_pair_deviation(params(1.0, 1.0, 2.0, -3.5)) < 1e-14);
  CHECK(mode_pair_deviation(params(0.5, 2.0, 1.0, 0.3)) < 1e-14);   // wx > wy
  CHECK(mode_pair_deviation(params(3.0, 0.4, 2.2, 4.0)) < 1e-14);
  CHECK(mode_pair_deviation(params(2.0, 1.3, 1.31, 0.01)) < 1e-14); // near-isotropic
}

TEST_CASE("rotation is complex orthogonal and diagonalizes the potential") {
  for (double lambda : {0.3, 1.0, -1.0, 2.5, -4.0}) {
    const ModelParams p = params(1.0, 1.0, 2.0, lambda);
    const DerivedModes modes = derive_modes(p);
    const auto& m = modes.rotation.m;

    const cplx g00 = m[0] * m[0] + m[2] * m[2];
    const cplx g01 = m[0] * m[1] + m[2] * m[3];
    const cplx g11 = m[1] * m[1] + m[3] * m[3];
    CHECK(std::abs(g00 - 1.0) < 1e-12);
    CHECK(std::abs(g01) < 1e-12);
    CHECK(std::abs(g11 - 1.0) < 1e-12);

    const cplx a00(p.mass * p.omega_x * p.omega_x, 0.0);
    const cplx a11(p.mass * p.omega_y * p.omega_y, 0.0);
    const cplx a01(0.0, lambda);
    const cplx d00 = m[0] * (a00 * m[0] + a01 * m[1]) + m[1] * (a01 * m[0] + a11 * m[1]);
    const cplx d01 = m[0] * (a00 * m[2] + a01 * m[3]) + m[1] * (a01 * m[2] + a11 * m[3]);
    const cplx d11 = m[2] * (a00 * m[2] + a01 * m[3]) + m[3] * (a01 * m[2] + a11 * m[3]);
    CHECK(std::abs(d00 - p.mass * modes.c1 * modes.c1) < 1e-12);
    CHECK(std::abs(d01) < 1e-12);
    CHECK(std::abs(d11 - p.mass * modes.c2 * modes.c2) < 1e-12);
  }
}

TEST_CASE("rotation preserves the bilinear norm x^2 + y^2") {
  const DerivedModes modes = derive_modes(params(1.0, 1.0, 2.0, 1.2));
  for (double x : {-1.5, 0.2, 2.0}) {
    for (double y : {-0.7, 0.0, 1.1}) {
      const auto [X, Y] = ptgup::rotate_to_normal(modes, x, y);
      CHECK(std::abs(X * X + Y * Y - cplx(x * x + y * y, 0.0)) < 1e-12);
    }
  }
}

TEST_CASE("broken phase has exact conjugate-pair modes") {
  const DerivedModes modes = derive_modes(params(1.0, 1.0, 2.0, 2.0));
  CHECK(modes.phase == PhaseClass::Broken);
  CHECK(modes.c2 == std::conj(modes.c1));  // bitwise, by construction
  CHECK(modes.c1.imag() != 0.0);
  CHECK(modes.k_inv.real() == 0.0);  // purely imaginary under the root
}

TEST_CASE("unbroken phase has real positive modes") {
  const DerivedModes modes = derive_modes(params(1.0, 1.0, 2.0, 1.0));
  CHECK(modes.phase == PhaseClass::Unbroken);
  CHECK(modes.c1.imag() == 0.0);
  CHECK(modes.c2.imag() == 0.0);
  CHECK(modes.c1.real() > 0.0);
  CHECK(modes.c2.real() > modes.c1.real());
  // Sum rule c1^2 + c2^2 = w+^2, exact to rounding.
  CHECK(std::abs(modes.c1 * modes.c1 + modes.c2 * modes.c2 - cplx(5.0, 0.0)) < 1e-14);
}

TEST_CASE("critical point coalesces the modes under the limit convention") {
  const DerivedModes modes = derive_modes(params(1.0, 1.0, 2.0, 1.5));
  CHECK(modes.phase == PhaseClass::Critical);
  CHECK(modes.rotation_is_limit_convention);
  CHECK(modes.c1 == modes.c2);
  CHECK(modes.c1.real() == doctest::Approx(std::sqrt(2.5)).epsilon(1e-15));
  CHECK(modes.k_inv == cplx(0.0, 0.0));
}

TEST_CASE("isotropic coupled system withholds mode data") {
  const DerivedModes modes = derive_modes(params(1.0, 2.0, 2.0, 0.5));
  CHECK(modes.phase == PhaseClass::IsotropicBroken);
  CHECK_FALSE(modes.modes_available);
  CHECK(modes.lambda_crit == 0.0);
  CHECK_THROWS_AS(modes.require_available(), ptgup::ModesUnavailable);
  CHECK_THROWS_AS((void)ptgup::energy(modes, {0, 0}), ptgup::ModesUnavailable);
}

TEST_CASE("energy formula") {
  const DerivedModes modes = derive_modes(params(1.0, 1.0, 2.0, 0.0));
  CHECK(ptgup::energy(modes, {0, 0}) == cplx(1.5, 0.0));
  CHECK(ptgup::energy(modes, {2, 1}) == cplx(0.5 + 2.0 + 1.5 * 2.0, 0.0));
  const DerivedModes coupled = derive_modes(params(1.0, 1.0, 2.0, 1.0));
  const cplx e = ptgup::energy(coupled, {1, 2});
  CHECK(std::abs(e - (1.5 * coupled.c1 + 2.5 * coupled.c2)) < 1e-15);
  CHECK(e.imag() == 0.0);
}

TEST_CASE("phase labels") {
  CHECK(ptgup::phase_name(PhaseClass::Unbroken) == "unbroken");
  CHECK(ptgup::phase_name(PhaseClass::Critical) == "critical");
  CHECK(ptgup::phase_name(PhaseClass::Broken) == "broken");
  CHECK(ptgup::phase_name(PhaseClass::IsotropicBroken) == "isotropic_broken");
  CHECK(ptgup::phase_name(PhaseClass::DecoupledIsotropic) == "decoupled");
}
