#include "ptgup/model.hpp"

#include <cmath>
#include <string>

#include "ptgup/errors.hpp"

namespace ptgup {

namespace {

void require_finite(double v, const char* name) {
  if (!std::isfinite(v)) throw InvalidParameter(std::string(name) + " must be finite");
}

PhaseClass classify(double omega_minus_sq, double coupling, double lambda_crit) {
  if (omega_minus_sq == 0.0) {
    return coupling == 0.0 ? PhaseClass::DecoupledIsotropic : PhaseClass::IsotropicBroken;
  }
  const double band = kCriticalBandTolerance * std::max(1.0, lambda_crit);
  const double excess = std::abs(coupling) - lambda_crit;
  if (std::abs(excess) <= band) return PhaseClass::Critical;
  return excess < 0.0 ? PhaseClass::Unbroken : PhaseClass::Broken;
}

}  // namespace

cplx principal_sqrt(cplx z) {
  if (z.imag() == 0.0) {
    if (z.real() >= 0.0) return {std::sqrt(z.real()), 0.0};
    return {0.0, std::sqrt(-z.real())};
  }
  return std::sqrt(z);
}

void ModelParams::validate() const {
  require_finite(mass, "mass");
  require_finite(omega_x, "omega_x");
  require_finite(omega_y, "omega_y");
  require_finite(coupling, "coupling");
  require_finite(deformation, "deformation");
  if (mass <= 0.0) throw InvalidParameter("mass must be positive");
  if (omega_x < 0.0) throw InvalidParameter("omega_x must be nonnegative");
  if (omega_y < 0.0) throw InvalidParameter("omega_y must be nonnegative");
  if (deformation < 0.0) throw InvalidParameter("deformation must be nonnegative");
}

std::string_view phase_name(PhaseClass phase) {
  switch (phase) {
    case PhaseClass::Unbroken: return "unbroken";
    case PhaseClass::Critical: return "critical";
    case PhaseClass::Broken: return "broken";
    case PhaseClass::IsotropicBroken: return "isotropic_broken";
    case PhaseClass::DecoupledIsotropic: return "decoupled";
  }
  return "unknown";
}

void DerivedModes::require_available() const {
  if (!modes_available) {
    throw ModesUnavailable("normal modes unavailable: isotropic system with nonzero coupling");
  }
}

PhaseClass classify_phase(const ModelParams& params) {
  params.validate();
  const double omega_minus_sq = params.omega_y * params.omega_y - params.omega_x * params.omega_x;
  const double lambda_crit = params.mass * std::abs(omega_minus_sq) / 2.0;
  return classify(omega_minus_sq, params.coupling, lambda_crit);
}

DerivedModes derive_modes(const ModelParams& params) {
  params.validate();
  const double wx2 = params.omega_x * params.omega_x;
  const double wy2 = params.omega_y * params.omega_y;

  DerivedModes modes;
  modes.mass = params.mass;
  modes.omega_plus_sq = wy2 + wx2;
  modes.omega_minus_sq = wy2 - wx2;
  modes.lambda_crit = params.mass * std::abs(modes.omega_minus_sq) / 2.0;
  modes.phase = classify(modes.omega_minus_sq, params.coupling, modes.lambda_crit);
  modes.rotation = Rotation2{{1.0, 0.0, 0.0, 1.0}};

  if (modes.phase == PhaseClass::IsotropicBroken) {
    // k_inv would be sqrt(1 - 4 lambda^2 / 0): no finite closed form exists.
    modes.modes_available = false;
    return modes;
  }

  if (params.coupling == 0.0) {
    // Decoupled: report the bare frequencies exactly (identity rotation).
    modes.k_inv = 1.0;
    modes.c1 = params.omega_x;
    modes.c2 = params.omega_y;
    modes.alpha1_sq = params.mass * params.omega_x;
    modes.alpha2_sq = params.mass * params.omega_y;
    return modes;
  }

  if (modes.phase == PhaseClass::Critical) {
    // Exceptional point: the modes coalesce and the exact rotation blows up
    // (k -> infinity).  Adopt the k = 0 limit values and a 45-degree real
    // rotation as a documented convention.
    modes.k_inv = 0.0;
    const cplx c_sq = 0.5 * modes.omega_plus_sq;
    modes.c1 = principal_sqrt(c_sq);
    modes.c2 = modes.c1;
    modes.alpha1_sq = params.mass * modes.c1;
    modes.alpha2_sq = modes.alpha1_sq;
    const double r = std::sqrt(0.5);
    modes.rotation = Rotation2{{r, -r, r, r}};
    modes.rotation_is_limit_convention = true;
    return modes;
  }

  const double ratio = 2.0 * params.coupling / (params.mass * modes.omega_minus_sq);
  const double disc = 1.0 - ratio * ratio;
  modes.k_inv = disc >= 0.0 ? cplx(std::sqrt(disc), 0.0) : cplx(0.0, std::sqrt(-disc));

  modes.c1 = principal_sqrt(0.5 * (modes.omega_plus_sq - modes.omega_minus_sq * modes.k_inv));
  modes.c2 = principal_sqrt(0.5 * (modes.omega_plus_sq + modes.omega_minus_sq * modes.k_inv));
  modes.alpha1_sq = params.mass * modes.c1;
  modes.alpha2_sq = params.mass * modes.c2;

  // cos = sqrt((1+k)/2); sin solves cos*sin*m*w-^2 = i*lambda*k, which also
  // satisfies sin^2 = (1-k)/2, so the matrix is complex-orthogonal and sends
  // the cross term to zero with X^2, Y^2 coefficients m*c1^2/2, m*c2^2/2.
  const cplx k = 1.0 / modes.k_inv;
  const cplx cos_t = principal_sqrt(0.5 * (1.0 + k));
  const cplx sin_t =
      cplx(0.0, 1.0) * params.coupling * k / (params.mass * modes.omega_minus_sq * cos_t);
  modes.rotation = Rotation2{{cos_t, -sin_t, sin_t, cos_t}};
  return modes;
}

cplx energy(const DerivedModes& modes, StateIndex state) {
  modes.require_available();
  return (state.n1 + 0.5) * modes.c1 + (state.n2 + 0.5) * modes.c2;
}

std::array<cplx, 2> rotate_to_normal(const DerivedModes& modes, double x, double y) {
  modes.require_available();
  return modes.rotation.apply(x, y);
}

}  // namespace ptgup
