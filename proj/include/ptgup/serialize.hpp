#pragma once

#include <string>

#include <json.hpp>

#include "ptgup/model.hpp"
#include "ptgup/perturbation.hpp"
#include "ptgup/verify.hpp"

namespace ptgup::serialize {

using json = nlohmann::json;

/// Locale-independent round-trip formatting (up to 17 significant digits),
/// used for CSV cells; JSON numbers go through the JSON library, which also
/// emits round-trip-safe representations.
std::string format_double(double v);

json params_json(const ModelParams& params);

/// {"params", "phase", "lambda_crit", "states":[{n1,n2,E_re,E_im,dE_re,dE_im}]}
/// over all n1+n2 <= n_max, ordered by (n1+n2, n1).
json spectrum_json(const ModelParams& params, int n_max);

/// CSV `lambda,phase,c1_re,c1_im,c2_re,c2_im,E00_re,E00_im,dE00_re,dE00_im`,
/// one row per step; lambda_i = lo + (hi-lo)*i/(steps-1).  Mode fields of
/// rows without available modes serialize as nan.
std::string sweep_csv(const ModelParams& base, double lambda_lo, double lambda_hi, int steps);

/// Correction report of one state: delta_E, matrix elements, M coefficients.
json correction_json(const ModelParams& params, StateIndex state);

/// Grid samples of psi and psi + delta psi with PT eigenvalue estimates for
/// both parity axes.
json wavefunction_json(const ModelParams& params, StateIndex state, int points_per_axis,
                       double extent);  // extent <= 0 picks the default

json verify_json(const verify::VerifyReport& report);

}  // namespace ptgup::serialize
