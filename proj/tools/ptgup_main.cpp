#include <fstream>
#include <iostream>
#include <string>

#include <CLI11.hpp>

#include "ptgup/errors.hpp"
#include "ptgup/serialize.hpp"
#include "ptgup/verify.hpp"

namespace {

using ptgup::ModelParams;
using ptgup::StateIndex;

constexpr int kExitUsage = 2;
constexpr int kExitDomain = 3;
constexpr int kExitNumerical = 4;
constexpr int kExitResource = 5;

struct CommonFlags {
  ModelParams params;
  std::string format;  // empty = subcommand default
  std::string out_path;

  void attach(CLI::App& cmd, bool with_lambda = true) {
    cmd.add_option("--m", params.mass, "particle mass (natural units)")->capture_default_str();
    cmd.add_option("--wx", params.omega_x, "x oscillator frequency")->capture_default_str();
    cmd.add_option("--wy", params.omega_y, "y oscillator frequency")->capture_default_str();
    if (with_lambda) {
      cmd.add_option("--lambda", params.coupling, "imaginary coupling strength")
          ->capture_default_str();
    }
    cmd.add_option("--beta", params.deformation, "minimal-length deformation parameter")
        ->capture_default_str();
    cmd.add_option("--format", format, "output format (json or csv)");
    cmd.add_option("--out", out_path, "write the document to this path instead of stdout");
  }
};

void require_format(const CommonFlags& flags, const std::string& native,
                    const std::string& subcommand) {
  if (!flags.format.empty() && flags.format != native) {
    throw ptgup::InvalidParameter(subcommand + " emits " + native + " only");
  }
}

void emit(const CommonFlags& flags, const std::string& document) {
  if (flags.out_path.empty()) {
    std::cout << document << '\n';
    return;
  }
  std::ofstream file(flags.out_path, std::ios::binary);
  if (!file) throw ptgup::InvalidParameter("cannot open output path " + flags.out_path);
  file << document << '\n';
  if (!file.good()) throw ptgup::InvalidParameter("failed writing " + flags.out_path);
}

int run(int argc, char** argv) {
  CLI::App app{"spectrum, PT phase structure and first-order minimal-length corrections "
               "of the 2D oscillator with imaginary xy coupling"};
  app.require_subcommand(1);

  // spectrum ----------------------------------------------------------------
  auto* spectrum = app.add_subcommand("spectrum", "closed-form energies E + dE up to n_max");
  CommonFlags spectrum_flags;
  int n_max = 4;
  spectrum_flags.attach(*spectrum);
  spectrum->add_option("--nmax", n_max, "include all states with n1+n2 <= nmax")
      ->capture_default_str();

  // sweep -------------------------------------------------------------------
  auto* sweep = app.add_subcommand("sweep", "CSV phase diagram over a coupling range");
  CommonFlags sweep_flags;
  double lambda_min = 0.0;
  double lambda_max = 3.0;
  int steps = 61;
  sweep_flags.attach(*sweep, /*with_lambda=*/false);
  sweep->add_option("--lambda-min", lambda_min, "first coupling value")->capture_default_str();
  sweep->add_option("--lambda-max", lambda_max, "last coupling value")->capture_default_str();
  sweep->add_option("--steps", steps, "number of rows")->capture_default_str();

  // verify ------------------------------------------------------------------
  auto* verify = app.add_subcommand("verify", "cross-check closed forms against the dense oracle");
  CommonFlags verify_flags;
  ptgup::verify::VerifyOptions verify_options;
  verify_flags.attach(*verify, /*with_lambda=*/false);
  verify->add_option("--cutoff", verify_options.cutoff, "oracle basis cutoff per mode")
      ->capture_default_str();
  verify->add_option("--nmax", verify_options.max_total, "compare states with n1+n2 <= nmax")
      ->capture_default_str();
  verify->add_option("--max-rows", verify_options.max_rows, "resource guard on matrix rows")
      ->capture_default_str();
  verify->add_option("--seed", verify_options.seed, "seed for the random property samples")
      ->capture_default_str();
  verify->add_flag("--inject-nonorthogonal-rotation",
                   verify_options.inject_nonorthogonal_rotation,
                   "test hook: use the rejected non-orthogonal rotation convention");
  verify->add_flag("--inject-mismatched-quartic", verify_options.inject_mismatched_quartic,
                   "test hook: use the rejected energy shift with alpha1^4 twice");

  // correction --------------------------------------------------------------
  auto* correction = app.add_subcommand("correction", "first-order correction report of a state");
  CommonFlags correction_flags;
  StateIndex correction_state;
  correction_flags.attach(*correction);
  correction->add_option("--n1", correction_state.n1, "first quantum number")
      ->capture_default_str();
  correction->add_option("--n2", correction_state.n2, "second quantum number")
      ->capture_default_str();

  // wavefunction --------------------------------------------------------------
  auto* wavefunction =
      app.add_subcommand("wavefunction", "grid samples of psi and psi + delta psi");
  CommonFlags wavefunction_flags;
  StateIndex wavefunction_state;
  int points = 41;
  double extent = 0.0;
  wavefunction_flags.attach(*wavefunction);
  wavefunction->add_option("--n1", wavefunction_state.n1, "first quantum number")
      ->capture_default_str();
  wavefunction->add_option("--n2", wavefunction_state.n2, "second quantum number")
      ->capture_default_str();
  wavefunction->add_option("--points", points, "odd grid points per axis")
      ->capture_default_str();
  wavefunction->add_option("--extent", extent, "half-width of the grid (0 = automatic)")
      ->capture_default_str();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);  // prints help or the parse error
    return code == 0 ? 0 : kExitUsage;
  }

  if (spectrum->parsed()) {
    require_format(spectrum_flags, "json", "spectrum");
    if (n_max < 0) throw ptgup::InvalidParameter("--nmax must be nonnegative");
    emit(spectrum_flags, ptgup::serialize::spectrum_json(spectrum_flags.params, n_max).dump(2));
    return 0;
  }

  if (sweep->parsed()) {
    require_format(sweep_flags, "csv", "sweep");
    if (steps < 2) throw ptgup::InvalidParameter("--steps must be at least 2");
    if (!(lambda_min <= lambda_max) || lambda_min == lambda_max) {
      throw ptgup::InvalidParameter("sweep needs --lambda-min < --lambda-max");
    }
    std::string csv =
        ptgup::serialize::sweep_csv(sweep_flags.params, lambda_min, lambda_max, steps);
    csv.pop_back();  // emit() appends the final newline
    emit(sweep_flags, csv);
    return 0;
  }

  if (verify->parsed()) {
    require_format(verify_flags, "json", "verify");
    verify_options.mass = verify_flags.params.mass;
    verify_options.omega_x = verify_flags.params.omega_x;
    verify_options.omega_y = verify_flags.params.omega_y;
    const ptgup::verify::VerifyReport report = ptgup::verify::run(verify_options);
    emit(verify_flags, ptgup::serialize::verify_json(report).dump(2));
    return report.all_pass ? 0 : 1;
  }

  if (correction->parsed()) {
    require_format(correction_flags, "json", "correction");
    emit(correction_flags,
         ptgup::serialize::correction_json(correction_flags.params, correction_state).dump(2));
    return 0;
  }

  require_format(wavefunction_flags, "json", "wavefunction");
  emit(wavefunction_flags,
       ptgup::serialize::wavefunction_json(wavefunction_flags.params, wavefunction_state, points,
                                           extent)
           .dump(2));
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  try {
    return run(argc, argv);
  } catch (const ptgup::InvalidParameter& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const ptgup::ResourceGuard& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitResource;
  } catch (const ptgup::ConvergenceFailure& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitNumerical;
  } catch (const ptgup::TrackingAmbiguous& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitNumerical;
  } catch (const ptgup::Error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitDomain;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
}
