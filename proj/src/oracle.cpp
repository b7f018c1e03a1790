#include "ptgup/oracle.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <numeric>
#include <string>

#include "ptgup/errors.hpp"
#include "ptgup/hermite.hpp"
#include "ptgup/perturbation.hpp"

#define lapack_complex_float std::complex<float>
#define lapack_complex_double std::complex<double>
#include <cblas.h>
#include <lapacke.h>

namespace ptgup::oracle {

namespace {

// One matrix entry <m1 m2| H |n1 n2> of the untruncated operator, from the
// ladder realization in the decoupled (wx, wy) product basis:
//   x = (2 m wx)^{-1/2} (a + a*),  d/dx = (m wx / 2)^{1/2} (a - a*).
cplx hamiltonian_entry(const ModelParams& p, StateIndex bra, StateIndex ket) {
  const double wx = p.omega_x;
  const double wy = p.omega_y;
  cplx v = 0.0;

  if (bra.n2 == ket.n2) {
    // p_x^2/2m + m wx^2 x^2 / 2 = (wx/4) [ (a+a*)^2 - (a-a*)^2 ]
    v += 0.25 * wx *
         (ladder_position_sq_element(bra.n1, ket.n1).value() -
          ladder_derivative_sq_element(bra.n1, ket.n1).value());
    // (beta/m) dx^4 = (beta m wx^2 / 4) (a-a*)^4
    v += 0.25 * p.deformation * p.mass * wx * wx *
         ladder_derivative_quartic_element(bra.n1, ket.n1).value();
  }
  if (bra.n1 == ket.n1) {
    v += 0.25 * wy *
         (ladder_position_sq_element(bra.n2, ket.n2).value() -
          ladder_derivative_sq_element(bra.n2, ket.n2).value());
    v += 0.25 * p.deformation * p.mass * wy * wy *
         ladder_derivative_quartic_element(bra.n2, ket.n2).value();
  }

  // i lambda x y
  const double xy = ladder_position_element(bra.n1, ket.n1).value() *
                    ladder_position_element(bra.n2, ket.n2).value();
  if (xy != 0.0) v += cplx(0.0, p.coupling / (2.0 * p.mass * std::sqrt(wx * wy))) * xy;

  // (beta/m) 2 dx^2 dy^2 = (beta m wx wy / 2) (a1-a1*)^2 (a2-a2*)^2
  v += 0.5 * p.deformation * p.mass * wx * wy *
       ladder_derivative_sq_element(bra.n1, ket.n1).value() *
       ladder_derivative_sq_element(bra.n2, ket.n2).value();

  return v;
}

}  // namespace

TruncatedHamiltonian build_hamiltonian(const ModelParams& params, int cutoff) {
  params.validate();
  if (params.omega_x == 0.0 || params.omega_y == 0.0) {
    throw ZeroFrequency("reference basis needs wx > 0 and wy > 0");
  }
  if (cutoff < 8) {
    throw CutoffTooSmall("cutoff " + std::to_string(cutoff) + " below the minimum of 8");
  }

  TruncatedHamiltonian h;
  h.cutoff = cutoff;
  h.params = params;
  const std::size_t dim = static_cast<std::size_t>(cutoff) * cutoff;
  h.matrix.assign(dim * dim, cplx{});

  for (int n1 = 0; n1 < cutoff; ++n1) {
    for (int n2 = 0; n2 < cutoff; ++n2) {
      const StateIndex ket{n1, n2};
      const std::size_t col = static_cast<std::size_t>(h.row_of(ket));
      for (int m1 = std::max(0, n1 - 4); m1 <= std::min(cutoff - 1, n1 + 4); ++m1) {
        for (int m2 = std::max(0, n2 - 4); m2 <= std::min(cutoff - 1, n2 + 4); ++m2) {
          const StateIndex bra{m1, m2};
          const cplx v = hamiltonian_entry(params, bra, ket);
          if (v != cplx{}) h.matrix[col * dim + h.row_of(bra)] = v;
        }
      }
    }
  }
  return h;
}

Eigensystem diagonalize(const TruncatedHamiltonian& h, int max_rows) {
  const int n = h.dimension();
  if (n > max_rows) {
    throw ResourceGuard("matrix dimension " + std::to_string(n) + " exceeds the guard of " +
                        std::to_string(max_rows) + " rows");
  }

  Eigensystem eig;
  eig.dimension = n;
  eig.values.assign(n, cplx{});
  eig.vectors.assign(static_cast<std::size_t>(n) * n, cplx{});

  std::vector<cplx> work = h.matrix;  // zgeev overwrites its input
  const int info =
      LAPACKE_zgeev(LAPACK_COL_MAJOR, 'N', 'V', n, work.data(), n, eig.values.data(), nullptr, 1,
                    eig.vectors.data(), n);
  if (info != 0) {
    throw ConvergenceFailure("zgeev failed with info = " + std::to_string(info));
  }

  // Residual check ||H v - E v|| / ||v|| on every pair, via one dense product.
  std::vector<cplx> hv(static_cast<std::size_t>(n) * n);
  const cplx one{1.0, 0.0};
  const cplx zero{0.0, 0.0};
  cblas_zgemm(CblasColMajor, CblasNoTrans, CblasNoTrans, n, n, n, &one, h.matrix.data(), n,
              eig.vectors.data(), n, &zero, hv.data(), n);
  for (int j = 0; j < n; ++j) {
    const cplx* v = eig.vectors.data() + static_cast<std::size_t>(j) * n;
    const cplx* hvj = hv.data() + static_cast<std::size_t>(j) * n;
    double num = 0.0;
    double den = 0.0;
    for (int i = 0; i < n; ++i) {
      num += std::norm(hvj[i] - eig.values[j] * v[i]);
      den += std::norm(v[i]);
    }
    eig.max_residual = std::max(eig.max_residual, std::sqrt(num / den));
  }
  if (!(eig.max_residual < 1e-8)) {
    throw ConvergenceFailure("eigenpair residual " + std::to_string(eig.max_residual) +
                             " above 1e-8");
  }

  // Sort by (Re, Im), carrying the eigenvectors along.
  std::vector<int> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(), [&](int a, int b) {
    if (eig.values[a].real() != eig.values[b].real())
      return eig.values[a].real() < eig.values[b].real();
    return eig.values[a].imag() < eig.values[b].imag();
  });
  Eigensystem sorted;
  sorted.dimension = n;
  sorted.max_residual = eig.max_residual;
  sorted.values.reserve(n);
  sorted.vectors.assign(eig.vectors.size(), cplx{});
  for (int j = 0; j < n; ++j) {
    sorted.values.push_back(eig.values[order[j]]);
    std::copy_n(eig.vectors.data() + static_cast<std::size_t>(order[j]) * n, n,
                sorted.vectors.data() + static_cast<std::size_t>(j) * n);
  }
  return sorted;
}

namespace {

int nearest_index(const std::vector<cplx>& values, cplx target) {
  int best = 0;
  double best_dist = std::abs(values[0] - target);
  for (int j = 1; j < static_cast<int>(values.size()); ++j) {
    const double d = std::abs(values[j] - target);
    if (d < best_dist) {
      best_dist = d;
      best = j;
    }
  }
  return best;
}

// Index of the eigenvector with maximal |<ref, v_j>| (unit-norm vectors).
std::pair<int, double> max_overlap_index(const Eigensystem& eig, const cplx* ref) {
  int best = 0;
  double best_overlap = -1.0;
  for (int j = 0; j < static_cast<int>(eig.values.size()); ++j) {
    const cplx* v = eig.vector(j);
    cplx dot = 0.0;
    for (int i = 0; i < eig.dimension; ++i) dot += std::conj(ref[i]) * v[i];
    const double overlap = std::abs(dot);
    if (overlap > best_overlap) {
      best_overlap = overlap;
      best = j;
    }
  }
  return {best, best_overlap};
}

}  // namespace

cplx beta_slope(const ModelParams& params, StateIndex state, int cutoff, double step) {
  if (!(step > 0.0) || !std::isfinite(step)) {
    throw InvalidParameter("beta_slope step must be positive");
  }
  if (state.n1 + state.n2 > cutoff / 2) {
    throw InvalidParameter("state outside the truncation-safe zone n1+n2 <= cutoff/2");
  }

  ModelParams base = params;
  base.deformation = 0.0;
  const DerivedModes modes = derive_modes(base);
  const cplx target = energy(modes, state);

  const TruncatedHamiltonian h0 = build_hamiltonian(base, cutoff);
  const Eigensystem center = diagonalize(h0);
  const int idx0 = nearest_index(center.values, target);
  const cplx* ref = center.vector(idx0);

  // On a degenerate unperturbed level the solver returns an arbitrary basis
  // of the eigenspace, so the eigenvector at idx0 need not be the limit of
  // the perturbed branch belonging to `state`.  As long as the deformation
  // does not couple the degenerate partners (guarded below), the branches
  // limit to the bare basis states and the bare vector is the right
  // tracking reference.
  const double degen_tol = 1e-8 * std::max(1.0, std::abs(target));
  int multiplicity = 0;
  for (const cplx& v : center.values) {
    if (std::abs(v - center.values[idx0]) <= degen_tol) ++multiplicity;
  }
  std::vector<cplx> bare;
  if (multiplicity > 1) {
    for (const StateIndex offset : selection_rule_offsets()) {
      if (offset.n1 == 0 && offset.n2 == 0) continue;
      const StateIndex partner{state.n1 + offset.n1, state.n2 + offset.n2};
      if (partner.n1 < 0 || partner.n2 < 0) continue;
      if (std::abs(energy(modes, partner) - target) <= degen_tol) {
        throw DegeneracyError("beta slope undefined: the deformation couples the degenerate "
                              "pair (" + std::to_string(state.n1) + "," +
                              std::to_string(state.n2) + ") <-> (" +
                              std::to_string(partner.n1) + "," + std::to_string(partner.n2) +
                              ")");
      }
    }
    bare.assign(center.values.size(), cplx{});
    bare[static_cast<std::size_t>(h0.row_of(state))] = 1.0;
    ref = bare.data();
  }

  // One-sided third-order stencil: the deformation domain is beta >= 0, so
  // the usual central difference (which would probe beta = -step) is out.
  cplx shifted[3];
  for (int s = 1; s <= 3; ++s) {
    ModelParams p = params;
    p.deformation = s * step;
    const Eigensystem eig = diagonalize(build_hamiltonian(p, cutoff));
    const auto [idx, overlap] = max_overlap_index(eig, ref);
    if (overlap < 0.9) {
      throw TrackingAmbiguous("eigenvector overlap " + std::to_string(overlap) +
                              " below 0.9 while tracking across beta");
    }
    shifted[s - 1] = eig.values[idx];
  }
  return (-11.0 * center.values[idx0] + 18.0 * shifted[0] - 9.0 * shifted[1] +
          2.0 * shifted[2]) /
         (6.0 * step);
}

namespace {

// e^{s^2/2} d^2/ds^2 [H_n(s) e^{-s^2/2}] = (s^2-1) H_n - 2 s H_n' + H_n''.
double second_derivative_factor(int n, double s) {
  double v = (s * s - 1.0) * hermite::hermite_eval(n, s);
  if (n >= 1) v -= 2.0 * s * 2.0 * n * hermite::hermite_eval(n - 1, s);
  if (n >= 2) v += 4.0 * n * (n - 1.0) * hermite::hermite_eval(n - 2, s);
  return v;
}

// Q_d(mq, nq) = integral of phi_m (d^d/dX^d phi_n) dX for d in {0, 2, 4},
// by Gauss-Hermite quadrature in s = alpha X (weight e^{-s^2}).
double quadrature_q(int d, int mq, int nq, double alpha, const hermite::QuadratureRule& rule) {
  const auto fourth = d == 4 ? hermite::fourth_derivative_expansion(nq)
                             : hermite::FourthDerivativeExpansion{};
  double integral = 0.0;
  for (int i = 0; i < rule.order; ++i) {
    const double s = rule.nodes[i];
    double inner;
    switch (d) {
      case 0: inner = hermite::hermite_eval(nq, s); break;
      case 2: inner = second_derivative_factor(nq, s); break;
      default: inner = fourth.evaluate(s).real(); break;
    }
    integral += rule.weights[i] * hermite::hermite_eval(mq, s) * inner;
  }
  const double norm = 1.0 / std::sqrt(std::numbers::pi * std::pow(2.0, mq + nq) *
                                      std::tgamma(mq + 1.0) * std::tgamma(nq + 1.0));
  return std::pow(alpha, d) * norm * integral;
}

}  // namespace

cplx quadrature_matrix_element(const DerivedModes& modes, StateIndex bra, StateIndex ket,
                               const ModelParams& params, int order) {
  modes.require_available();
  if (modes.alpha1_sq.imag() != 0.0 || modes.alpha2_sq.imag() != 0.0 ||
      modes.alpha1_sq.real() <= 0.0 || modes.alpha2_sq.real() <= 0.0) {
    throw BrokenPhaseUnsupported("quadrature needs real positive mode parameters");
  }
  const int needed = std::max(bra.n1 + ket.n1, bra.n2 + ket.n2) + 8;
  if (order < needed) {
    throw InvalidParameter("quadrature order " + std::to_string(order) + " below required " +
                           std::to_string(needed));
  }
  const auto& rule = hermite::gauss_hermite_rule(order);
  const double a1 = std::sqrt(modes.alpha1_sq.real());
  const double a2 = std::sqrt(modes.alpha2_sq.real());

  const double q4x = quadrature_q(4, bra.n1, ket.n1, a1, rule);
  const double q4y = quadrature_q(4, bra.n2, ket.n2, a2, rule);
  const double q2x = quadrature_q(2, bra.n1, ket.n1, a1, rule);
  const double q2y = quadrature_q(2, bra.n2, ket.n2, a2, rule);
  const double q0x = quadrature_q(0, bra.n1, ket.n1, a1, rule);
  const double q0y = quadrature_q(0, bra.n2, ket.n2, a2, rule);

  return params.deformation / params.mass * (q4x * q0y + q0x * q4y + 2.0 * q2x * q2y);
}

SpectrumComparison compare_spectrum(const ModelParams& params, int cutoff, int max_total,
                                    int max_rows) {
  if (max_total < 0) throw InvalidParameter("max_total must be nonnegative");
  if (max_total > cutoff / 2) {
    throw CutoffTooSmall("truncation-safe zone requires n1+n2 <= cutoff/2 (cutoff " +
                         std::to_string(cutoff) + ", requested " + std::to_string(max_total) +
                         ")");
  }
  const DerivedModes modes = derive_modes(params);
  modes.require_available();

  SpectrumComparison cmp;
  cmp.cutoff = cutoff;
  for (int total = 0; total <= max_total; ++total) {
    for (int n1 = 0; n1 <= total; ++n1) cmp.states.push_back({n1, total - n1});
  }
  std::sort(cmp.states.begin(), cmp.states.end(), [&](StateIndex a, StateIndex b) {
    const cplx ea = energy(modes, a) + delta_energy(modes, a, params);
    const cplx eb = energy(modes, b) + delta_energy(modes, b, params);
    if (ea.real() != eb.real()) return ea.real() < eb.real();
    return ea.imag() < eb.imag();
  });

  const Eigensystem eig = diagonalize(build_hamiltonian(params, cutoff), max_rows);
  std::vector<bool> used(eig.values.size(), false);
  for (const StateIndex s : cmp.states) {
    const cplx e_analytic = energy(modes, s) + delta_energy(modes, s, params);
    int best = -1;
    double best_dist = 0.0;
    for (int j = 0; j < static_cast<int>(eig.values.size()); ++j) {
      if (used[j]) continue;
      const double d = std::abs(eig.values[j] - e_analytic);
      if (best < 0 || d < best_dist) {
        best = j;
        best_dist = d;
      }
    }
    used[best] = true;
    cmp.analytic.push_back(e_analytic);
    cmp.numeric.push_back(eig.values[best]);
    cmp.max_abs_deviation = std::max(cmp.max_abs_deviation, best_dist);
    cmp.max_rel_deviation =
        std::max(cmp.max_rel_deviation, best_dist / std::max(1.0, std::abs(e_analytic)));
    ++cmp.compared;
  }
  return cmp;
}

}  // namespace ptgup::oracle
