#pragma once

#include <array>
#include <complex>
#include <vector>

#include <boost/multiprecision/cpp_int.hpp>

#include "ptgup/rational.hpp"

namespace ptgup::hermite {

using BigInt = boost::multiprecision::cpp_int;

/// Highest Hermite degree supported by the evaluation routines.
inline constexpr int kMaxDegree = 64;

/// Physicists' Hermite polynomial H_n(s) by the three-term recurrence
/// H_{n+1} = 2 s H_n - 2 n H_{n-1}.  Throws DegreeTooLarge for n outside
/// [0, max_degree].
double hermite_eval(int n, double s, int max_degree = kMaxDegree);
std::complex<double> hermite_eval(int n, std::complex<double> s, int max_degree = kMaxDegree);

/// Monomial coefficients of H_n, exact.  coefficients[k] multiplies s^k;
/// the leading coefficient is 2^n.
struct HermiteExpansion {
  int degree = 0;
  std::vector<BigInt> coefficients;

  BigInt evaluate_exact(const BigInt& s) const;
};

HermiteExpansion hermite_expansion(int n, int max_degree = kMaxDegree);

/// Offsets at which d^4/ds^4 [e^{-s^2/2} H_n(s)] has support in the Hermite
/// basis: the result equals e^{-s^2/2} * sum_j coef[j] H_{n+offset[j]}(s).
inline constexpr std::array<int, 5> kFourthDerivativeOffsets = {-4, -2, 0, 2, 4};

/// Exact reduction of the fourth-derivative identity
///   d^4/ds^4 [e^{-s^2/2} H_n] = [(s^4-6s^2+3) H_n - 4(s^3-3s) H_n'
///                                + 6(s^2-1) H_n'' - 4s H_n''' + H_n'''']
///                               * e^{-s^2/2}
/// to a finite Hermite expansion.  Derivatives are eliminated through
/// H_n' = 2n H_{n-1} and products with powers of s through
/// s H_d = H_{d+1}/2 + d H_{d-1}; the surviving coefficients sit at offsets
/// {-4,-2,0,+2,+4} and are exact rationals.
struct FourthDerivativeExpansion {
  int n = 0;
  std::array<Rational, 5> coef{};  // aligned with kFourthDerivativeOffsets

  Rational at_offset(int offset) const;
  /// Evaluates sum_j coef[j] H_{n+offset[j]}(s); offsets below degree 0
  /// carry exactly zero coefficients.
  std::complex<double> evaluate(std::complex<double> s) const;
};

FourthDerivativeExpansion fourth_derivative_expansion(int n);

/// Gauss-Hermite rule for the weight e^{-s^2} on the real line:
/// integral f(s) e^{-s^2} ds ~ sum_i weights[i] f(nodes[i]).
/// Exact for polynomials of degree <= 2*order - 1.
struct QuadratureRule {
  int order = 0;
  std::vector<double> nodes;
  std::vector<double> weights;
};

/// Cached rule lookup; rules are computed once and shared.  Throws
/// OrderOutOfRange unless 1 <= order <= 256.
const QuadratureRule& gauss_hermite_rule(int order);

}  // namespace ptgup::hermite
