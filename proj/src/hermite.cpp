#include "ptgup/hermite.hpp"

#include <cmath>
#include <map>
#include <memory>
#include <mutex>
#include <stdexcept>

#include "ptgup/errors.hpp"

namespace ptgup::hermite {

namespace {

template <typename Scalar>
Scalar eval_recurrence(int n, Scalar s) {
  if (n == 0) return Scalar(1);
  Scalar prev(1);          // H_0
  Scalar cur = 2.0 * s;    // H_1
  for (int k = 1; k < n; ++k) {
    Scalar next = 2.0 * s * cur - 2.0 * static_cast<double>(k) * prev;
    prev = cur;
    cur = next;
  }
  return cur;
}

void check_degree(int n, int max_degree) {
  if (n < 0 || n > max_degree) {
    throw DegreeTooLarge("Hermite degree " + std::to_string(n) + " outside [0, " +
                         std::to_string(max_degree) + "]");
  }
}

}  // namespace

double hermite_eval(int n, double s, int max_degree) {
  check_degree(n, max_degree);
  return eval_recurrence(n, s);
}

std::complex<double> hermite_eval(int n, std::complex<double> s, int max_degree) {
  check_degree(n, max_degree);
  return eval_recurrence(n, s);
}

BigInt HermiteExpansion::evaluate_exact(const BigInt& s) const {
  BigInt acc = 0;
  for (auto it = coefficients.rbegin(); it != coefficients.rend(); ++it) acc = acc * s + *it;
  return acc;
}

HermiteExpansion hermite_expansion(int n, int max_degree) {
  check_degree(n, max_degree);
  std::vector<BigInt> prev{1};      // H_0
  if (n == 0) return {0, prev};
  std::vector<BigInt> cur{0, 2};    // H_1
  for (int k = 1; k < n; ++k) {
    std::vector<BigInt> next(static_cast<std::size_t>(k) + 2, BigInt(0));
    for (std::size_t j = 0; j < cur.size(); ++j) next[j + 1] += 2 * cur[j];
    for (std::size_t j = 0; j < prev.size(); ++j) next[j] -= 2 * k * prev[j];
    prev = std::move(cur);
    cur = std::move(next);
  }
  return {n, cur};
}

namespace {

// Coefficient vector over the Hermite basis: v[d] multiplies H_d.
using HermiteVec = std::vector<Rational>;

// s H_d = H_{d+1}/2 + d H_{d-1}
HermiteVec mul_s(const HermiteVec& v) {
  HermiteVec out(v.size() + 1, Rational(0));
  for (std::size_t d = 0; d < v.size(); ++d) {
    if (v[d] == Rational(0)) continue;
    out[d + 1] = out[d + 1] + v[d] * Rational(1, 2);
    if (d > 0) out[d - 1] = out[d - 1] + v[d] * Rational(static_cast<std::int64_t>(d));
  }
  return out;
}

void accumulate(HermiteVec& into, const HermiteVec& v, Rational scale) {
  if (into.size() < v.size()) into.resize(v.size(), Rational(0));
  for (std::size_t d = 0; d < v.size(); ++d) into[d] = into[d] + v[d] * scale;
}

// Product of a polynomial in s (monomial coefficients) with H_base,
// expressed over the Hermite basis.
HermiteVec poly_times_hermite(const std::vector<Rational>& poly, int base) {
  HermiteVec power(static_cast<std::size_t>(base) + 1, Rational(0));
  power[static_cast<std::size_t>(base)] = Rational(1);  // s^0 H_base
  HermiteVec out;
  for (std::size_t k = 0; k < poly.size(); ++k) {
    if (!(poly[k] == Rational(0))) accumulate(out, power, poly[k]);
    if (k + 1 < poly.size()) power = mul_s(power);
  }
  return out;
}

}  // namespace

Rational FourthDerivativeExpansion::at_offset(int offset) const {
  for (std::size_t j = 0; j < kFourthDerivativeOffsets.size(); ++j) {
    if (kFourthDerivativeOffsets[j] == offset) return coef[j];
  }
  throw std::out_of_range("fourth-derivative expansion has no offset " + std::to_string(offset));
}

std::complex<double> FourthDerivativeExpansion::evaluate(std::complex<double> s) const {
  std::complex<double> acc = 0.0;
  for (std::size_t j = 0; j < kFourthDerivativeOffsets.size(); ++j) {
    const int degree = n + kFourthDerivativeOffsets[j];
    if (degree < 0 || coef[j] == Rational(0)) continue;
    acc += coef[j].value() * hermite_eval(degree, s, n + 4);
  }
  return acc;
}

FourthDerivativeExpansion fourth_derivative_expansion(int n) {
  if (n < 0) throw std::invalid_argument("fourth_derivative_expansion: negative degree");

  // Identity blocks multiplying H_n, H_n', H_n'', H_n''', H_n''''.
  const std::vector<Rational> block0 = {3, 0, -6, 0, 1};  // s^4 - 6 s^2 + 3
  const std::vector<Rational> block1 = {0, 12, 0, -4};    // -4(s^3 - 3 s)
  const std::vector<Rational> block2 = {-6, 0, 6};        // 6(s^2 - 1)
  const std::vector<Rational> block3 = {0, -4};           // -4 s
  const std::vector<Rational> block4 = {1};

  // d-th derivative of H_n is 2^d n!/(n-d)! H_{n-d}.
  const auto deriv_factor = [n](int d) {
    std::int64_t f = 1;
    for (int j = 0; j < d; ++j) f *= 2 * static_cast<std::int64_t>(n - j);
    return Rational(f);
  };

  HermiteVec total;
  accumulate(total, poly_times_hermite(block0, n), Rational(1));
  if (n >= 1) accumulate(total, poly_times_hermite(block1, n - 1), deriv_factor(1));
  if (n >= 2) accumulate(total, poly_times_hermite(block2, n - 2), deriv_factor(2));
  if (n >= 3) accumulate(total, poly_times_hermite(block3, n - 3), deriv_factor(3));
  if (n >= 4) accumulate(total, poly_times_hermite(block4, n - 4), deriv_factor(4));

  FourthDerivativeExpansion result;
  result.n = n;
  for (std::size_t d = 0; d < total.size(); ++d) {
    const int offset = static_cast<int>(d) - n;
    bool allowed = false;
    for (std::size_t j = 0; j < kFourthDerivativeOffsets.size(); ++j) {
      if (kFourthDerivativeOffsets[j] == offset) {
        result.coef[j] = total[d];
        allowed = true;
        break;
      }
    }
    if (!allowed && !(total[d] == Rational(0))) {
      throw std::logic_error("fourth-derivative reduction produced an unexpected offset");
    }
  }
  return result;
}

namespace {

// Newton iteration on the orthonormal recurrence (weight e^{-s^2}); the
// normalized polynomials stay O(1) even at order 256.
QuadratureRule compute_gauss_hermite(int order) {
  constexpr double kEps = 1e-14;
  constexpr int kMaxIterations = 200;
  const double pi_m4 = 0.7511255444649425;  // pi^{-1/4}

  QuadratureRule rule;
  rule.order = order;
  rule.nodes.assign(order, 0.0);
  rule.weights.assign(order, 0.0);

  const int half = (order + 1) / 2;
  double z = 0.0;
  for (int i = 0; i < half; ++i) {
    if (i == 0) {
      z = std::sqrt(2.0 * order + 1.0) - 1.85575 * std::pow(2.0 * order + 1.0, -0.16667);
    } else if (i == 1) {
      z -= 1.14 * std::pow(order, 0.426) / z;
    } else if (i == 2) {
      z = 1.86 * z - 0.86 * rule.nodes[order - 1];
    } else if (i == 3) {
      z = 1.91 * z - 0.91 * rule.nodes[order - 2];
    } else {
      z = 2.0 * z - rule.nodes[order - i + 1];
    }

    double pp = 0.0;
    int it = 0;
    for (; it < kMaxIterations; ++it) {
      double p1 = pi_m4;
      double p2 = 0.0;
      for (int j = 0; j < order; ++j) {
        const double p3 = p2;
        p2 = p1;
        p1 = z * std::sqrt(2.0 / (j + 1)) * p2 - std::sqrt(static_cast<double>(j) / (j + 1)) * p3;
      }
      pp = std::sqrt(2.0 * order) * p2;
      const double z_old = z;
      z = z_old - p1 / pp;
      if (std::abs(z - z_old) <= kEps) break;
    }
    if (it >= kMaxIterations) {
      throw ConvergenceFailure("Gauss-Hermite node iteration failed at order " +
                               std::to_string(order));
    }

    if (2 * i == order - 1) z = 0.0;  // middle node of an odd rule
    rule.nodes[order - 1 - i] = z;
    rule.nodes[i] = -z;
    rule.weights[i] = 2.0 / (pp * pp);
    rule.weights[order - 1 - i] = rule.weights[i];
  }
  return rule;
}

}  // namespace

const QuadratureRule& gauss_hermite_rule(int order) {
  if (order < 1 || order > 256) {
    throw OrderOutOfRange("Gauss-Hermite order " + std::to_string(order) + " outside [1, 256]");
  }
  static std::mutex mutex;
  static std::map<int, std::unique_ptr<QuadratureRule>> cache;
  std::lock_guard<std::mutex> lock(mutex);
  auto& slot = cache[order];
  if (!slot) slot = std::make_unique<QuadratureRule>(compute_gauss_hermite(order));
  return *slot;
}

}  // namespace ptgup::hermite
