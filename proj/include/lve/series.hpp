#pragma once

// Exact perturbative series of Z(λ) = ∫ dμ(φ) exp(-λ φ^{2k}) and log Z.

#include "lve/errors.hpp"
#include "lve/exact.hpp"

#include <complex>
#include <string>
#include <vector>

namespace lve {

/// λ φ^{2k} interaction in zero dimension.
struct ModelSpec {
  int k = 3;
  std::string description;

  explicit ModelSpec(int degree_half, std::string desc = {}) : k(degree_half), description(std::move(desc)) {
    if (k < 2) throw ContractViolation("model needs k >= 2, got " + std::to_string(k));
    if (description.empty()) description = "phi^" + std::to_string(2 * k);
  }
};

/// Truncated power series in λ with exact rational coefficients.
struct ExactSeries {
  std::vector<Rational> coefficients;

  int truncation_order() const { return static_cast<int>(coefficients.size()) - 1; }
  const Rational& operator[](std::size_t n) const { return coefficients[n]; }
  friend bool operator==(const ExactSeries&, const ExactSeries&) = default;
};

/// E[φ^p] for the unit Gaussian: (p-1)!! for even p, 0 for odd p.
inline BigInt gaussian_moment(unsigned p) { return double_factorial_odd(p); }

/// a_n = (-1)^n (2kn-1)!! / n!, n = 0..N.
inline ExactSeries partition_series(const ModelSpec& model, int order) {
  if (order < 0) throw ContractViolation("series order must be >= 0");
  ExactSeries s;
  s.coefficients.reserve(static_cast<std::size_t>(order) + 1);
  BigInt n_factorial = 1;
  for (int n = 0; n <= order; ++n) {
    if (n > 0) n_factorial *= n;
    Rational a(gaussian_moment(static_cast<unsigned>(2 * model.k * n)), n_factorial);
    s.coefficients.push_back(n % 2 ? Rational(-a) : a);
  }
  return s;
}

/// Formal logarithm of a series with constant term 1, via l' = z'/z.
inline ExactSeries log_series(const ExactSeries& z) {
  if (z.coefficients.empty() || z[0] != 1)
    throw ContractViolation("log_series needs constant term 1");
  const int order = z.truncation_order();
  ExactSeries l;
  l.coefficients.assign(static_cast<std::size_t>(order) + 1, Rational(0));
  for (int n = 1; n <= order; ++n) {
    Rational acc = Rational(n) * z[n];
    for (int j = 1; j < n; ++j) acc -= Rational(j) * l.coefficients[j] * z[n - j];
    l.coefficients[n] = acc / n;
  }
  return l;
}

/// Formal exponential of a series with constant term 0 (inverse of log_series).
inline ExactSeries exp_series(const ExactSeries& s) {
  if (s.coefficients.empty() || s[0] != 0)
    throw ContractViolation("exp_series needs constant term 0");
  const int order = s.truncation_order();
  ExactSeries e;
  e.coefficients.assign(static_cast<std::size_t>(order) + 1, Rational(0));
  e.coefficients[0] = 1;
  for (int n = 1; n <= order; ++n) {
    Rational acc = 0;
    for (int j = 1; j <= n; ++j) acc += Rational(j) * s[j] * e.coefficients[n - j];
    e.coefficients[n] = acc / n;
  }
  return e;
}

/// Sum_{n<=N} a_n λ^n in the floating type Real (Horner).
template <class Real>
std::complex<Real> taylor_partial_sum(const ExactSeries& s, int N, std::complex<Real> lambda) {
  if (N < 0 || N > s.truncation_order())
    throw ContractViolation("partial-sum order " + std::to_string(N) + " outside series of order " +
                            std::to_string(s.truncation_order()));
  std::complex<Real> acc = 0;
  for (int n = N; n >= 0; --n) acc = acc * lambda + std::complex<Real>(to_real<Real>(s[n]), Real(0));
  return acc;
}

}  // namespace lve
