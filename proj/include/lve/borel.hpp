#pragma once

// Borel-Le Roy transform, exact Padé continuation and Laplace-type inversion.
//
// For a series Σ a_n λ^n with a_n ~ Γ(k′n+1) growth, the order-k′ transform
// B(u) = Σ a_n u^n / Γ(k′n+1) has a finite radius. The sum is recovered as
//   f(λ) = (1/(k′λ)) ∫_0^∞ B(u) exp(-(u/λ)^{1/k′}) (u/λ)^{1/k′ - 1} du,
// which after u = λ s^{k′} reads f(λ) = ∫_0^∞ e^{-s} B(λ s^{k′}) ds.

#include "lve/errors.hpp"
#include "lve/exact.hpp"
#include "lve/integrators.hpp"
#include "lve/quadrature.hpp"
#include "lve/series.hpp"

#include <Eigen/Eigenvalues>

#include <algorithm>
#include <cmath>
#include <complex>
#include <optional>
#include <span>
#include <vector>

namespace lve {

struct BorelTransform {
  int order = 1;                      // Le Roy order k′
  std::vector<Rational> coefficients;  // b_n = a_n / (k′n)!

  /// max_{1<=n<=N} |b_n|^{1/n}; an estimate of 1/radius on the computed prefix.
  double root_test() const {
    double m = 0.0;
    for (std::size_t n = 1; n < coefficients.size(); ++n) {
      const double b = std::abs(to_real<double>(coefficients[n]));
      if (b > 0) m = std::max(m, std::pow(b, 1.0 / static_cast<double>(n)));
    }
    return m;
  }
};

inline BorelTransform borel_coefficients(const ExactSeries& s, int leroy_order) {
  if (leroy_order < 1) throw ContractViolation("Le Roy order must be >= 1");
  BorelTransform b{leroy_order, {}};
  for (std::size_t n = 0; n < s.coefficients.size(); ++n)
    b.coefficients.push_back(s[n] / Rational(factorial(static_cast<unsigned>(leroy_order * n))));
  return b;
}

/// P(u)/Q(u) with Q(0) = 1.
struct PadeApproximant {
  std::vector<Rational> numerator;    // degree L
  std::vector<Rational> denominator;  // degree M, denominator[0] == 1

  int L() const { return static_cast<int>(numerator.size()) - 1; }
  int M() const { return static_cast<int>(denominator.size()) - 1; }

  /// For |u| > 1 both polynomials are evaluated in 1/u to avoid overflow.
  template <class Real>
  std::complex<Real> operator()(std::complex<Real> u) const {
    if (std::abs(u) <= Real(1)) {
      auto horner = [&](const std::vector<Rational>& c) {
        std::complex<Real> acc = 0;
        for (auto it = c.rbegin(); it != c.rend(); ++it) acc = acc * u + to_real<Real>(*it);
        return acc;
      };
      return horner(numerator) / horner(denominator);
    }
    const std::complex<Real> v = Real(1) / u;
    auto reversed = [&](const std::vector<Rational>& c) {
      std::complex<Real> acc = 0;
      for (const auto& x : c) acc = acc * v + to_real<Real>(x);
      return acc;
    };
    return std::pow(u, L() - M()) * reversed(numerator) / reversed(denominator);
  }

  /// Taylor coefficients of P/Q through the given order.
  std::vector<Rational> expand(int order) const {
    std::vector<Rational> c(static_cast<std::size_t>(order) + 1, Rational(0));
    for (int n = 0; n <= order; ++n) {
      Rational acc = n <= L() ? numerator[n] : Rational(0);
      for (int j = 1; j <= std::min(n, M()); ++j) acc -= denominator[j] * c[n - j];
      c[n] = acc;
    }
    return c;
  }

  /// Roots of the denominator.
  std::vector<std::complex<long double>> poles() const {
    int m = M();
    while (m > 0 && denominator[m] == 0) --m;
    if (m == 0) return {};
    using Mat = Eigen::Matrix<long double, Eigen::Dynamic, Eigen::Dynamic>;
    Mat companion = Mat::Zero(m, m);
    const long double lead = to_real<long double>(denominator[m]);
    for (int i = 0; i < m; ++i) companion(0, i) = -to_real<long double>(denominator[m - 1 - i]) / lead;
    for (int i = 1; i < m; ++i) companion(i, i - 1) = 1;
    Eigen::EigenSolver<Mat> solver(companion, false);
    std::vector<std::complex<long double>> out;
    for (int i = 0; i < m; ++i) out.push_back(solver.eigenvalues()[i]);
    return out;
  }
};

/// [L/M] approximant from the denominator linear system, in exact arithmetic.
inline PadeApproximant pade(std::span<const Rational> c, int L, int M) {
  if (L < 0 || M < 0) throw ContractViolation("Padé degrees must be non-negative");
  if (static_cast<std::size_t>(L + M + 1) > c.size())
    throw ContractViolation("Padé [" + std::to_string(L) + "/" + std::to_string(M) + "] needs " +
                            std::to_string(L + M + 1) + " coefficients, have " + std::to_string(c.size()));
  auto coef = [&](int i) { return i >= 0 ? c[static_cast<std::size_t>(i)] : Rational(0); };

  // Σ_{i=1}^{M} q_i c_{L+j-i} = -c_{L+j}, j = 1..M.
  std::vector<std::vector<Rational>> a(M, std::vector<Rational>(M + 1));
  for (int j = 1; j <= M; ++j) {
    for (int i = 1; i <= M; ++i) a[j - 1][i - 1] = coef(L + j - i);
    a[j - 1][M] = -coef(L + j);
  }
  for (int col = 0; col < M; ++col) {
    int piv = col;
    while (piv < M && a[piv][col] == 0) ++piv;
    if (piv == M)
      throw DegeneracyError("singular Padé system for [" + std::to_string(L) + "/" + std::to_string(M) + "]");
    std::swap(a[piv], a[col]);
    for (int r = 0; r < M; ++r) {
      if (r == col || a[r][col] == 0) continue;
      const Rational f = a[r][col] / a[col][col];
      for (int k = col; k <= M; ++k) a[r][k] -= f * a[col][k];
    }
  }
  PadeApproximant p;
  p.denominator.assign(static_cast<std::size_t>(M) + 1, Rational(0));
  p.denominator[0] = 1;
  for (int i = 0; i < M; ++i) p.denominator[i + 1] = a[i][M] / a[i][i];
  p.numerator.assign(static_cast<std::size_t>(L) + 1, Rational(0));
  for (int i = 0; i <= L; ++i)
    for (int j = 0; j <= std::min(i, M); ++j) p.numerator[i] += p.denominator[j] * coef(i - j);
  return p;
}

/// Diagonal ⌊N/2⌋ degrees, lowering M on a singular system.
inline PadeApproximant pade_auto(std::span<const Rational> c, int N) {
  int M = N / 2;
  const int L = N / 2;
  for (;; --M) {
    try {
      return pade(c.first(static_cast<std::size_t>(N) + 1), L + (N / 2 - M), M);
    } catch (const DegeneracyError&) {
      if (M == 0) throw;
    }
  }
}

/// Pole on the ray {t e^{iφ} : t > 0}, within the relative angular tolerance.
inline std::optional<std::complex<long double>> pole_on_ray(const PadeApproximant& p, long double phi,
                                                            long double tol = 1e-9L) {
  const std::complex<long double> rot = std::polar(1.0L, -phi);
  for (const auto& r : p.poles()) {
    const auto z = r * rot;
    if (z.real() > 0 && std::abs(z.imag()) <= tol * std::abs(z)) return r;
  }
  return std::nullopt;
}

/// ∫_0^∞ e^{-s} P/Q(λ s^{k′}) ds. The Padé continuation must be pole-free on
/// the ray arg u = arg λ swept by the substitution.
inline std::complex<long double> borel_laplace(const PadeApproximant& p, int leroy_order, const Coupling& lambda,
                                               long double rel_tol = 1e-13L) {
  if (leroy_order < 1) throw ContractViolation("Le Roy order must be >= 1");
  if (lambda.modulus == 0.0) return to_real<long double>(p.numerator[0]);
  if (auto pole = pole_on_ray(p, lambda.argument))
    throw ContinuationError("Padé pole at u = " + std::to_string(static_cast<double>(pole->real())) + " + " +
                            std::to_string(static_cast<double>(pole->imag())) + "i on the integration ray");
  const auto lam = lambda.value<long double>();
  auto integrand = [&](long double s) -> std::complex<long double> {
    const long double damping = std::exp(-s);
    if (damping == 0) return 0;
    return damping * p(lam * std::pow(s, leroy_order));
  };
  const auto r = integrate_half_line<long double>(integrand, rel_tol);
  if (!std::isfinite(std::abs(r.value)) || r.error_estimate > 1e3L * rel_tol * std::max(std::abs(r.value), r.l1_norm))
    throw AccuracyError("Borel inversion integral did not converge",
                        static_cast<double>(r.error_estimate / std::abs(r.value)));
  return r.value;
}

struct ResummationReport {
  Coupling lambda;
  int k = 3;
  int leroy_order = 2;
  int N_used = 0;
  int pade_L = 0;
  int pade_M = 0;
  std::complex<long double> resummed;
  std::complex<long double> oracle;
  double relative_error = 0.0;
};

struct PadeDegrees {
  int L = 0;
  int M = 0;
};

/// Resum the φ^{2k} series truncated at order N and compare with quadrature.
/// Without explicit degrees the diagonal ⌊N/2⌋ approximant is used; the Le
/// Roy order defaults to k-1.
inline ResummationReport resum(const ModelSpec& model, const Coupling& lambda, int N,
                               std::optional<PadeDegrees> degrees = std::nullopt,
                               std::optional<int> leroy_order = std::nullopt) {
  if (N < 0) throw ContractViolation("N must be >= 0");
  const DomainPoint point{lambda, model.k};
  if (lambda.modulus != 0.0 && !point.in_domain()) throw DomainError("coupling outside the analyticity sector");
  const int kp = leroy_order.value_or(model.k - 1);
  const auto b = borel_coefficients(partition_series(model, N), kp);
  const auto p = degrees ? pade(b.coefficients, degrees->L, degrees->M) : pade_auto(b.coefficients, N);

  ResummationReport rep;
  rep.lambda = lambda;
  rep.k = model.k;
  rep.leroy_order = kp;
  rep.N_used = N;
  rep.pade_L = p.L();
  rep.pade_M = p.M();
  rep.resummed = borel_laplace(p, kp, lambda);
  rep.oracle = evaluate_Z(point).value;
  rep.relative_error = static_cast<double>(std::abs(rep.resummed - rep.oracle) / std::abs(rep.oracle));
  return rep;
}

/// One report per (λ, N), λ-major.
inline std::vector<ResummationReport> consistency_sweep(const ModelSpec& model, std::span<const Coupling> lambdas,
                                                        std::span<const int> orders) {
  std::vector<ResummationReport> out;
  for (const auto& l : lambdas)
    for (int N : orders) out.push_back(resum(model, l, N));
  return out;
}

}  // namespace lve
