#pragma once

// Z(λ) = ∫ dφ/√(2π) exp(-φ²/2 - λ φ^{2k}) for complex λ in the sector
// 𝓓^{k-1} = { |Arg λ| < (k-1)π/2 }, its Taylor remainders, and remainder
// envelope scans.
//
// Remainders are normalised with Le Roy order k-1 (order 2 for φ^6).

#include "lve/errors.hpp"
#include "lve/integrators.hpp"
#include "lve/series.hpp"

#include <cmath>
#include <complex>
#include <numbers>
#include <span>
#include <vector>

namespace lve {

/// Coupling constant in polar form. The argument is kept as given (it may
/// exceed π in magnitude for k >= 4), so fractional powers are unambiguous.
struct Coupling {
  double modulus = 0.0;
  double argument = 0.0;

  static Coupling from_complex(std::complex<double> z) { return {std::abs(z), std::arg(z)}; }
  static Coupling real(double x) { return x >= 0 ? Coupling{x, 0.0} : Coupling{-x, std::numbers::pi}; }

  template <class Real = double>
  std::complex<Real> value() const {
    return std::polar(static_cast<Real>(modulus), static_cast<Real>(argument));
  }

  /// λ^p on the branch fixed by the stored argument.
  template <class Real = double>
  std::complex<Real> power(Real p) const {
    if (modulus == 0.0) return p == Real(0) ? std::complex<Real>(1) : std::complex<Real>(0);
    return std::polar(std::pow(static_cast<Real>(modulus), p), p * static_cast<Real>(argument));
  }

  Coupling conj() const { return {modulus, -argument}; }
};

/// Half-opening of the analyticity sector: (k-1)π/2.
inline double domain_half_angle(int k) { return (k - 1) * std::numbers::pi / 2.0; }

struct DomainPoint {
  Coupling lambda;
  int k = 3;

  bool in_domain() const {
    return lambda.modulus > 0.0 && std::abs(lambda.argument) < domain_half_angle(k);
  }
};

struct ZValue {
  std::complex<long double> value;
  long double error_estimate;
};

/// Z on the ray φ = e^{iθ} t with θ = -Arg(λ)/(2k), where λφ^{2k} = |λ| t^{2k}.
/// λ = 0 returns the Gaussian normalisation 1 exactly.
inline ZValue evaluate_Z(const DomainPoint& p, double rel_tol = 1e-14) {
  if (rel_tol < 1e-14) throw ContractViolation("evaluate_Z needs rel_tol >= 1e-14");
  if (p.k < 2) throw ContractViolation("model needs k >= 2");
  if (p.lambda.modulus == 0.0) return {1.0L, 0.0L};
  if (!p.in_domain())
    throw DomainError("Arg λ = " + std::to_string(p.lambda.argument) + " outside the sector |Arg λ| < " +
                      std::to_string(domain_half_angle(p.k)) + " for k=" + std::to_string(p.k));

  using Real = long double;
  const Real theta = -static_cast<Real>(p.lambda.argument) / (2 * p.k);
  // Gaussian damping along the ray; bounded below by cos((k-1)π/(2k)) in the sector.
  const Real damping = std::cos(2 * theta);
  if (!(damping >= std::cos((p.k - 1) * std::numbers::pi_v<Real> / (2 * p.k))) || damping <= 0)
    throw DomainError("rotated contour lost Gaussian damping");

  const std::complex<Real> rot = std::polar(Real(1), theta);
  const std::complex<Real> rot2 = rot * rot;
  const Real mod = static_cast<Real>(p.lambda.modulus);
  const int power = 2 * p.k;
  auto integrand = [&](Real t) -> std::complex<Real> {
    return rot * std::exp(-rot2 * (t * t / 2) - mod * std::pow(t, power));
  };
  const auto r = integrate_half_line<Real>(integrand, static_cast<Real>(rel_tol) / 10);
  const Real norm = 2 / std::sqrt(2 * std::numbers::pi_v<Real>);
  ZValue z{r.value * norm, r.error_estimate * norm};
  if (!std::isfinite(std::abs(z.value)) || z.error_estimate > rel_tol * std::abs(z.value))
    throw AccuracyError("Z quadrature did not converge", static_cast<double>(z.error_estimate / std::abs(z.value)));
  return z;
}

struct RemainderRecord {
  int N = 0;
  std::complex<long double> value;  // R^N = Z - Σ_{n<=N} a_n λ^n
  double bound_ratio = 0.0;         // |R^N| / (|λ|^{N+1} Γ((k-1)N+1))
  double modulus = 0.0;             // |λ|
  int k = 3;
};

/// |R^N| / (|λ|^{N+1} Γ(order·N + 1)); 0 when the remainder vanishes.
inline double bound_ratio(const RemainderRecord& r, double leroy_order) {
  const long double mag = std::abs(r.value);
  if (mag == 0.0L) return 0.0;
  const long double log_ratio = std::log(mag) - (r.N + 1) * std::log(static_cast<long double>(r.modulus)) -
                                std::lgamma(leroy_order * r.N + 1.0L);
  return static_cast<double>(std::exp(log_ratio));
}

namespace detail {

inline std::vector<RemainderRecord> remainders_from(const DomainPoint& p, std::complex<long double> z,
                                                    const ExactSeries& series, int n_max) {
  std::vector<RemainderRecord> out;
  const auto lam = p.lambda.value<long double>();
  std::complex<long double> partial = 0, lam_pow = 1;
  for (int N = 0; N <= n_max; ++N) {
    partial += to_real<long double>(series[N]) * lam_pow;
    lam_pow *= lam;
    RemainderRecord rec{N, z - partial, 0.0, p.lambda.modulus, p.k};
    rec.bound_ratio = bound_ratio(rec, p.k - 1);
    out.push_back(rec);
  }
  return out;
}

}  // namespace detail

inline RemainderRecord taylor_remainder(const DomainPoint& p, int N, double rel_tol = 1e-14,
                                        int series_order_cap = 40) {
  if (N < 0 || N > series_order_cap) throw ContractViolation("remainder order outside configured series order");
  const auto series = partition_series(ModelSpec(p.k), N);
  if (p.lambda.modulus == 0.0) return {N, 0.0L, 0.0, 0.0, p.k};
  const auto z = evaluate_Z(p, rel_tol);
  return detail::remainders_from(p, z.value, series, N).back();
}

struct ScanRow {
  double argument;
  double modulus;
  RemainderRecord record;
};

/// Remainders for every (ray, radius, N <= n_max). Rays must stay within 95%
/// of the sector half-angle.
inline std::vector<ScanRow> remainder_bound_scan(int k, int n_max, std::span<const double> rays,
                                                 std::span<const double> radii, double rel_tol = 1e-14,
                                                 int series_order_cap = 40) {
  if (n_max < 0 || n_max > series_order_cap) throw ContractViolation("n_max outside configured series order");
  const auto series = partition_series(ModelSpec(k), n_max);
  const double cap = 0.95 * domain_half_angle(k);
  std::vector<ScanRow> rows;
  for (double ray : rays) {
    if (std::abs(ray) > cap)
      throw DomainError("ray " + std::to_string(ray) + " beyond 95% of the sector half-angle " +
                        std::to_string(domain_half_angle(k)));
    for (double radius : radii) {
      const DomainPoint p{{radius, ray}, k};
      const auto z = evaluate_Z(p, rel_tol);
      for (const auto& rec : detail::remainders_from(p, z.value, series, n_max)) rows.push_back({ray, radius, rec});
    }
  }
  return rows;
}

/// Least-squares envelope log r_N ≈ log A + N log B, plus the slope η of the
/// increments log r_N - log r_{N-1} against log N. Geometric growth has η ≈ 0;
/// a normalisation one Le Roy order too low adds N log N and gives η ≈ 1.
struct GrowthFit {
  double log_A = 0.0;
  double log_B = 0.0;
  double excess_order = 0.0;
};

inline GrowthFit fit_growth(std::span<const double> log_ratios) {
  const std::size_t m = log_ratios.size();
  if (m < 3) throw ContractViolation("growth fit needs at least 3 points");
  auto line_fit = [](const std::vector<double>& x, const std::vector<double>& y) {
    const double n = static_cast<double>(x.size());
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    for (std::size_t i = 0; i < x.size(); ++i) {
      sx += x[i];
      sy += y[i];
      sxx += x[i] * x[i];
      sxy += x[i] * y[i];
    }
    const double slope = (n * sxy - sx * sy) / (n * sxx - sx * sx);
    return std::pair{(sy - slope * sx) / n, slope};
  };
  std::vector<double> ns, ys(log_ratios.begin(), log_ratios.end());
  for (std::size_t i = 0; i < m; ++i) ns.push_back(static_cast<double>(i));
  const auto [a, b] = line_fit(ns, ys);
  std::vector<double> logn, inc;
  for (std::size_t i = 1; i < m; ++i) {
    logn.push_back(std::log(static_cast<double>(i)));
    inc.push_back(log_ratios[i] - log_ratios[i - 1]);
  }
  return {a, b, line_fit(logn, inc).second};
}

}  // namespace lve
