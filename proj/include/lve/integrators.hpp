#pragma once

// Thin wrappers over Boost's double-exponential and Gauss-Legendre rules.

#include "lve/errors.hpp"

#include <boost/math/quadrature/exp_sinh.hpp>
#include <boost/math/quadrature/gauss.hpp>

#include <cmath>
#include <complex>
#include <cstddef>
#include <vector>

namespace lve {

template <class V, class Real>
struct IntegralResult {
  V value;
  Real error_estimate;  // |difference| between the last two refinement levels
  Real l1_norm;
  std::size_t levels;
};

/// ∫_0^∞ f(t) dt by exp-sinh node placement, halving the step until two
/// successive levels agree to `tolerance` (relative to the L1 norm).
template <class Real, class F>
auto integrate_half_line(F&& f, Real tolerance) {
  using V = decltype(f(Real(1)));
  boost::math::quadrature::exp_sinh<Real> rule;
  Real error = 0, l1 = 0;
  std::size_t levels = 0;
  V value = rule.integrate(f, tolerance, &error, &l1, &levels);
  return IntegralResult<V, Real>{value, error, l1, levels};
}

/// Gauss-Legendre nodes and weights mapped to [0, 1].
struct GaussRule {
  std::vector<double> nodes;
  std::vector<double> weights;
};

namespace detail {

template <unsigned N>
GaussRule make_gauss_rule() {
  using G = boost::math::quadrature::gauss<double, N>;
  GaussRule r;
  const auto& x = G::abscissa();
  const auto& w = G::weights();
  // Boost stores the non-negative half of the symmetric rule.
  for (std::size_t i = 0; i < x.size(); ++i) {
    const bool centre = (N % 2 == 1) && i == 0;
    r.nodes.push_back(0.5 * (1.0 + x[i]));
    r.weights.push_back(0.5 * w[i]);
    if (!centre) {
      r.nodes.push_back(0.5 * (1.0 - x[i]));
      r.weights.push_back(0.5 * w[i]);
    }
  }
  return r;
}

}  // namespace detail

/// Supported orders: 7, 10, 15, 20, 25, 30.
inline const GaussRule& gauss_rule(unsigned points) {
  static const GaussRule r7 = detail::make_gauss_rule<7>();
  static const GaussRule r10 = detail::make_gauss_rule<10>();
  static const GaussRule r15 = detail::make_gauss_rule<15>();
  static const GaussRule r20 = detail::make_gauss_rule<20>();
  static const GaussRule r25 = detail::make_gauss_rule<25>();
  static const GaussRule r30 = detail::make_gauss_rule<30>();
  switch (points) {
    case 7: return r7;
    case 10: return r10;
    case 15: return r15;
    case 20: return r20;
    case 25: return r25;
    case 30: return r30;
    default:
      throw ContractViolation("unsupported Gauss-Legendre order " + std::to_string(points) +
                              " (use 7, 10, 15, 20, 25 or 30)");
  }
}

}  // namespace lve
