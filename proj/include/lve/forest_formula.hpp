#pragma once

// The Taylor forest interpolation identity
//   f(1,…,1) = Σ_F ∫_0^1 Π_{ℓ∈F} dw_ℓ [Π_{ℓ∈F} ∂_ℓ f](X^F(w))
// checked on link functions with closed-form mixed partials.

#include "lve/errors.hpp"
#include "lve/exact.hpp"
#include "lve/integrators.hpp"
#include "lve/trees.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <map>
#include <numeric>
#include <vector>

namespace lve {

/// Coefficient times Π x_ℓ^{power_ℓ}.
struct Monomial {
  Rational coefficient;
  std::map<Edge, int> powers;
};

/// f(x) = exp(Σ c_ℓ x_ℓ) or a sparse polynomial in the link variables x_ℓ.
struct LinkFunction {
  enum class Kind { exponential, polynomial };

  int n = 1;
  Kind kind = Kind::exponential;
  std::map<Edge, Rational> linear;   // exponential kind
  std::vector<Monomial> monomials;   // polynomial kind

  static LinkFunction exponential(int n, std::map<Edge, Rational> c) {
    LinkFunction f{n, Kind::exponential, std::move(c), {}};
    f.validate();
    return f;
  }
  static LinkFunction polynomial(int n, std::vector<Monomial> m) {
    LinkFunction f{n, Kind::polynomial, {}, std::move(m)};
    f.validate();
    return f;
  }

  void validate() const {
    if (n < 1) throw ContractViolation("link function needs n >= 1");
    auto check = [&](const Edge& e) {
      if (e.i < 1 || e.i >= e.j || e.j > n)
        throw ContractViolation("link pair (" + std::to_string(e.i) + "," + std::to_string(e.j) +
                                ") outside 1 <= i < j <= " + std::to_string(n));
    };
    for (const auto& [e, c] : linear) check(e);
    for (const auto& m : monomials)
      for (const auto& [e, p] : m.powers) {
        check(e);
        if (p < 0) throw ContractViolation("negative monomial power");
      }
  }

  double coefficient(const Edge& e) const {
    auto it = linear.find(e);
    return it == linear.end() ? 0.0 : to_real<double>(it->second);
  }

  /// f(1,…,1).
  double at_ones() const {
    if (kind == Kind::exponential) {
      double s = 0;
      for (const auto& [e, c] : linear) s += to_real<double>(c);
      return std::exp(s);
    }
    double s = 0;
    for (const auto& m : monomials) s += to_real<double>(m.coefficient);
    return s;
  }
};

/// [Π_{ℓ∈forest} ∂_ℓ f] at the link values point(i-1, j-1).
inline double forest_derivative(const LinkFunction& f, const LabeledForest& forest, const SquareMatrix<double>& point) {
  if (forest.vertex_count() != f.n || point.size() != f.n)
    throw ContractViolation("forest, point and link function disagree on n");
  auto x = [&](const Edge& e) { return point(e.i - 1, e.j - 1); };
  if (f.kind == LinkFunction::Kind::exponential) {
    double prefactor = 1.0, exponent = 0.0;
    for (const auto& e : forest.edges()) prefactor *= f.coefficient(e);
    for (const auto& [e, c] : f.linear) exponent += to_real<double>(c) * x(e);
    return prefactor * std::exp(exponent);
  }
  double total = 0.0;
  for (const auto& m : f.monomials) {
    double term = to_real<double>(m.coefficient);
    for (const auto& e : forest.edges()) {
      auto it = m.powers.find(e);
      if (it == m.powers.end() || it->second == 0) {
        term = 0.0;
        break;
      }
    }
    if (term == 0.0) continue;
    for (const auto& [e, p] : m.powers) {
      const bool differentiated = std::find(forest.edges().begin(), forest.edges().end(), e) != forest.edges().end();
      const int q = differentiated ? p - 1 : p;
      if (differentiated) term *= p;
      term *= std::pow(x(e), q);
    }
    total += term;
  }
  return total;
}

struct ForestQuadrature {
  unsigned low_order = 7;    // Gauss points per dimension for the error estimate
  unsigned high_order = 10;  // Gauss points per dimension for the value
  double tolerance = 1e-10;  // relative, on the total
  std::size_t max_edges = 5;
};

struct ForestContribution {
  LabeledForest forest;
  double value;
  double error_estimate;
};

struct ForestExpansion {
  double total = 0.0;
  double direct = 0.0;  // f(1,…,1)
  double error_estimate = 0.0;
  std::vector<ForestContribution> contributions;
};

namespace detail {

// ∫ over the ordered simplex 1 >= t_1 >= … >= t_p >= 0 of g(t), mapped from
// the unit cube by t_j = Π_{i<=j} u_i with Jacobian Π u_i^{p-i}.
inline double simplex_integral(std::size_t p, const GaussRule& rule, const std::function<double(const std::vector<double>&)>& g) {
  std::vector<double> t(p);
  std::function<double(std::size_t, double, double)> rec = [&](std::size_t depth, double prev, double weight) {
    if (depth == p) return weight * g(t);
    double acc = 0.0;
    for (std::size_t q = 0; q < rule.nodes.size(); ++q) {
      const double u = rule.nodes[q];
      t[depth] = prev * u;
      acc += rec(depth + 1, t[depth], weight * rule.weights[q] * std::pow(u, static_cast<double>(p - 1 - depth)));
    }
    return acc;
  };
  return rec(0, 1.0, 1.0);
}

// Integral of the forest term over [0,1]^p as a sum over edge orderings.
inline double forest_term(const LinkFunction& f, const LabeledForest& forest, const GaussRule& rule) {
  const std::size_t p = forest.edge_count();
  const int n = f.n;
  if (p == 0) return forest_derivative(f, forest, SquareMatrix<double>::identity(n));

  double prefactor = 1.0;
  if (f.kind == LinkFunction::Kind::exponential) {
    for (const auto& e : forest.edges()) prefactor *= f.coefficient(e);
    if (prefactor == 0.0) return 0.0;
  }

  std::vector<std::size_t> order(p);
  std::iota(order.begin(), order.end(), 0);
  double total = 0.0;
  do {
    // blocks[k]: connectivity after the first k edges of the ordering.
    std::vector<SquareMatrix<int>> blocks;
    DisjointSets ds(n);
    for (std::size_t k = 0; k <= p; ++k) {
      SquareMatrix<int> b(n, 0);
      for (int u = 1; u <= n; ++u)
        for (int v = 1; v <= n; ++v) b(u - 1, v - 1) = ds.find(u) == ds.find(v);
      blocks.push_back(std::move(b));
      if (k < p) ds.unite(forest.edges()[order[k]].i, forest.edges()[order[k]].j);
    }
    // X(t) = Σ_k (t_k - t_{k+1}) blocks[k] with t_0 = 1, t_{p+1} = 0.
    std::function<double(const std::vector<double>&)> g;
    if (f.kind == LinkFunction::Kind::exponential) {
      std::vector<double> s(p + 1, 0.0);
      for (std::size_t k = 0; k <= p; ++k)
        for (const auto& [e, c] : f.linear) s[k] += to_real<double>(c) * blocks[k](e.i - 1, e.j - 1);
      g = [s, p, prefactor](const std::vector<double>& t) {
        double exponent = 0.0, hi = 1.0;
        for (std::size_t k = 0; k <= p; ++k) {
          const double lo = k < p ? t[k] : 0.0;
          exponent += (hi - lo) * s[k];
          hi = lo;
        }
        return prefactor * std::exp(exponent);
      };
    } else {
      g = [&, p](const std::vector<double>& t) {
        SquareMatrix<double> x(n, 0.0);
        double hi = 1.0;
        for (std::size_t k = 0; k <= p; ++k) {
          const double lo = k < p ? t[k] : 0.0;
          for (int r = 0; r < n; ++r)
            for (int c = 0; c < n; ++c)
              if (blocks[k](r, c)) x(r, c) += hi - lo;
          hi = lo;
        }
        return forest_derivative(f, forest, x);
      };
    }
    total += simplex_integral(p, rule, g);
  } while (std::next_permutation(order.begin(), order.end()));
  return total;
}

}  // namespace detail

/// Right-hand side of the forest identity with per-forest contributions.
/// The error estimate is the difference between two Gauss orders.
inline ForestExpansion forest_expand(const LinkFunction& f, const ForestQuadrature& quad = {},
                                     const EnumerationLimits& limits = {}) {
  f.validate();
  if (static_cast<std::size_t>(f.n) > quad.max_edges + 1)
    throw ContractViolation("forest expansion supports at most " + std::to_string(quad.max_edges) + " edges per forest");
  const auto& lo = gauss_rule(quad.low_order);
  const auto& hi = gauss_rule(quad.high_order);
  ForestExpansion out;
  out.direct = f.at_ones();
  for (const auto& forest : enumerate_forests(f.n, limits)) {
    const double v = detail::forest_term(f, forest, hi);
    const double e = std::abs(v - detail::forest_term(f, forest, lo));
    out.total += v;
    out.error_estimate += e;
    out.contributions.push_back({forest, v, e});
  }
  double scale = std::abs(out.total);
  for (const auto& c : out.contributions) scale = std::max(scale, std::abs(c.value));
  if (out.error_estimate > quad.tolerance * scale)
    throw AccuracyError("forest quadrature error " + std::to_string(out.error_estimate) + " above tolerance",
                        out.error_estimate);
  return out;
}

}  // namespace lve
