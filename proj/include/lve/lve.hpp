#pragma once

// Loop vertex expansion of log Z for the φ^6 model:
//   log Z = Σ_n (1/n!) Σ_{typed trees T} Y_T,
//   Y_T = ∫ dw ∫ dν_T Π_{ℓ ∈ T} [C_{s(ℓ)} ∂_{s^{v}} ∂_{s^{v'}}] Π_v V_v.
// Each loop vertex V = -½ Tr ln(1 + iH) carries its own fields a, b, c.
// Channel covariances are C_a = -i and C_b = C_c = +i, scaled between
// replicas by the path infimum w^T(v, v'). Amplitudes are exact per power
// of g = (2λ)^{1/4}; a Monte Carlo evaluator covers n <= 2.

#include "lve/errors.hpp"
#include "lve/exact.hpp"
#include "lve/field_polynomial.hpp"
#include "lve/intermediate_field.hpp"
#include "lve/quadrature.hpp"
#include "lve/series.hpp"
#include "lve/trees.hpp"

#include <array>
#include <cmath>
#include <complex>
#include <functional>
#include <cstdint>
#include <map>
#include <mutex>
#include <numbers>
#include <numeric>
#include <sstream>
#include <string>
#include <vector>

namespace lve {

/// Covariance of a channel at coinciding replicas.
inline GaussRational channel_covariance(Channel s) { return s == Channel::a ? GaussRational(0, -1) : GaussRational(0, 1); }

struct TypedTree {
  LabeledForest tree;
  std::vector<Channel> channels;  // aligned with tree.edges()

  TypedTree(LabeledForest t, std::vector<Channel> ch) : tree(std::move(t)), channels(std::move(ch)) {
    if (!tree.is_tree()) throw ContractViolation("typed tree needs a spanning tree");
    if (channels.size() != tree.edge_count()) throw ContractViolation("one channel label per edge required");
  }

  int vertex_count() const { return tree.vertex_count(); }

  /// "n;i-j:s,…" with edges in canonical order.
  std::string to_string() const {
    std::ostringstream os;
    os << tree.vertex_count() << ";";
    for (std::size_t e = 0; e < channels.size(); ++e)
      os << (e ? "," : "") << tree.edges()[e].i << "-" << tree.edges()[e].j << ":" << channel_name(channels[e]);
    return os.str();
  }
};

inline constexpr int typed_tree_cap = 5;

/// All spanning trees with every channel labelling; 3^{n-1} n^{n-2} of them.
inline std::vector<TypedTree> enumerate_typed_trees(int n) {
  if (n > typed_tree_cap)
    throw SizeLimitError("typed-tree enumeration is capped at n=" + std::to_string(typed_tree_cap));
  std::vector<TypedTree> out;
  for (const auto& t : enumerate_trees(n)) {
    const std::size_t p = t.edge_count();
    std::vector<int> digits(p, 0);
    while (true) {
      std::vector<Channel> ch;
      for (int d : digits) ch.push_back(static_cast<Channel>(d));
      out.emplace_back(t, ch);
      std::size_t pos = 0;
      while (pos < p && ++digits[pos] == 3) digits[pos++] = 0;
      if (pos == p) break;
    }
  }
  return out;
}

inline constexpr int max_vertex_degree = 12;

namespace detail {

// M with each entry carrying one power of g: [[2(c-a), b-a], [b-a, 0]].
inline std::array<std::array<FieldPolynomial, 2>, 2> single_vertex_matrix() {
  auto f = [](Channel s, long long coef) { return FieldPolynomial::field(1, 0, s, GaussRational(coef)); };
  const FieldPolynomial m11 = f(Channel::c, 2) + f(Channel::a, -2);
  const FieldPolynomial m12 = f(Channel::b, 1) + f(Channel::a, -1);
  return {{{m11, m12}, {m12, FieldPolynomial(1)}}};
}

// Degree-d parts of V, cached: ((-i)^d / (2d)) Tr(M^d).
inline const std::vector<FieldPolynomial>& vertex_parts() {
  static const std::vector<FieldPolynomial> parts = [] {
    std::vector<FieldPolynomial> out{FieldPolynomial(1)};
    const auto m = single_vertex_matrix();
    auto power = m;
    for (int d = 1; d <= max_vertex_degree; ++d) {
      if (d > 1) {
        std::array<std::array<FieldPolynomial, 2>, 2> next{
            {{FieldPolynomial(1), FieldPolynomial(1)}, {FieldPolynomial(1), FieldPolynomial(1)}}};
        for (int r = 0; r < 2; ++r)
          for (int c = 0; c < 2; ++c)
            for (int q = 0; q < 2; ++q) next[r][c] += power[r][q] * m[q][c];
        power = next;
      }
      const GaussRational factor = i_power(3 * static_cast<unsigned>(d)) / Rational(2 * d);
      out.push_back((power[0][0] + power[1][1]) * factor);
    }
    return out;
  }();
  return parts;
}

}  // namespace detail

/// -½ Tr ln(1 + iH) for one loop vertex through field degree max_degree.
inline FieldPolynomial vertex_expansion(int max_degree) {
  if (max_degree < 0 || max_degree > max_vertex_degree)
    throw ContractViolation("vertex expansion degree must lie in [0, " + std::to_string(max_vertex_degree) + "]");
  FieldPolynomial v(1);
  for (int d = 1; d <= max_degree; ++d) v += detail::vertex_parts()[d];
  return v;
}

/// Π_ℓ ∂_{s^v} ∂_{s^{v'}} applied to the product of the given polynomials
/// (all over the tree's vertex set). The covariance factors are not included.
inline FieldPolynomial apply_edge_derivatives(const TypedTree& t, const std::vector<FieldPolynomial>& per_vertex) {
  const int n = t.vertex_count();
  FieldPolynomial product = FieldPolynomial::constant(n, 1);
  for (const auto& p : per_vertex) product = product * p;
  for (std::size_t e = 0; e < t.channels.size(); ++e) {
    const auto& edge = t.tree.edges()[e];
    product = product.derivative(edge.i - 1, t.channels[e]).derivative(edge.j - 1, t.channels[e]);
  }
  return product;
}

/// g^grade · Π_{v<v'} X_{vv'}^{e}, with X the replica covariance matrix.
struct PathMonomial {
  int grade = 0;
  std::vector<int> exponents;  // one per vertex pair, see pair_index
  auto operator<=>(const PathMonomial&) const = default;
};

using PathPolynomial = std::map<PathMonomial, GaussRational>;

inline int pair_index(int n, int u, int v) {  // 0-based u < v
  return u * n - u * (u + 1) / 2 + (v - u - 1);
}

namespace detail {

// Perfect pairings of fields with multiplicities `counts` per vertex, as
// integer-weighted monomials in X_{vv'}; same-vertex pairs contribute 1.
inline std::map<std::vector<int>, BigInt> pairings(std::vector<int> counts) {
  const int n = static_cast<int>(counts.size());
  std::map<std::vector<int>, BigInt> out;
  int v = 0;
  while (v < n && counts[v] == 0) ++v;
  if (v == n) {
    out[std::vector<int>(static_cast<std::size_t>(n * (n - 1) / 2), 0)] = 1;
    return out;
  }
  --counts[v];
  for (int u = v; u < n; ++u) {
    if (counts[u] == 0) continue;
    const int choices = counts[u];
    --counts[u];
    for (const auto& [key, mult] : pairings(counts)) {
      std::vector<int> mono = key;
      if (u != v) ++mono[static_cast<std::size_t>(pair_index(n, v, u))];
      out[mono] += mult * choices;
    }
    ++counts[u];
  }
  return out;
}

}  // namespace detail

/// Gaussian expectation with ⟨s^v s^{v'}⟩ = C_s X_{vv'}, channels independent.
inline PathPolynomial wick_contract(const FieldPolynomial& p) {
  const int n = p.vertices();
  PathPolynomial out;
  for (const auto& [m, coef] : p.terms()) {
    std::map<std::vector<int>, BigInt> combined{{std::vector<int>(static_cast<std::size_t>(n * (n - 1) / 2), 0), 1}};
    GaussRational factor = coef;
    for (Channel s : all_channels) {
      std::vector<int> counts(static_cast<std::size_t>(n));
      int total = 0;
      for (int v = 0; v < n; ++v) total += counts[v] = m.power(v, s);
      if (total % 2) {
        combined.clear();
        break;
      }
      for (int q = 0; q < total / 2; ++q) factor *= channel_covariance(s);
      std::map<std::vector<int>, BigInt> next;
      for (const auto& [x, cx] : combined)
        for (const auto& [y, cy] : detail::pairings(counts)) {
          std::vector<int> z = x;
          for (std::size_t i = 0; i < z.size(); ++i) z[i] += y[i];
          next[z] += cx * cy;
        }
      combined = std::move(next);
    }
    for (const auto& [x, mult] : combined) {
      auto& slot = out[PathMonomial{m.grade, x}];
      slot += factor * Rational(mult);
    }
  }
  for (auto it = out.begin(); it != out.end();) it = it->second.is_zero() ? out.erase(it) : std::next(it);
  return out;
}

inline constexpr std::size_t integrate_w_edge_cap = 4;

/// ∫_{[0,1]^p} dw of a polynomial in path minima X_{vv'} = min_{ℓ ∈ path} w_ℓ,
/// exactly, grade by grade. Each weight ordering resolves every minimum to one
/// edge; on 1 >= w_{σ1} >= … >= w_{σp} >= 0, ∫ Π w_{σi}^{e_i} = Π_j 1/Σ_{i>=j}(e_i+1).
inline std::map<int, GaussRational> integrate_w(const LabeledForest& tree, const PathPolynomial& expr) {
  const std::size_t p = tree.edge_count();
  if (p > integrate_w_edge_cap)
    throw SizeLimitError("w-integration is capped at " + std::to_string(integrate_w_edge_cap) + " edges");
  const int n = tree.vertex_count();
  const PathTable paths(tree);
  std::vector<std::vector<std::size_t>> pair_paths(static_cast<std::size_t>(n * (n - 1) / 2));
  for (int u = 0; u < n; ++u)
    for (int v = u + 1; v < n; ++v) {
      const auto& path = paths.at(u + 1, v + 1);
      if (path) pair_paths[static_cast<std::size_t>(pair_index(n, u, v))] = *path;
    }

  std::map<int, GaussRational> out;
  std::vector<std::size_t> order(p);
  std::iota(order.begin(), order.end(), 0);
  std::vector<std::size_t> rank(p);
  do {
    for (std::size_t r = 0; r < p; ++r) rank[order[r]] = r;
    for (const auto& [mono, coef] : expr) {
      std::vector<int> e(p, 0);  // exponent per rank
      bool vanishes = false;
      for (std::size_t q = 0; q < mono.exponents.size(); ++q) {
        if (mono.exponents[q] == 0) continue;
        const auto& path = pair_paths[q];
        if (path.empty()) {
          vanishes = true;  // different components
          break;
        }
        std::size_t lowest = 0;
        for (auto edge : path) lowest = std::max(lowest, rank[edge]);
        e[lowest] += mono.exponents[q];
      }
      if (vanishes) continue;
      Rational value = 1;
      int tail = 0;
      for (std::size_t j = p; j-- > 0;) {
        tail += e[j] + 1;
        value /= tail;
      }
      auto& slot = out[mono.grade];
      slot += coef * value;
    }
  } while (std::next_permutation(order.begin(), order.end()));
  return out;
}

/// Y_T by powers of g = (2λ)^{1/4}: by_grade[G] multiplies (2λ)^{G/4}.
struct TreeAmplitude {
  std::vector<GaussRational> by_grade;

  /// Coefficient of λ^m: by_grade[4m] · 2^m.
  GaussRational lambda_coefficient(int m) const {
    return by_grade.at(static_cast<std::size_t>(4 * m)) * Rational(BigInt(1) << m);
  }
  /// Coefficient of (2λ)^{j/2}.
  const GaussRational& half_power_coefficient(int j) const { return by_grade.at(static_cast<std::size_t>(2 * j)); }

  template <class Real>
  std::complex<Real> evaluate(const Coupling& lambda) const {
    const auto g = Coupling{2 * lambda.modulus, lambda.argument}.power<Real>(Real(0.25));
    std::complex<Real> acc = 0, gp = 1;
    for (const auto& c : by_grade) {
      acc += c.template to_complex<Real>() * gp;
      gp *= g;
    }
    return acc;
  }
};

inline constexpr int tree_amplitude_order_cap = 3;

namespace detail {

inline void degree_tuples(const std::vector<int>& minimum, int remaining, std::size_t v, std::vector<int>& cur,
                          const std::function<void(const std::vector<int>&)>& visit) {
  if (v == minimum.size()) {
    if (remaining == 0) visit(cur);
    return;
  }
  for (int d = minimum[v]; d <= remaining && d <= max_vertex_degree; ++d) {
    cur[v] = d;
    degree_tuples(minimum, remaining - d, v + 1, cur, visit);
  }
}

}  // namespace detail

/// Exact Y_T through λ^{lambda_order} (grades 0 … 4·lambda_order).
inline TreeAmplitude tree_amplitude(const TypedTree& t, int lambda_order) {
  const int n = t.vertex_count();
  if (n > typed_tree_cap) throw SizeLimitError("tree amplitudes are capped at n=" + std::to_string(typed_tree_cap));
  if (lambda_order < 0 || lambda_order > tree_amplitude_order_cap)
    throw SizeLimitError("tree amplitudes are capped at λ^" + std::to_string(tree_amplitude_order_cap));
  const int max_grade = 4 * lambda_order;
  TreeAmplitude out{std::vector<GaussRational>(static_cast<std::size_t>(max_grade) + 1)};

  GaussRational edge_factor = 1;
  std::vector<std::array<int, 3>> derivs(static_cast<std::size_t>(n), {0, 0, 0});
  for (std::size_t e = 0; e < t.channels.size(); ++e) {
    edge_factor *= channel_covariance(t.channels[e]);
    const int s = static_cast<int>(t.channels[e]);
    ++derivs[t.tree.edges()[e].i - 1][s];
    ++derivs[t.tree.edges()[e].j - 1][s];
  }
  std::vector<int> minimum(static_cast<std::size_t>(n));
  for (int v = 0; v < n; ++v) minimum[v] = std::max(1, derivs[v][0] + derivs[v][1] + derivs[v][2]);

  const auto& parts = detail::vertex_parts();
  std::vector<int> cur(static_cast<std::size_t>(n));
  for (int grade = 0; grade <= max_grade; ++grade) {
    detail::degree_tuples(minimum, grade, 0, cur, [&](const std::vector<int>& d) {
      // Derivatives act vertex by vertex since V_v depends on vertex-v fields only.
      FieldPolynomial product = FieldPolynomial::constant(n, 1);
      for (int v = 0; v < n; ++v) {
        FieldPolynomial local = parts[d[v]];
        for (Channel s : all_channels)
          for (int q = 0; q < derivs[v][static_cast<int>(s)]; ++q) local = local.derivative(0, s);
        if (local.is_zero()) {
          product = FieldPolynomial(n);
          break;
        }
        product = product * local.placed_at(v, n);
      }
      if (product.is_zero()) return;
      for (const auto& [g, value] : integrate_w(t.tree, wick_contract(product)))
        out.by_grade[static_cast<std::size_t>(g)] += value * edge_factor;
    });
  }
  return out;
}

/// Σ_{n <= n_max} (1/n!) Σ_T Y_T by grade in g, through λ^{lambda_order}.
inline std::vector<GaussRational> lve_logZ_grades(int n_max, int lambda_order) {
  if (n_max < 1) throw ContractViolation("n_max must be >= 1");
  std::vector<GaussRational> total(static_cast<std::size_t>(4 * lambda_order) + 1);
  for (int n = 1; n <= n_max; ++n) {
    if (2 * (n - 1) > 4 * lambda_order) break;  // every edge needs two fields
    const Rational inv_factorial(BigInt(1), factorial(static_cast<unsigned>(n)));
    for (const auto& t : enumerate_typed_trees(n)) {
      const auto y = tree_amplitude(t, lambda_order);
      for (std::size_t g = 0; g < total.size(); ++g) total[g] += y.by_grade[g] * inv_factorial;
    }
  }
  return total;
}

/// Coefficients of log Z in integer powers of λ. Trees with n vertices start
/// at grade 2(n-1), so order λ^m needs n_max >= 2m+1.
inline ExactSeries lve_logZ_series(int n_max, int lambda_order) {
  if (n_max < 2 * lambda_order + 1) {
    std::ostringstream os;
    os << "order λ^" << lambda_order << " needs trees up to n=" << 2 * lambda_order + 1 << "; with n_max=" << n_max
       << " the orders λ^m with m > " << (n_max - 1) / 2 << " are incomplete";
    throw IncompletenessError(os.str());
  }
  const auto grades = lve_logZ_grades(n_max, lambda_order);
  ExactSeries s;
  for (int m = 0; m <= lambda_order; ++m) {
    const GaussRational c = grades[static_cast<std::size_t>(4 * m)] * Rational(BigInt(1) << m);
    if (!c.is_real()) throw ContractViolation("non-real coefficient " + to_string(c) + " at λ^" + std::to_string(m));
    s.coefficients.push_back(c.real());
  }
  for (std::size_t g = 0; g < grades.size(); ++g)
    if (g % 4 != 0 && !grades[g].is_zero())
      throw ContractViolation("nonzero fractional-order coefficient " + to_string(grades[g]) + " at g^" +
                              std::to_string(g));
  return s;
}

// ---------------------------------------------------------------------------
// Monte Carlo evaluation on deformed contours.

/// Counter-based stream: draw `k` of sample `index` depends only on (seed, index, k).
inline std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9E3779B97F4A7C15ULL;
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
  return x ^ (x >> 31);
}

inline double counter_uniform(std::uint64_t seed, std::uint64_t index, std::uint64_t k) {
  const std::uint64_t h = splitmix64(splitmix64(seed ^ splitmix64(index)) + k);
  return (static_cast<double>(h >> 11) + 0.5) * 0x1.0p-53;  // open interval (0, 1)
}

struct NumericEstimate {
  cplx value;
  double standard_error = 0.0;  // √(var Re + var Im) / √samples
  double se_real = 0.0;
  double se_imag = 0.0;
  std::size_t samples = 0;
  std::size_t rejected = 0;

  double rejection_rate() const { return samples ? static_cast<double>(rejected) / samples : 0.0; }
};

namespace detail {

// One intermediate field on its deformed contour, drawn from Laplace(0, A):
// returns z and ρ_s(z) z'(x) / q(x).
struct ContourDraw {
  cplx z;
  cplx weight;
};

inline ContourDraw draw_field(Channel s, double u, double band_A) {
  const double x = u < 0.5 ? band_A * std::log(2 * u) : -band_A * std::log(2 * (1 - u));
  const ContourMap map{band_A, s == Channel::a ? 1 : -1};
  const cplx z = deform(x, map);
  const cplx i(0, 1);
  const double two_pi = 2 * std::numbers::pi;
  const cplx density = s == Channel::a ? std::sqrt(i) / std::sqrt(two_pi) * std::exp(-i * z * z / 2.0)
                                       : std::exp(i * z * z / 2.0) / std::sqrt(two_pi * i);
  const double proposal = std::exp(-std::abs(x) / band_A) / (2 * band_A);
  return {z, density * map.derivative(x) / proposal};
}

// 1 + iH at one vertex, H = g [[2(c-a), b-a], [b-a, 0]].
inline std::array<cplx, 4> one_plus_iH(cplx g, const std::array<cplx, 3>& f) {
  const cplx i(0, 1);
  const cplx h11 = g * 2.0 * (f[2] - f[0]), h12 = g * (f[1] - f[0]);
  return {1.0 + i * h11, i * h12, i * h12, 1.0};
}

inline bool singular(const std::array<cplx, 4>& m) {
  const cplx det = m[0] * m[3] - m[1] * m[2];
  return !(std::abs(det) > 1e-300) || !std::isfinite(std::abs(det));
}

// -½ Σ log of the eigenvalues (principal branch).
inline cplx loop_vertex(const std::array<cplx, 4>& m) {
  const cplx half_trace = (m[0] + m[3]) / 2.0;
  const cplx det = m[0] * m[3] - m[1] * m[2];
  const cplx disc = std::sqrt(half_trace * half_trace - det);
  return -0.5 * (std::log(half_trace + disc) + std::log(half_trace - disc));
}

// ∂V/∂s = -(i/2) Tr[(1+iH)^{-1} g ∂_s M].
inline cplx loop_vertex_derivative(const std::array<cplx, 4>& m, cplx g, Channel s) {
  const cplx det = m[0] * m[3] - m[1] * m[2];
  const std::array<cplx, 4> r{m[3] / det, -m[1] / det, -m[2] / det, m[0] / det};
  std::array<double, 4> dm{};
  switch (s) {
    case Channel::a: dm = {-2, -1, -1, 0}; break;
    case Channel::b: dm = {0, 1, 1, 0}; break;
    case Channel::c: dm = {2, 0, 0, 0}; break;
  }
  const cplx trace = r[0] * dm[0] + r[1] * dm[2] + r[2] * dm[1] + r[3] * dm[3];
  return cplx(0, -0.5) * g * trace;
}

}  // namespace detail

inline constexpr double numeric_lambda_cap = 0.01;

/// Monte Carlo estimate of Y_T for n <= 2. Fields are drawn on the deformed
/// contours (a-type bent down, b/c-type bent up), the replica structure of
/// n = 2 uses z^v = √w y_0 + √(1-w) y_v per channel, and w is uniform.
inline NumericEstimate tree_amplitude_numeric(const TypedTree& t, const Coupling& lambda, std::size_t samples,
                                              double band_A = 10.0, std::uint64_t seed = 0) {
  const int n = t.vertex_count();
  if (n > 2) throw CapabilityError("numeric tree amplitudes support n <= 2");
  if (samples < 2) throw ContractViolation("need at least 2 samples");
  if (!(band_A > 0)) throw ContractViolation("band parameter must be positive");
  if (lambda.modulus > numeric_lambda_cap)
    throw ContractViolation("numeric mode needs |λ| <= " + std::to_string(numeric_lambda_cap));
  NumericEstimate est;
  est.samples = samples;
  if (lambda.modulus == 0.0) return est;
  if (std::abs(lambda.argument) >= std::numbers::pi) throw DomainError("coupling outside |Arg λ| < π");

  const cplx g = Coupling{2 * lambda.modulus, lambda.argument}.power(0.25);
  double sum_re = 0, sum_im = 0, sq_re = 0, sq_im = 0;
  for (std::size_t idx = 0; idx < samples; ++idx) {
    std::uint64_t k = 0;
    auto u = [&] { return counter_uniform(seed, idx, k++); };
    cplx value;
    bool rejected = false;
    if (n == 1) {
      std::array<cplx, 3> f;
      cplx weight = 1;
      for (Channel s : all_channels) {
        const auto d = detail::draw_field(s, u(), band_A);
        f[static_cast<int>(s)] = d.z;
        weight *= d.weight;
      }
      const auto m = detail::one_plus_iH(g, f);
      if (detail::singular(m)) rejected = true;
      else value = weight * detail::loop_vertex(m);
    } else {
      const double w = u();
      const double sw = std::sqrt(w), sr = std::sqrt(1 - w);
      std::array<cplx, 3> f1, f2;
      cplx weight = 1;
      for (Channel s : all_channels) {
        const auto y0 = detail::draw_field(s, u(), band_A);
        const auto y1 = detail::draw_field(s, u(), band_A);
        const auto y2 = detail::draw_field(s, u(), band_A);
        f1[static_cast<int>(s)] = sw * y0.z + sr * y1.z;
        f2[static_cast<int>(s)] = sw * y0.z + sr * y2.z;
        weight *= y0.weight * y1.weight * y2.weight;
      }
      const auto m1 = detail::one_plus_iH(g, f1), m2 = detail::one_plus_iH(g, f2);
      if (detail::singular(m1) || detail::singular(m2)) {
        rejected = true;
      } else {
        const Channel s = t.channels[0];
        value = weight * channel_covariance(s).to_complex<double>() * detail::loop_vertex_derivative(m1, g, s) *
                detail::loop_vertex_derivative(m2, g, s);
      }
    }
    if (rejected) {
      ++est.rejected;
      continue;
    }
    sum_re += value.real();
    sum_im += value.imag();
    sq_re += value.real() * value.real();
    sq_im += value.imag() * value.imag();
  }
  // Rejected samples count as zeros of the estimator over the full sample size.
  const double N = static_cast<double>(samples);
  const double mean_re = sum_re / N, mean_im = sum_im / N;
  const double var_re = (sq_re / N - mean_re * mean_re) * N / (N - 1);
  const double var_im = (sq_im / N - mean_im * mean_im) * N / (N - 1);
  est.value = {mean_re, mean_im};
  est.se_real = std::sqrt(std::max(var_re, 0.0) / N);
  est.se_imag = std::sqrt(std::max(var_im, 0.0) / N);
  est.standard_error = std::hypot(est.se_real, est.se_imag);
  return est;
}

}  // namespace lve
