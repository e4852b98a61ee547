#include "lve/lve.hpp"
#include "lve/series.hpp"

#include <catch2/catch_amalgamated.hpp>

#include <algorithm>
#include <random>
#include <vector>

using namespace lve;

namespace {

struct FieldSlot {
  int vertex;
  Channel s;
};

// Brute-force Gaussian expectation of one monomial: sum over every perfect
// matching of the individual field factors, with the replica covariance
// evaluated at a concrete numeric X.
cplx brute_force_expectation(std::vector<FieldSlot> slots, const std::vector<std::vector<double>>& x) {
  if (slots.empty()) return 1.0;
  const FieldSlot first = slots.front();
  slots.erase(slots.begin());
  cplx acc = 0;
  for (std::size_t j = 0; j < slots.size(); ++j) {
    if (slots[j].s != first.s) continue;
    auto rest = slots;
    const FieldSlot partner = rest[j];
    rest.erase(rest.begin() + static_cast<std::ptrdiff_t>(j));
    const cplx cov = channel_covariance(first.s).to_complex<double>() * x[first.vertex][partner.vertex];
    acc += cov * brute_force_expectation(rest, x);
  }
  return acc;
}

cplx evaluate_path_polynomial(const PathPolynomial& p, int n, const std::vector<std::vector<double>>& x) {
  cplx acc = 0;
  for (const auto& [m, c] : p) {
    cplx term = c.to_complex<double>();
    for (int u = 0; u < n; ++u)
      for (int v = u + 1; v < n; ++v) term *= std::pow(x[u][v], m.exponents[pair_index(n, u, v)]);
    acc += term;
  }
  return acc;
}

TypedTree relabel(const TypedTree& t, const std::vector<int>& perm) {
  std::vector<std::pair<Edge, Channel>> edges;
  for (std::size_t e = 0; e < t.channels.size(); ++e) {
    const auto& ed = t.tree.edges()[e];
    edges.push_back({make_edge(perm[ed.i - 1], perm[ed.j - 1]), t.channels[e]});
  }
  std::sort(edges.begin(), edges.end(), [](const auto& x, const auto& y) { return x.first < y.first; });
  std::vector<Edge> es;
  std::vector<Channel> ch;
  for (const auto& [e, s] : edges) {
    es.push_back(e);
    ch.push_back(s);
  }
  return TypedTree(LabeledForest(t.vertex_count(), es), ch);
}

}  // namespace

TEST_CASE("typed tree counts") {
  CHECK(enumerate_typed_trees(1).size() == 1);
  CHECK(enumerate_typed_trees(2).size() == 3);
  CHECK(enumerate_typed_trees(3).size() == 27);
  CHECK(enumerate_typed_trees(4).size() == 27 * 16);
  CHECK(enumerate_typed_trees(5).size() == 81 * 125);
  CHECK_THROWS_AS(enumerate_typed_trees(6), SizeLimitError);
  CHECK(enumerate_typed_trees(2)[1].to_string() == "2;1-2:b");
}

TEST_CASE("typed tree contract") {
  CHECK_THROWS_AS(TypedTree(LabeledForest(3, {make_edge(1, 2)}), {Channel::a}), ContractViolation);
  CHECK_THROWS_AS(TypedTree(LabeledForest(2, {make_edge(1, 2)}), {}), ContractViolation);
  CHECK_THROWS_AS(parse_channel('d'), ContractViolation);
}

TEST_CASE("single-field Wick contractions") {
  const auto a2 = FieldPolynomial::field(1, 0, Channel::a, 1, 0) * FieldPolynomial::field(1, 0, Channel::a, 1, 0);
  const auto w2 = wick_contract(a2);
  REQUIRE(w2.size() == 1);
  CHECK(w2.begin()->second == GaussRational(0, -1));
  const auto w4 = wick_contract(a2 * a2);
  REQUIRE(w4.size() == 1);
  CHECK(w4.begin()->second == GaussRational(-3));
  const auto b2 = FieldPolynomial::field(1, 0, Channel::b, 1, 0) * FieldPolynomial::field(1, 0, Channel::b, 1, 0);
  CHECK(wick_contract(b2).begin()->second == GaussRational(0, 1));
  CHECK(wick_contract(FieldPolynomial::field(1, 0, Channel::c)).empty());
  CHECK(wick_contract(a2 * b2).begin()->second == GaussRational(1));
}

TEST_CASE("Wick contraction agrees with brute-force matchings") {
  std::mt19937 rng(7);
  for (int trial = 0; trial < 200; ++trial) {
    const int n = 1 + static_cast<int>(rng() % 3);
    const int fields = 2 * static_cast<int>(rng() % 5);  // up to 8
    FieldPolynomial p = FieldPolynomial::constant(n, 1);
    std::vector<FieldSlot> slots;
    for (int f = 0; f < fields; ++f) {
      const int v = static_cast<int>(rng() % n);
      const Channel s = static_cast<Channel>(rng() % 2 == 0 ? 0 : 1 + rng() % 2);
      slots.push_back({v, s});
      p = p * FieldPolynomial::field(n, v, s, 1, 0);
    }
    std::vector<std::vector<double>> x(n, std::vector<double>(n, 1.0));
    for (int u = 0; u < n; ++u)
      for (int v = u + 1; v < n; ++v) x[u][v] = x[v][u] = 0.1 + 0.8 * (rng() % 1000) / 1000.0;
    const cplx expected = brute_force_expectation(slots, x);
    const cplx got = evaluate_path_polynomial(wick_contract(p), n, x);
    CHECK(std::abs(got - expected) <= 1e-12 * (1 + std::abs(expected)));
  }
}

TEST_CASE("w-integration of path minima") {
  const LabeledForest chain(3, {make_edge(1, 2), make_edge(2, 3)});
  PathPolynomial min13;
  min13[PathMonomial{0, {0, 1, 0}}] = 1;  // X_13
  CHECK(integrate_w(chain, min13).at(0) == GaussRational(Rational(1, 3)));

  PathPolynomial mixed;
  mixed[PathMonomial{2, {1, 1, 0}}] = 1;  // X_12 X_13 = w1 min(w1, w2)
  CHECK(integrate_w(chain, mixed).at(2) == GaussRational(Rational(5, 24)));

  PathPolynomial constant;
  constant[PathMonomial{0, {0, 0, 0}}] = GaussRational(0, 2);
  CHECK(integrate_w(chain, constant).at(0) == GaussRational(0, 2));

  const LabeledForest star(6, {make_edge(1, 2), make_edge(1, 3), make_edge(1, 4), make_edge(1, 5), make_edge(1, 6)});
  CHECK_THROWS_AS(integrate_w(star, constant), SizeLimitError);
}

TEST_CASE("w-integration agrees with a midpoint rule") {
  // Star on four vertices: X_{uv} for leaves u, v is min(w_u, w_v).
  const LabeledForest star(4, {make_edge(1, 2), make_edge(1, 3), make_edge(1, 4)});
  PathPolynomial p;
  p[PathMonomial{0, {1, 0, 0, 2, 1, 0}}] = 1;  // X_12 X_23^2 X_24
  const double exact = to_real<double>(integrate_w(star, p).at(0).real());
  const int grid = 80;
  double sum = 0;
  for (int i = 0; i < grid; ++i)
    for (int j = 0; j < grid; ++j)
      for (int k = 0; k < grid; ++k) {
        const double w2 = (i + 0.5) / grid, w3 = (j + 0.5) / grid, w4 = (k + 0.5) / grid;
        sum += w2 * std::pow(std::min(w2, w3), 2) * std::min(w2, w4);
      }
  CHECK(exact == Catch::Approx(sum / (grid * grid * grid)).epsilon(1e-3));
}

TEST_CASE("vertex expansion low degrees") {
  auto field = [](Channel s) { return FieldPolynomial::field(1, 0, s); };
  const auto cma = field(Channel::c) - field(Channel::a);
  const auto bma = field(Channel::b) - field(Channel::a);
  CHECK(vertex_expansion(1) == cma * GaussRational(0, -1));
  const auto degree2 = vertex_expansion(2) - vertex_expansion(1);
  CHECK(degree2 == cma * cma * GaussRational(-1) + bma * bma * GaussRational(Rational(-1, 2)));
  CHECK(vertex_expansion(0).is_zero());
  CHECK_THROWS_AS(vertex_expansion(13), ContractViolation);
}

TEST_CASE("edge derivatives reproduce the vertex-local pipeline") {
  for (int n = 1; n <= 3; ++n)
    for (const auto& t : enumerate_typed_trees(n)) {
      const auto amp = tree_amplitude(t, 1);
      std::vector<FieldPolynomial> per_vertex;
      for (int v = 0; v < n; ++v) per_vertex.push_back(vertex_expansion(4).placed_at(v, n));
      const auto derived = apply_edge_derivatives(t, per_vertex);
      GaussRational cov = 1;
      for (Channel s : t.channels) cov *= channel_covariance(s);
      for (int g = 0; g <= 4; ++g) {
        const auto integrated = integrate_w(t.tree, wick_contract(derived.grade_part(g)));
        const GaussRational value = integrated.count(g) ? integrated.at(g) * cov : GaussRational(0);
        CHECK(value == amp.by_grade[g]);
      }
    }
}

TEST_CASE("single loop vertex amplitude") {
  const auto amp = tree_amplitude(enumerate_typed_trees(1)[0], 1);
  // ⟨V⟩ at g^2: -⟨(c-a)^2⟩ - ½⟨(b-a)^2⟩ = -(i - i) - ½(i - i) = 0.
  CHECK(amp.by_grade[1].is_zero());
  CHECK(amp.by_grade[2].is_zero());
  CHECK(amp.by_grade[3].is_zero());
}

TEST_CASE("log Z through order lambda") {
  const auto s = lve_logZ_series(3, 1);
  REQUIRE(s.truncation_order() == 1);
  CHECK(s[0] == 0);
  CHECK(s[1] == -15);
  CHECK(s[1] == log_series(partition_series(ModelSpec(3), 1))[1]);
}

TEST_CASE("log Z through order lambda squared") {
  const auto s = lve_logZ_series(5, 2);
  const auto oracle = log_series(partition_series(ModelSpec(3), 2));
  CHECK(s[1] == -15);
  CHECK(s[2] == 5085);
  CHECK(s == oracle);
}

TEST_CASE("missing tree orders are reported") {
  CHECK_THROWS_AS(lve_logZ_series(4, 2), IncompletenessError);
  CHECK_THROWS_AS(lve_logZ_series(2, 1), IncompletenessError);
  try {
    lve_logZ_series(3, 2);
  } catch (const IncompletenessError& e) {
    CHECK(std::string(e.what()).find("n=5") != std::string::npos);
  }
}

TEST_CASE("grade parity of the summed amplitudes") {
  const auto grades = lve_logZ_grades(5, 2);
  for (std::size_t g = 0; g < grades.size(); ++g) {
    if (g % 2) CHECK(grades[g].is_zero());
    if (g % 4 == 0) CHECK(grades[g].is_real());
  }
}

TEST_CASE("leading grade of a tree is 2(n-1)") {
  for (int n = 1; n <= 3; ++n)
    for (const auto& t : enumerate_typed_trees(n)) {
      const auto amp = tree_amplitude(t, 2);
      for (int g = 0; g < 2 * (n - 1); ++g) CHECK(amp.by_grade[g].is_zero());
    }
}

TEST_CASE("amplitudes are invariant under vertex relabelling") {
  std::mt19937 rng(11);
  const auto trees = enumerate_typed_trees(4);
  for (int trial = 0; trial < 10; ++trial) {
    const auto& t = trees[rng() % trees.size()];
    std::vector<int> perm{1, 2, 3, 4};
    std::shuffle(perm.begin(), perm.end(), rng);
    CHECK(tree_amplitude(t, 2).by_grade == tree_amplitude(relabel(t, perm), 2).by_grade);
  }
}

TEST_CASE("tree amplitude caps") {
  CHECK_THROWS_AS(tree_amplitude(enumerate_typed_trees(1)[0], 4), SizeLimitError);
  CHECK_THROWS_AS(tree_amplitude(enumerate_typed_trees(1)[0], -1), SizeLimitError);
}

TEST_CASE("counter-based stream is reproducible") {
  CHECK(counter_uniform(3, 10, 2) == counter_uniform(3, 10, 2));
  CHECK(counter_uniform(3, 10, 2) != counter_uniform(3, 11, 2));
  CHECK(counter_uniform(4, 10, 2) != counter_uniform(3, 10, 2));
  double mean = 0;
  for (std::uint64_t i = 0; i < 100000; ++i) mean += counter_uniform(1, i, 0);
  CHECK(mean / 100000 == Catch::Approx(0.5).margin(0.005));
}

TEST_CASE("replicated scalar reproduces the block covariance") {
  // x_i = √w y_0 + √(1-w) y_i with a shared y_0 gives ⟨x_i x_j⟩ = w off the
  // diagonal and 1 on it.
  const double w = 0.3;
  const std::size_t draws = 200000;
  std::normal_distribution<double> normal;
  std::mt19937_64 rng(5);
  double diag = 0, off = 0;
  for (std::size_t d = 0; d < draws; ++d) {
    const double y0 = normal(rng), y1 = normal(rng), y2 = normal(rng);
    const double x1 = std::sqrt(w) * y0 + std::sqrt(1 - w) * y1;
    const double x2 = std::sqrt(w) * y0 + std::sqrt(1 - w) * y2;
    diag += x1 * x1;
    off += x1 * x2;
  }
  CHECK(diag / draws == Catch::Approx(1.0).margin(0.01));
  CHECK(off / draws == Catch::Approx(w).margin(0.01));
}

TEST_CASE("numeric amplitude matches the exact series") {
  // Small enough that the truncated asymptotic series is far more accurate than the estimate.
  const Coupling lambda{1e-4, 0.0};
  for (int n = 1; n <= 2; ++n)
    for (const auto& t : enumerate_typed_trees(n)) {
      const auto exact = tree_amplitude(t, 3).evaluate<double>(lambda);
      const auto est = tree_amplitude_numeric(t, lambda, 1000000, 1.0, 17);
      INFO(t.to_string() << " exact " << exact << " numeric " << est.value << " se " << est.standard_error);
      CHECK(std::abs(est.value - exact) <= 5 * est.standard_error + 1e-6);
      CHECK(est.rejected == 0);
    }
}

TEST_CASE("numeric amplitude contracts") {
  const auto t1 = enumerate_typed_trees(1)[0];
  CHECK(tree_amplitude_numeric(t1, Coupling{0.0, 0.0}, 10).value == cplx(0));
  CHECK_THROWS_AS(tree_amplitude_numeric(enumerate_typed_trees(3)[0], Coupling{0.001, 0.0}, 10), CapabilityError);
  CHECK_THROWS_AS(tree_amplitude_numeric(t1, Coupling{0.5, 0.0}, 10), ContractViolation);
  CHECK_THROWS_AS(tree_amplitude_numeric(t1, Coupling{0.001, 0.0}, 1), ContractViolation);
  const auto x = tree_amplitude_numeric(t1, Coupling{0.001, 0.0}, 1000, 1.0, 9);
  const auto y = tree_amplitude_numeric(t1, Coupling{0.001, 0.0}, 1000, 1.0, 9);
  CHECK(x.value == y.value);
}

TEST_CASE("conjugate coupling gives the conjugate amplitude in expectation") {
  // The single-vertex series has real coefficients, so Y(conj λ) = conj Y(λ).
  // Conjugation swaps which channels are bent up or down, so the identity holds
  // for the expectation rather than sample by sample.
  const auto t = enumerate_typed_trees(1)[0];
  const auto amp = tree_amplitude(t, 2);
  for (const auto& c : amp.by_grade) REQUIRE(c.is_real());
  const Coupling lambda{1e-4, 0.6};
  const auto x = tree_amplitude_numeric(t, lambda, 400000, 1.0, 31);
  const auto y = tree_amplitude_numeric(t, lambda.conj(), 400000, 1.0, 31);
  CHECK(std::abs(y.value - std::conj(x.value)) <= 5 * std::hypot(x.standard_error, y.standard_error));
  CHECK(std::abs(amp.evaluate<double>(lambda.conj()) - std::conj(amp.evaluate<double>(lambda))) < 1e-15);
}
