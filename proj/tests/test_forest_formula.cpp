#include "lve/forest_formula.hpp"

#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <random>

using namespace lve;

namespace {

LinkFunction random_exponential(int n, std::mt19937_64& rng) {
  std::uniform_int_distribution<int> num(-1000, 1000);
  std::map<Edge, Rational> c;
  for (const auto& e : complete_graph_edges(n)) c[e] = Rational(num(rng), 1000);
  return LinkFunction::exponential(n, c);
}

}  // namespace

TEST_CASE("forest derivative closed forms") {
  const auto f = LinkFunction::exponential(3, {{make_edge(1, 2), Rational(3, 4)}, {make_edge(2, 3), Rational(-1, 2)}});
  SquareMatrix<double> zero(3, 0.0);
  CHECK(forest_derivative(f, LabeledForest(3, {}), zero) == 1.0);
  CHECK(forest_derivative(f, LabeledForest(3, {{1, 2}}), zero) == 0.75);
  CHECK(forest_derivative(f, LabeledForest(3, {{1, 3}}), zero) == 0.0);
  SquareMatrix<double> ones(3, 1.0);
  CHECK(forest_derivative(f, LabeledForest(3, {{1, 2}, {2, 3}}), ones) == Catch::Approx(-0.375 * std::exp(0.25)));

  // x12^2 x13 differentiated once in x12 and x13.
  const auto g = LinkFunction::polynomial(3, {{Rational(1), {{make_edge(1, 2), 2}, {make_edge(1, 3), 1}}}});
  SquareMatrix<double> point(3, 0.0);
  point(0, 1) = point(1, 0) = 2.0;
  CHECK(forest_derivative(g, LabeledForest(3, {{1, 2}, {1, 3}}), point) == 4.0);
  CHECK(forest_derivative(g, LabeledForest(3, {{2, 3}}), point) == 0.0);
}

TEST_CASE("link functions reject bad pairs") {
  CHECK_THROWS_AS(LinkFunction::exponential(2, {{Edge{1, 3}, Rational(1)}}), ContractViolation);
  CHECK_THROWS_AS(LinkFunction::polynomial(2, {{Rational(1), {{Edge{1, 2}, -1}}}}), ContractViolation);
}

TEST_CASE("forest expansion examples") {
  const auto trivial = forest_expand(LinkFunction::exponential(2, {}));
  CHECK(trivial.total == Catch::Approx(1.0));
  CHECK(trivial.contributions.size() == 2);
  CHECK(trivial.contributions[1].value == 0.0);

  for (double c : {-1.0, 0.5, 2.0}) {
    const auto f = LinkFunction::exponential(2, {{make_edge(1, 2), Rational(static_cast<long long>(c * 2), 2)}});
    const auto r = forest_expand(f);
    CHECK(r.total == Catch::Approx(std::exp(c)).epsilon(1e-12));
    CHECK(r.direct == Catch::Approx(std::exp(c)).epsilon(1e-15));
  }
}

TEST_CASE("term count and empty-forest term") {
  std::mt19937_64 rng(11);
  const auto f = random_exponential(3, rng);
  const auto r = forest_expand(f);
  CHECK(r.contributions.size() == 7);
  CHECK(r.contributions.front().forest.edge_count() == 0);
  CHECK(r.contributions.front().value == forest_derivative(f, LabeledForest(3, {}), SquareMatrix<double>::identity(3)));
  CHECK(r.contributions.front().value == 1.0);
}

TEST_CASE("forest identity for random exponential link functions") {
  std::mt19937_64 rng(2024);
  for (int rep = 0; rep < 50; ++rep) {
    const int n = 2 + rep % 3;
    const auto f = random_exponential(n, rng);
    const auto r = forest_expand(f);
    CHECK(std::abs(r.total - r.direct) / std::abs(r.direct) <= 1e-8);
  }
}

TEST_CASE("forest identity for polynomial link functions") {
  // Polynomials of low degree are integrated exactly by the Gauss rules.
  const auto f = LinkFunction::polynomial(
      4, {{Rational(3), {{make_edge(1, 2), 2}, {make_edge(3, 4), 1}}},
          {Rational(-2), {{make_edge(1, 3), 1}, {make_edge(2, 4), 1}, {make_edge(1, 4), 1}}},
          {Rational(5, 7), {}}});
  const auto r = forest_expand(f);
  CHECK(r.total == Catch::Approx(r.direct).epsilon(1e-12));
  CHECK(r.direct == Catch::Approx(3.0 - 2.0 + 5.0 / 7.0));
}

TEST_CASE("forest identity at n = 5") {
  std::mt19937_64 rng(5);
  const auto f = random_exponential(5, rng);
  const auto r = forest_expand(f);
  CHECK(r.contributions.size() == 291);
  CHECK(std::abs(r.total - r.direct) / std::abs(r.direct) <= 1e-8);
}

TEST_CASE("unreachable tolerance raises an accuracy error") {
  std::mt19937_64 rng(3);
  const auto f = random_exponential(3, rng);
  ForestQuadrature q;
  q.tolerance = 1e-30;
  try {
    forest_expand(f, q);
    FAIL("expected an accuracy error");
  } catch (const AccuracyError& e) {
    CHECK(e.achieved_error > 0.0);
  }
  CHECK_THROWS_AS(forest_expand(LinkFunction::exponential(7, {})), ContractViolation);
}
