#include <random>

#include "doctest.h"
#include "gridcert/cliques.hpp"

using namespace gridcert;

TEST_CASE("graded lexicographic ordering") {
  GradedLexLess less;
  CHECK(less({0, 0}, {1, 0}));      // degree first
  CHECK(less({1, 0}, {0, 2}));
  CHECK(less({2, 0}, {1, 1}));      // x1^2 before x1 x2
  CHECK(less({1, 1}, {0, 2}));
  CHECK_FALSE(less({1, 0}, {1, 0}));
}

TEST_CASE("polynomial arithmetic and evaluation") {
  std::mt19937 rng(17);
  std::uniform_real_distribution<double> uni(-2.0, 2.0);
  const int n = 3;
  const auto x0 = SparsePolynomial::variable(n, 0);
  const auto x1 = SparsePolynomial::variable(n, 1);
  const auto p = (x0 + x1) * (x0 - x1) + SparsePolynomial::constant(n, 2.0);
  CHECK(p.degree() == 2);
  for (int rep = 0; rep < 20; ++rep) {
    Vec x(n);
    for (int i = 0; i < n; ++i) x(i) = uni(rng);
    CHECK(p.evaluate(x) ==
          doctest::Approx(x(0) * x(0) - x(1) * x(1) + 2.0).epsilon(1e-12));
  }
  // cancelled terms disappear
  const auto zero = x0 - x0;
  CHECK(zero.empty());
}

TEST_CASE("from_quadratic agrees with direct evaluation") {
  std::mt19937 rng(19);
  std::normal_distribution<double> gauss;
  QuadraticForm f;
  const int d = 4;
  f.constant = gauss(rng);
  f.linear = Vec::Zero(d);
  f.quadratic = Mat::Zero(d, d);
  for (int i = 0; i < d; ++i) {
    f.linear(i) = gauss(rng);
    for (int j = 0; j < d; ++j) f.quadratic(i, j) = gauss(rng);
  }
  const auto p = SparsePolynomial::from_quadratic(f);
  for (int rep = 0; rep < 20; ++rep) {
    Vec x(d);
    for (int i = 0; i < d; ++i) x(i) = gauss(rng);
    CHECK(p.evaluate(x) == doctest::Approx(f.eval(x)).epsilon(1e-10));
  }
}

TEST_CASE("monomial basis has binomial cardinality") {
  // C(|vars| + deg, deg)
  CHECK(monomial_basis(6, {0, 1}, 2).size() == 6);
  CHECK(monomial_basis(6, {0, 1, 2, 3}, 2).size() == 15);
  CHECK(monomial_basis(6, {2, 4}, 4).size() == 15);
  const auto basis = monomial_basis(4, {0, 3}, 2);
  CHECK(std::is_sorted(basis.begin(), basis.end(), GradedLexLess{}));
}

TEST_CASE("path graph cliques are its edges") {
  std::vector<std::vector<int>> supports{{0, 1}, {1, 2}, {2, 3}};
  const auto adj = correlative_sparsity_graph(4, supports);
  std::vector<int> order;
  const auto cliques = chordal_cliques(adj, &order);
  REQUIRE(cliques.size() == 3);
  CHECK(is_perfect_elimination_ordering(adj, order));
}

TEST_CASE("four-cycle gains a chord") {
  std::vector<std::vector<int>> supports{{0, 1}, {1, 2}, {2, 3}, {3, 0}};
  auto adj = correlative_sparsity_graph(4, supports);
  std::vector<int> order;
  const auto cliques = chordal_cliques(adj, &order);
  REQUIRE(cliques.size() == 2);  // two triangles after the fill edge
  CHECK(cliques[0].size() == 3);
  CHECK(cliques[1].size() == 3);
}

TEST_CASE("decompose assigns every constraint to a covering clique") {
  std::vector<std::vector<int>> supports{{0, 1}, {1, 2}, {2, 3}, {0, 1, 2}};
  const auto dec = decompose(4, {}, supports);
  REQUIRE(dec.assignment.size() == supports.size());
  for (size_t k = 0; k < supports.size(); ++k) {
    const auto& clique = dec.cliques[dec.assignment[k]];
    for (int v : supports[k])
      CHECK(std::find(clique.begin(), clique.end(), v) != clique.end());
  }
}

TEST_CASE("complete coupling collapses to one clique") {
  std::vector<std::vector<int>> supports{{0, 1, 2, 3}};
  const auto cliques =
      chordal_cliques(correlative_sparsity_graph(4, supports));
  REQUIRE(cliques.size() == 1);
  CHECK(cliques[0].size() == 4);
}
