#include <catch_amalgamated.hpp>

#include <cmath>

#include "fitz/operators.hpp"
#include "fitz/sigma.hpp"

using namespace fitz;

TEST_CASE("builtins agree with their defining formulas") {
  const auto tri = make_builtin_operator(BuiltinKind::triangular);
  const auto nrm = make_builtin_operator(BuiltinKind::normal);
  const auto idn = make_builtin_operator(BuiltinKind::identity);
  const auto aff = make_builtin_operator(BuiltinKind::affine, 2.0, -1.0);
  for (int i = 0; i <= 10000; ++i) {
    const double x = -10.0 + 20.0 * i / 10000.0;
    REQUIRE(std::abs(evaluate_operator(tri, {x})[0][0] -
                     std::max(1.0 - std::abs(x), 0.0)) <= 1e-12);
    REQUIRE(std::abs(evaluate_operator(nrm, {x})[0][0] - 1.0 / (1.0 + x * x)) <=
            1e-12);
    REQUIRE(std::abs(evaluate_operator(idn, {x})[0][0] - x) <= 1e-12);
    REQUIRE(std::abs(evaluate_operator(aff, {x})[0][0] - (2.0 * x - 1.0)) <=
            1e-12);
  }
}

TEST_CASE("triangular builtin equals its expression form exactly") {
  const auto tri = make_builtin_operator(BuiltinKind::triangular);
  const auto expr = make_expression_operator("max(1-abs(x),0)");
  for (int i = 0; i <= 2000; ++i) {
    const double x = -10.0 + 20.0 * i / 2000.0;
    REQUIRE(evaluate_operator(tri, {x})[0][0] ==
            evaluate_operator(expr, {x})[0][0]);
  }
}

TEST_CASE("unit interval discretization keeps the endpoints") {
  const auto op = make_builtin_operator(BuiltinKind::unit_interval, 1, 0, 2);
  const ValueSet vs = evaluate_operator(op, {5.0});
  REQUIRE(vs.size() == 3);
  CHECK(vs[0][0] == 0.0);
  CHECK(vs[1][0] == 0.5);
  CHECK(vs[2][0] == 1.0);

  const auto dflt = make_builtin_operator(BuiltinKind::unit_interval);
  const ValueSet d = evaluate_operator(dflt, {0.0});
  REQUIRE(d.size() == 17);
  CHECK(d.front()[0] == 0.0);
  CHECK(d.back()[0] == 1.0);
}

TEST_CASE("finite graph lookup is an exact match within tolerance") {
  const auto op = make_graph_operator({pd1(0, 0), pd1(1, 1)});
  CHECK(evaluate_operator(op, {2.0}).empty());
  CHECK(evaluate_operator(op, {1.0}).size() == 1);
  CHECK(evaluate_operator(op, {1.0 + 5e-13}).size() == 1);
  CHECK(evaluate_operator(op, {1.0 + 1e-10}).empty());
  CHECK_THROWS_AS(evaluate_operator(op, {1.0, 2.0}), DimensionMismatch);

  // multi-valued point
  const auto multi = make_graph_operator({pd1(0, 0), pd1(0, 1), pd1(1, 1)});
  CHECK(evaluate_operator(multi, {0.0}).size() == 2);
}

TEST_CASE("tabulated lookup hits the nearest grid point within tolerance") {
  const auto op = make_tabulated_operator({0.0, 0.5, 1.0}, {{0.1}, {0.2, 0.3}, {0.4}});
  CHECK(evaluate_operator(op, {0.5}).size() == 2);
  CHECK(evaluate_operator(op, {0.25}).empty());
  CHECK(evaluate_operator(op, {1.0 - 1e-13})[0][0] == 0.4);

  CHECK_THROWS(make_tabulated_operator({0.0, 0.0}, {{0.1}, {0.2}}));
  CHECK_THROWS(make_tabulated_operator({0.0, 1.0}, {{0.1}, {}}));
}

TEST_CASE("graph invariants are enforced") {
  CHECK_THROWS_AS(make_graph_operator({}), EmptyGraph);
  CHECK_THROWS_AS(make_graph_operator({pd1(0, 0), {{1.0, 2.0}, {1.0, 2.0}}}),
                  DimensionMismatch);
  CHECK_THROWS(make_graph_operator({{{0.0}, {std::nan("")}}}));
}

TEST_CASE("sigma values") {
  CHECK(sigma_value(sigma_constant(1.0), {7.0}) == 1.0);
  CHECK(sigma_value(sigma_constant(0.0), {123.0}) == 0.0);
  CHECK_THROWS_AS(sigma_constant(-0.5), NegativeSigma);

  const auto table = sigma_table({{{0.0}, 0.3}});
  CHECK(sigma_value(table, {0.0}) == 0.3);
  CHECK_THROWS_AS(sigma_value(table, {1.0}), MissingKey);

  const auto expr = sigma_expression("abs(x)");
  CHECK(sigma_value(expr, {-2.0}) == 2.0);
  CHECK_THROWS_AS(sigma_expression("0-1"), NegativeSigma);
  // negative only off the sampled window; the evaluation guard still fires
  const auto shifted = sigma_expression("x+100");
  CHECK_THROWS_AS(sigma_value(shifted, {-200.0}), NegativeSigma);
}

TEST_CASE("1-D sampling takes every image element") {
  const auto op = make_builtin_operator(BuiltinKind::unit_interval, 1, 0, 2);
  const FiniteGraph g = sample_graph_1d(op, 1.0, 3);
  REQUIRE(g.points.size() == 9);  // 3 grid points x 3 image elements
  CHECK(g.points.front().x[0] == -1.0);
  CHECK(g.points.back().x[0] == 1.0);
}
