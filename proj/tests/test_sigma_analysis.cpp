#include <catch_amalgamated.hpp>

#include <random>

#include "fitz/fitzpatrick.hpp"
#include "fitz/sigma_analysis.hpp"
#include "support.hpp"

using namespace fitz;

namespace {

FiniteGraph identity_samples(double lo, double hi, double step) {
  FiniteGraph g;
  for (double x = lo; x <= hi + 1e-12; x += step) g.points.push_back(pd1(x, x));
  return g;
}

}  // namespace

TEST_CASE("check_sigma_monotone on tiny graphs") {
  const SigmaSpec zero = sigma_constant(0.0);

  SECTION("identity samples are monotone with unit margin") {
    const FiniteGraph g{{pd1(0, 0), pd1(1, 1)}};
    const CheckReport r = check_sigma_monotone(g, zero);
    CHECK(r.passed);
    CHECK(!r.witness.has_value());
    CHECK(r.margin == 1.0);
  }

  SECTION("a crossing pair fails with the violating witness") {
    const FiniteGraph g{{pd1(0, 1), pd1(1, 0)}};
    const CheckReport r = check_sigma_monotone(g, zero);
    CHECK(!r.passed);
    CHECK(r.margin == -1.0);
    REQUIRE(r.witness.has_value());
    CHECK(r.witness->first.x[0] == 0.0);
    CHECK(r.witness->second.x[0] == 1.0);
  }

  SECTION("the same pair passes with sigma = 1 at zero margin") {
    const FiniteGraph g{{pd1(0, 1), pd1(1, 0)}};
    const CheckReport r = check_sigma_monotone(g, sigma_constant(1.0));
    CHECK(r.passed);
    CHECK(r.margin == 0.0);
  }

  SECTION("sigma undefined at a graph point") {
    const FiniteGraph g{{pd1(0, 0), pd1(1, 1)}};
    CHECK_THROWS_AS(check_sigma_monotone(g, sigma_table({{{0.0}, 0.5}})),
                    MissingKey);
  }

  SECTION("single-point graph is vacuously monotone") {
    const FiniteGraph g{{pd1(2, 5)}};
    const CheckReport r = check_sigma_monotone(g, zero);
    CHECK(r.passed);
    CHECK(r.margin == kInfinity);
  }
}

TEST_CASE("is_sigma_related") {
  FiniteGraph grid;
  for (int k = -20; k <= 20; ++k) {
    grid.points.push_back(pd1(k / 10.0, k / 10.0));
  }

  SECTION("(0, 2) is not monotonically related to the identity grid") {
    const CheckReport r =
        is_sigma_related(pd1(0, 2), grid, sigma_constant(0.0));
    CHECK(!r.passed);
    REQUIRE(r.witness.has_value());
    CHECK(r.witness->second.x[0] == 1.0);  // <2-1, 0-1> = -1
    CHECK(r.margin == -1.0);
  }

  SECTION("a graph point is related under any sigma") {
    const CheckReport r =
        is_sigma_related(pd1(0.5, 0.5), grid, sigma_constant(0.0));
    CHECK(r.passed);
  }

  SECTION("(0, 2) becomes related once sigma = 2") {
    const CheckReport r =
        is_sigma_related(pd1(0, 2), grid, sigma_constant(2.0));
    CHECK(r.passed);
  }
}

TEST_CASE("estimate_sigma_T frozen cases") {
  SECTION("monotone pair gives zero") {
    const FiniteGraph g{{pd1(0, 0), pd1(1, 1)}};
    CHECK(estimate_sigma_T({0.0}, g) == 0.0);
  }

  SECTION("crossing pair gives one") {
    const FiniteGraph g{{pd1(0, 1), pd1(1, 0)}};
    CHECK(estimate_sigma_T({0.0}, g) == 1.0);
  }

  SECTION("triangular graph at the origin") {
    FiniteGraph g;
    for (int k = -300; k <= 300; ++k) {
      const double x = k / 100.0;
      g.points.push_back(pd1(x, std::max(1.0 - std::abs(x), 0.0)));
    }
    const double est = estimate_sigma_T({0.0}, g);
    CHECK(est == testsupport::oracle_sigma_t({0.0}, g));
    CHECK(est >= 0.98);
    CHECK(est <= 1.02);
  }

  SECTION("point off the domain") {
    const FiniteGraph g{{pd1(0, 0)}};
    CHECK_THROWS_AS(estimate_sigma_T({1.0}, g), NotInDomain);
  }

  SECTION("set-valued points maximize over every image element") {
    const FiniteGraph g{{pd1(0, 0), pd1(0, 1), pd1(1, 0)}};
    // x* = 0 against (1, 0) needs a = 0; x* = 1 against (1, 0) needs a = 1.
    CHECK(estimate_sigma_T({0.0}, g) == 1.0);
  }

  SECTION("single-point graph gives zero") {
    const FiniteGraph g{{pd1(3, 7)}};
    CHECK(estimate_sigma_T({3.0}, g) == 0.0);
  }
}

TEST_CASE("sigma_T properties") {
  std::mt19937_64 rng(101);

  SECTION("the sup of sigma_T over the domain is a feasible constant bound") {
    for (int trial = 0; trial < 100; ++trial) {
      const FiniteGraph g = testsupport::random_graph(rng, 1, 12);
      double bound = 0.0;
      for (const auto& p : g.points) {
        bound = std::max(bound, estimate_sigma_T(p.x, g));
      }
      const CheckReport r =
          check_sigma_monotone(g, sigma_constant(bound), 1e-9);
      REQUIRE(r.passed);
    }
  }

  SECTION("monotone under graph extension") {
    for (int trial = 0; trial < 100; ++trial) {
      FiniteGraph big = testsupport::random_graph(rng, 1, 16);
      FiniteGraph small;
      small.points.assign(big.points.begin(), big.points.begin() + 8);
      const Vec x = small.points.front().x;
      REQUIRE(estimate_sigma_T(x, small) <= estimate_sigma_T(x, big));
    }
  }

  SECTION("graphs whose Fitzpatrick value meets the pairing have sigma_T = 0") {
    for (int trial = 0; trial < 100; ++trial) {
      const FiniteGraph g = testsupport::random_monotone_graph(rng, 10);
      for (const auto& p : g.points) {
        const double f = fitz_exact_finite(g, p).value;
        const double pairing = dot(p.x_star, p.x);
        if (std::abs(f - pairing) <= 1e-9) {
          REQUIRE(estimate_sigma_T(p.x, g) <= 1e-9);
        }
      }
    }
  }

  SECTION("sigma = 0 is exactly the classical monotonicity test") {
    for (int trial = 0; trial < 50; ++trial) {
      const FiniteGraph g = testsupport::random_monotone_graph(rng, 10);
      REQUIRE(check_sigma_monotone(g, sigma_constant(0.0), 0.0).passed);
    }
    const FiniteGraph bad{{pd1(0, 1), pd1(1, 0)}};
    REQUIRE(!check_sigma_monotone(bad, sigma_constant(0.0), 0.0).passed);
  }
}

TEST_CASE("the catalog operators are premonotone but not monotone") {
  const SigmaSpec zero = sigma_constant(0.0);
  const SigmaSpec one = sigma_constant(1.0);

  SECTION("triangular") {
    const FiniteGraph g =
        sample_graph_1d(make_builtin_operator(BuiltinKind::triangular), 4.0, 801);
    CHECK(!check_sigma_monotone(g, zero).passed);
    CHECK(check_sigma_monotone(g, one).passed);
  }

  SECTION("normal") {
    const FiniteGraph g =
        sample_graph_1d(make_builtin_operator(BuiltinKind::normal), 4.0, 801);
    CHECK(!check_sigma_monotone(g, zero).passed);
    CHECK(check_sigma_monotone(g, one).passed);
  }

  SECTION("unit interval") {
    const FiniteGraph g = sample_graph_1d(
        make_builtin_operator(BuiltinKind::unit_interval, 1, 0, 4), 4.0, 81);
    CHECK(!check_sigma_monotone(g, zero).passed);
    CHECK(check_sigma_monotone(g, one).passed);
  }
}

TEST_CASE("refute_maximality") {
  const SigmaSpec zero = sigma_constant(0.0);

  SECTION("a related off-graph candidate refutes") {
    const FiniteGraph g{{pd1(0, 0), pd1(1, 1)}};
    const CheckReport r = refute_maximality(g, zero, {pd1(0.5, 0.5)}, {0.0});
    CHECK(!r.passed);
    REQUIRE(r.witness.has_value());
    CHECK(r.witness->first.x[0] == 0.5);
    CHECK(r.margin <= 0.0);
  }

  SECTION("an unrelated candidate does not refute") {
    const FiniteGraph g = identity_samples(-10.0, 10.0, 0.5);
    const CheckReport r = refute_maximality(g, zero, {pd1(0, 1)}, {0.0});
    CHECK(r.passed);
    CHECK(!r.witness.has_value());
  }

  SECTION("empty candidate list is vacuous") {
    const FiniteGraph g{{pd1(0, 0)}};
    const CheckReport r = refute_maximality(g, zero, {}, {});
    CHECK(r.passed);
    CHECK(r.margin == kInfinity);
  }

  SECTION("candidates already on the graph are ignored") {
    const FiniteGraph g{{pd1(0, 0), pd1(1, 1)}};
    const CheckReport r = refute_maximality(g, zero, {pd1(1, 1)}, {0.0});
    CHECK(r.passed);
  }

  SECTION("a non-monotone graph is rejected up front") {
    const FiniteGraph g{{pd1(0, 1), pd1(1, 0)}};
    CHECK_THROWS(refute_maximality(g, zero, {pd1(0.5, 0.5)}, {0.0}));
  }

  SECTION("the candidate's own sigma value decides relatedness") {
    // The crossing graph is sigma-monotone for sigma = 1. The candidate
    // (0.5, 1) relates to (1, 0) only when min{sigma'(0.5), 1} >= 1:
    // <1-0, 0.5-1> = -0.5 against -min{.}*0.5.
    const FiniteGraph g{{pd1(0, 1), pd1(1, 0)}};
    const SigmaSpec one = sigma_constant(1.0);
    const CheckReport with_zero =
        refute_maximality(g, one, {pd1(0.5, 1)}, {0.0});
    CHECK(with_zero.passed);  // not related under sigma' = 0, no refutation
    const CheckReport with_one =
        refute_maximality(g, one, {pd1(0.5, 1)}, {1.0});
    CHECK(!with_one.passed);  // related under sigma' = 1: refuted
  }
}
