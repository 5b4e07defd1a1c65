#include <doctest.h>

#include <cmath>

#include "nlwlab/errors.hpp"
#include "nlwlab/estimates.hpp"

using namespace nlwlab::estimates;

TEST_CASE("log-log slope of an exact power") {
  CHECK(loglog_slope({0.04, 0.02, 0.01}, {3 * std::pow(0.04, 1.7), 3 * std::pow(0.02, 1.7), 3 * std::pow(0.01, 1.7)}) ==
        doctest::Approx(1.7).epsilon(1e-12));
}

TEST_CASE("crucial integral: quadrature equals the closed form") {
  for (const auto& [a, b] : std::vector<std::pair<double, double>>{{3, 4}, {2, 4}, {6, 8}, {3.5, 7}}) {
    for (double lambda : {0.1, 0.01}) {
      CHECK(crucial_integral(a, b, lambda, 1.0, 5) == doctest::Approx(crucial_closed_form(a, b, lambda, 1.0, 5)).epsilon(1e-8));
    }
  }
}

TEST_CASE("crucial integral with a < N scales as λ^a") {
  const auto r = check_crucial(3, 4, 5);
  CHECK(r.fitted_exponent == doctest::Approx(3.0).epsilon(0.01));
  CHECK(r.passed);
}

TEST_CASE("BT30 at (1,1,1) is 3^{7/3} - 2·2^{7/3} + 1") {
  const auto v = evaluate_pointwise("BT30", 5, {1, 1, 1});
  CHECK(v.lhs == doctest::Approx(std::pow(3.0, 7.0 / 3.0) - 2.0 * std::pow(2.0, 7.0 / 3.0) + 1.0).epsilon(1e-12));
  CHECK(v.lhs == doctest::Approx(3.900878).epsilon(1e-6));
}

TEST_CASE("BT20 vanishes at b = 0 and is second order in b") {
  CHECK(evaluate_pointwise("BT20", 5, {1.3, 0.0}).lhs == 0.0);
  const double small = evaluate_pointwise("BT20", 5, {1.0, 1e-3}).lhs;
  const double smaller = evaluate_pointwise("BT20", 5, {1.0, 5e-4}).lhs;
  CHECK(small / smaller == doctest::Approx(4.0).epsilon(1e-2));
}

TEST_CASE("both sides of every pointwise claim are homogeneous of the stated degree") {
  const std::vector<std::pair<std::string, std::vector<double>>> cases{
      {"L40", {0.7, -0.3, 0.05, 0.2}}, {"L10'", {0.7, -0.3, 0.05, 0.2}}, {"BT20", {0.8, 0.3}}, {"BT30", {0.8, 0.3, -0.2}}};
  for (const auto& [id, x] : cases) {
    const double deg = pointwise_degree(id, 5);
    std::vector<double> y;
    for (double v : x) y.push_back(2.5 * v);
    const auto a = evaluate_pointwise(id, 5, x), b = evaluate_pointwise(id, 5, y);
    CHECK(b.lhs == doctest::Approx(std::pow(2.5, deg) * a.lhs).epsilon(1e-9));
    CHECK(b.rhs == doctest::Approx(std::pow(2.5, deg) * a.rhs).epsilon(1e-9));
  }
}

TEST_CASE("pointwise dimension gates") {
  CHECK_THROWS_AS(evaluate_pointwise("L10", 5, {1, 1, 1, 1}), nlwlab::error);
  CHECK_THROWS_AS(evaluate_pointwise("L10'", 7, {1, 1, 1, 1}), nlwlab::error);
  CHECK_THROWS_AS(evaluate_pointwise("BT20", 5, {1, 1, 1}), nlwlab::error);
}

TEST_CASE("pointwise sampling is reproducible for a fixed seed") {
  const auto a = check_pointwise("BT20", 5, 10000, 7);
  const auto b = check_pointwise("BT20", 5, 10000, 7);
  CHECK(a.empirical_constant == b.empirical_constant);
  CHECK(a.counterexamples == 0);
  CHECK(std::abs(a.stability) <= 0.1);
}

TEST_CASE("est1.2 exponent") {
  const auto r = check_integral("est1.2", 5);
  CHECK(std::abs(r.fitted_exponent - r.claimed_exponent) <= exponent_tolerance);
}
