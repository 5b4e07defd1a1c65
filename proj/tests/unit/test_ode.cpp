#include <doctest.h>

#include <cmath>

#include "nlwlab/errors.hpp"
#include "nlwlab/ground_state.hpp"
#include "nlwlab/ode.hpp"

using namespace nlwlab::ode;

TEST_CASE("theta weights double on equal signs and halve on opposite ones") {
  CHECK(theta_weights({1}) == std::vector<double>{1.0});
  CHECK(theta_weights({1, 1, -1, -1}) == std::vector<double>{1.0, 2.0, 1.0, 2.0});
  CHECK(theta_weights({-1, 1, -1}) == std::vector<double>{1.0, 0.5, 0.25});
}

TEST_CASE("constants come from the ground state") {
  const auto P = ode_params::for_dimension(5, {1, 1});
  const auto& c = nlwlab::ground_state::reference_constants(5);
  CHECK(P.kappa0 == c.kappa0);
  CHECK(P.kappa1 == c.kappa1);
  CHECK(P.kappa2 == c.kappa2);
}

TEST_CASE("right-hand side for two bubbles, by hand") {
  const auto P = ode_params::for_dimension(5, {1, -1});
  ode_state s{0.0, {2.0, 0.02}, {0.3, -0.1}};
  const auto v = rhs(P, s);
  const double y = std::pow(0.01, 1.5);
  CHECK(v.dlambda[0] == doctest::Approx(P.kappa2 * 0.3));
  CHECK(v.dlambda[1] == doctest::Approx(P.kappa2 * -0.1));
  // λ₁β₁' = −κ₀ι₁ι₂y, λ₂β₂' = +κ₀ι₂ι₁y
  CHECK(v.dbeta[0] == doctest::Approx(P.kappa0 * y / 2.0));
  CHECK(v.dbeta[1] == doctest::Approx(-P.kappa0 * y / 0.02));
  CHECK(first_integral(P, s) == doctest::Approx(0.5 * (0.09 + 0.01) + P.kappa1 * y));
  CHECK(gamma_of(s.lambda) == doctest::Approx(0.01));
}

TEST_CASE("zero-energy seed lies on H = 0 and RK4 keeps it there") {
  for (const std::vector<int>& signs : {std::vector<int>{1, 1}, std::vector<int>{1, 1, 1}}) {
    const auto P = ode_params::for_dimension(5, signs);
    std::vector<double> lam{1.0};
    while (lam.size() < signs.size()) lam.push_back(lam.back() * 0.02);
    const auto s = seed_zero_energy(P, lam);
    CHECK(std::abs(first_integral(P, s)) < 1e-12 * P.kappa1);
    events ev;
    ev.gamma_max = 0.2;
    const auto tr = integrate(P, s, default_dt(P, s), 1e6, ev);
    CHECK(tr.reason == stop_reason::gamma_max);
    CHECK(tr.diag.back().gamma == doctest::Approx(0.2).epsilon(1e-6));
    for (const auto& d : tr.diag) REQUIRE(std::abs(d.H) < 1e-9 * P.kappa1 * std::pow(0.2, 1.5));
  }
}

TEST_CASE("time rescales with the outer scale") {
  const auto P = ode_params::for_dimension(5, {1, 1});
  const auto s1 = seed_zero_energy(P, {1.0, 0.01});
  const auto s3 = seed_zero_energy(P, {3.0, 0.03});
  events ev;
  ev.gamma_max = 0.1;
  const auto a = integrate(P, s1, default_dt(P, s1), 1e6, ev);
  const auto b = integrate(P, s3, default_dt(P, s3), 1e6, ev);
  CHECK(b.t_stop == doctest::Approx(3.0 * a.t_stop).epsilon(1e-8));
}

TEST_CASE("monotonicity helpers") {
  const double tm = two_minus(5.64e-5, 1e3);
  CHECK(tm > 0.0);
  CHECK(tm < 2.0);
  CHECK(t_star(1e-3, 1.0, 1.5) > 0.0);
  CHECK_THROWS_AS(t_star(1e-3, 1.0, 2.5), nlwlab::error);
  CHECK(to_string(stop_reason::gamma_max) != to_string(stop_reason::horizon));
}

TEST_CASE("B and A' identities on a trajectory") {
  const auto P = ode_params::for_dimension(7, {1, 1});
  const auto s = seed_zero_energy(P, {1.0, 0.01});
  events ev;
  ev.gamma_max = 0.3;
  const auto tr = integrate(P, s, default_dt(P, s), 1e6, ev);
  const auto rep = monotonicity(P, tr, 1e12);
  CHECK(rep.max_a_prime_defect < 1e-10);
  CHECK(rep.min_b_margin >= 0.0);
}
