#include <doctest.h>

#include <cmath>

#include "nlwlab/errors.hpp"
#include "nlwlab/ground_state.hpp"
#include "nlwlab/wave.hpp"

using namespace nlwlab;

namespace {

double gaussian(double r) { return std::exp(-r * r); }

// N = 3 d'Alembert solution for even data (U, 0): r u = ((r+t)U(r+t) + (r-t)U(r-t)) / 2.
double dalembert(double r, double t) { return ((r + t) * gaussian(r + t) + (r - t) * gaussian(r - t)) / (2.0 * r); }

double free_error(double h) {
  const auto grid = make_grid(3, h, 12.0);
  const field_pair p(sample(grid, gaussian), radial_field(grid));
  wave::evolution_spec spec;
  spec.t_final = 1.5;
  const auto res = wave::evolve(p, spec);
  double err = 0.0;
  for (std::size_t i = 0; i < grid->size(); ++i)
    err = std::max(err, std::abs(res.final_state.f[i] - dalembert(grid->r(i), res.t_reached)));
  return err;
}

}  // namespace

TEST_CASE("free N = 3 evolution converges to d'Alembert at second order") {
  const double e1 = free_error(0.02), e2 = free_error(0.01);
  CHECK(e2 < 1e-3);
  CHECK(e1 / e2 > 3.5);
}

TEST_CASE("free evolution conserves energy and fills the series") {
  const auto grid = make_grid(5, 0.01, 20.0);
  const field_pair p(sample(grid, gaussian), sample(grid, [](double r) { return r * gaussian(r); }));
  wave::evolution_spec spec;
  spec.t_final = 5.0;
  spec.series_every = 10;
  spec.snapshot_every = 100;
  const auto res = wave::evolve(p, spec);
  CHECK_FALSE(res.blew_up);
  CHECK(res.max_energy_drift < 1e-4 * h_norm_sq(p));
  CHECK(res.series.front().t == 0.0);
  CHECK(res.t_reached == doctest::Approx(5.0).epsilon(1e-12));
  CHECK(!res.snapshots.empty());
  CHECK(res.dt <= wave::cfl_limit(*grid) * grid->h());
}

TEST_CASE("W is a stationary solution of the nonlinear equation") {
  const auto grid = make_grid(5, 0.01, 40.0);
  const field_pair p(ground_state::sample_W(grid), radial_field(grid));
  wave::evolution_spec spec;
  spec.equation = wave::equation_kind::nonlinear;
  spec.t_final = 2.0;
  const auto res = wave::evolve(p, spec);
  CHECK_FALSE(res.blew_up);
  CHECK(res.max_energy_drift < 1e-8 * std::abs(nlw_energy(p)));
  CHECK(res.final_state.f[0] == doctest::Approx(p.f[0]).epsilon(1e-4));
}

TEST_CASE("ΛW is a stationary solution of the linearized equation") {
  const auto grid = make_grid(5, 0.01, 40.0);
  const field_pair p(ground_state::sample_LambdaW_h1(grid), radial_field(grid));
  wave::evolution_spec spec;
  spec.equation = wave::equation_kind::linearized;
  spec.solitons = {{1}, {1.0}};
  spec.cone_truncation = 0.0;
  spec.t_final = 1.0;
  const auto res = wave::evolve(p, spec);
  // inside the cone the potential is off, so only compare beyond r = t
  for (std::size_t i = 0; i < grid->size(); ++i)
    if (grid->r(i) > 1.1 && grid->r(i) < 30.0) REQUIRE(res.final_state.f[i] == doctest::Approx(p.f[i]).epsilon(1e-3));
}

TEST_CASE("exterior energy at t = 0 is the exterior norm") {
  const auto grid = make_grid(5, 0.01, 10.0);
  const field_pair p(sample(grid, gaussian), sample(grid, gaussian));
  CHECK(wave::exterior_energy(p, 1.0, 0.0) == doctest::Approx(h_norm_sq(p, 1.0)).epsilon(1e-12));
  CHECK_THROWS_AS(wave::exterior_energy(p, 6.0, 5.0), error);
}

TEST_CASE("extrapolation recovers the limit of E∞ + c/t") {
  std::vector<wave::series_point> s;
  for (int i = 1; i <= 200; ++i) s.push_back({0.1 * i, 0.0, 2.0 + 3.0 / (0.1 * i) - 1.0 / std::pow(0.1 * i, 2), 0.0});
  CHECK(wave::extrapolate_limit(s, 3) == doctest::Approx(2.0).epsilon(1e-9));
}

TEST_CASE("channel_sum refuses the nonlinear equation") {
  const auto grid = make_grid(5, 0.05, 10.0);
  const field_pair p(sample(grid, gaussian), radial_field(grid));
  wave::evolution_spec spec;
  spec.equation = wave::equation_kind::nonlinear;
  spec.t_final = 1.0;
  CHECK_THROWS_AS(wave::channel_sum(p, 0.0, spec), error);
}

TEST_CASE("compact free data split its energy equally between the two time directions") {
  const auto grid = make_grid(5, 0.01, 14.0);
  const field_pair p(sample(grid, [](double r) { return r < 2.0 ? std::pow(std::cos(M_PI * r / 4.0), 4) : 0.0; }),
                     radial_field(grid));
  wave::evolution_spec spec;
  spec.t_final = 8.0;
  spec.data_support = 2.0;
  const auto ch = wave::channel_sum(p, 0.0, spec);
  CHECK(ch.channel_sum / h_norm_sq(p) == doctest::Approx(1.0).epsilon(5e-3));
  CHECK(ch.exterior_energy_fwd == doctest::Approx(ch.exterior_energy_bwd).epsilon(1e-10));
}

TEST_CASE("theta exponents per dimension") {
  CHECK(wave::theta_exponent(5) == 0.5);
  CHECK(wave::theta_exponent(7) == 1.5);
  CHECK(wave::theta_exponent(11) == 2.0);
  CHECK_THROWS(wave::theta_exponent(3));
}
