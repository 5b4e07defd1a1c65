#include <doctest.h>

#include <cmath>

#include "nlwlab/errors.hpp"
#include "nlwlab/ground_state.hpp"
#include "nlwlab/modulation.hpp"

using namespace nlwlab;
namespace md = nlwlab::modulation;

TEST_CASE("soliton configurations validate order and signs") {
  CHECK_NOTHROW(soliton_config({1, -1}, {1.0, 0.1}).validate());
  CHECK_THROWS_AS(soliton_config({1, -1}, {0.1, 1.0}).validate(), error);
  CHECK_THROWS_AS(soliton_config({1, 2}, {1.0, 0.1}).validate(), error);
  CHECK(soliton_config({1, 1, 1}, {1.0, 0.1, 0.02}).gamma() == doctest::Approx(0.2));
  CHECK(soliton_config({1}, {1.0}).gamma() == 0.0);
}

TEST_CASE("orthogonality residuals vanish at the planted scales") {
  const auto grid = make_grid(5, 5e-4, 100.0);
  const soliton_config truth{{1, -1}, {1.0, 0.02}};
  const auto M = md::multisoliton(grid, truth);
  for (double r : md::orthogonality_residuals(M, truth)) CHECK(std::abs(r) < 1e-12);
  const auto off = md::orthogonality_residuals(M, {{1, -1}, {1.02, 0.02}});
  CHECK(std::abs(off[0]) > 1e-3);
}

TEST_CASE("fixed-point fit recovers planted scales geometrically") {
  const auto grid = make_grid(5, 5e-4, 100.0);
  const soliton_config truth{{1, 1}, {1.0, 0.01}};
  const auto r = md::fit_scales(md::multisoliton(grid, truth), {{1, 1}, {1.05, 0.0103}});
  CHECK(r.config.scales[0] == doctest::Approx(1.0).epsilon(1e-9));
  CHECK(r.config.scales[1] == doctest::Approx(0.01).epsilon(1e-9));
  CHECK(r.contraction_ratio < 0.5);
  CHECK(r.residual <= 1e-10);
  for (std::size_t i = 1; i < r.residual_history.size(); ++i)
    if (r.residual_history[i - 1] > 1e-12) CHECK(r.residual_history[i] < r.residual_history[i - 1]);
}

TEST_CASE("fit gate rejects a start far from any multisoliton") {
  const auto grid = make_grid(5, 1e-3, 50.0);
  const auto f = md::multisoliton(grid, {{1}, {1.0}});
  CHECK_THROWS_AS(md::fit_scales(f, {{1}, {3.0}}), error);
}

TEST_CASE("decompose inverts construct") {
  const auto grid = make_grid(5, 5e-4, 100.0);
  const soliton_config truth{{1, 1}, {1.0, 0.02}};
  const std::vector<double> alpha{0.01, -0.02};
  const radial_field zero(grid);
  const auto p = md::construct(truth, alpha, zero, zero);
  const auto d = md::decompose(p, {{1, 1}, {1.01, 0.0201}});
  for (std::size_t j = 0; j < 2; ++j) {
    CHECK(d.config.scales[j] == doctest::Approx(truth.scales[j]).epsilon(1e-9));
    CHECK(d.alpha[j] == doctest::Approx(alpha[j]).epsilon(1e-8));
  }
  CHECK(h1_norm_sq(d.h) < 1e-12);
  CHECK(l2_norm_sq(d.g1) < 1e-12);
  CHECK(d.gamma == doctest::Approx(0.02));

  // with a generic perturbation the pieces still reassemble the data
  const radial_field bump = sample(grid, [](double r) { return 1e-3 * std::exp(-(r - 3.0) * (r - 3.0)); });
  const field_pair q(p.f + bump, p.g + bump);
  const auto e = md::decompose(q, truth);
  const auto back = md::construct(e.config, e.alpha, e.h, e.g1);
  CHECK(h_norm_sq(back - q) < 1e-20 * h_norm_sq(q));
  for (double r : md::orthogonality_residuals(q.f, e.config)) CHECK(std::abs(r) < 1e-9);
}

TEST_CASE("‖∇ΛW‖² agrees with the ground-state constants") {
  for (int N : {5, 7}) {
    CHECK(md::grad_LambdaW_norm_sq(N) ==
          doctest::Approx(ground_state::reference_constants(N).norm_gradLambdaW_L2_sq).epsilon(1e-10));
  }
}

TEST_CASE("leading interaction error shrinks with the scale ratio") {
  const auto a = md::leading_interaction(1.0, 0.04, 5);
  const auto b = md::leading_interaction(1.0, 0.01, 5);
  CHECK(b.relative_error < a.relative_error);
  CHECK(a.quadrature > 0.0);
  CHECK(md::leading_interaction(1.0, 25.0, 5).quadrature < 0.0);
  CHECK(md::leading_prefactor(5) > 0.0);
}

TEST_CASE("interaction integrals are symmetric under exchange where the integrand is") {
  const auto v = md::interaction_integrals(0.05, 1.0, 5);
  CHECK(v.est1_1 > 0.0);
  CHECK(v.est1_2 > 0.0);
  // ∫|(ΛW)_[λ](ΛW)_[μ]| depends on λ/μ only
  const auto w = md::interaction_integrals(0.1, 2.0, 5);
  CHECK(w.est1_2 == doctest::Approx(v.est1_2).epsilon(1e-8));
  CHECK_THROWS(md::interaction_integrals(1.0, 0.5, 5));
}
