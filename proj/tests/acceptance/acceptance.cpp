// Acceptance suite: one line per criterion, nonzero exit if any fails.
#include <algorithm>
#include <array>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <functional>
#include <numbers>
#include <random>
#include <string>
#include <vector>

#include "nlwlab/collision.hpp"
#include "nlwlab/errors.hpp"
#include "nlwlab/estimates.hpp"
#include "nlwlab/ground_state.hpp"
#include "nlwlab/modulation.hpp"
#include "nlwlab/nonradiative.hpp"
#include "nlwlab/ode.hpp"
#include "nlwlab/quadrature.hpp"
#include "nlwlab/wave.hpp"

using namespace nlwlab;

namespace {

// Pinned tolerances.
constexpr double tol_interaction = 1e-6;
constexpr double tol_kappa1 = 1e-10;
constexpr double tol_energy_w = 1e-8;
constexpr double min_residual_ratio = 3.8;
constexpr double equirepartition_lo = 0.98, equirepartition_hi = 1.02;
constexpr double max_xi_leak = 0.01;
constexpr double max_z_channel = 1e-3;
constexpr double max_ratio_spread = 20.0;
constexpr double leading_error_per_gamma = 5.0;
constexpr double leading_exponent = 1.5, leading_exponent_tol = 0.05;
constexpr double max_scale_error = 1e-6;
constexpr double max_contraction = 0.5;
constexpr double rk4_ratio = 16.0, rk4_ratio_tol = 3.0;
constexpr double max_dH_defect = 1e-8;
constexpr double max_a_prime_defect = 1e-8;
constexpr double exit_slope_tol = 0.01;
constexpr double max_pointwise_drift = 0.10;
constexpr double radiation_over_drift = 10.0;
constexpr double inelastic_gamma = 0.2;

struct outcome {
  bool pass = false;
  std::string detail;
};

std::string fmt(const char* f, auto... args) {
  char buf[512];
  std::snprintf(buf, sizeof buf, f, args...);
  return buf;
}

double rel(double a, double b) { return std::abs(a / b - 1.0); }

double median(std::vector<double> v) {
  std::sort(v.begin(), v.end());
  const std::size_t n = v.size();
  return n % 2 ? v[n / 2] : 0.5 * (v[n / 2 - 1] + v[n / 2]);
}

double bump(double x) { return std::abs(x) < 1.0 ? std::exp(-1.0 / (1.0 - x * x)) : 0.0; }

// Sum of `count` smooth bumps with random centres, widths and amplitudes inside r < support.
std::function<double(double)> random_bumps(std::mt19937_64& rng, double support, double min_width, int count) {
  std::uniform_real_distribution<double> U(0.0, 1.0);
  std::vector<std::array<double, 3>> b;
  for (int k = 0; k < count; ++k) {
    const double w = min_width + (0.4 * support - min_width) * U(rng);
    const double c = w + (support - 2.0 * w) * U(rng);
    b.push_back({c, w, 2.0 * U(rng) - 1.0});
  }
  return [b](double r) {
    double s = 0.0;
    for (const auto& e : b) s += e[2] * bump((r - e[0]) / e[1]);
    return s;
  };
}

// ---------------------------------------------------------------------------------------------

outcome constants_check() {
  const auto grid = make_grid(5, 1e-3, 200.0);
  const auto c = ground_state::compute_constants(*grid);
  const double e1 = rel(c.interaction_integral, 8.0 * std::numbers::pi * std::numbers::pi);
  const double e2 = rel(c.kappa1, 2.0 * c.kappa0 * c.norm_LambdaW_L2_sq / 3.0);
  const double e3 = rel(c.energy_W, c.norm_gradW_L2_sq / 5.0);
  return {e1 <= tol_interaction && e2 <= tol_kappa1 && e3 <= tol_energy_w,
          fmt("interaction rel %.2e, kappa1 rel %.2e, E(W) rel %.2e", e1, e2, e3)};
}

outcome residual_check() {
  std::vector<double> ell, ker;
  for (double h : {0.1, 0.05, 0.025, 0.0125}) {
    const auto grid = make_grid(5, h, 50.0);
    ell.push_back(ground_state::elliptic_residual(grid));
    ker.push_back(ground_state::kernel_residual(grid));
  }
  double worst = std::numeric_limits<double>::infinity();
  std::string ratios;
  for (std::size_t i = 1; i < ell.size(); ++i) {
    const double a = ell[i - 1] / ell[i], b = ker[i - 1] / ker[i];
    worst = std::min({worst, a, b});
    ratios += fmt(" %.3f/%.3f", a, b);
  }
  return {worst >= min_residual_ratio, "elliptic/kernel ratios" + ratios};
}

outcome equirepartition_check() {
  std::mt19937_64 rng(20260301);
  double lo = 1e300, hi = -1e300;
  int unconverged = 0;
  const double support = 5.0;
  for (int N : {3, 5, 7}) {
    for (int trial = 0; trial < 20; ++trial) {
      const auto grid = make_grid(N, 0.01, 6.0 * support);
      const field_pair p(sample(grid, random_bumps(rng, support, 0.5, 3)), sample(grid, random_bumps(rng, support, 0.5, 3)));
      wave::evolution_spec spec;
      spec.t_final = 4.0 * support;
      spec.data_support = support;
      spec.series_every = 10;
      const auto ch = wave::channel_sum(p, 0.0, spec);
      const double ratio = ch.channel_sum / h_norm_sq(p);
      lo = std::min(lo, ratio);
      hi = std::max(hi, ratio);
      if (!ch.converged) ++unconverged;
    }
  }
  return {lo >= equirepartition_lo && hi <= equirepartition_hi,
          fmt("60 data, channel/norm in [%.5f, %.5f], %d without a settled extrapolation", lo, hi, unconverged)};
}

outcome xi_check() {
  const double R_max = 2000.0, width = 100.0;
  const auto grid = make_grid(5, 0.05, R_max);
  double worst = 0.0;
  std::string detail;
  for (int k = 1; k <= 2; ++k) {
    const auto p = nonradiative::sample_xi(grid, k, 1.0, R_max - width - 1.0, width);
    wave::evolution_spec spec;
    spec.t_final = 200.0;
    spec.series_every = 20;
    const auto ch = wave::channel_sum(p, 2.0, spec);
    const double norm = h_norm_sq(p, 2.0);
    const double leak = ch.channel_sum / norm;
    worst = std::max(worst, leak);
    detail += fmt(" k=%d %.2e (at t=200: %.2e)", k, leak, (ch.raw_fwd + ch.raw_bwd) / norm);
  }
  return {worst <= max_xi_leak, "channel/||.||^2_H(2):" + detail};
}

// Exterior energy of a Z_λ element for J = 1 beyond the light cone. Both elements generate explicit
// solutions (ΛW and tΛW), so the part of the exterior beyond R_max − t that the grid cannot see is
// added from the closed form before extrapolating.
double z_element_channel(bool velocity, double* raw) {
  const int N = 5;
  const double t_final = 200.0, r_max = 3.0 * t_final;
  const auto grid = make_grid(N, 0.05, r_max);
  const field_pair p = velocity ? field_pair(radial_field(grid), ground_state::sample_LambdaW_l2(grid, 1.0))
                                : field_pair(ground_state::sample_LambdaW_h1(grid, 1.0), radial_field(grid));
  wave::evolution_spec spec;
  spec.equation = wave::equation_kind::linearized;
  spec.solitons = {{1}, {1.0}};
  spec.cone_truncation = -2.0;  // keeps the switch-off front strictly inside the measured cone
  spec.t_final = t_final;
  spec.series_every = 20;
  spec.record_channel_at = 0.0;
  auto grad_sq = [N](double r) { return std::pow(ground_state::dLambdaW(N, r), 2); };
  auto val_sq = [N](double r) { return std::pow(ground_state::LambdaW(N, r), 2); };
  double total = 0.0;
  *raw = 0.0;
  for (double sign : {1.0, -1.0}) {
    auto res = wave::evolve(field_pair(p.f, sign * p.g), spec);
    for (auto& s : res.series) {
      const double rho = r_max - s.t;
      s.exterior += velocity ? s.t * s.t * mapped_tail(N, grad_sq, rho) + mapped_tail(N, val_sq, rho)
                             : mapped_tail(N, grad_sq, rho);
    }
    total += std::max(0.0, wave::extrapolate_limit(res.series, 3));
    *raw += res.series.back().exterior;
  }
  *raw /= h_norm_sq(p);
  return total / h_norm_sq(p);
}

outcome linearized_check() {
  std::string detail;
  double raw_pos = 0, raw_vel = 0;
  const double z_pos = z_element_channel(false, &raw_pos);
  const double z_vel = z_element_channel(true, &raw_vel);
  bool pass = std::max(z_pos, z_vel) <= max_z_channel;
  detail += fmt(" J=1 Z channel: position %.2e (t=200: %.2e), velocity %.2e (t=200: %.2e);", z_pos, raw_pos, z_vel,
                raw_vel);

  std::mt19937_64 rng(20260302);
  const double support = 3.0, t_final = 12.0;
  const auto grid = make_grid(5, 2.5e-3, 2.0 * t_final + support + 3.0);
  for (const soliton_config& config : {soliton_config{{1}, {1.0}}, soliton_config{{1, 1}, {1.0, 0.01}}}) {
    wave::evolution_spec spec;
    spec.equation = wave::equation_kind::linearized;
    spec.solitons = config;
    spec.cone_truncation = 0.0;
    spec.t_final = t_final;
    spec.series_every = 10;

    // For J = 2 the Z elements only enter with the weight γ^{2θ}; reported, not gated.
    if (config.count() == 2) {
      std::string z;
      for (double lambda : config.scales) {
        const field_pair pos(ground_state::sample_LambdaW_h1(grid, lambda), radial_field(grid));
        const field_pair vel(radial_field(grid), ground_state::sample_LambdaW_l2(grid, lambda));
        z += fmt(" %.2e/%.2e", wave::channel_sum(pos, 0.0, spec).channel_sum / h_norm_sq(pos),
                 wave::channel_sum(vel, 0.0, spec).channel_sum / h_norm_sq(vel));
      }
      detail += " J=2 Z channel (position/velocity per scale, horizon 12):" + z + ";";
    }

    std::vector<double> ratios;
    for (int trial = 0; trial < 50; ++trial) {
      const double min_width = 0.5 * config.scales.back();
      const field_pair raw(sample(grid, random_bumps(rng, support, min_width, 4)),
                           sample(grid, random_bumps(rng, support, min_width, 4)));
      const auto proj = nonradiative::project_Z(raw, config);
      const auto ch = wave::channel_sum(proj.remainder, 0.0, spec);
      ratios.push_back(h_norm_sq(proj.remainder) / ch.channel_sum);
    }
    const double mx = *std::max_element(ratios.begin(), ratios.end());
    const double spread = mx / median(ratios);
    pass = pass && std::isfinite(mx) && spread < max_ratio_spread;
    detail += fmt(" J=%zu: ratio median %.3f max %.3f spread %.2f;", config.count(), median(ratios), mx, spread);
  }
  return {pass, detail};
}

outcome leading_check() {
  std::vector<double> gammas{0.04, 0.02, 0.01}, inner, outer;
  double worst = 0.0;
  for (double g : gammas) {
    const auto a = modulation::leading_interaction(1.0, g, 5);
    const auto b = modulation::leading_interaction(1.0, 1.0 / g, 5);
    worst = std::max({worst, a.relative_error / g, b.relative_error / g});
    inner.push_back(std::abs(a.quadrature));
    outer.push_back(std::abs(b.quadrature));
  }
  const double s_in = estimates::loglog_slope(gammas, inner);
  const double s_out = estimates::loglog_slope(gammas, outer);
  const bool ok = worst <= leading_error_per_gamma && std::abs(s_in - leading_exponent) <= leading_exponent_tol &&
                  std::abs(s_out - leading_exponent) <= leading_exponent_tol;
  return {ok, fmt("max rel.error/gamma %.3f, exponents inner %.4f outer %.4f", worst, s_in, s_out)};
}

outcome fit_check() {
  struct planted {
    soliton_config truth, start;
    double h, r_max;
  };
  const std::vector<planted> cases{
      {{{1}, {1.0}}, {{1}, {1.1}}, 1e-3, 200.0},
      {{{1, -1}, {1.0, 0.02}}, {{1, -1}, {1.04, 0.0195}}, 5e-4, 100.0},
      {{{1, 1, -1}, {1.0, 0.02, 0.0004}}, {{1, 1, -1}, {1.05, 0.019, 0.00041}}, 2.5e-4, 100.0}};
  double worst_scale = 0.0, worst_ratio = 0.0;
  for (const auto& c : cases) {
    const auto grid = make_grid(5, c.h, c.r_max);
    const auto r = modulation::fit_scales(modulation::multisoliton(grid, c.truth), c.start);
    for (std::size_t j = 0; j < c.truth.count(); ++j)
      worst_scale = std::max(worst_scale, rel(r.config.scales[j], c.truth.scales[j]));
    worst_ratio = std::max(worst_ratio, r.contraction_ratio);
  }
  return {worst_scale <= max_scale_error && worst_ratio < max_contraction,
          fmt("J=1,2,3: max |lambda/lambda_true - 1| %.2e, contraction ratio %.3f", worst_scale, worst_ratio)};
}

outcome first_integral_check() {
  std::string detail;
  bool pass = true;
  std::mt19937_64 rng(20260303);
  for (const std::vector<int>& signs : {std::vector<int>{1, 1}, std::vector<int>{1, 1, 1}}) {
    const auto P = ode::ode_params::for_dimension(5, signs);
    std::vector<double> lam{1.0};
    while (lam.size() < signs.size()) lam.push_back(lam.back() * 0.01);
    const auto s0 = ode::seed_zero_energy(P, lam);
    const double dt0 = 100.0 * ode::default_dt(P, s0);
    ode::events ev;
    ev.gamma_max = 0.3;
    const auto ref = ode::integrate(P, s0, dt0, 1e6, ev);
    const double horizon = 0.9 * ref.t_stop;
    std::vector<double> errs;
    for (double f : {1.0, 0.5, 0.25}) {
      const auto tr = ode::integrate(P, s0, dt0 * f, horizon, {});
      double e = 0.0;
      for (const auto& d : tr.diag) e = std::max(e, std::abs(d.H - tr.diag.front().H));
      errs.push_back(e);
    }
    const double r1 = errs[0] / errs[1], r2 = errs[1] / errs[2];
    const bool rk_ok = std::abs(r1 - rk4_ratio) <= rk4_ratio_tol && std::abs(r2 - rk4_ratio) <= rk4_ratio_tol;

    // dH/dt = ∇H·F with ∇H by fourth-order central differences, relative to Σ|∂_iH F_i|.
    std::uniform_real_distribution<double> U(0.0, 1.0);
    std::normal_distribution<double> G(0.0, 1.0);
    double worst = 0.0;
    for (int trial = 0; trial < 100; ++trial) {
      ode::ode_state s;
      s.lambda = {1.0};
      while (s.lambda.size() < signs.size()) s.lambda.push_back(s.lambda.back() * std::pow(10.0, -3.0 + 2.5 * U(rng)));
      // β on the scale of the interaction, as on the H = 0 shell
      const double scale_beta = std::sqrt(P.kappa1 * std::pow(ode::gamma_of(s.lambda), 1.5));
      for (std::size_t j = 0; j < signs.size(); ++j) s.beta.push_back(scale_beta * G(rng));
      const auto F = ode::rhs(P, s);
      double sum = 0.0, scale = 0.0;
      for (std::size_t j = 0; j < 2 * signs.size(); ++j) {
        const bool is_lambda = j < signs.size();
        const std::size_t k = is_lambda ? j : j - signs.size();
        const double x = is_lambda ? s.lambda[k] : s.beta[k];
        const double eps = 1e-3 * (is_lambda ? x : scale_beta);
        auto shifted = [&](double d) {
          auto q = s;
          (is_lambda ? q.lambda[k] : q.beta[k]) = x + d;
          return ode::first_integral(P, q);
        };
        const double grad = (8.0 * (shifted(eps) - shifted(-eps)) - (shifted(2.0 * eps) - shifted(-2.0 * eps))) / (12.0 * eps);
        const double term = grad * (is_lambda ? F.dlambda[k] : F.dbeta[k]);
        sum += term;
        scale += std::abs(term);
      }
      worst = std::max(worst, std::abs(sum) / scale);
    }
    pass = pass && rk_ok && worst <= max_dH_defect;
    detail += fmt(" J=%zu: ratios %.2f %.2f, dH/dt defect %.1e;", signs.size(), r1, r2, worst);
  }
  return {pass, detail};
}

outcome monotonicity_check() {
  std::string detail;
  bool pass = true;
  for (const std::vector<int>& signs : {std::vector<int>{1, 1}, std::vector<int>{1, 1, 1}}) {
    const auto P = ode::ode_params::for_dimension(5, signs);
    std::vector<double> lam{1.0};
    while (lam.size() < signs.size()) lam.push_back(lam.back() * 0.01);
    const auto s0 = ode::seed_zero_energy(P, lam);
    ode::events ev;
    ev.gamma_max = 0.3;
    const auto tr = ode::integrate(P, s0, ode::default_dt(P, s0), 1e6, ev);
    const auto at_1e3 = ode::monotonicity(P, tr, 1e3);
    const double C = std::max(1e3, at_1e3.C_required);
    const auto rep = ode::monotonicity(P, tr, C);
    const bool ok = rep.min_b_margin >= 0.0 && rep.violations.empty() && rep.max_a_prime_defect <= max_a_prime_defect;
    pass = pass && ok;
    detail += fmt(" J=%zu: %zu steps, C=%.3g (C=1e3 gives %zu violations), min B margin %.3f, "
                  "min log-derivative %.2e, A' defect %.1e;",
                  signs.size(), tr.states.size(), C, at_1e3.violations.size(), rep.min_b_margin,
                  rep.min_log_derivative, rep.max_a_prime_defect);
  }
  return {pass, detail};
}

outcome exit_check() {
  ode::exit_spec es;
  es.hyp = {0.1, 0.5 * std::pow(1e-3, 1.5), 1.0, 1.0};
  for (int i = 0; i < 20; ++i) es.gamma0.push_back(std::pow(10.0, -3.0 + i / 19.0));
  const std::vector<double> lambda1{1.0, 2.0, 4.0};
  std::vector<ode::exit_report> reps;
  bool all = true;
  for (double l1 : lambda1) {
    es.lambda1 = l1;
    reps.push_back(ode::exit_time_experiment(es));
    all = all && reps.back().all_exited;
  }
  double worst = 0.0;
  for (std::size_t i = 0; i < es.gamma0.size(); ++i) {
    std::vector<double> t;
    for (const auto& r : reps) t.push_back(r.runs[i].t_exit);
    worst = std::max(worst, std::abs(estimates::loglog_slope(lambda1, t) - 1.0));
  }
  return {all && worst <= exit_slope_tol,
          fmt("all exited: %s, max |slope - 1| %.2e, T_exit/lambda1 in [%.4g, %.4g]", all ? "yes" : "no", worst,
              reps[0].runs.back().t_exit_normalized, reps[0].runs.front().t_exit_normalized)};
}

outcome estimates_check() {
  using namespace estimates;
  std::vector<std::string> failed;
  int total = 0;
  auto record = [&](const estimate_report& r, const std::string& label) {
    ++total;
    std::printf("      %-26s fitted %7.4f  claimed %6.3f  %s\n", label.c_str(), r.fitted_exponent, r.claimed_exponent,
                r.passed ? "ok" : "MISS");
    if (!r.passed) failed.push_back(label);
  };
  for (const auto& [a, b] : std::vector<std::pair<double, double>>{{6, 8}, {3, 4}, {2, 4}})
    record(check_crucial(a, b, 5), fmt("crucial a=%g b=%g N=5", a, b));
  for (const auto& id : integral_ids()) record(check_integral(id, 5), id + " N=5");
  for (int N : {5, 7, 9})
    for (const auto& id : spacetime_ids()) record(check_spacetime(id, N), fmt("%s N=%d", id.c_str(), N));

  // Deep sweep for the spacetime misses: local slopes per decade of λ/μ.
  for (int N : {5, 7, 9})
    for (const auto& id : spacetime_ids()) {
      if (std::find(failed.begin(), failed.end(), fmt("%s N=%d", id.c_str(), N)) == failed.end()) continue;
      std::printf("      deep %-5s N=%d local slopes:", id.c_str(), N);
      double prev = 0.0;
      for (int k = 0; k < 6; ++k) {
        const double v = spacetime_norm(id, std::pow(10.0, -1.0 - k), 1.0, N);
        if (k) std::printf(" %.3f", std::log10(v / prev));
        prev = v;
      }
      std::printf("\n");
    }

  double worst_drift = 0.0;
  for (const auto& id : pointwise_ids())
    for (int N : {5, 7}) {
      if ((id == "L10" && N == 5) || (id == "L10'" && N != 5)) continue;
      const auto r = check_pointwise(id, N, 20000, 1);
      worst_drift = std::max(worst_drift, std::abs(r.stability));
      std::printf("      %-26s constant %.4g  half-sample %.4g\n", fmt("%s N=%d", id.c_str(), N).c_str(),
                  r.empirical_constant, r.half_constant);
    }

  std::string names;
  for (const auto& f : failed) names += (names.empty() ? "" : ", ") + f;
  return {failed.empty() && worst_drift <= max_pointwise_drift,
          fmt("%d/%d exponent fits within 0.15, pointwise drift under doubling %.3f%s%s", total - (int)failed.size(),
              total, worst_drift, failed.empty() ? "" : "; misses: ", names.c_str())};
}

outcome inelastic_check() {
  collision::collide_spec spec;
  const auto r = collision::collide(spec);
  const bool ok = r.inelastic && std::isfinite(r.t_pass) && r.radiation_after > radiation_over_drift * r.drift_floor &&
                  r.gamma_max >= inelastic_gamma;
  return {ok, fmt("shot amplitude %.10g, gamma_max %.4f, radiation %.3g vs drift floor %.3g, blow-up %s at t=%.4g",
                  r.shoot_amplitude, r.gamma_max, r.radiation_after, r.drift_floor, r.blew_up ? "yes" : "no",
                  r.blowup_time)};
}

}  // namespace

int main(int argc, char** argv) {
  const std::vector<std::pair<std::string, std::function<outcome()>>> criteria{
      {"constants", constants_check},
      {"elliptic/kernel residual convergence", residual_check},
      {"equirepartition", equirepartition_check},
      {"P(R) weak non-radiativity", xi_check},
      {"linearized channels", linearized_check},
      {"leading interaction law", leading_check},
      {"fixed-point fit", fit_check},
      {"ODE first integral", first_integral_check},
      {"monotonicity suite", monotonicity_check},
      {"exit time", exit_check},
      {"integral estimates", estimates_check},
      {"inelasticity observable", inelastic_check}};
  int failures = 0;
  std::vector<bool> selected(criteria.size(), argc == 1);
  for (int a = 1; a < argc; ++a) {
    const int k = std::atoi(argv[a]);
    if (k >= 1 && k <= static_cast<int>(criteria.size())) selected[static_cast<std::size_t>(k - 1)] = true;
  }
  int run = 0;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    if (!selected[i]) continue;
    ++run;
    const auto t0 = std::chrono::steady_clock::now();
    outcome o;
    try {
      o = criteria[i].second();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    if (!o.pass) ++failures;
    std::printf("%s %2zu %-38s %s (%.1f s)\n", o.pass ? "PASS" : "FAIL", i + 1, criteria[i].first.c_str(),
                o.detail.c_str(), secs);
    std::fflush(stdout);
  }
  std::printf("%d of %d criteria passed\n", run - failures, run);
  return failures == 0 ? 0 : 1;
}
