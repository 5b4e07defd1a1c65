#include "nlwlab/collision.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "nlwlab/errors.hpp"
#include "nlwlab/ground_state.hpp"
#include "nlwlab/modulation.hpp"
#include "nlwlab/ode.hpp"
#include "nlwlab/wave.hpp"

namespace nlwlab::collision {

namespace gs = ground_state;

namespace {

struct setup {
  grid_ptr grid;
  soliton_config config;
  std::vector<double> alpha;
  ode::trajectory reference;  // ODE prediction for the scales
  double p = 0;               // (N-2)/2
};

double reference_inner_scale(const setup& s, double t) {
  const auto& st = s.reference.states;
  auto it = std::lower_bound(st.begin(), st.end(), t, [](const ode::ode_state& a, double x) { return a.t < x; });
  if (it == st.end()) return st.back().lambda.back();
  if (it == st.begin()) return it->lambda.back();
  const auto& b = *it;
  const auto& a = *(it - 1);
  const double w = (t - a.t) / (b.t - a.t);
  return (1 - w) * a.lambda.back() + w * b.lambda.back();
}

field_pair initial_data(const setup& s, double amplitude) {
  const radial_field zero(s.grid);
  field_pair p = modulation::construct(s.config, s.alpha, zero, zero);
  p.f = p.f + (amplitude * s.config.signs.back()) * gs::sample_W(s.grid, s.config.scales.back());
  return p;
}

// +1: the inner soliton concentrates (or the run blows up); −1: it spreads out; 0: undecided.
int fate(const setup& s, double amplitude, double t_final, double check_dt, double& t_decided) {
  field_pair cur = initial_data(s, amplitude);
  wave::evolution_spec sp;
  sp.equation = wave::equation_kind::nonlinear;
  sp.series_every = 0;
  const int iota = s.config.signs.back();
  double outer_core = 0;  // the other solitons' contribution at the origin
  for (std::size_t j = 0; j + 1 < s.config.count(); ++j)
    outer_core += s.config.signs[j] * std::pow(s.config.scales[j], -s.p);
  double t = 0;
  while (t < t_final - 1e-12) {
    sp.t_final = std::min(check_dt, t_final - t);
    const auto r = wave::evolve(cur, sp);
    if (r.blew_up) {
      t_decided = t + r.blowup_time;
      return 1;
    }
    t += sp.t_final;
    cur = r.final_state;
    const double q = iota * (cur.f.values[0] - outer_core) * std::pow(reference_inner_scale(s, t), s.p);
    if (q > 1.5) {
      t_decided = t;
      return 1;
    }
    if (q < 0.5) {
      t_decided = t;
      return -1;
    }
  }
  t_decided = t_final;
  return 0;
}

}  // namespace

collide_result collide(const collide_spec& spec) {
  check_dimension(spec.N, 5);
  require(spec.signs.size() == 2, error_code::invalid_argument, "two-soliton run needs two signs");
  require(spec.gamma0 > 0 && spec.gamma0 < 0.5, error_code::domain, "gamma0 must lie in (0, 0.5)");
  require(spec.snapshot_dt > 0 && spec.t_final > 0, error_code::domain, "times must be positive");

  setup s;
  s.grid = make_grid(spec.N, spec.h, spec.r_max);
  s.config = {spec.signs, {spec.lambda1, spec.gamma0 * spec.lambda1}};
  s.config.validate();
  s.p = 0.5 * (spec.N - 2);
  const auto P = ode::ode_params::for_dimension(spec.N, spec.signs);
  const auto seed = ode::seed_zero_energy(P, s.config.scales);
  for (double b : seed.beta) s.alpha.push_back(-P.kappa2 * b);  // λ' = κ₂β = −α
  {
    ode::events ev;
    ev.gamma_max = 0.9;
    s.reference = ode::integrate(P, seed, ode::default_dt(P, seed), spec.t_final, ev, 1);
  }

  collide_result out;
  if (spec.shoot_iterations > 0) {
    double lo = -0.05, hi = 0.01, t_lo = 0, t_hi = 0;
    out.shoot_bracketed = fate(s, lo, spec.t_final, spec.shoot_dt, t_lo) < 0 &&
                          fate(s, hi, spec.t_final, spec.shoot_dt, t_hi) > 0;
    if (out.shoot_bracketed) {
      for (int it = 0; it < spec.shoot_iterations && hi - lo > 1e-17; ++it) {
        const double mid = 0.5 * (lo + hi);
        double td = 0;
        const int f = fate(s, mid, spec.t_final, spec.shoot_dt, td);
        if (f == 0) {
          lo = hi = mid;
          t_lo = t_hi = td;
          break;
        }
        (f > 0 ? hi : lo) = mid;
        (f > 0 ? t_hi : t_lo) = td;
      }
      out.shoot_amplitude = t_lo >= t_hi ? lo : hi;
      out.shoot_survival = std::max(t_lo, t_hi);
    }
  }

  field_pair cur = initial_data(s, out.shoot_amplitude);
  const double e0 = nlw_energy(cur);
  const double R = spec.R * spec.lambda1;
  wave::evolution_spec sp;
  sp.equation = wave::equation_kind::nonlinear;
  sp.series_every = 0;
  modulation::fit_options fo;
  fo.enforce_gate = false;
  fo.max_iter = 1000;
  soliton_config tracked = s.config;
  out.t_pass = std::numeric_limits<double>::quiet_NaN();

  double t = 0;
  while (t < spec.t_final - 1e-12) {
    sp.t_final = std::min(spec.snapshot_dt, spec.t_final - t);
    const auto r = wave::evolve(cur, sp);
    if (r.blew_up) {
      out.blew_up = true;
      out.blowup_time = t + r.blowup_time;
      break;
    }
    t += sp.t_final;
    cur = r.final_state;
    if (R + t >= spec.r_max - t) break;  // no causally clean exterior left

    collide_sample smp;
    smp.t = t;
    smp.energy = nlw_energy(cur);
    smp.drift = std::abs(smp.energy - e0);
    smp.exterior = wave::exterior_energy(cur, R, t, spec.r_max - t);
    try {
      const auto d = modulation::decompose(cur, tracked, fo);
      tracked = d.config;
      smp.fit_converged = true;
      smp.iterations = d.fit.iterations;
      smp.delta = d.delta;
      smp.radiation = wave::exterior_energy(field_pair(d.h, d.g1), R, t, spec.r_max - t);
    } catch (const error&) {
      // keep the last tracked scales; the sample is flagged as unconverged
      const radial_field M = modulation::multisoliton(s.grid, tracked);
      smp.radiation = wave::exterior_energy(field_pair(cur.f - M, cur.g), R, t, spec.r_max - t);
      smp.delta = std::numeric_limits<double>::quiet_NaN();
    }
    smp.scales = tracked.scales;
    smp.gamma = tracked.gamma();
    out.samples.push_back(smp);

    out.drift_floor = std::max(out.drift_floor, smp.drift);
    if (smp.fit_converged) {
      out.gamma_max = std::max(out.gamma_max, smp.gamma);
      if (std::isnan(out.t_pass) && smp.gamma >= spec.gamma_pass) out.t_pass = t;
    }
    if (!std::isnan(out.t_pass)) out.radiation_after = std::max(out.radiation_after, smp.radiation);
  }
  out.inelastic = !std::isnan(out.t_pass) && out.radiation_after > 10.0 * out.drift_floor;
  return out;
}

}  // namespace nlwlab::collision
