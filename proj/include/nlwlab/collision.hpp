#pragma once

#include <vector>

#include "nlwlab/radial.hpp"

namespace nlwlab::collision {

// Two-soliton NLW run with modulation tracking. Velocities come from the H = 0 shell of the
// modulation ODE; the innermost soliton's amplitude is tuned by bisection so that its unstable
// mode is suppressed for as long as double precision allows.
struct collide_spec {
  int N = 5;
  std::vector<int> signs{1, 1};
  double lambda1 = 1.0;
  double gamma0 = 0.01;
  double h = 1e-3;
  double r_max = 8.0;
  double t_final = 2.0;
  double snapshot_dt = 0.05;
  double R = 1.0;             // exterior radius in units of λ₁(0)
  double gamma_pass = 0.2;
  int shoot_iterations = 48;  // 0 disables shooting
  double shoot_dt = 0.01;     // fate check interval during shooting
};

struct collide_sample {
  double t = 0;
  std::vector<double> scales;
  double gamma = 0;
  double delta = 0;
  int iterations = 0;
  bool fit_converged = false;
  double radiation = 0;   // exterior energy of the remainder (h, g₁) on R + t < r < R_max − t
  double exterior = 0;    // exterior energy of (u, ∂_t u) on the same region
  double energy = 0;
  double drift = 0;       // |E(t) − E(0)|
};

struct collide_result {
  double shoot_amplitude = 0;   // a in u₀ = M + a ι_J W_(λ_J)
  double shoot_survival = 0;    // decision time of the best shot
  bool shoot_bracketed = false;
  std::vector<collide_sample> samples;
  double gamma_max = 0;         // over converged fits
  double t_pass = 0;            // first converged fit with γ >= gamma_pass; NaN if none
  double radiation_after = 0;   // max radiation for t >= t_pass
  double drift_floor = 0;       // max drift over the run
  bool blew_up = false;
  double blowup_time = 0;
  bool inelastic = false;       // radiation_after > 10 drift_floor after γ passed gamma_pass
};

collide_result collide(const collide_spec& spec);

}  // namespace nlwlab::collision
