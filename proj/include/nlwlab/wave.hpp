#pragma once

#include <optional>
#include <vector>

#include "nlwlab/radial.hpp"
#include "nlwlab/soliton.hpp"

namespace nlwlab::wave {

enum class equation_kind { free, linearized, nonlinear };

struct evolution_spec {
  equation_kind equation = equation_kind::free;
  soliton_config solitons;  // potential scales for the linearized equation
  double dt = 0.0;          // 0 picks 0.9 of the CFL limit
  double t_final = 0.0;
  std::optional<double> record_channel_at;
  // Apply the potential/nonlinearity only on r > R + t. The solution in that cone is unchanged
  // (finite speed of propagation) and growing modes supported near the origin are switched off.
  std::optional<double> cone_truncation;
  // Compactly supported data: the run must stay causally clear of R_max. Without it the
  // exterior functionals stop at R_max - t, the region the outer boundary cannot reach.
  std::optional<double> data_support;
  std::size_t snapshot_every = 0;  // steps between stored snapshots, 0 = none
  std::size_t series_every = 1;    // steps between series samples
};

struct series_point {
  double t = 0;
  double energy = 0;
  double exterior = 0;  // exterior energy at record_channel_at, NaN if not requested
  double sup_norm = 0;
};

struct snapshot {
  double t = 0;
  field_pair state;
};

struct evolution_result {
  std::vector<snapshot> snapshots;
  std::vector<series_point> series;
  field_pair final_state;
  double t_reached = 0;
  double dt = 0;
  bool blew_up = false;
  double blowup_time = 0;
  double max_energy_drift = 0;  // max_t |E(t) - E(0)|
};

// Largest dt/h for which the leapfrog step is stable (Gershgorin bound on the spatial operator).
double cfl_limit(const radial_grid& grid);

evolution_result evolve(const field_pair& p, const evolution_spec& spec);

// ∫_{R+|t| < r < outer} (|∂_r u|² + |∂_t u|²) with the ℝᴺ measure.
double exterior_energy(const field_pair& p, double R, double t, double outer = to_outer_edge);

// Least-squares fit E(t) ≈ E∞ + Σ_k c_k t^{-k}, k = 1..order, over the last half of the series.
double extrapolate_limit(const std::vector<series_point>& series, int order = 3);

struct channel_report {
  double exterior_energy_fwd = 0;  // extrapolated limits
  double exterior_energy_bwd = 0;
  double channel_sum = 0;
  double raw_fwd = 0;  // values at t_final
  double raw_bwd = 0;
  bool plateau_fwd = false;
  bool plateau_bwd = false;
  bool converged = false;
  std::vector<series_point> series_fwd;
  std::vector<series_point> series_bwd;
};

// Forward and backward (velocity negation) evolutions; free or linearized equation only.
channel_report channel_sum(const field_pair& p, double R, const evolution_spec& spec);

double theta_exponent(int N);

struct lower_bound_report {
  double lhs = 0;  // ‖π_{Z⊥} p‖²
  double rhs = 0;  // channel_sum + γ^{2θ}‖π_Z p‖²
  double ratio = 0;
  double channel = 0;
  double z_part = 0;
  bool converged = false;
};

lower_bound_report channel_lower_bound_check(const field_pair& p, const soliton_config& config,
                                             const evolution_spec& spec);

}  // namespace nlwlab::wave
