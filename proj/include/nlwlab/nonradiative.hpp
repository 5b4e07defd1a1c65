#pragma once

#include <vector>

#include "nlwlab/radial.hpp"
#include "nlwlab/soliton.hpp"

namespace nlwlab::nonradiative {

// One pure-power element of P(R): (r^power, 0) or (0, r^power).
struct xi_element {
  int k = 0;  // index in 1..m, ‖Ξ_k‖_{𝓗(R)} = c_k R^{-(k-1/2)}
  bool velocity = false;
  int power = 0;
  double c = 0;

  double value(double r) const;
  double derivative(double r) const;
};

// Elements ordered by k = 1..m, m = (N-1)/2.
std::vector<xi_element> xi_basis(int N);

// Ξ_k sampled on the grid, smoothly switched on over [R_inner/2, R_inner] and
// off over [R_cut, R_cut + width]; a C^∞ transition on both sides.
field_pair sample_xi(const grid_ptr& grid, int k, double R_inner, double R_cut, double width);

// C^∞ step: 0 for x <= 0, 1 for x >= 1.
double smooth_step(double x);

struct p_projection {
  std::vector<double> theta;  // indexed by k - 1
  double remainder_norm = 0;  // ‖π^⊥ p‖_{𝓗(R)}
  double condition = 0;
};

p_projection project_P(const field_pair& p, double R);

struct z_projection {
  std::vector<double> position_coords;  // along ((ΛW)_(λ_j), 0)
  std::vector<double> velocity_coords;  // along (0, (ΛW)_[λ_j])
  field_pair remainder;                 // π_{Z⊥} p
  double condition = 0;
  bool ill_conditioned = false;
};

z_projection project_Z(const field_pair& p, const soliton_config& config);

// Gram matrix of the 2J spanning elements of Z_𝛌 in the discrete 𝓗 product.
std::vector<std::vector<double>> z_gram(const grid_ptr& grid, const soliton_config& config);

struct exterior_fit {
  double ell = 0;
  int k0 = 0;
  bool ambiguous = false;
  std::vector<double> radii;
  std::vector<double> residual;              // ‖p − ℓ Ξ_{k0}‖_{𝓗(R)}
  std::vector<std::vector<double>> theta;    // θ(R) per radius
  double residual_slope = 0;                 // log-log slope over the outer half of R_list
  double predicted_slope = 0;                // min{(k0-1/2)(N+2)/(N-2), k0+1/2}
};

exterior_fit fit_exterior_profile(const field_pair& p, const std::vector<double>& R_list);

struct scaling_bound {
  double lhs = 0;
  double rhs = 0;
  double ratio = 0;
  bool violated = false;
};

scaling_bound ext_scaling_bound(const exterior_fit& fit, int N, double delta, double lambda1, double C = 1.0);

}  // namespace nlwlab::nonradiative
