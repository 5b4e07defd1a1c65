#pragma once

#include "nlwlab/radial.hpp"

namespace nlwlab::ground_state {

// Closed forms in the variable s = r²/(N(N-2)); all radial.
double W(int N, double r);
double dW(int N, double r);          // ∂_r W
double LambdaW(int N, double r);     // x·∇W + (N/2 - 1) W
double dLambdaW(int N, double r);    // ∂_r ΛW
double lap_LambdaW(int N, double r); // Δ ΛW
double Lambda0_LambdaW(int N, double r);

// Rescaled profiles: f_(λ) = λ^{1-N/2} f(·/λ), g_[λ] = λ^{-N/2} g(·/λ).
double W_h1(int N, double lambda, double r);
double dW_h1(int N, double lambda, double r);
double LambdaW_h1(int N, double lambda, double r);
double dLambdaW_h1(int N, double lambda, double r);
double LambdaW_l2(int N, double lambda, double r);

radial_field sample_W(const grid_ptr& grid, double lambda = 1.0);
radial_field sample_LambdaW_h1(const grid_ptr& grid, double lambda = 1.0);
radial_field sample_LambdaW_l2(const grid_ptr& grid, double lambda = 1.0);

// (N/2) f + r f' with centred differences.
radial_field apply_Lambda0(const radial_field& f);

// -(N+2)/(N-2) W_(λ)^{4/(N-2)} on the grid.
radial_field linearized_potential(const grid_ptr& grid, double lambda);

struct constants {
  int N = 0;
  double norm_LambdaW_L2_sq = 0;
  double norm_gradW_L2_sq = 0;
  double norm_gradLambdaW_L2_sq = 0;
  double kappa0 = 0;
  double kappa1 = 0;
  double kappa1_prime = 0;
  double kappa2 = 0;
  double energy_W = 0;
  double interaction_integral = 0;  // ∫|x|^{2-N} W^{(N+2)/(N-2)} dx
  double potential_integral = 0;    // ∫W^{2N/(N-2)} dx, for the Pohozaev check
};

// Grid quadrature of the closed forms plus a mapped-Gauss tail beyond R_max. Cached per grid.
// Requires N >= 5 (ΛW ∉ L² for N = 3).
constants compute_constants(const radial_grid& grid);

// Grid-free adaptive quadrature of the same integrals.
const constants& reference_constants(int N);

// sup over interior nodes of |−ΔW − W^{(N+2)/(N-2)}| and |L_W ΛW| with 3-point differences.
double elliptic_residual(const grid_ptr& grid);
double kernel_residual(const grid_ptr& grid);

}  // namespace nlwlab::ground_state
