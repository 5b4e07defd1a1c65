#pragma once

#include <vector>

#include "nlwlab/radial.hpp"
#include "nlwlab/soliton.hpp"

namespace nlwlab::modulation {

// M = Σ ι_j W_(λ_j).
radial_field multisoliton(const grid_ptr& grid, const soliton_config& config);

// ‖∇ΛW‖²_{L²} by adaptive quadrature; valid for every N >= 3.
double grad_LambdaW_norm_sq(int N);

struct fit_options {
  double tol = 1e-10;             // on max_ℓ |⟨f − M, (ΛW)_(λ_ℓ)⟩_{Ḣ¹}| / ‖∇ΛW‖²
  int max_iter = 200;
  double gamma_gate = 0.05;       // γ(initial) must not exceed this
  double distance_gate = 0.25;    // ‖f − M(initial)‖_{Ḣ¹} / (√J ‖∇W‖)
  bool enforce_gate = true;
  bool allow_damping = true;
};

struct fit_result {
  soliton_config config;
  int iterations = 0;
  double residual = 0;
  double initial_distance = 0;  // relative, as gated
  double contraction_ratio = 0; // max ratio of successive step sizes above round-off
  bool damped = false;
  std::vector<double> residual_history;
};

// ⟨f − M(config), (ΛW)_(λ_ℓ)⟩_{Ḣ¹} / ‖∇ΛW‖² for each ℓ.
std::vector<double> orthogonality_residuals(const radial_field& f, const soliton_config& config);

// Fixed-point iteration λ ← Φ(λ) centred at the initial scales μ.
fit_result fit_scales(const radial_field& f, const soliton_config& initial, const fit_options& opts = {});

struct decomposition {
  soliton_config config;
  std::vector<double> alpha;
  std::vector<double> beta;
  radial_field h;
  radial_field g1;
  double delta = 0;
  double gamma = 0;
  double gram_condition = 0;
  fit_result fit;
};

decomposition decompose(const field_pair& p, const soliton_config& initial, const fit_options& opts = {});

// Inverse of decompose: (M + h, Σ α_j ι_j (ΛW)_[λ_j] + g₁).
field_pair construct(const soliton_config& config, const std::vector<double>& alpha, const radial_field& h,
                     const radial_field& g1);

// Ensemble statistic |β_j + α_j‖ΛW‖²| / (γ^{N/4} + δ^{N/(N-2)}), max over j.
double beta_alpha_ratio(const decomposition& d);

struct interaction_values {
  double est1_1 = 0;           // ∫|∇(ΛW)_(λ)·∇(ΛW)_(μ)| + ∫|∇W_(λ)·∇W_(μ)|
  double est1_2 = 0;           // ∫|(ΛW)_[λ](ΛW)_[μ]|
  double est1_2_lambda0 = 0;   // ∫|(ΛW)_[λ](Λ₀ΛW)_[μ]|
  double est1_3_first = 0;     // ‖W_(λ) W_(μ)^{4/(N-2)}‖_{L^{2N/(N+2)}}
  double est1_3_second = 0;    // ‖W_(μ) W_(λ)^{4/(N-2)}‖_{L^{2N/(N+2)}}
  double est1_4 = 0;           // ∫W_(λ)^{N/(N-2)} W_(μ)^{N/(N-2)}
  double est1_5_first = 0;     // ∫|(ΛW)_[λ](ΔΛW)_[μ]|
  double est1_5_second = 0;    // ∫|(ΛW)_[μ](ΔΛW)_[λ]|
};

// Requires 0 < λ < μ and N >= 5.
interaction_values interaction_integrals(double lambda, double mu, int N);

struct leading_result {
  double quadrature = 0;
  double leading_formula = 0;
  double relative_error = 0;
};

// ∫W_(λ_j)^{4/(N-2)} W_(λ_k) (ΛW)_(λ_j) against its leading term. λ_k < λ_j is the inner
// neighbour (positive sign), λ_k > λ_j the outer one (negative sign).
leading_result leading_interaction(double lambda_j, double lambda_k, int N);

// N^{N/2-1}(N-2)^{N/2+1}/(2(N+2)) ∫|x|^{2-N} W^{(N+2)/(N-2)}.
double leading_prefactor(int N);

struct energy_gap {
  double lhs = 0;    // ½δ²
  double rhs = 0;    // κ₁' Σ ι_j ι_{j+1} (λ_{j+1}/λ_j)^{(N-2)/2}
  double gap = 0;    // |lhs − rhs|
  double scale = 0;  // γ^{(N-1)/2}
  bool sign_violation = false;  // rhs < 0 while lhs exceeds the error scale
};

energy_gap energy_expansion_check(const decomposition& d);

}  // namespace nlwlab::modulation
