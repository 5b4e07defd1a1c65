#pragma once

#include <optional>
#include <string>
#include <vector>

namespace nlwlab::ode {

struct ode_params {
  int N = 5;
  std::vector<int> signs;
  double kappa0 = 0;
  double kappa1 = 0;
  double kappa2 = 0;

  // Constants from the reference ground-state quadrature.
  static ode_params for_dimension(int N, std::vector<int> signs);
  std::size_t count() const { return signs.size(); }
};

struct ode_state {
  double t = 0;
  std::vector<double> lambda;
  std::vector<double> beta;
};

// θ₁ = 1, θ_j = 2θ_{j-1} if ι_jι_{j-1} = 1, else θ_{j-1}/2.
std::vector<double> theta_weights(const std::vector<int>& signs);

struct vector_field {
  std::vector<double> dlambda;
  std::vector<double> dbeta;
};

// λ'_j = κ₂β_j,  λ_jβ'_j = −κ₀(ι_jι_{j+1}(λ_{j+1}/λ_j)^p − ι_jι_{j-1}(λ_j/λ_{j-1})^p), p = (N-2)/2.
vector_field rhs(const ode_params& P, const ode_state& s);

// H = ½Σβ² − κ₁Σ ι_jι_{j+1}(λ_{j+1}/λ_j)^p.
double first_integral(const ode_params& P, const ode_state& s);

double gamma_of(const std::vector<double>& lambda);

struct diagnostics {
  double gamma = 0;
  double A = 0;  // Σθ_jλ_jβ_j
  double B = 0;  // Σθ_jλ_jβ'_j
  double V = 0;  // Σθ_jλ_j²
  double H = 0;
};

diagnostics diagnose(const ode_params& P, const ode_state& s);

// Rigidity hypotheses checked along a trajectory: γ ≤ ε and L ≤ Cγ^p (λ₁/λ₁(0))^a.
struct hypotheses {
  double epsilon = 0.1;
  double L = 0;
  double C = 1;
  double a = 1;
};

struct events {
  double gamma_max = 0.5;
  double lambda_min = 0;
  std::optional<hypotheses> hyp;
};

enum class stop_reason { horizon, gamma_max, ordering, lambda_min, hypothesis_gamma, hypothesis_lower_bound };

std::string to_string(stop_reason r);

struct trajectory {
  std::vector<ode_state> states;
  std::vector<diagnostics> diag;
  stop_reason reason = stop_reason::horizon;
  double t_stop = 0;
  double dt = 0;
};

// 10⁻³ of the fastest relative rate of the scales at the initial state.
double default_dt(const ode_params& P, const ode_state& s);

// Fixed-step RK4; events are located by bisection of the last step.
trajectory integrate(const ode_params& P, const ode_state& init, double dt, double t_final, const events& ev = {},
                     std::size_t record_every = 1);

// β on the H = 0 shell along `direction` (default: the innermost scale).
ode_state seed_zero_energy(const ode_params& P, std::vector<double> lambda, std::vector<double> direction = {});

struct monotonicity_step {
  double t = 0;
  double b_margin = 0;          // B − κ₀γ^p/2^{J+1}
  double a_prime_defect = 0;    // |A' − κ₂Σθβ² − B| / (|A'| + tiny)
  double log_derivative = 0;    // (2⁻A'/A − V'/V) normalised by |2⁻A'/A| + |V'/V|; only where A > 0
  bool a_positive = false;
};

struct monotonicity_report {
  double C = 0;
  double two_minus = 0;
  double C_required = 0;  // smallest C for which A' ≥ (κ₂⁻¹+C⁻¹)Σθλ'² and A' ≥ (κ₂+C⁻¹)Σθβ² hold
  double min_b_margin = 0;
  double max_a_prime_defect = 0;
  double min_log_derivative = 0;
  std::vector<double> violations;  // times where the A^{2⁻}/V monotonicity fails beyond −10⁻⁸
  std::vector<monotonicity_step> steps;
};

double two_minus(double kappa2, double C);

monotonicity_report monotonicity(const ode_params& P, const trajectory& tr, double C);

// T* with unit constants: m = L^{a+1}, M = L^{−2(2+2⁻a)/(2−2⁻)}.
double t_star(double L, double a, double two_minus);

struct exit_spec {
  int N = 5;
  std::vector<int> signs{1, 1};
  hypotheses hyp;
  std::vector<double> gamma0;  // initial ratios λ_{j+1}/λ_j (equal for all gaps)
  double lambda1 = 1;
  double horizon = 1e4;        // in units of λ₁(0)
  double C_monotonicity = 1e3;
};

struct exit_run {
  double gamma0 = 0;
  double lambda1 = 0;
  double t_exit = 0;
  double t_exit_normalized = 0;  // t_exit / λ₁(0)
  stop_reason reason = stop_reason::horizon;
  bool exited = false;
};

struct exit_report {
  std::vector<exit_run> runs;
  double t_star = 0;
  double max_normalized = 0;
  bool all_exited = false;
};

exit_report exit_time_experiment(const exit_spec& spec);

}  // namespace nlwlab::ode
