#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace nlwlab::estimates {

struct sweep_point {
  double parameter = 0;  // λ/μ
  double lhs = 0;
  double bound_shape = 0;
};

struct estimate_report {
  std::string id;
  int N = 0;
  std::vector<sweep_point> sweep;
  double empirical_constant = 0;  // max lhs / bound_shape
  double fitted_exponent = 0;     // least-squares log-log slope of lhs against the parameter
  double claimed_exponent = 0;
  double truncation = 0;          // estimated relative truncation error (spacetime norms)
  bool passed = false;            // |fitted − claimed| <= tolerance and the constant is finite
};

inline constexpr double exponent_tolerance = 0.15;

std::vector<double> default_ratios();  // {0.04, 0.02, 0.01}

// ∫_{ℝᴺ} min(1,(λ/|x|)^a) min(1,(μ/|x|)^b) dx by quadrature and by the three-region closed form.
double crucial_integral(double a, double b, double lambda, double mu, int N);
double crucial_closed_form(double a, double b, double lambda, double mu, int N);
estimate_report check_crucial(double a, double b, int N, const std::vector<double>& lambdas = default_ratios(),
                              double mu = 1.0);

// est1.1 … est1.5 (the est1.3 and est1.5 entries come in _a/_b pairs), μ = 1.
std::vector<std::string> integral_ids();
double integral_claimed_exponent(const std::string& id, int N);
estimate_report check_integral(const std::string& id, int N, const std::vector<double>& ratios = default_ratios());

// Light-cone exterior L¹_t L²_x norms; ids G31, G31', G32, G32', G31''. With lambda_w the linear
// factor W is replaced by ΛW.
std::vector<std::string> spacetime_ids();
double spacetime_claimed_exponent(const std::string& id, int N);
double spacetime_norm(const std::string& id, double lambda, double mu, int N, bool lambda_w = false,
                      double* truncation = nullptr);
estimate_report check_spacetime(const std::string& id, int N, const std::vector<double>& ratios = default_ratios(),
                                bool lambda_w = false);

struct pointwise_report {
  std::string id;
  int N = 0;
  std::size_t samples = 0;
  std::size_t resolved = 0;          // samples whose rhs clears the round-off floor of the lhs
  double empirical_constant = 0;     // max lhs/rhs over all samples
  double half_constant = 0;          // the same over the first half of the samples
  double stability = 0;              // empirical_constant / half_constant − 1
  std::size_t counterexamples = 0;   // rhs = 0 with lhs ≠ 0
  double homogeneity_defect = 0;     // max relative deviation of both sides from exact homogeneity
  double symmetry_defect = 0;        // BT30 only: lhs(a,b,c) vs lhs(a,c,b)
  bool passed = false;
};

std::vector<std::string> pointwise_ids();

// Both sides of a pointwise claim at one argument vector ((y₁,y₂,y₃,h) or (a,b,c)).
struct pointwise_value {
  double lhs = 0;
  double rhs = 0;
  double floor = 0;  // round-off scale of the lhs evaluation
};

pointwise_value evaluate_pointwise(const std::string& id, int N, const std::vector<double>& args);
double pointwise_degree(const std::string& id, int N);

pointwise_report check_pointwise(const std::string& id, int N, std::size_t sample_count, std::uint64_t seed = 1);

// Least-squares slope of log y against log x.
double loglog_slope(const std::vector<double>& x, const std::vector<double>& y);

}  // namespace nlwlab::estimates
