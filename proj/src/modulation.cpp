#include "nlwlab/modulation.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <limits>
#include <mutex>
#include <string>

#include <Eigen/Dense>

#include "nlwlab/errors.hpp"
#include "nlwlab/ground_state.hpp"
#include "nlwlab/quadrature.hpp"

namespace nlwlab::modulation {

namespace gs = ground_state;

radial_field multisoliton(const grid_ptr& grid, const soliton_config& config) {
  config.validate();
  const int N = grid->dim();
  return sample(grid, [&](double r) {
    double s = 0.0;
    for (std::size_t j = 0; j < config.count(); ++j) s += config.signs[j] * gs::W_h1(N, config.scales[j], r);
    return s;
  });
}

double grad_LambdaW_norm_sq(int N) {
  check_dimension(N);
  static std::mutex mu;
  static std::map<int, double> cache;
  std::lock_guard lock(mu);
  if (auto it = cache.find(N); it != cache.end()) return it->second;
  const double v = radial_integral(
      N, [N](double r) { return std::pow(gs::dLambdaW(N, r), 2); }, {std::sqrt(N * (N - 2.0))});
  cache[N] = v;
  return v;
}

namespace {

double grad_W_norm_sq(int N) {
  return radial_integral(N, [N](double r) { return std::pow(gs::dW(N, r), 2); }, {std::sqrt(N * (N - 2.0))});
}

double max_abs(const std::vector<double>& v) {
  double m = 0.0;
  for (double x : v) m = std::max(m, std::abs(x));
  return m;
}

bool admissible(const std::vector<double>& scales) {
  for (std::size_t j = 0; j < scales.size(); ++j) {
    if (!(scales[j] > 0.0) || !std::isfinite(scales[j])) return false;
    if (j > 0 && scales[j] >= scales[j - 1]) return false;
  }
  return true;
}

}  // namespace

std::vector<double> orthogonality_residuals(const radial_field& f, const soliton_config& config) {
  const auto& grid = f.grid;
  const double norm = grad_LambdaW_norm_sq(grid->dim());
  const radial_field diff = f - multisoliton(grid, config);
  std::vector<double> out;
  for (double lam : config.scales) out.push_back(h1_inner(diff, gs::sample_LambdaW_h1(grid, lam)) / norm);
  return out;
}

fit_result fit_scales(const radial_field& f, const soliton_config& initial, const fit_options& opts) {
  initial.validate();
  require(opts.max_iter > 0 && opts.tol > 0.0, error_code::invalid_argument, "invalid fit options");
  check_finite(f, "fit_scales input");
  const auto& grid = f.grid;
  const int N = grid->dim();
  const std::size_t J = initial.count();

  fit_result out;
  out.config = initial;
  const double ref = std::sqrt(J * grad_W_norm_sq(N));
  out.initial_distance = std::sqrt(h1_norm_sq(f - multisoliton(grid, initial))) / ref;
  if (opts.enforce_gate) {
    require(initial.gamma() <= opts.gamma_gate, error_code::validation,
            "initial scales are not separated enough for the fixed-point fit (gamma gate)");
    require(out.initial_distance <= opts.distance_gate, error_code::validation,
            "data too far from the initial multisoliton for the fixed-point fit (distance gate)");
  }

  const std::vector<double> mu = initial.scales;
  std::vector<double> lam = mu;
  double damping = 1.0;
  double prev_step = 0.0;
  double prev_res = std::numeric_limits<double>::infinity();
  for (int it = 0; it <= opts.max_iter; ++it) {
    soliton_config cur{initial.signs, lam};
    const auto res = orthogonality_residuals(f, cur);
    out.residual = max_abs(res);
    out.residual_history.push_back(out.residual);
    out.iterations = it;
    out.config = cur;
    if (!std::isfinite(out.residual)) break;
    if (out.residual <= opts.tol) return out;
    if (it == opts.max_iter) break;
    if (out.residual > prev_res && opts.allow_damping && damping == 1.0) {
      damping = 0.5;
      out.damped = true;
    }
    prev_res = out.residual;

    // Φ_ℓ(λ) = λ_ℓ − μ_ℓ ι_ℓ ⟨f − M, (ΛW)_(λ_ℓ)⟩ / ‖∇ΛW‖²
    std::vector<double> next(J);
    double step = 0.0;
    for (std::size_t l = 0; l < J; ++l) {
      next[l] = lam[l] - damping * mu[l] * initial.signs[l] * res[l];
      step = std::max(step, std::abs(next[l] - lam[l]) / mu[l]);
    }
    if (!admissible(next)) {
      require(opts.allow_damping && damping == 1.0, error_code::unconverged,
              "fixed-point iterate left the admissible scale set");
      damping = 0.5;
      out.damped = true;
      continue;
    }
    if (prev_step > 1e-11) out.contraction_ratio = std::max(out.contraction_ratio, step / prev_step);
    prev_step = step;
    lam = std::move(next);
  }
  throw error(error_code::unconverged,
              "fixed-point fit did not converge in " + std::to_string(opts.max_iter) +
                  " iterations (final residual " + std::to_string(out.residual) + ")");
}

decomposition decompose(const field_pair& p, const soliton_config& initial, const fit_options& opts) {
  const auto& grid = p.grid();
  const int N = grid->dim();
  check_dimension(N, 5);
  check_finite(p.g, "velocity component");
  decomposition d;
  d.fit = fit_scales(p.f, initial, opts);
  d.config = d.fit.config;
  const std::size_t J = d.config.count();
  d.h = p.f - multisoliton(grid, d.config);

  std::vector<radial_field> z;
  for (std::size_t j = 0; j < J; ++j) z.push_back(d.config.signs[j] * gs::sample_LambdaW_l2(grid, d.config.scales[j]));
  Eigen::MatrixXd G(J, J);
  Eigen::VectorXd b(J);
  for (std::size_t i = 0; i < J; ++i) {
    b(i) = l2_inner(p.g, z[i]);
    for (std::size_t j = 0; j <= i; ++j) G(i, j) = G(j, i) = l2_inner(z[i], z[j]);
  }
  Eigen::JacobiSVD<Eigen::MatrixXd> svd(G);
  const auto& sv = svd.singularValues();
  d.gram_condition = sv(0) / sv(sv.size() - 1);
  require(std::isfinite(d.gram_condition) && d.gram_condition < 1e10, error_code::conditioning,
          "velocity Gram matrix is ill-conditioned (scales too close)");
  const Eigen::VectorXd a = G.ldlt().solve(b);
  d.alpha.assign(a.data(), a.data() + J);
  d.g1 = p.g;
  for (std::size_t j = 0; j < J; ++j) d.g1 = d.g1 - d.alpha[j] * z[j];
  for (std::size_t j = 0; j < J; ++j) d.beta.push_back(-l2_inner(z[j], p.g));
  d.delta = std::sqrt(h1_norm_sq(d.h) + l2_norm_sq(p.g));
  d.gamma = d.config.gamma();
  return d;
}

field_pair construct(const soliton_config& config, const std::vector<double>& alpha, const radial_field& h,
                     const radial_field& g1) {
  config.validate();
  require(alpha.size() == config.count(), error_code::invalid_argument, "one alpha per soliton");
  const auto& grid = h.grid;
  require(g1.grid == grid, error_code::invalid_argument, "h and g1 must share a grid");
  radial_field g = g1;
  for (std::size_t j = 0; j < config.count(); ++j)
    g = g + (alpha[j] * config.signs[j]) * gs::sample_LambdaW_l2(grid, config.scales[j]);
  return {multisoliton(grid, config) + h, g};
}

double beta_alpha_ratio(const decomposition& d) {
  const int N = d.h.grid->dim();
  const double L = gs::reference_constants(N).norm_LambdaW_L2_sq;
  const double scale = std::pow(d.gamma, 0.25 * N) + std::pow(d.delta, N / (N - 2.0));
  double m = 0.0;
  for (std::size_t j = 0; j < d.alpha.size(); ++j) m = std::max(m, std::abs(d.beta[j] + d.alpha[j] * L));
  if (scale == 0.0) return m == 0.0 ? 0.0 : std::numeric_limits<double>::infinity();
  return m / scale;
}

interaction_values interaction_integrals(double lambda, double mu, int N) {
  check_dimension(N, 5);
  require_domain(lambda > 0.0 && mu > lambda, "interaction integrals need 0 < lambda < mu");
  const double q = std::sqrt(N * (N - 2.0));
  const std::vector<double> bp{lambda, mu, q * lambda, q * mu};
  const double nh = -0.5 * N;
  const double p = 4.0 / (N - 2.0);
  auto W = [&](double s, double r) { return gs::W_h1(N, s, r); };
  auto LW2 = [&](double s, double r) { return gs::LambdaW_l2(N, s, r); };

  interaction_values v;
  v.est1_1 = radial_integral(N, [&](double r) {
               return std::abs(gs::dLambdaW_h1(N, lambda, r) * gs::dLambdaW_h1(N, mu, r)) +
                      std::abs(gs::dW_h1(N, lambda, r) * gs::dW_h1(N, mu, r));
             }, bp);
  v.est1_2 = radial_integral(N, [&](double r) { return std::abs(LW2(lambda, r) * LW2(mu, r)); }, bp);
  v.est1_2_lambda0 = radial_integral(N, [&](double r) {
                       return std::abs(LW2(lambda, r) * std::pow(mu, nh) * gs::Lambda0_LambdaW(N, r / mu));
                     }, bp);
  const double e = 2.0 * N / (N + 2.0);
  v.est1_3_first = std::pow(
      radial_integral(N, [&](double r) { return std::pow(W(lambda, r) * std::pow(W(mu, r), p), e); }, bp), 1.0 / e);
  v.est1_3_second = std::pow(
      radial_integral(N, [&](double r) { return std::pow(W(mu, r) * std::pow(W(lambda, r), p), e); }, bp), 1.0 / e);
  const double c = N / (N - 2.0);
  v.est1_4 = radial_integral(N, [&](double r) { return std::pow(W(lambda, r) * W(mu, r), c); }, bp);
  v.est1_5_first = radial_integral(N, [&](double r) {
                     return std::abs(LW2(lambda, r) * std::pow(mu, nh) * gs::lap_LambdaW(N, r / mu));
                   }, bp);
  v.est1_5_second = radial_integral(N, [&](double r) {
                      return std::abs(LW2(mu, r) * std::pow(lambda, nh) * gs::lap_LambdaW(N, r / lambda));
                    }, bp);
  return v;
}

double leading_prefactor(int N) {
  check_dimension(N, 5);
  const double I = gs::reference_constants(N).interaction_integral;
  return std::pow(N, 0.5 * N - 1.0) * std::pow(N - 2.0, 0.5 * N + 1.0) / (2.0 * (N + 2.0)) * I;
}

leading_result leading_interaction(double lambda_j, double lambda_k, int N) {
  check_dimension(N, 5);
  require_domain(lambda_j > 0.0 && lambda_k > 0.0 && lambda_j != lambda_k, "need two distinct positive scales");
  const double q = std::sqrt(N * (N - 2.0));
  const double p = 4.0 / (N - 2.0);
  leading_result out;
  out.quadrature = radial_integral(
      N,
      [&](double r) {
        return std::pow(gs::W_h1(N, lambda_j, r), p) * gs::W_h1(N, lambda_k, r) * gs::LambdaW_h1(N, lambda_j, r);
      },
      {lambda_j, lambda_k, q * lambda_j, q * lambda_k});
  const double ratio = std::min(lambda_j, lambda_k) / std::max(lambda_j, lambda_k);
  const double sign = lambda_k < lambda_j ? 1.0 : -1.0;
  out.leading_formula = sign * std::pow(ratio, 0.5 * N - 1.0) * leading_prefactor(N);
  out.relative_error = std::abs(out.quadrature - out.leading_formula) / std::abs(out.leading_formula);
  return out;
}

energy_gap energy_expansion_check(const decomposition& d) {
  const int N = d.h.grid->dim();
  const double k1p = gs::reference_constants(N).kappa1_prime;
  energy_gap out;
  out.lhs = 0.5 * d.delta * d.delta;
  for (std::size_t j = 0; j + 1 < d.config.count(); ++j)
    out.rhs += k1p * d.config.signs[j] * d.config.signs[j + 1] *
               std::pow(d.config.scales[j + 1] / d.config.scales[j], 0.5 * (N - 2));
  out.gap = std::abs(out.lhs - out.rhs);
  out.scale = std::pow(d.gamma, 0.5 * (N - 1));
  out.sign_violation = out.rhs < 0.0 && out.lhs > out.scale;
  return out;
}

}  // namespace nlwlab::modulation
