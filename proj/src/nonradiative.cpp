#include "nlwlab/nonradiative.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include <Eigen/Dense>

#include "nlwlab/errors.hpp"
#include "nlwlab/ground_state.hpp"
#include "nlwlab/quadrature.hpp"

namespace nlwlab::nonradiative {

double xi_element::value(double r) const { return std::pow(r, power); }
double xi_element::derivative(double r) const { return power * std::pow(r, power - 1); }

std::vector<xi_element> xi_basis(int N) {
  check_dimension(N);
  const int m = (N - 1) / 2;
  std::vector<xi_element> out;
  for (int k1 = 1; k1 <= (N + 2) / 4; ++k1) out.push_back({(N + 3) / 2 - 2 * k1, false, 2 * k1 - N, 0.0});
  for (int k2 = 1; k2 <= N / 4; ++k2) out.push_back({(N + 1) / 2 - 2 * k2, true, 2 * k2 - N, 0.0});
  std::sort(out.begin(), out.end(), [](const auto& a, const auto& b) { return a.k < b.k; });
  require(static_cast<int>(out.size()) == m, error_code::invalid_argument, "P(R) basis has the wrong size");
  for (auto& e : out) {
    // ‖Ξ_k‖²_{𝓗(1)} by quadrature; the R-dependence is an exact power law
    const double sq = e.velocity
                          ? sphere_area(N) * tail_integral([&](double r) { return std::pow(r, 2 * e.power + N - 1); }, 1.0)
                          : sphere_area(N) * tail_integral(
                                                 [&](double r) {
                                                   const double d = e.derivative(r);
                                                   return d * d * std::pow(r, N - 1);
                                                 },
                                                 1.0);
    e.c = std::sqrt(sq);
  }
  return out;
}

double smooth_step(double x) {
  if (x <= 0.0) return 0.0;
  if (x >= 1.0) return 1.0;
  const double a = std::exp(-1.0 / x);
  const double b = std::exp(-1.0 / (1.0 - x));
  return a / (a + b);
}

field_pair sample_xi(const grid_ptr& grid, int k, double R_inner, double R_cut, double width) {
  const auto basis = xi_basis(grid->dim());
  require_domain(k >= 1 && k <= static_cast<int>(basis.size()), "Ξ index out of range");
  require_domain(R_inner > 0.0 && R_cut > R_inner && width > 0.0, "invalid Ξ truncation radii");
  const auto& e = basis[static_cast<std::size_t>(k - 1)];
  auto profile = [&](double r) {
    const double on = smooth_step((r - 0.5 * R_inner) / (0.5 * R_inner));
    const double off = 1.0 - smooth_step((r - R_cut) / width);
    return on * off * e.value(r);
  };
  field_pair out(grid);
  (e.velocity ? out.g : out.f) = sample(grid, profile);
  return out;
}

namespace {

double condition_number(const Eigen::MatrixXd& G) {
  Eigen::JacobiSVD<Eigen::MatrixXd> svd(G);
  const auto& s = svd.singularValues();
  if (s.size() == 0 || s(s.size() - 1) <= 0.0) return std::numeric_limits<double>::infinity();
  return s(0) / s(s.size() - 1);
}

// Symmetric Jacobi-scaled solve; the elements span many orders of magnitude in norm.
Eigen::VectorXd scaled_solve(const Eigen::MatrixXd& G, const Eigen::VectorXd& b, double& condition) {
  const Eigen::VectorXd d = G.diagonal().cwiseSqrt().cwiseInverse();
  const Eigen::MatrixXd S = d.asDiagonal() * G * d.asDiagonal();
  condition = condition_number(S);
  const Eigen::VectorXd y = S.ldlt().solve(d.asDiagonal() * b);
  return d.asDiagonal() * y;
}

}  // namespace

p_projection project_P(const field_pair& p, double R) {
  const auto& grid = p.grid();
  require_range(R > 0.0 && R < grid->r_max(), "projection radius outside the grid");
  const auto basis = xi_basis(grid->dim());
  const std::size_t m = basis.size();
  std::vector<field_pair> elems;
  for (const auto& e : basis) {
    field_pair x(grid);
    (e.velocity ? x.g : x.f) = sample(grid, [&](double r) { return e.value(r); });
    elems.push_back(std::move(x));
  }
  Eigen::MatrixXd G(m, m);
  Eigen::VectorXd b(m);
  for (std::size_t i = 0; i < m; ++i) {
    b(i) = h_inner(p, elems[i], R);
    for (std::size_t j = 0; j <= i; ++j) G(i, j) = G(j, i) = h_inner(elems[i], elems[j], R);
  }
  p_projection out;
  const Eigen::VectorXd th = scaled_solve(G, b, out.condition);
  require(out.condition < 1e12, error_code::conditioning, "P(R) Gram matrix is ill-conditioned");
  out.theta.assign(th.data(), th.data() + m);
  field_pair rem = p;
  for (std::size_t i = 0; i < m; ++i) rem = rem - out.theta[i] * elems[i];
  out.remainder_norm = std::sqrt(h_norm_sq(rem, R));
  return out;
}

namespace {

std::vector<field_pair> z_elements(const grid_ptr& grid, const soliton_config& config) {
  std::vector<field_pair> out;
  for (double lam : config.scales) {
    field_pair a(grid);
    a.f = ground_state::sample_LambdaW_h1(grid, lam);
    out.push_back(std::move(a));
  }
  for (double lam : config.scales) {
    field_pair b(grid);
    b.g = ground_state::sample_LambdaW_l2(grid, lam);
    out.push_back(std::move(b));
  }
  return out;
}

}  // namespace

std::vector<std::vector<double>> z_gram(const grid_ptr& grid, const soliton_config& config) {
  config.validate();
  const auto el = z_elements(grid, config);
  std::vector<std::vector<double>> G(el.size(), std::vector<double>(el.size()));
  for (std::size_t i = 0; i < el.size(); ++i)
    for (std::size_t j = 0; j <= i; ++j) G[i][j] = G[j][i] = h_inner(el[i], el[j]);
  return G;
}

z_projection project_Z(const field_pair& p, const soliton_config& config) {
  config.validate();
  require_domain(config.gamma() < 1.0, "project_Z needs gamma < 1");
  const auto el = z_elements(p.grid(), config);
  const std::size_t J = config.count();
  const std::size_t n = el.size();
  Eigen::MatrixXd G(n, n);
  Eigen::VectorXd b(n);
  for (std::size_t i = 0; i < n; ++i) {
    b(i) = h_inner(p, el[i]);
    for (std::size_t j = 0; j <= i; ++j) G(i, j) = G(j, i) = h_inner(el[i], el[j]);
  }
  z_projection out;
  const Eigen::VectorXd c = scaled_solve(G, b, out.condition);
  out.ill_conditioned = out.condition > 1e8;
  out.position_coords.assign(c.data(), c.data() + J);
  out.velocity_coords.assign(c.data() + J, c.data() + n);
  out.remainder = p;
  for (std::size_t i = 0; i < n; ++i) out.remainder = out.remainder - c(i) * el[i];
  return out;
}

exterior_fit fit_exterior_profile(const field_pair& p, const std::vector<double>& R_list) {
  require(R_list.size() >= 2, error_code::validation, "exterior fit needs at least two radii");
  require(std::is_sorted(R_list.begin(), R_list.end()), error_code::validation, "radii must increase");
  const int N = p.grid()->dim();
  const auto basis = xi_basis(N);
  const int m = static_cast<int>(basis.size());
  exterior_fit out;
  out.radii = R_list;
  for (double R : R_list) out.theta.push_back(project_P(p, R).theta);

  // dominant coordinate: largest 𝓗(R)-norm contribution at the outermost radius
  const double R_last = R_list.back();
  const auto& th = out.theta.back();
  double best = 0.0;
  int k0 = m;
  double total = 0.0;
  for (int k = 1; k <= m; ++k) {
    const auto& e = basis[static_cast<std::size_t>(k - 1)];
    const double contribution = std::abs(th[static_cast<std::size_t>(k - 1)]) * e.c * std::pow(R_last, -(k - 0.5));
    total += contribution;
    if (contribution > best) {
      best = contribution;
      k0 = k;
    }
  }
  const double pnorm = std::sqrt(h_norm_sq(p, R_last));
  if (total <= 1e-12 * std::max(pnorm, 1e-300) || pnorm == 0.0) {
    out.k0 = m;
    out.ell = 0.0;
  } else {
    out.k0 = k0;
    out.ell = th[static_cast<std::size_t>(k0 - 1)];
    // plateau: the coordinate must settle over the outer half of the radii
    const std::size_t half = R_list.size() / 2;
    for (std::size_t i = half; i < R_list.size(); ++i) {
      const double v = out.theta[i][static_cast<std::size_t>(k0 - 1)];
      if (std::abs(v - out.ell) > 0.05 * std::abs(out.ell)) out.ambiguous = true;
    }
  }

  const auto& e0 = basis[static_cast<std::size_t>(out.k0 - 1)];
  for (double R : R_list) {
    field_pair x(p.grid());
    (e0.velocity ? x.g : x.f) = sample(p.grid(), [&](double r) { return e0.value(r); });
    out.residual.push_back(std::sqrt(h_norm_sq(p - out.ell * x, R)));
  }
  const std::size_t a = R_list.size() / 2 - (R_list.size() % 2 == 0 ? 1 : 0);
  const std::size_t b = R_list.size() - 1;
  if (a < b && out.residual[a] > 0.0 && out.residual[b] > 0.0)
    out.residual_slope = -std::log(out.residual[b] / out.residual[a]) / std::log(R_list[b] / R_list[a]);
  out.predicted_slope = std::min((out.k0 - 0.5) * (N + 2.0) / (N - 2.0), out.k0 + 0.5);
  return out;
}

scaling_bound ext_scaling_bound(const exterior_fit& fit, int N, double delta, double lambda1, double C) {
  require_domain(delta >= 0.0 && lambda1 > 0.0, "need delta >= 0 and lambda1 > 0");
  scaling_bound out;
  out.lhs = std::abs(fit.ell);
  out.rhs = C * std::pow(delta, 2.0 / N) * std::pow(lambda1, fit.k0 - 0.5);
  if (out.rhs > 0.0) {
    out.ratio = out.lhs / out.rhs;
  } else {
    out.ratio = out.lhs > 0.0 ? std::numeric_limits<double>::infinity() : 0.0;
  }
  out.violated = out.ratio > 1.0;
  return out;
}

}  // namespace nlwlab::nonradiative
