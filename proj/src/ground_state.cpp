#include "nlwlab/ground_state.hpp"

#include <cmath>
#include <map>
#include <mutex>
#include <tuple>

#include <boost/math/quadrature/gauss.hpp>

#include "nlwlab/errors.hpp"
#include "nlwlab/quadrature.hpp"

namespace nlwlab::ground_state {

namespace {

struct shape {
  double k;  // N(N-2)
  double a;  // N/2 - 1
  explicit shape(int N) : k(N * (N - 2.0)), a(0.5 * N - 1.0) {}
  double s(double r) const { return r * r / k; }
};

// ΛW = G(s) and its s-derivatives
double G(const shape& c, double s) { return c.a * (1.0 - s) * std::pow(1.0 + s, -c.a - 1.0); }
double G1(const shape& c, double s) { return -c.a * std::pow(1.0 + s, -c.a - 2.0) * (c.a + 2.0 - c.a * s); }
double G2(const shape& c, double s) {
  return c.a * std::pow(1.0 + s, -c.a - 3.0) * ((c.a + 2.0) * (c.a + 2.0 - c.a * s) + c.a * (1.0 + s));
}

}  // namespace

double W(int N, double r) {
  const shape c(N);
  return std::pow(1.0 + c.s(r), -c.a);
}

double dW(int N, double r) {
  const shape c(N);
  return -(2.0 * r / c.k) * c.a * std::pow(1.0 + c.s(r), -c.a - 1.0);
}

double LambdaW(int N, double r) {
  const shape c(N);
  return G(c, c.s(r));
}

double dLambdaW(int N, double r) {
  const shape c(N);
  return (2.0 * r / c.k) * G1(c, c.s(r));
}

double lap_LambdaW(int N, double r) {
  const shape c(N);
  const double s = c.s(r);
  return (2.0 / c.k) * (N * G1(c, s) + 2.0 * s * G2(c, s));
}

double Lambda0_LambdaW(int N, double r) {
  const shape c(N);
  const double s = c.s(r);
  return 0.5 * N * G(c, s) + 2.0 * s * G1(c, s);
}

double W_h1(int N, double lambda, double r) { return std::pow(lambda, 1.0 - 0.5 * N) * W(N, r / lambda); }
double dW_h1(int N, double lambda, double r) { return std::pow(lambda, -0.5 * N) * dW(N, r / lambda); }
double LambdaW_h1(int N, double lambda, double r) {
  return std::pow(lambda, 1.0 - 0.5 * N) * LambdaW(N, r / lambda);
}
double dLambdaW_h1(int N, double lambda, double r) {
  return std::pow(lambda, -0.5 * N) * dLambdaW(N, r / lambda);
}
double LambdaW_l2(int N, double lambda, double r) { return std::pow(lambda, -0.5 * N) * LambdaW(N, r / lambda); }

radial_field sample_W(const grid_ptr& grid, double lambda) {
  require_domain(lambda > 0.0, "scale must be positive");
  const int N = grid->dim();
  return sample(grid, [&](double r) { return W_h1(N, lambda, r); });
}

radial_field sample_LambdaW_h1(const grid_ptr& grid, double lambda) {
  require_domain(lambda > 0.0, "scale must be positive");
  const int N = grid->dim();
  return sample(grid, [&](double r) { return LambdaW_h1(N, lambda, r); });
}

radial_field sample_LambdaW_l2(const grid_ptr& grid, double lambda) {
  require_domain(lambda > 0.0, "scale must be positive");
  const int N = grid->dim();
  return sample(grid, [&](double r) { return LambdaW_l2(N, lambda, r); });
}

radial_field apply_Lambda0(const radial_field& f) {
  const auto d = radial_derivative(f);
  radial_field out(f.grid);
  const double half_n = 0.5 * f.grid->dim();
  for (std::size_t i = 0; i < out.size(); ++i) out.values[i] = half_n * f.values[i] + f.grid->r(i) * d[i];
  return out;
}

radial_field linearized_potential(const grid_ptr& grid, double lambda) {
  require_domain(lambda > 0.0, "scale must be positive");
  const int N = grid->dim();
  const shape c(N);
  const double amp = -(N + 2.0) / (N - 2.0) / (lambda * lambda);
  // W^{4/(N-2)} = (1+s)^{-2}
  return sample(grid, [&](double r) {
    const double s = c.s(r / lambda);
    return amp / ((1.0 + s) * (1.0 + s));
  });
}

namespace {

struct integrands {
  int N;
  shape c;
  explicit integrands(int N_) : N(N_), c(N_) {}
  double lambda_w_sq(double r) const { return std::pow(LambdaW(N, r), 2); }
  double grad_w_sq(double r) const { return std::pow(dW(N, r), 2); }
  double grad_lambda_w_sq(double r) const { return std::pow(dLambdaW(N, r), 2); }
  double interaction(double r) const { return std::pow(r, 2.0 - N) * std::pow(1.0 + c.s(r), -0.5 * (N + 2)); }
  double potential(double r) const { return std::pow(1.0 + c.s(r), -static_cast<double>(N)); }
};

constants assemble(int N, double lw, double gw, double glw, double inter, double pot) {
  constants out;
  out.N = N;
  out.norm_LambdaW_L2_sq = lw;
  out.norm_gradW_L2_sq = gw;
  out.norm_gradLambdaW_L2_sq = glw;
  out.interaction_integral = inter;
  out.potential_integral = pot;
  out.kappa0 = std::pow(N, 0.5 * N - 1.0) * std::pow(N - 2.0, 0.5 * N) / 2.0 * inter;
  out.kappa1_prime = std::pow(N * (N - 2.0), 0.5 * N - 1.0) * inter;
  out.kappa1 = out.kappa1_prime * lw;
  out.kappa2 = 1.0 / lw;
  out.energy_W = 0.5 * gw - (N - 2.0) / (2.0 * N) * pot;
  return out;
}

}  // namespace

constants compute_constants(const radial_grid& grid) {
  const int N = grid.dim();
  check_dimension(N, 5);
  static std::mutex mu;
  static std::map<std::tuple<int, double, double>, constants> cache;
  const auto key = std::make_tuple(N, grid.h(), grid.r_max());
  {
    std::lock_guard lock(mu);
    if (auto it = cache.find(key); it != cache.end()) return it->second;
  }

  const integrands f(N);
  const double core = std::sqrt(f.c.k);
  require(grid.r_max() >= 10.0 * core, error_code::refinement,
          "R_max too small for the ground-state constants (need R_max >= 10 sqrt(N(N-2)))");
  require(grid.h() <= 0.1 * core, error_code::refinement, "grid too coarse for the ground-state constants");

  const double R = grid.r_max();
  auto on_grid = [&](auto fn) {
    std::vector<double> v(grid.size());
    for (std::size_t i = 0; i < v.size(); ++i) v[i] = fn(grid.r(i));
    const double tail = mapped_tail(N, fn, R);
    // tail-error estimate: same mapping with a lower-order rule
    auto g = [&](double u) {
      const double r = 1.0 / u;
      return fn(r) * std::pow(r, N - 1) / (u * u);
    };
    const double coarse = sphere_area(N) * boost::math::quadrature::gauss<double, 20>::integrate(g, 0.0, 1.0 / R);
    // the |x|^{2-N} weight is singular at the origin, so the first cells use the closed form
    const double r_core = 16.0 * grid.h();
    const double core_part =
        sphere_area(N) * boost::math::quadrature::gauss<double, 30>::integrate(
                             [&](double r) { return fn(r) * std::pow(r, N - 1); }, 0.0, r_core);
    const double body = core_part + grid.integrate(v, r_core);
    require(std::abs(coarse - tail) <= 1e-8 * std::abs(body + tail), error_code::refinement,
            "tail quadrature not converged");
    return body + tail;
  };

  const constants out = assemble(N, on_grid([&](double r) { return f.lambda_w_sq(r); }),
                                 on_grid([&](double r) { return f.grad_w_sq(r); }),
                                 on_grid([&](double r) { return f.grad_lambda_w_sq(r); }),
                                 on_grid([&](double r) { return f.interaction(r); }),
                                 on_grid([&](double r) { return f.potential(r); }));
  std::lock_guard lock(mu);
  cache.emplace(key, out);
  return out;
}

const constants& reference_constants(int N) {
  check_dimension(N, 5);
  static std::mutex mu;
  static std::map<int, constants> cache;
  std::lock_guard lock(mu);
  if (auto it = cache.find(N); it != cache.end()) return it->second;
  const integrands f(N);
  const double core = std::sqrt(f.c.k);
  auto q = [&](auto fn) { return radial_integral(N, fn, {core}, 1e-13); };
  const constants out = assemble(N, q([&](double r) { return f.lambda_w_sq(r); }),
                                 q([&](double r) { return f.grad_w_sq(r); }),
                                 q([&](double r) { return f.grad_lambda_w_sq(r); }),
                                 q([&](double r) { return f.interaction(r); }),
                                 q([&](double r) { return f.potential(r); }));
  return cache.emplace(N, out).first->second;
}

double elliptic_residual(const grid_ptr& grid) {
  const int N = grid->dim();
  const auto w = sample_W(grid);
  const auto lap = radial_laplacian(w);
  const double p = (N + 2.0) / (N - 2.0);
  double sup = 0.0;
  for (std::size_t i = 0; i + 1 < w.size(); ++i)
    sup = std::max(sup, std::abs(-lap[i] - std::pow(w.values[i], p)));
  return sup;
}

double kernel_residual(const grid_ptr& grid) {
  const auto z = sample_LambdaW_h1(grid);
  const auto lap = radial_laplacian(z);
  const auto pot = linearized_potential(grid, 1.0);
  double sup = 0.0;
  for (std::size_t i = 0; i + 1 < z.size(); ++i)
    sup = std::max(sup, std::abs(-lap[i] + pot.values[i] * z.values[i]));
  return sup;
}

}  // namespace nlwlab::ground_state
