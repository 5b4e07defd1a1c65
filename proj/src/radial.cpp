#include "nlwlab/radial.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

#include <boost/math/quadrature/gauss.hpp>

#include "nlwlab/errors.hpp"

namespace nlwlab {

namespace {

constexpr int max_dimension = 25;  // Gauss rule below is exact up to degree 29

double ipow(double x, int k) {
  double out = 1.0;
  for (int i = 0; i < k; ++i) out *= x;
  return out;
}

void check_same_grid(const radial_field& a, const radial_field& b) {
  require(a.grid && b.grid && (a.grid == b.grid || (a.grid->size() == b.grid->size() &&
                                                    a.grid->h() == b.grid->h() &&
                                                    a.grid->dim() == b.grid->dim())),
          error_code::invalid_argument, "fields live on different grids");
}

}  // namespace

double sphere_area(int N) {
  return 2.0 * std::pow(std::numbers::pi, 0.5 * N) / std::tgamma(0.5 * N);
}

void check_dimension(int N, int min_N) {
  require_domain(N >= min_N && N % 2 == 1 && N <= max_dimension,
                 "dimension N=" + std::to_string(N) + " must be odd and >= " + std::to_string(min_N));
}

radial_grid::radial_grid(int N, double h, double r_max) : N_(N), h_(h) {
  check_dimension(N);
  require_domain(h > 0.0 && std::isfinite(h), "grid spacing must be positive");
  require_domain(r_max > 4.0 * h && std::isfinite(r_max), "R_max must exceed four cells");
  const auto n = static_cast<std::size_t>(std::llround(r_max / h));
  r_max_ = static_cast<double>(n) * h;
  omega_ = sphere_area(N);
  r_.resize(n);
  for (std::size_t i = 0; i < n; ++i) r_[i] = (static_cast<double>(i) + 0.5) * h;

  cell_w_.resize(n);
  w_.assign(n, 0.0);
  for (std::size_t i = 0; i < n; ++i) {
    const double a = static_cast<double>(i) * h;
    cell_w_[i] = partial_weights(i, a, a + h);
    const std::size_t k = stencil_centre(i);
    // k == 0: the left stencil point is the even ghost of node 0
    const std::size_t left = k == 0 ? 0 : k - 1;
    w_[left] += cell_w_[i][0];
    w_[k] += cell_w_[i][1];
    w_[k + 1] += cell_w_[i][2];
  }
}

std::size_t radial_grid::stencil_centre(std::size_t cell) const {
  return std::min(cell, r_.size() - 2);
}

std::array<double, 3> radial_grid::partial_weights(std::size_t cell, double a, double b) const {
  const double c = r_[stencil_centre(cell)];
  const double h = h_;
  const int p = N_ - 1;
  auto moment = [&](auto lagrange) {
    return boost::math::quadrature::gauss<double, 15>::integrate(
        [&](double r) {
          const double s = (r - c) / h;
          return lagrange(s) * ipow(r, p);
        },
        a, b);
  };
  const double wl = moment([](double s) { return 0.5 * s * (s - 1.0); });
  const double wc = moment([](double s) { return 1.0 - s * s; });
  const double wr = moment([](double s) { return 0.5 * s * (s + 1.0); });
  return {omega_ * wl, omega_ * wc, omega_ * wr};
}

double radial_grid::cell_value(const std::vector<double>& f, std::size_t cell,
                               const std::array<double, 3>& wts) const {
  const std::size_t k = stencil_centre(cell);
  const double fl = k == 0 ? f[0] : f[k - 1];
  return wts[0] * fl + wts[1] * f[k] + wts[2] * f[k + 1];
}

double radial_grid::integrate(const std::vector<double>& f, double lower, double upper) const {
  require(f.size() == r_.size(), error_code::invalid_argument, "sample count does not match grid");
  if (std::isinf(upper)) upper = r_max_;
  require_range(lower >= 0.0 && upper <= r_max_ * (1.0 + 1e-12) && lower <= upper,
                "integration bounds outside grid");
  upper = std::min(upper, r_max_);
  if (lower == 0.0 && upper == r_max_) {
    double s = 0.0;
    for (std::size_t i = 0; i < f.size(); ++i) s += w_[i] * f[i];
    return s;
  }
  if (upper <= lower) return 0.0;
  const auto first = static_cast<std::size_t>(std::floor(lower / h_));
  const auto last = std::min(r_.size() - 1, static_cast<std::size_t>(std::floor(upper / h_)));
  double s = 0.0;
  for (std::size_t i = first; i <= last; ++i) {
    const double a = static_cast<double>(i) * h_;
    const double b = a + h_;
    const double lo = std::max(a, lower);
    const double hi = std::min(b, upper);
    if (hi <= lo) continue;
    if (lo == a && hi == b) {
      s += cell_value(f, i, cell_w_[i]);
    } else {
      s += cell_value(f, i, partial_weights(i, lo, hi));
    }
  }
  return s;
}

grid_ptr make_grid(int N, double h, double r_max) { return std::make_shared<const radial_grid>(N, h, r_max); }

radial_field::radial_field(grid_ptr g) : grid(std::move(g)) { values.assign(grid->size(), 0.0); }

radial_field::radial_field(grid_ptr g, std::vector<double> v) : grid(std::move(g)), values(std::move(v)) {
  require(values.size() == grid->size(), error_code::invalid_argument, "sample count does not match grid");
}

field_pair::field_pair(grid_ptr grid) : f(grid), g(grid) {}

field_pair::field_pair(radial_field f_, radial_field g_) : f(std::move(f_)), g(std::move(g_)) {
  check_same_grid(f, g);
}

radial_field sample(const grid_ptr& grid, const std::function<double(double)>& fn) {
  radial_field out(grid);
  for (std::size_t i = 0; i < grid->size(); ++i) out.values[i] = fn(grid->r(i));
  return out;
}

radial_field operator+(const radial_field& a, const radial_field& b) {
  check_same_grid(a, b);
  radial_field out = a;
  for (std::size_t i = 0; i < out.size(); ++i) out.values[i] += b.values[i];
  return out;
}

radial_field operator-(const radial_field& a, const radial_field& b) {
  check_same_grid(a, b);
  radial_field out = a;
  for (std::size_t i = 0; i < out.size(); ++i) out.values[i] -= b.values[i];
  return out;
}

radial_field operator*(double c, const radial_field& a) {
  radial_field out = a;
  for (auto& v : out.values) v *= c;
  return out;
}

field_pair operator+(const field_pair& a, const field_pair& b) { return {a.f + b.f, a.g + b.g}; }
field_pair operator-(const field_pair& a, const field_pair& b) { return {a.f - b.f, a.g - b.g}; }
field_pair operator*(double c, const field_pair& a) { return {c * a.f, c * a.g}; }

void check_finite(const radial_field& f, const char* what) {
  for (double v : f.values)
    require(std::isfinite(v), error_code::numerical, std::string(what) + " contains non-finite samples");
}

double integrate_radial(const radial_field& field, double lower, double upper) {
  require(static_cast<bool>(field.grid), error_code::invalid_argument, "field has no grid");
  return field.grid->integrate(field.values, lower, upper);
}

std::vector<double> radial_derivative(const radial_field& f) {
  const auto& g = *f.grid;
  const std::size_t n = g.size();
  const double h = g.h();
  std::vector<double> d(n, 0.0);
  d[0] = (f.values[1] - f.values[0]) / (2.0 * h);
  for (std::size_t i = 1; i + 1 < n; ++i) d[i] = (f.values[i + 1] - f.values[i - 1]) / (2.0 * h);
  d[n - 1] = (3.0 * f.values[n - 1] - 4.0 * f.values[n - 2] + f.values[n - 3]) / (2.0 * h);
  return d;
}

std::vector<double> radial_laplacian(const radial_field& f) {
  const auto& g = *f.grid;
  const std::size_t n = g.size();
  const double h = g.h();
  const double c = g.dim() - 1;
  std::vector<double> out(n, 0.0);
  for (std::size_t i = 0; i + 1 < n; ++i) {
    const double fl = i == 0 ? f.values[0] : f.values[i - 1];
    const double fr = f.values[i + 1];
    const double fc = f.values[i];
    out[i] = (fr - 2.0 * fc + fl) / (h * h) + c / g.r(i) * (fr - fl) / (2.0 * h);
  }
  return out;
}

double h1_inner(const radial_field& a, const radial_field& b, double exterior_radius) {
  check_same_grid(a, b);
  const auto da = radial_derivative(a);
  const auto db = &a == &b ? da : radial_derivative(b);
  std::vector<double> prod(da.size());
  for (std::size_t i = 0; i < prod.size(); ++i) prod[i] = da[i] * db[i];
  return a.grid->integrate(prod, exterior_radius);
}

double l2_inner(const radial_field& a, const radial_field& b, double exterior_radius) {
  check_same_grid(a, b);
  std::vector<double> prod(a.size());
  for (std::size_t i = 0; i < prod.size(); ++i) prod[i] = a.values[i] * b.values[i];
  return a.grid->integrate(prod, exterior_radius);
}

double h1_norm_sq(const radial_field& f, double exterior_radius) { return h1_inner(f, f, exterior_radius); }
double l2_norm_sq(const radial_field& g, double exterior_radius) { return l2_inner(g, g, exterior_radius); }

double h_inner(const field_pair& a, const field_pair& b, double exterior_radius) {
  return h1_inner(a.f, b.f, exterior_radius) + l2_inner(a.g, b.g, exterior_radius);
}

double h_norm_sq(const field_pair& p, double exterior_radius) {
  require_range(exterior_radius >= 0.0, "exterior radius must be nonnegative");
  return std::max(0.0, h_inner(p, p, exterior_radius));
}

double interpolate(const radial_field& f, double r) {
  const auto& g = *f.grid;
  r = std::abs(r);
  if (r >= g.r_max()) return 0.0;
  const auto n = static_cast<long>(g.size());
  const double x = r / g.h() - 0.5;  // fractional node index
  const long k = static_cast<long>(std::floor(x));
  const double t = x - static_cast<double>(k);
  auto at = [&](long j) {
    if (j < 0) j = -j - 1;  // r_{-j-1} = -r_j
    return j >= n ? 0.0 : f.values[static_cast<std::size_t>(j)];
  };
  const double p0 = at(k - 1), p1 = at(k), p2 = at(k + 1), p3 = at(k + 2);
  // cubic Lagrange through nodes k-1..k+2 at offset t from node k
  const double c0 = -t * (t - 1.0) * (t - 2.0) / 6.0;
  const double c1 = (t + 1.0) * (t - 1.0) * (t - 2.0) / 2.0;
  const double c2 = -(t + 1.0) * t * (t - 2.0) / 2.0;
  const double c3 = (t + 1.0) * t * (t - 1.0) / 6.0;
  return c0 * p0 + c1 * p1 + c2 * p2 + c3 * p3;
}

namespace {

radial_field rescale(const radial_field& f, double lambda, double power) {
  require_domain(lambda > 0.0 && std::isfinite(lambda), "scale must be positive");
  if (lambda == 1.0) return f;
  const double amp = std::pow(lambda, power);
  radial_field out(f.grid);
  for (std::size_t i = 0; i < out.size(); ++i) out.values[i] = amp * interpolate(f, f.grid->r(i) / lambda);
  return out;
}

}  // namespace

radial_field rescale_h1(const radial_field& f, double lambda) {
  return rescale(f, lambda, 1.0 - 0.5 * f.grid->dim());
}

radial_field rescale_l2(const radial_field& g, double lambda) { return rescale(g, lambda, -0.5 * g.grid->dim()); }

double nlw_energy(const field_pair& p) {
  const int N = p.grid()->dim();
  const double q = 2.0 * N / (N - 2.0);
  std::vector<double> pot(p.f.size());
  for (std::size_t i = 0; i < pot.size(); ++i) pot[i] = std::pow(std::abs(p.f.values[i]), q);
  return 0.5 * h_norm_sq(p) - (N - 2.0) / (2.0 * N) * p.grid()->integrate(pot);
}

}  // namespace nlwlab
