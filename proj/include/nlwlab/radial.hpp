#pragma once

#include <array>
#include <cstddef>
#include <functional>
#include <limits>
#include <memory>
#include <vector>

namespace nlwlab {

inline constexpr double to_outer_edge = std::numeric_limits<double>::infinity();

// ω_{N-1}, the area of the unit sphere in ℝᴺ.
double sphere_area(int N);

// Odd N ≥ min_N, otherwise a domain error.
void check_dimension(int N, int min_N = 3);

// Uniform cell-centred grid: r_i = (i + 1/2) h, i = 0..n-1, R_max = n h.
// Each cell carries a quadratic reconstruction of the integrand whose r^{N-1}
// moments are integrated exactly, so f = r^k (k <= 2) is integrated without error.
class radial_grid {
 public:
  radial_grid(int N, double h, double r_max);

  int dim() const { return N_; }
  double h() const { return h_; }
  double r_max() const { return r_max_; }
  std::size_t size() const { return r_.size(); }
  double omega() const { return omega_; }
  double r(std::size_t i) const { return r_[i]; }
  const std::vector<double>& nodes() const { return r_; }
  // Full-domain weights: sum_i w_i f_i ≈ ∫_{ℝᴺ} f dx.
  const std::vector<double>& weights() const { return w_; }

  // ω∫_{lower}^{upper} f r^{N-1} dr for nodal samples f.
  double integrate(const std::vector<double>& f, double lower = 0.0, double upper = to_outer_edge) const;

 private:
  std::size_t stencil_centre(std::size_t cell) const;
  std::array<double, 3> partial_weights(std::size_t cell, double a, double b) const;
  double cell_value(const std::vector<double>& f, std::size_t cell, const std::array<double, 3>& wts) const;

  int N_;
  double h_;
  double r_max_;
  double omega_;
  std::vector<double> r_;
  std::vector<double> w_;
  std::vector<std::array<double, 3>> cell_w_;
};

using grid_ptr = std::shared_ptr<const radial_grid>;

grid_ptr make_grid(int N, double h, double r_max);

struct radial_field {
  grid_ptr grid;
  std::vector<double> values;

  radial_field() = default;
  explicit radial_field(grid_ptr g);
  radial_field(grid_ptr g, std::vector<double> v);

  std::size_t size() const { return values.size(); }
  double operator[](std::size_t i) const { return values[i]; }
  double& operator[](std::size_t i) { return values[i]; }
};

struct field_pair {
  radial_field f;  // position, Ḣ¹ role
  radial_field g;  // velocity, L² role

  field_pair() = default;
  explicit field_pair(grid_ptr grid);
  field_pair(radial_field f_, radial_field g_);
  const grid_ptr& grid() const { return f.grid; }
};

radial_field sample(const grid_ptr& grid, const std::function<double(double)>& fn);

radial_field operator+(const radial_field& a, const radial_field& b);
radial_field operator-(const radial_field& a, const radial_field& b);
radial_field operator*(double c, const radial_field& a);
field_pair operator+(const field_pair& a, const field_pair& b);
field_pair operator-(const field_pair& a, const field_pair& b);
field_pair operator*(double c, const field_pair& a);

void check_finite(const radial_field& f, const char* what);

double integrate_radial(const radial_field& field, double lower = 0.0, double upper = to_outer_edge);

// ∂_r by centred differences; even reflection at the origin, one-sided at R_max.
std::vector<double> radial_derivative(const radial_field& f);
// f'' + (N-1)/r f' on nodes 0..n-2; the last entry is left at zero.
std::vector<double> radial_laplacian(const radial_field& f);

double h1_norm_sq(const radial_field& f, double exterior_radius = 0.0);
double l2_norm_sq(const radial_field& g, double exterior_radius = 0.0);
// ‖p‖²_{𝓗(R)} = ∫_{r>R} (|∂_r f|² + g²).
double h_norm_sq(const field_pair& p, double exterior_radius = 0.0);
// Discrete 𝓗(R) inner product consistent with h_norm_sq.
double h_inner(const field_pair& a, const field_pair& b, double exterior_radius = 0.0);
double h1_inner(const radial_field& a, const radial_field& b, double exterior_radius = 0.0);
double l2_inner(const radial_field& a, const radial_field& b, double exterior_radius = 0.0);

// Cubic local interpolation, even about the origin, zero beyond R_max.
double interpolate(const radial_field& f, double r);

radial_field rescale_h1(const radial_field& f, double lambda);
radial_field rescale_l2(const radial_field& g, double lambda);

double nlw_energy(const field_pair& p);

}  // namespace nlwlab
