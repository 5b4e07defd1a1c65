#include "nlwlab/wave.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include <Eigen/Dense>

#include "nlwlab/errors.hpp"
#include "nlwlab/ground_state.hpp"
#include "nlwlab/nonradiative.hpp"

namespace nlwlab::wave {

namespace {

constexpr double blowup_threshold = 1e6;

double nan() { return std::numeric_limits<double>::quiet_NaN(); }

// State of the reduced variable v = r^m u, m = (N-1)/2.
class reduced_system {
 public:
  reduced_system(const grid_ptr& grid, const evolution_spec& spec) : grid_(grid), spec_(spec) {
    const int N = grid->dim();
    m_ = (N - 1) / 2;
    n_ = grid->size();
    h_ = grid->h();
    parity_ = m_ % 2 == 0 ? 1.0 : -1.0;  // v(-r) = (-1)^m v(r)
    const double c = 0.25 * (N - 1.0) * (N - 3.0);
    rm_.resize(n_);
    centrifugal_.resize(n_);
    for (std::size_t i = 0; i < n_; ++i) {
      const double r = grid->r(i);
      rm_[i] = std::pow(r, m_);
      centrifugal_[i] = c / (r * r);
    }
    if (spec.equation == equation_kind::linearized) {
      spec.solitons.validate();
      potential_.assign(n_, 0.0);
      for (double lam : spec.solitons.scales) {
        const auto p = ground_state::linearized_potential(grid, lam);
        for (std::size_t i = 0; i < n_; ++i) potential_[i] -= p.values[i];  // +(N+2)/(N-2) W^{4/(N-2)}
      }
    }
    nonlinear_power_ = 4.0 / (N - 2.0);
    N_ = N;
  }

  std::size_t first_active(double t) const {
    if (!spec_.cone_truncation) return 0;
    const double edge = *spec_.cone_truncation + t;
    const auto k = static_cast<long>(std::floor(edge / h_ + 0.5));  // first r_i > edge
    return static_cast<std::size_t>(std::clamp<long>(k, 0, static_cast<long>(n_)));
  }

  // a = ∂_r² v - c v/r² + source; returns sup |u|
  double accel(const std::vector<double>& v, double t, std::vector<double>& a) const {
    const double inv_h2 = 1.0 / (h_ * h_);
    for (std::size_t i = 0; i < n_; ++i) {
      const double left = i == 0 ? parity_ * v[0] : v[i - 1];
      const double right = i + 1 == n_ ? ghost_ : v[i + 1];
      a[i] = (right - 2.0 * v[i] + left) * inv_h2 - centrifugal_[i] * v[i];
    }
    double sup = 0.0;
    const std::size_t k0 = first_active(t);
    if (spec_.equation == equation_kind::linearized) {
      for (std::size_t i = k0; i < n_; ++i) a[i] += potential_[i] * v[i];
    } else if (spec_.equation == equation_kind::nonlinear) {
      for (std::size_t i = k0; i < n_; ++i) a[i] += nonlinear_factor(v[i] / rm_[i]) * v[i];
    }
    for (std::size_t i = 0; i < n_; ++i) {
      const double u = std::abs(v[i] / rm_[i]);
      if (!(u <= sup)) sup = std::isnan(u) ? u : std::max(sup, u);
    }
    return sup;
  }

  double nonlinear_factor(double u) const {
    const double au = std::abs(u);
    switch (N_) {
      case 3: return au * au * au * au;
      case 5: return au * std::cbrt(au);
      default: return std::pow(au, nonlinear_power_);
    }
  }

  void to_reduced(const field_pair& p, std::vector<double>& v, std::vector<double>& vt) const {
    v.resize(n_);
    vt.resize(n_);
    for (std::size_t i = 0; i < n_; ++i) {
      v[i] = rm_[i] * p.f.values[i];
      vt[i] = rm_[i] * p.g.values[i];
    }
  }

  // The outer ghost keeps the value extrapolated from the initial data, so slowly decaying tails
  // (W, ΛW) do not see a jump at R_max.
  void pin_boundary(const std::vector<double>& v) {
    ghost_ = n_ >= 3 ? 3.0 * v[n_ - 1] - 3.0 * v[n_ - 2] + v[n_ - 3] : 0.0;
  }

  field_pair to_physical(const std::vector<double>& v, const std::vector<double>& vt) const {
    field_pair p(grid_);
    for (std::size_t i = 0; i < n_; ++i) {
      p.f.values[i] = v[i] / rm_[i];
      p.g.values[i] = vt[i] / rm_[i];
    }
    return p;
  }

  double energy(const field_pair& p) const {
    switch (spec_.equation) {
      case equation_kind::free: return 0.5 * h_norm_sq(p);
      case equation_kind::nonlinear: return nlw_energy(p);
      case equation_kind::linearized: {
        std::vector<double> q(n_);
        for (std::size_t i = 0; i < n_; ++i) q[i] = potential_[i] * p.f.values[i] * p.f.values[i];
        return 0.5 * h_norm_sq(p) - 0.5 * grid_->integrate(q);
      }
    }
    return 0.0;
  }

 private:
  grid_ptr grid_;
  const evolution_spec& spec_;
  int N_ = 0;
  int m_ = 0;
  std::size_t n_ = 0;
  double h_ = 0;
  double parity_ = 1;
  double ghost_ = 0;
  double nonlinear_power_ = 0;
  std::vector<double> rm_;
  std::vector<double> centrifugal_;
  std::vector<double> potential_;
};

double outer_limit(const radial_grid& grid, const evolution_spec& spec, double t) {
  return spec.data_support ? grid.r_max() : grid.r_max() - t;
}

}  // namespace

double cfl_limit(const radial_grid& grid) {
  const int N = grid.dim();
  const int m = (N - 1) / 2;
  const double c = 0.25 * (N - 1.0) * (N - 3.0);
  const double h = grid.h();
  double rho = 0.0;  // Gershgorin bound of h² × (−∂_r² + c/r²)
  for (std::size_t i = 0; i < std::min<std::size_t>(grid.size(), 8); ++i) {
    const double r = grid.r(i) / h;
    double diag = 2.0 + c / (r * r);
    double off = 2.0;
    if (i == 0) {
      diag -= m % 2 == 0 ? 1.0 : -1.0;
      off = 1.0;
    }
    rho = std::max(rho, std::abs(diag) + off);
  }
  rho = std::max(rho, 4.0);
  return std::min(1.0, 2.0 / std::sqrt(rho));
}

evolution_result evolve(const field_pair& p, const evolution_spec& spec) {
  const grid_ptr grid = p.grid();
  require(static_cast<bool>(grid), error_code::invalid_argument, "field pair has no grid");
  check_finite(p.f, "initial position");
  check_finite(p.g, "initial velocity");
  require(spec.t_final >= 0.0, error_code::validation, "t_final must be nonnegative");
  const double limit = cfl_limit(*grid);
  const double dt_max = limit * grid->h();
  double dt = spec.dt > 0.0 ? spec.dt : 0.5 * dt_max;
  require(dt <= dt_max * (1.0 + 1e-12), error_code::validation,
          "time step violates the CFL limit dt <= " + std::to_string(limit) + " h");
  if (spec.equation == equation_kind::nonlinear) check_dimension(grid->dim(), 3);
  if (spec.data_support) {
    require(*spec.data_support + spec.t_final < grid->r_max(), error_code::validation,
            "outer boundary is causally reached: need support + t_final < R_max");
  }
  if (spec.record_channel_at) {
    require(*spec.record_channel_at >= 0.0, error_code::validation, "channel radius must be nonnegative");
    require(*spec.record_channel_at + spec.t_final < outer_limit(*grid, spec, spec.t_final), error_code::validation,
            "exterior cone leaves the causally clean part of the grid");
  }

  const auto steps = static_cast<std::size_t>(std::ceil(spec.t_final / dt - 1e-9));
  if (steps > 0) dt = spec.t_final / static_cast<double>(steps);

  reduced_system sys(grid, spec);
  std::vector<double> v, vt, a(grid->size());
  sys.to_reduced(p, v, vt);
  sys.pin_boundary(v);

  evolution_result out;
  out.dt = dt;
  const double e0 = sys.energy(p);
  auto record = [&](double t, const field_pair& state, double sup, std::size_t step) {
    const bool want_series = spec.series_every > 0 && (step % spec.series_every == 0 || step == steps);
    const bool want_snapshot = spec.snapshot_every > 0 && (step % spec.snapshot_every == 0 || step == steps);
    if (want_series) {
      series_point sp;
      sp.t = t;
      sp.energy = sys.energy(state);
      sp.sup_norm = sup;
      sp.exterior = spec.record_channel_at
                        ? exterior_energy(state, *spec.record_channel_at, t, outer_limit(*grid, spec, t))
                        : nan();
      out.max_energy_drift = std::max(out.max_energy_drift, std::abs(sp.energy - e0));
      out.series.push_back(sp);
    }
    if (want_snapshot) out.snapshots.push_back({t, state});
  };

  double sup = sys.accel(v, 0.0, a);
  const bool need_state = [&] { return spec.series_every > 0 || spec.snapshot_every > 0; }();
  if (need_state) record(0.0, p, sup, 0);

  double t = 0.0;
  for (std::size_t step = 1; step <= steps; ++step) {
    for (std::size_t i = 0; i < v.size(); ++i) {
      vt[i] += 0.5 * dt * a[i];
      v[i] += dt * vt[i];
    }
    t = static_cast<double>(step) * dt;
    sup = sys.accel(v, t, a);
    for (std::size_t i = 0; i < v.size(); ++i) vt[i] += 0.5 * dt * a[i];
    if (!(sup <= blowup_threshold)) {
      out.blew_up = true;
      out.blowup_time = t;
      break;
    }
    const bool series_due = spec.series_every > 0 && (step % spec.series_every == 0 || step == steps);
    const bool snap_due = spec.snapshot_every > 0 && (step % spec.snapshot_every == 0 || step == steps);
    if (series_due || snap_due) record(t, sys.to_physical(v, vt), sup, step);
  }
  out.t_reached = t;
  out.final_state = sys.to_physical(v, vt);
  return out;
}

double exterior_energy(const field_pair& p, double R, double t, double outer) {
  const double lo = R + std::abs(t);
  const double hi = std::isinf(outer) ? p.grid()->r_max() : outer;
  require_range(R >= 0.0 && lo < hi && hi <= p.grid()->r_max() * (1.0 + 1e-12), "exterior cone exits the grid");
  const auto df = radial_derivative(p.f);
  std::vector<double> e(df.size());
  for (std::size_t i = 0; i < e.size(); ++i) e[i] = df[i] * df[i] + p.g.values[i] * p.g.values[i];
  return std::max(0.0, p.grid()->integrate(e, lo, std::min(hi, p.grid()->r_max())));
}

double extrapolate_limit(const std::vector<series_point>& series, int order) {
  require(!series.empty(), error_code::invalid_argument, "empty series");
  const double t_end = series.back().t;
  std::vector<const series_point*> pts;
  for (const auto& s : series)
    if (s.t >= 0.5 * t_end && s.t > 0.0 && std::isfinite(s.exterior)) pts.push_back(&s);
  if (static_cast<int>(pts.size()) < order + 3) return series.back().exterior;
  Eigen::MatrixXd A(pts.size(), order + 1);
  Eigen::VectorXd b(pts.size());
  for (std::size_t i = 0; i < pts.size(); ++i) {
    const double x = t_end / pts[i]->t;  // in [1, 2]
    double xp = 1.0;
    for (int k = 0; k <= order; ++k) {
      A(static_cast<Eigen::Index>(i), k) = xp;
      xp *= x - 1.0;
    }
    b(static_cast<Eigen::Index>(i)) = pts[i]->exterior;
  }
  // the basis (x-1)^k spans the same space as t^{-k}; extrapolate to x = 0
  const Eigen::VectorXd c = A.colPivHouseholderQr().solve(b);
  double value = 0.0;
  double xp = 1.0;
  for (int k = 0; k <= order; ++k) {
    value += c(k) * xp;
    xp *= -1.0;
  }
  return value;
}

namespace {

bool has_plateau(const std::vector<series_point>& s) {
  if (s.size() < 3) return false;
  const double t_end = s.back().t;
  const double last = s.back().exterior;
  double lo = last, hi = last;
  for (auto it = s.rbegin(); it != s.rend() && it->t >= 0.9 * t_end; ++it) {
    lo = std::min(lo, it->exterior);
    hi = std::max(hi, it->exterior);
  }
  return hi - lo <= 1e-3 * std::max(std::abs(last), 1e-300);
}

}  // namespace

channel_report channel_sum(const field_pair& p, double R, const evolution_spec& spec) {
  require(spec.equation != equation_kind::nonlinear, error_code::validation,
          "channel_sum is defined for the free and linearized equations");
  evolution_spec s = spec;
  s.record_channel_at = R;
  if (s.series_every == 0) s.series_every = 1;
  s.snapshot_every = 0;

  const auto fwd = evolve(p, s);
  const field_pair reversed(p.f, -1.0 * p.g);
  const auto bwd = evolve(reversed, s);
  require(!fwd.blew_up && !bwd.blew_up, error_code::numerical, "linear evolution overflowed");

  channel_report out;
  out.series_fwd = fwd.series;
  out.series_bwd = bwd.series;
  out.raw_fwd = fwd.series.back().exterior;
  out.raw_bwd = bwd.series.back().exterior;
  out.plateau_fwd = has_plateau(fwd.series);
  out.plateau_bwd = has_plateau(bwd.series);
  const double e3f = extrapolate_limit(fwd.series, 3), e2f = extrapolate_limit(fwd.series, 2);
  const double e3b = extrapolate_limit(bwd.series, 3), e2b = extrapolate_limit(bwd.series, 2);
  out.exterior_energy_fwd = std::max(0.0, e3f);
  out.exterior_energy_bwd = std::max(0.0, e3b);
  out.channel_sum = out.exterior_energy_fwd + out.exterior_energy_bwd;
  const double scale = std::max(fwd.series.front().exterior, 1e-300);
  const bool stable = std::abs(e3f - e2f) + std::abs(e3b - e2b) <= 5e-3 * scale;
  out.converged = (out.plateau_fwd && out.plateau_bwd) || stable;
  return out;
}

double theta_exponent(int N) {
  check_dimension(N, 5);
  if (N == 5) return 0.5;
  if (N == 7) return 1.5;
  return 2.0;
}

lower_bound_report channel_lower_bound_check(const field_pair& p, const soliton_config& config,
                                             const evolution_spec& spec) {
  config.validate();
  const int N = p.grid()->dim();
  const double gamma = config.gamma();
  require_domain(gamma <= 0.1, "channel lower bound needs gamma <= 0.1");
  evolution_spec s = spec;
  s.equation = equation_kind::linearized;
  s.solitons = config;
  const auto proj = nonradiative::project_Z(p, config);
  lower_bound_report out;
  out.lhs = h_norm_sq(proj.remainder);
  out.z_part = h_norm_sq(p - proj.remainder);
  const auto ch = channel_sum(p, 0.0, s);
  out.channel = ch.channel_sum;
  out.converged = ch.converged;
  out.rhs = out.channel + std::pow(gamma, 2.0 * theta_exponent(N)) * out.z_part;
  out.ratio = out.rhs > 0.0 ? out.lhs / out.rhs : std::numeric_limits<double>::infinity();
  return out;
}

}  // namespace nlwlab::wave
