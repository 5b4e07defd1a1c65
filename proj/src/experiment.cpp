#include "nlwlab/experiment.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <ctime>
#include <filesystem>
#include <map>
#include <random>
#include <sstream>

#include "nlwlab/collision.hpp"
#include "nlwlab/estimates.hpp"
#include "nlwlab/ground_state.hpp"
#include "nlwlab/io.hpp"
#include "nlwlab/modulation.hpp"
#include "nlwlab/nonradiative.hpp"
#include "nlwlab/ode.hpp"
#include "nlwlab/wave.hpp"

#ifndef NLWLAB_VERSION
#define NLWLAB_VERSION "unknown"
#endif

namespace nlwlab::experiment {

namespace fs = std::filesystem;
namespace gs = ground_state;
using config::experiment_config;

std::string version() { return NLWLAB_VERSION; }

namespace {

std::string utc_now() {
  const auto now = std::chrono::system_clock::now();
  const std::time_t t = std::chrono::system_clock::to_time_t(now);
  std::tm tm{};
  gmtime_r(&t, &tm);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

// Collects the files of one run so that a failure can take them back out.
class output_dir {
 public:
  explicit output_dir(const std::string& dir) : dir_(dir) {}

  io::csv_writer csv(const std::string& name, const std::vector<std::string>& header) {
    track(name);
    return io::csv_writer(path(name), header);
  }
  void text(const std::string& name, const std::string& body) {
    track(name);
    io::write_text(path(name), body);
  }
  void field(const std::string& name, const field_pair& p) {
    track(name);
    track(name + ".meta");
    io::write_field(path(name), p);
  }
  // Column specs for a renderer: "<file>: x=<col> y=<col>[,<col>...] [log]".
  void plot(const std::string& line) { plot_ += line + "\n"; }

  std::string path(const std::string& name) const { return (fs::path(dir_) / name).string(); }
  const std::vector<std::string>& files() const { return files_; }
  const std::string& plot_text() const { return plot_; }

  void remove_all() noexcept {
    std::error_code ec;
    for (const auto& f : files_) fs::remove(path(f), ec);
    fs::remove(path("manifest.txt"), ec);
  }

 private:
  void track(const std::string& name) {
    if (std::find(files_.begin(), files_.end(), name) == files_.end()) files_.push_back(name);
  }

  std::string dir_;
  std::vector<std::string> files_;
  std::string plot_;
};

grid_ptr grid_from(const experiment_config& cfg) {
  return make_grid(static_cast<int>(cfg.integer("grid.N")), cfg.real("grid.h"), cfg.real("grid.r_max"));
}

soliton_config solitons_from(const experiment_config& cfg, const std::string& prefix) {
  soliton_config c{cfg.integers(prefix + ".signs"), cfg.reals(prefix + ".scales")};
  c.validate();
  return c;
}

std::string status_word(bool b) { return b ? "true" : "false"; }

double gaussian(double r, double c, double w) {
  const double x = (r - c) / w;
  return std::exp(-x * x);
}

// ---------------------------------------------------------------------------------------------
// kinds

error_code run_constants(const experiment_config& cfg, output_dir& out) {
  const auto grid = grid_from(cfg);
  const auto c = gs::compute_constants(*grid);
  auto csv = out.csv("constants.csv", {"N", "h", "r_max", "norm_LambdaW_L2_sq", "norm_gradW_L2_sq",
                                       "norm_gradLambdaW_L2_sq", "kappa0", "kappa1", "kappa1_prime", "kappa2",
                                       "energy_W", "interaction_integral", "potential_integral"});
  csv.row({static_cast<double>(c.N), grid->h(), grid->r_max(), c.norm_LambdaW_L2_sq, c.norm_gradW_L2_sq,
           c.norm_gradLambdaW_L2_sq, c.kappa0, c.kappa1, c.kappa1_prime, c.kappa2, c.energy_W,
           c.interaction_integral, c.potential_integral});
  csv.close();
  out.plot("constants.csv: table");
  return error_code::ok;
}

void write_series(output_dir& out, const std::string& name, const std::vector<wave::series_point>& series) {
  auto csv = out.csv(name, {"t", "energy", "exterior", "sup_norm"});
  for (const auto& s : series) csv.row({s.t, s.energy, s.exterior, s.sup_norm});
  csv.close();
}

wave::equation_kind equation_from(const std::string& word) {
  if (word == "linearized") return wave::equation_kind::linearized;
  if (word == "nonlinear") return wave::equation_kind::nonlinear;
  return wave::equation_kind::free;
}

error_code run_evolve(const experiment_config& cfg, output_dir& out) {
  const auto grid = grid_from(cfg);
  const auto data = make_preset(grid, cfg);
  wave::evolution_spec spec;
  spec.equation = equation_from(cfg.str("evolve.equation"));
  if (spec.equation == wave::equation_kind::linearized) spec.solitons = solitons_from(cfg, "evolve");
  spec.t_final = cfg.real("evolve.t_final");
  spec.dt = cfg.real("evolve.dt", 0.0);
  spec.series_every = static_cast<std::size_t>(cfg.integer("evolve.series_every", 10));
  spec.snapshot_every = static_cast<std::size_t>(cfg.integer("evolve.snapshot_every", 0));
  if (cfg.has("evolve.channel_R")) spec.record_channel_at = cfg.real("evolve.channel_R");
  if (cfg.has("evolve.cone")) spec.cone_truncation = cfg.real("evolve.cone");
  if (cfg.has("evolve.support")) spec.data_support = cfg.real("evolve.support");

  const auto res = wave::evolve(data, spec);
  if (res.blew_up) {
    std::ostringstream os;
    os << "solution exceeded the blow-up threshold at t = " << res.blowup_time;
    throw error(error_code::numerical, os.str());
  }
  write_series(out, "series.csv", res.series);
  out.plot("series.csv: x=t y=energy");
  out.plot("series.csv: x=t y=sup_norm");
  if (spec.record_channel_at) out.plot("series.csv: x=t y=exterior");
  out.field("final.csv", res.final_state);
  out.plot("final.csv: x=r y=f,g");
  if (!res.snapshots.empty()) {
    auto csv = out.csv("snapshots.csv", {"t", "r", "f", "g"});
    for (const auto& s : res.snapshots)
      for (std::size_t i = 0; i < grid->size(); ++i) csv.row({s.t, grid->r(i), s.state.f[i], s.state.g[i]});
    csv.close();
    out.plot("snapshots.csv: x=r y=f group=t");
  }
  auto sum = out.csv("summary.csv", {"t_reached", "dt", "max_energy_drift", "initial_energy"});
  sum.row({res.t_reached, res.dt, res.max_energy_drift, res.series.empty() ? NAN : res.series.front().energy});
  sum.close();
  return error_code::ok;
}

error_code run_channels(const experiment_config& cfg, output_dir& out) {
  const auto grid = grid_from(cfg);
  const auto data = make_preset(grid, cfg);
  wave::evolution_spec spec;
  spec.equation = equation_from(cfg.str("channels.equation", std::string("free")));
  if (spec.equation == wave::equation_kind::linearized) spec.solitons = solitons_from(cfg, "channels");
  spec.t_final = cfg.real("channels.t_final");
  spec.dt = cfg.real("channels.dt", 0.0);
  spec.series_every = static_cast<std::size_t>(cfg.integer("channels.series_every", 10));
  if (cfg.has("channels.support")) spec.data_support = cfg.real("channels.support");
  if (cfg.has("channels.cone")) spec.cone_truncation = cfg.real("channels.cone");
  const double R = cfg.real("channels.R");

  const auto rep = wave::channel_sum(data, R, spec);
  write_series(out, "channels_forward.csv", rep.series_fwd);
  write_series(out, "channels_backward.csv", rep.series_bwd);
  out.plot("channels_forward.csv: x=t y=exterior");
  out.plot("channels_backward.csv: x=t y=exterior");
  const double norm = h_norm_sq(data, R);
  auto sum = out.csv("summary.csv", {"R", "data_norm_sq", "exterior_forward", "exterior_backward", "channel_sum",
                                     "ratio", "raw_forward", "raw_backward", "plateau_forward", "plateau_backward",
                                     "converged"});
  sum.row({io::format_real(R), io::format_real(norm), io::format_real(rep.exterior_energy_fwd),
           io::format_real(rep.exterior_energy_bwd), io::format_real(rep.channel_sum),
           io::format_real(norm > 0 ? rep.channel_sum / norm : NAN), io::format_real(rep.raw_fwd),
           io::format_real(rep.raw_bwd), status_word(rep.plateau_fwd), status_word(rep.plateau_bwd),
           status_word(rep.converged)});
  sum.close();
  return rep.converged ? error_code::ok : error_code::unconverged;
}

error_code run_collide(const experiment_config& cfg, output_dir& out) {
  collision::collide_spec spec;
  spec.N = static_cast<int>(cfg.integer("grid.N"));
  spec.h = cfg.real("grid.h");
  spec.r_max = cfg.real("grid.r_max");
  spec.signs = cfg.integers("collide.signs", std::vector<int>{1, 1});
  spec.gamma0 = cfg.real("collide.gamma0");
  spec.lambda1 = cfg.real("collide.lambda1", 1.0);
  spec.t_final = cfg.real("collide.t_final");
  spec.snapshot_dt = cfg.real("collide.snapshot_dt");
  spec.R = cfg.real("collide.R", 1.0);
  spec.gamma_pass = cfg.real("collide.gamma_pass", 0.2);
  spec.shoot_iterations = static_cast<int>(cfg.integer("collide.shoot_iterations", 48));
  spec.shoot_dt = cfg.real("collide.shoot_dt", 0.01);

  const auto res = collision::collide(spec);
  auto fits = out.csv("fits.csv", {"t", "lambda_1", "lambda_2", "gamma", "delta", "iterations", "fit_converged"});
  auto ext = out.csv("exterior.csv", {"t", "radiation", "exterior", "energy", "drift"});
  for (const auto& s : res.samples) {
    fits.row({io::format_real(s.t), io::format_real(s.scales[0]), io::format_real(s.scales[1]),
              io::format_real(s.gamma), io::format_real(s.delta), std::to_string(s.iterations),
              status_word(s.fit_converged)});
    ext.row({s.t, s.radiation, s.exterior, s.energy, s.drift});
  }
  fits.close();
  ext.close();
  out.plot("fits.csv: x=t y=gamma");
  out.plot("fits.csv: x=t y=lambda_1,lambda_2 log");
  out.plot("exterior.csv: x=t y=radiation,drift log");
  auto sum = out.csv("summary.csv", {"shoot_amplitude", "shoot_bracketed", "shoot_survival", "gamma_max",
                                     "gamma_pass", "t_pass", "radiation_after", "drift_floor", "blew_up",
                                     "blowup_time", "inelastic"});
  sum.row({io::format_real(res.shoot_amplitude), status_word(res.shoot_bracketed),
           io::format_real(res.shoot_survival), io::format_real(res.gamma_max), io::format_real(spec.gamma_pass),
           io::format_real(res.t_pass), io::format_real(res.radiation_after), io::format_real(res.drift_floor),
           status_word(res.blew_up), io::format_real(res.blowup_time), status_word(res.inelastic)});
  sum.close();
  return error_code::ok;
}

error_code run_modfit(const experiment_config& cfg, output_dir& out) {
  const auto grid = grid_from(cfg);
  const auto truth = solitons_from(cfg, "modfit");
  soliton_config start = truth;
  if (cfg.has("modfit.start")) {
    start.scales = cfg.reals("modfit.start");
  } else {
    for (auto& l : start.scales) l *= 1.05;
  }
  start.validate();
  radial_field f = modulation::multisoliton(grid, truth);
  const double noise = cfg.real("modfit.noise", 0.0);
  if (noise > 0.0) {
    // smooth random bumps, scaled to a relative Ḣ¹ size `noise` against one ground state
    std::mt19937_64 rng(cfg.u64("run.seed"));
    std::uniform_real_distribution<double> u(0.0, 1.0);
    radial_field bump(grid);
    for (int k = 0; k < 4; ++k) {
      const double c = truth.scales.back() + u(rng) * 3.0 * truth.scales.front();
      const double w = truth.scales.back() * (0.5 + u(rng) * 10.0);
      const double a = 2.0 * u(rng) - 1.0;
      for (std::size_t i = 0; i < grid->size(); ++i) bump[i] += a * gaussian(grid->r(i), c, w);
    }
    const double scale = noise * std::sqrt(gs::reference_constants(grid->dim()).norm_gradW_L2_sq / h1_norm_sq(bump));
    f = f + scale * bump;
  }
  modulation::fit_options opts;
  opts.tol = cfg.real("modfit.tol", opts.tol);
  opts.max_iter = static_cast<int>(cfg.integer("modfit.max_iter", opts.max_iter));
  opts.allow_damping = cfg.flag("modfit.damping", opts.allow_damping);
  opts.enforce_gate = cfg.flag("modfit.enforce_gate", opts.enforce_gate);
  const auto res = modulation::fit_scales(f, start, opts);

  auto hist = out.csv("history.csv", {"iteration", "residual"});
  for (std::size_t k = 0; k < res.residual_history.size(); ++k)
    hist.row({static_cast<double>(k), res.residual_history[k]});
  hist.close();
  out.plot("history.csv: x=iteration y=residual log");
  auto tab = out.csv("result.csv", {"j", "sign", "truth", "start", "fitted", "relative_error"});
  for (std::size_t j = 0; j < truth.count(); ++j) {
    const double fitted = res.config.scales[j];
    tab.row({static_cast<double>(j + 1), static_cast<double>(truth.signs[j]), truth.scales[j], start.scales[j], fitted,
             fitted / truth.scales[j] - 1.0});
  }
  tab.close();
  auto sum = out.csv("summary.csv", {"iterations", "residual", "initial_distance", "contraction_ratio", "damped"});
  sum.row({std::to_string(res.iterations), io::format_real(res.residual), io::format_real(res.initial_distance),
           io::format_real(res.contraction_ratio), status_word(res.damped)});
  sum.close();
  return error_code::ok;
}

ode::hypotheses hypotheses_from(const experiment_config& cfg) {
  ode::hypotheses h;
  h.epsilon = cfg.real("ode.epsilon", h.epsilon);
  h.L = cfg.real("ode.L", h.L);
  h.C = cfg.real("ode.hyp_C", h.C);
  h.a = cfg.real("ode.hyp_a", h.a);
  return h;
}

error_code run_modode(const experiment_config& cfg, output_dir& out) {
  const int N = static_cast<int>(cfg.integer("ode.N"));
  const auto signs = cfg.integers("ode.signs");
  const auto P = ode::ode_params::for_dimension(N, signs);
  const double C = cfg.real("ode.C", 1e3);

  if (cfg.str("ode.mode", std::string("trajectory")) == "exit") {
    ode::exit_spec spec;
    spec.N = N;
    spec.signs = signs;
    spec.hyp = hypotheses_from(cfg);
    spec.gamma0 = cfg.reals("ode.gamma0");
    spec.horizon = cfg.real("ode.horizon", spec.horizon);
    spec.C_monotonicity = C;
    auto csv = out.csv("exit.csv", {"lambda1", "gamma0", "t_exit", "t_exit_normalized", "reason", "exited"});
    bool all = true;
    double t_star = NAN;
    for (double l1 : cfg.reals("ode.lambda1", std::vector<double>{1.0})) {
      spec.lambda1 = l1;
      const auto rep = ode::exit_time_experiment(spec);
      all = all && rep.all_exited;
      t_star = rep.t_star;
      for (const auto& r : rep.runs)
        csv.row({io::format_real(r.lambda1), io::format_real(r.gamma0), io::format_real(r.t_exit),
                 io::format_real(r.t_exit_normalized), ode::to_string(r.reason), status_word(r.exited)});
    }
    csv.close();
    out.plot("exit.csv: x=gamma0 y=t_exit_normalized log");
    auto sum = out.csv("summary.csv", {"t_star", "all_exited"});
    sum.row({io::format_real(t_star), status_word(all)});
    sum.close();
    return error_code::ok;
  }

  ode::ode_state init;
  const auto scales = cfg.reals("ode.scales");
  if (cfg.has("ode.beta")) {
    init.lambda = scales;
    init.beta = cfg.reals("ode.beta");
  } else {
    init = ode::seed_zero_energy(P, scales);
  }
  ode::events ev;
  ev.gamma_max = cfg.real("ode.gamma_max", ev.gamma_max);
  if (cfg.has("ode.L") || cfg.has("ode.epsilon")) ev.hyp = hypotheses_from(cfg);
  const double dt = cfg.real("ode.dt", ode::default_dt(P, init));
  const auto every = static_cast<std::size_t>(cfg.integer("ode.record_every", 1));
  const auto tr = ode::integrate(P, init, dt, cfg.real("ode.t_final"), ev, every);

  std::vector<std::string> header{"t"};
  for (std::size_t j = 1; j <= P.count(); ++j) header.push_back("lambda_" + std::to_string(j));
  for (std::size_t j = 1; j <= P.count(); ++j) header.push_back("beta_" + std::to_string(j));
  for (const char* h : {"gamma", "A", "B", "V", "H"}) header.emplace_back(h);
  auto csv = out.csv("trajectory.csv", header);
  double h_drift = 0.0;
  const double h0 = tr.diag.front().H;
  for (std::size_t k = 0; k < tr.states.size(); ++k) {
    const auto& s = tr.states[k];
    const auto& d = tr.diag[k];
    std::vector<double> row{s.t};
    row.insert(row.end(), s.lambda.begin(), s.lambda.end());
    row.insert(row.end(), s.beta.begin(), s.beta.end());
    for (double v : {d.gamma, d.A, d.B, d.V, d.H}) row.push_back(v);
    csv.row(row);
    h_drift = std::max(h_drift, std::abs(d.H - h0));
  }
  csv.close();
  out.plot("trajectory.csv: x=t y=gamma");
  out.plot("trajectory.csv: x=t y=H");

  const auto mono = ode::monotonicity(P, tr, C);
  auto mcsv = out.csv("monotonicity.csv", {"t", "b_margin", "a_prime_defect", "log_derivative", "a_positive"});
  for (const auto& m : mono.steps)
    mcsv.row({io::format_real(m.t), io::format_real(m.b_margin), io::format_real(m.a_prime_defect),
              io::format_real(m.log_derivative), status_word(m.a_positive)});
  mcsv.close();
  out.plot("monotonicity.csv: x=t y=b_margin");

  auto sum = out.csv("summary.csv", {"reason", "t_stop", "dt", "H0", "H_drift", "C", "two_minus", "C_required",
                                     "min_b_margin", "max_a_prime_defect", "min_log_derivative", "violations"});
  sum.row({ode::to_string(tr.reason), io::format_real(tr.t_stop), io::format_real(tr.dt), io::format_real(h0),
           io::format_real(h_drift), io::format_real(mono.C), io::format_real(mono.two_minus),
           io::format_real(mono.C_required), io::format_real(mono.min_b_margin),
           io::format_real(mono.max_a_prime_defect), io::format_real(mono.min_log_derivative),
           std::to_string(mono.violations.size())});
  sum.close();
  return error_code::ok;
}

std::vector<std::string> default_pointwise_ids(int N) {
  std::vector<std::string> ids;
  for (const auto& id : estimates::pointwise_ids()) {
    if (id == "L10" && N < 7) continue;
    if (id == "L10'" && N != 5) continue;
    ids.push_back(id);
  }
  return ids;
}

error_code run_estimates(const experiment_config& cfg, output_dir& out) {
  const std::string family = cfg.str("estimates.family");
  const int N = static_cast<int>(cfg.integer("estimates.N"));
  const auto ratios = cfg.reals("estimates.ratios", estimates::default_ratios());

  if (family == "pointwise") {
    const auto ids = cfg.words("estimates.ids", default_pointwise_ids(N));
    const auto samples = static_cast<std::size_t>(cfg.integer("estimates.samples", 20000));
    const auto seed = cfg.u64("run.seed");
    auto csv = out.csv("summary.csv", {"id", "N", "samples", "resolved", "empirical_constant", "half_constant",
                                       "stability", "counterexamples", "homogeneity_defect", "symmetry_defect",
                                       "passed"});
    for (const auto& id : ids) {
      const auto r = estimates::check_pointwise(id, N, samples, seed);
      csv.row({r.id, std::to_string(r.N), std::to_string(r.samples), std::to_string(r.resolved),
               io::format_real(r.empirical_constant), io::format_real(r.half_constant), io::format_real(r.stability),
               std::to_string(r.counterexamples), io::format_real(r.homogeneity_defect),
               io::format_real(r.symmetry_defect), status_word(r.passed)});
    }
    csv.close();
    return error_code::ok;
  }

  std::vector<estimates::estimate_report> reports;
  if (family == "crucial") {
    reports.push_back(estimates::check_crucial(cfg.real("estimates.a"), cfg.real("estimates.b"), N, ratios));
  } else if (family == "integral") {
    for (const auto& id : cfg.words("estimates.ids", estimates::integral_ids()))
      reports.push_back(estimates::check_integral(id, N, ratios));
  } else {
    const bool lw = cfg.flag("estimates.lambda_w", false);
    for (const auto& id : cfg.words("estimates.ids", estimates::spacetime_ids()))
      reports.push_back(estimates::check_spacetime(id, N, ratios, lw));
  }
  auto sweep = out.csv("sweep.csv", {"id", "N", "parameter", "lhs", "bound_shape"});
  auto sum = out.csv("summary.csv", {"id", "N", "fitted_exponent", "claimed_exponent", "empirical_constant",
                                     "truncation", "passed"});
  for (const auto& r : reports) {
    for (const auto& p : r.sweep)
      sweep.row({r.id, std::to_string(r.N), io::format_real(p.parameter), io::format_real(p.lhs),
                 io::format_real(p.bound_shape)});
    sum.row({r.id, std::to_string(r.N), io::format_real(r.fitted_exponent), io::format_real(r.claimed_exponent),
             io::format_real(r.empirical_constant), io::format_real(r.truncation), status_word(r.passed)});
  }
  sweep.close();
  sum.close();
  out.plot("sweep.csv: x=parameter y=lhs,bound_shape log group=id");
  return error_code::ok;
}

error_code run_exterior(const experiment_config& cfg, output_dir& out) {
  const auto grid = grid_from(cfg);
  const auto data = make_preset(grid, cfg);
  const auto radii = cfg.reals("exterior.radii");
  const auto fit = nonradiative::fit_exterior_profile(data, radii);
  std::vector<std::string> header{"R", "residual"};
  const std::size_t m = fit.theta.empty() ? 0 : fit.theta.front().size();
  for (std::size_t k = 1; k <= m; ++k) header.push_back("theta_" + std::to_string(k));
  auto csv = out.csv("profile.csv", header);
  for (std::size_t i = 0; i < fit.radii.size(); ++i) {
    std::vector<double> row{fit.radii[i], fit.residual[i]};
    row.insert(row.end(), fit.theta[i].begin(), fit.theta[i].end());
    csv.row(row);
  }
  csv.close();
  out.plot("profile.csv: x=R y=residual log");

  const double delta = cfg.real("exterior.delta", std::sqrt(h_norm_sq(data)));
  const auto bound = nonradiative::ext_scaling_bound(fit, grid->dim(), delta, cfg.real("exterior.lambda1", 1.0),
                                                     cfg.real("exterior.C", 1.0));
  auto sum = out.csv("summary.csv", {"ell", "k0", "ambiguous", "residual_slope", "predicted_slope", "bound_lhs",
                                     "bound_rhs", "bound_ratio", "violated"});
  sum.row({io::format_real(fit.ell), std::to_string(fit.k0), status_word(fit.ambiguous),
           io::format_real(fit.residual_slope), io::format_real(fit.predicted_slope), io::format_real(bound.lhs),
           io::format_real(bound.rhs), io::format_real(bound.ratio), status_word(bound.violated)});
  sum.close();
  return error_code::ok;
}

error_code dispatch(const experiment_config& cfg, output_dir& out) {
  const std::string kind = cfg.kind();
  if (kind == "constants") return run_constants(cfg, out);
  if (kind == "evolve") return run_evolve(cfg, out);
  if (kind == "channels") return run_channels(cfg, out);
  if (kind == "collide") return run_collide(cfg, out);
  if (kind == "modfit") return run_modfit(cfg, out);
  if (kind == "modode") return run_modode(cfg, out);
  if (kind == "estimates") return run_estimates(cfg, out);
  if (kind == "exterior") return run_exterior(cfg, out);
  throw error(error_code::validation, "unknown experiment kind " + kind);
}

std::string join_lines(const std::vector<std::string>& lines) {
  std::string out;
  for (const auto& l : lines) out += (out.empty() ? "" : "\n") + l;
  return out;
}

std::string render_manifest(const manifest& m) {
  std::ostringstream os;
  os << "config_hash = " << m.config_hash << "\n"
     << "version = " << m.version << "\n"
     << "kind = " << m.kind << "\n"
     << "started = " << m.started << "\n"
     << "finished = " << m.finished << "\n"
     << "status = " << static_cast<int>(m.status) << "\n"
     << "message = " << m.message << "\n";
  for (const auto& f : m.files) os << "file = " << f.sha256 << " " << f.name << "\n";
  return os.str();
}

}  // namespace

std::vector<preset_info> list_presets() {
  return {
      {"W", "data.lambda", "ground state W_(λ) at rest", false},
      {"LambdaW", "data.lambda, data.component", "ΛW_(λ) as position or ΛW_[λ] as velocity", false},
      {"bump", "data.center, data.width, data.amplitude, data.random, data.count",
       "Gaussian bump in position; with data.random, random bumps in both components", true},
      {"xi", "data.k, data.R, data.cut, data.width", "smoothly truncated Ξ_k element of P(R)", false},
      {"multisoliton", "data.signs, data.scales, data.alpha", "Σ ι_j W_(λ_j) with velocity Σ α_j ι_j ΛW_[λ_j]",
       false},
      {"W+perturbation", "data.lambda, data.epsilon, data.center, data.width",
       "W_(λ) plus ε times a Gaussian bump in position", false},
  };
}

field_pair make_preset(const grid_ptr& grid, const experiment_config& cfg) {
  const std::string preset = cfg.str("data.preset");
  field_pair p(grid);
  const double lambda = cfg.real("data.lambda", 1.0);
  const auto bump = [&](double c, double w) { return sample(grid, [=](double r) { return gaussian(r, c, w); }); };

  if (preset == "W") {
    p.f = gs::sample_W(grid, lambda);
  } else if (preset == "LambdaW") {
    if (cfg.str("data.component", std::string("position")) == "velocity")
      p.g = gs::sample_LambdaW_l2(grid, lambda);
    else
      p.f = gs::sample_LambdaW_h1(grid, lambda);
  } else if (preset == "bump") {
    const double c = cfg.real("data.center", 2.0);
    const double w = cfg.real("data.width", 0.5);
    const double a = cfg.real("data.amplitude", 1.0);
    if (cfg.flag("data.random", false)) {
      std::mt19937_64 rng(cfg.u64("run.seed"));
      std::uniform_real_distribution<double> u(0.0, 1.0);
      const long count = cfg.integer("data.count", 3);
      for (long k = 0; k < count; ++k) {
        for (radial_field* comp : {&p.f, &p.g}) {
          const double ck = u(rng) * 2.0 * c;
          const double wk = w * (0.5 + u(rng));
          const double ak = a * (2.0 * u(rng) - 1.0);
          *comp = *comp + ak * bump(ck, wk);
        }
      }
    } else {
      p.f = a * bump(c, w);
    }
  } else if (preset == "xi") {
    p = nonradiative::sample_xi(grid, static_cast<int>(cfg.integer("data.k")), cfg.real("data.R"),
                                cfg.real("data.cut"), cfg.real("data.width", 1.0));
  } else if (preset == "multisoliton") {
    const auto config = solitons_from(cfg, "data");
    const auto alpha = cfg.reals("data.alpha", std::vector<double>(config.count(), 0.0));
    require(alpha.size() == config.count(), error_code::validation, "data.alpha: one entry per soliton");
    p = modulation::construct(config, alpha, radial_field(grid), radial_field(grid));
  } else if (preset == "W+perturbation") {
    p.f = gs::sample_W(grid, lambda) + cfg.real("data.epsilon") *
                                           bump(cfg.real("data.center", 2.0 * lambda), cfg.real("data.width", 0.5 * lambda));
  } else {
    throw error(error_code::validation, "unknown preset " + preset);
  }
  return p;
}

manifest run(const experiment_config& cfg, const std::string& out_dir) {
  const auto issues = config::validate(cfg);
  if (!issues.empty()) throw error(error_code::validation, join_lines(issues));
  require(!out_dir.empty(), error_code::invalid_argument, "output directory not given");

  const fs::path dir(out_dir);
  std::error_code ec;
  const bool existed = fs::exists(dir, ec);
  if (existed) {
    require(fs::is_directory(dir, ec), error_code::io, out_dir + " exists and is not a directory");
    require(fs::is_empty(dir, ec), error_code::io, out_dir + " is not empty; refusing to overwrite another run");
  } else {
    fs::create_directories(dir, ec);
    require(!ec, error_code::io, "cannot create " + out_dir + ": " + ec.message());
  }

  manifest m;
  m.config_hash = cfg.hash();
  m.version = version();
  m.kind = cfg.kind();
  m.started = utc_now();
  output_dir out(out_dir);
  try {
    m.status = dispatch(cfg, out);
    if (m.status == error_code::unconverged) m.message = "diagnostic did not converge";
    out.text("config.ini", cfg.canonical());
    out.text("plot.txt", out.plot_text());
    for (const auto& name : out.files()) m.files.push_back({name, config::sha256_file(out.path(name))});
    std::sort(m.files.begin(), m.files.end(), [](const file_entry& a, const file_entry& b) { return a.name < b.name; });
    m.finished = utc_now();
    io::write_text(out.path("manifest.txt"), render_manifest(m));
  } catch (...) {
    out.remove_all();
    if (!existed) fs::remove(dir, ec);
    throw;
  }
  return m;
}

manifest read_manifest(const std::string& run_dir) {
  const std::string text = io::read_text((fs::path(run_dir) / "manifest.txt").string());
  manifest m;
  std::istringstream in(text);
  std::string line;
  std::map<std::string, std::string> kv;
  while (std::getline(in, line)) {
    const auto eq = line.find(" = ");
    require(eq != std::string::npos, error_code::io, "malformed manifest line: " + line);
    const std::string key = line.substr(0, eq);
    const std::string value = line.substr(eq + 3);
    if (key == "file") {
      const auto sp = value.find(' ');
      require(sp == 64, error_code::io, "malformed manifest file entry: " + value);
      m.files.push_back({value.substr(sp + 1), value.substr(0, sp)});
    } else {
      kv[key] = value;
    }
  }
  for (const char* k : {"config_hash", "version", "kind", "started", "finished", "status"})
    require(kv.count(k) > 0, error_code::io, std::string("manifest lacks ") + k);
  m.config_hash = kv["config_hash"];
  m.version = kv["version"];
  m.kind = kv["kind"];
  m.started = kv["started"];
  m.finished = kv["finished"];
  m.status = static_cast<error_code>(std::stoi(kv["status"]));
  m.message = kv["message"];
  return m;
}

replay_result replay(const std::string& run_dir, const std::string& out_dir) {
  replay_result r;
  r.original = read_manifest(run_dir);
  const auto cfg = experiment_config::load((fs::path(run_dir) / "config.ini").string());
  require(cfg.hash() == r.original.config_hash, error_code::validation,
          "config.ini does not match the manifest hash (" + cfg.hash() + " vs " + r.original.config_hash + ")");
  r.rerun = run(cfg, out_dir);
  std::map<std::string, std::string> fresh;
  for (const auto& f : r.rerun.files) fresh[f.name] = f.sha256;
  for (const auto& f : r.original.files) {
    const auto it = fresh.find(f.name);
    if (it == fresh.end() || it->second != f.sha256) r.mismatched.push_back(f.name);
    if (it != fresh.end()) fresh.erase(it);
  }
  for (const auto& [name, hash] : fresh) r.mismatched.push_back(name);
  r.outputs_match = r.mismatched.empty() && r.rerun.status == r.original.status;
  return r;
}

}  // namespace nlwlab::experiment
