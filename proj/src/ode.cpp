#include "nlwlab/ode.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "nlwlab/errors.hpp"
#include "nlwlab/ground_state.hpp"

namespace nlwlab::ode {

ode_params ode_params::for_dimension(int N, std::vector<int> signs) {
  const auto& c = ground_state::reference_constants(N);
  require_domain(!signs.empty(), "the modulation system needs J >= 1");
  for (int s : signs) require_domain(s == 1 || s == -1, "signs must be +1 or -1");
  return {N, std::move(signs), c.kappa0, c.kappa1, c.kappa2};
}

std::vector<double> theta_weights(const std::vector<int>& signs) {
  std::vector<double> th(signs.size());
  for (std::size_t j = 0; j < signs.size(); ++j) th[j] = j == 0 ? 1.0 : th[j - 1] * (signs[j] * signs[j - 1] == 1 ? 2.0 : 0.5);
  return th;
}

namespace {

double power(const ode_params& P) { return 0.5 * (P.N - 2); }

// ι_jι_{j+1}(λ_{j+1}/λ_j)^p for j = 0..J-2
std::vector<double> couplings(const ode_params& P, const std::vector<double>& lam) {
  std::vector<double> c;
  for (std::size_t j = 0; j + 1 < lam.size(); ++j)
    c.push_back(P.signs[j] * P.signs[j + 1] * std::pow(lam[j + 1] / lam[j], power(P)));
  return c;
}

void check_state(const ode_params& P, const ode_state& s) {
  require(s.lambda.size() == P.count() && s.beta.size() == P.count(), error_code::invalid_argument,
          "state size does not match the sign pattern");
}

ode_state axpy(const ode_state& s, double h, const vector_field& k) {
  ode_state o = s;
  for (std::size_t j = 0; j < s.lambda.size(); ++j) {
    o.lambda[j] += h * k.dlambda[j];
    o.beta[j] += h * k.dbeta[j];
  }
  o.t += h;
  return o;
}

ode_state rk4_step(const ode_params& P, const ode_state& s, double h) {
  const auto k1 = rhs(P, s);
  const auto k2 = rhs(P, axpy(s, 0.5 * h, k1));
  const auto k3 = rhs(P, axpy(s, 0.5 * h, k2));
  const auto k4 = rhs(P, axpy(s, h, k3));
  ode_state o = s;
  for (std::size_t j = 0; j < s.lambda.size(); ++j) {
    o.lambda[j] += h / 6.0 * (k1.dlambda[j] + 2.0 * k2.dlambda[j] + 2.0 * k3.dlambda[j] + k4.dlambda[j]);
    o.beta[j] += h / 6.0 * (k1.dbeta[j] + 2.0 * k2.dbeta[j] + 2.0 * k3.dbeta[j] + k4.dbeta[j]);
  }
  o.t = s.t + h;
  return o;
}

struct margin {
  double value;
  stop_reason reason;
};

// Smallest event margin; negative (or NaN mapped to −∞) means an event fired.
margin event_margin(const ode_params& P, const ode_state& s, const events& ev, double lambda1_0) {
  margin m{std::numeric_limits<double>::infinity(), stop_reason::horizon};
  auto take = [&](double v, stop_reason r) {
    if (std::isnan(v)) v = -std::numeric_limits<double>::infinity();
    if (v < m.value) m = {v, r};
  };
  const auto& lam = s.lambda;
  double order = lam.back();
  for (std::size_t j = 1; j < lam.size(); ++j) order = std::min(order, (lam[j - 1] - lam[j]) / lam[j - 1]);
  take(order, stop_reason::ordering);
  if (order <= 0.0) return m;
  const double g = gamma_of(lam);
  if (lam.size() > 1) take(ev.gamma_max - g, stop_reason::gamma_max);
  if (ev.lambda_min > 0.0) take(lam.back() - ev.lambda_min, stop_reason::lambda_min);
  if (ev.hyp) {
    if (lam.size() > 1) take(ev.hyp->epsilon - g, stop_reason::hypothesis_gamma);
    const double lower = ev.hyp->C * std::pow(g, power(P)) * std::pow(lam[0] / lambda1_0, ev.hyp->a);
    take((lower - ev.hyp->L) / std::max(ev.hyp->L, 1e-300), stop_reason::hypothesis_lower_bound);
  }
  return m;
}

}  // namespace

double gamma_of(const std::vector<double>& lambda) {
  double g = 0.0;
  for (std::size_t j = 1; j < lambda.size(); ++j) g = std::max(g, lambda[j] / lambda[j - 1]);
  return g;
}

vector_field rhs(const ode_params& P, const ode_state& s) {
  check_state(P, s);
  const std::size_t J = P.count();
  const auto c = couplings(P, s.lambda);
  vector_field v{std::vector<double>(J), std::vector<double>(J)};
  for (std::size_t j = 0; j < J; ++j) {
    v.dlambda[j] = P.kappa2 * s.beta[j];
    const double next = j + 1 < J ? c[j] : 0.0;
    const double prev = j > 0 ? c[j - 1] : 0.0;
    v.dbeta[j] = -P.kappa0 * (next - prev) / s.lambda[j];
  }
  return v;
}

double first_integral(const ode_params& P, const ode_state& s) {
  check_state(P, s);
  double kin = 0.0;
  for (double b : s.beta) kin += 0.5 * b * b;
  double pot = 0.0;
  for (double c : couplings(P, s.lambda)) pot += c;
  return kin - P.kappa1 * pot;
}

diagnostics diagnose(const ode_params& P, const ode_state& s) {
  const auto th = theta_weights(P.signs);
  const auto v = rhs(P, s);
  diagnostics d;
  d.gamma = gamma_of(s.lambda);
  for (std::size_t j = 0; j < P.count(); ++j) {
    d.A += th[j] * s.lambda[j] * s.beta[j];
    d.B += th[j] * s.lambda[j] * v.dbeta[j];
    d.V += th[j] * s.lambda[j] * s.lambda[j];
  }
  d.H = first_integral(P, s);
  return d;
}

std::string to_string(stop_reason r) {
  switch (r) {
    case stop_reason::horizon: return "horizon";
    case stop_reason::gamma_max: return "gamma_max";
    case stop_reason::ordering: return "ordering";
    case stop_reason::lambda_min: return "lambda_min";
    case stop_reason::hypothesis_gamma: return "hypothesis_gamma";
    case stop_reason::hypothesis_lower_bound: return "hypothesis_lower_bound";
  }
  return "unknown";
}

double default_dt(const ode_params& P, const ode_state& s) {
  const auto v = rhs(P, s);
  double rate = 0.0;
  for (std::size_t j = 0; j < P.count(); ++j) {
    rate = std::max(rate, std::abs(v.dlambda[j]) / s.lambda[j]);
    rate = std::max(rate, std::sqrt(P.kappa2 * std::abs(v.dbeta[j]) / s.lambda[j]));
  }
  return rate > 0.0 ? 1e-3 / rate : 1e-3 * s.lambda.front();
}

trajectory integrate(const ode_params& P, const ode_state& init, double dt, double t_final, const events& ev,
                     std::size_t record_every) {
  check_state(P, init);
  require(dt > 0.0 && std::isfinite(dt), error_code::invalid_argument, "dt must be positive");
  require(t_final >= init.t, error_code::invalid_argument, "t_final precedes the initial time");
  require(record_every >= 1, error_code::invalid_argument, "record_every must be >= 1");
  const double lambda1_0 = init.lambda.front();
  trajectory tr;
  tr.dt = dt;
  auto record = [&](const ode_state& s) {
    tr.states.push_back(s);
    tr.diag.push_back(diagnose(P, s));
  };

  ode_state s = init;
  if (auto m = event_margin(P, s, ev, lambda1_0); m.value < 0.0) {
    tr.reason = m.reason;
    tr.t_stop = s.t;
    record(s);
    return tr;
  }
  record(s);
  const auto steps = static_cast<std::size_t>(std::ceil((t_final - init.t) / dt - 1e-9));
  for (std::size_t n = 1; n <= steps; ++n) {
    const double h = std::min(dt, t_final - s.t);
    ode_state next = rk4_step(P, s, h);
    for (double b : next.beta)
      require(std::isfinite(b), error_code::numerical, "non-finite modulation state (step rejected)");
    if (auto m = event_margin(P, next, ev, lambda1_0); m.value < 0.0) {
      double lo = 0.0;
      double hi = h;
      for (int it = 0; it < 60 && hi - lo > 1e-14 * std::max(1.0, std::abs(s.t)); ++it) {
        const double mid = 0.5 * (lo + hi);
        if (event_margin(P, rk4_step(P, s, mid), ev, lambda1_0).value < 0.0) {
          hi = mid;
        } else {
          lo = mid;
        }
      }
      const ode_state at = rk4_step(P, s, hi);
      tr.reason = event_margin(P, at, ev, lambda1_0).reason;
      tr.t_stop = at.t;
      record(at);
      return tr;
    }
    s = std::move(next);
    if (n % record_every == 0 || n == steps) record(s);
  }
  tr.reason = stop_reason::horizon;
  tr.t_stop = s.t;
  return tr;
}

ode_state seed_zero_energy(const ode_params& P, std::vector<double> lambda, std::vector<double> direction) {
  const std::size_t J = P.count();
  require(lambda.size() == J, error_code::invalid_argument, "one scale per sign");
  if (direction.empty()) {
    direction.assign(J, 0.0);
    direction.back() = 1.0;
  }
  require(direction.size() == J, error_code::invalid_argument, "direction has the wrong size");
  double nrm = 0.0;
  for (double d : direction) nrm += d * d;
  require_domain(nrm > 0.0, "direction must be non-zero");
  double pot = 0.0;
  for (double c : couplings(P, lambda)) pot += c;
  require_domain(pot >= 0.0, "H = 0 needs a non-negative interaction potential");
  const double b = std::sqrt(2.0 * P.kappa1 * pot / nrm);
  ode_state s;
  s.lambda = std::move(lambda);
  for (double d : direction) s.beta.push_back(b * d);
  return s;
}

double two_minus(double kappa2, double C) {
  require_domain(kappa2 > 0.0 && C > 0.0, "two_minus needs positive kappa2 and C");
  return 2.0 / ((1.0 / kappa2 + 1.0 / C) * (kappa2 + 1.0 / C));
}

monotonicity_report monotonicity(const ode_params& P, const trajectory& tr, double C) {
  const auto th = theta_weights(P.signs);
  const std::size_t J = P.count();
  const double p = power(P);
  monotonicity_report rep;
  rep.C = C;
  rep.two_minus = two_minus(P.kappa2, C);
  rep.min_b_margin = std::numeric_limits<double>::infinity();
  rep.min_log_derivative = std::numeric_limits<double>::infinity();
  for (const auto& s : tr.states) {
    const auto v = rhs(P, s);
    const auto d = diagnose(P, s);
    monotonicity_step st;
    st.t = s.t;
    const double bound = P.kappa0 * std::pow(d.gamma, p) / std::ldexp(1.0, static_cast<int>(J) + 1);
    st.b_margin = d.B - bound;
    if (bound > 0.0) rep.min_b_margin = std::min(rep.min_b_margin, st.b_margin / bound);

    double Ap = 0.0, Vp = 0.0, beta_sq = 0.0, B_closed = 0.0;
    for (std::size_t j = 0; j < J; ++j) {
      Ap += th[j] * (v.dlambda[j] * s.beta[j] + s.lambda[j] * v.dbeta[j]);
      Vp += 2.0 * th[j] * s.lambda[j] * v.dlambda[j];
      beta_sq += th[j] * s.beta[j] * s.beta[j];
      if (j > 0) B_closed += P.signs[j] * P.signs[j - 1] * std::pow(s.lambda[j] / s.lambda[j - 1], p) * (th[j] - th[j - 1]);
    }
    B_closed *= P.kappa0;
    st.a_prime_defect = std::abs(Ap - P.kappa2 * beta_sq - B_closed) / std::max(std::abs(Ap), 1e-300);
    rep.max_a_prime_defect = std::max(rep.max_a_prime_defect, st.a_prime_defect);
    if (d.B > 0.0) rep.C_required = std::max(rep.C_required, std::max(1.0, P.kappa2 * P.kappa2) * beta_sq / d.B);

    st.a_positive = d.A > 0.0;
    if (st.a_positive) {
      const double x = rep.two_minus * Ap / d.A;
      const double y = Vp / d.V;
      const double den = std::abs(x) + std::abs(y);
      st.log_derivative = den > 0.0 ? (x - y) / den : 0.0;
      rep.min_log_derivative = std::min(rep.min_log_derivative, st.log_derivative);
      if (st.log_derivative < -1e-8) rep.violations.push_back(s.t);
    }
    rep.steps.push_back(st);
  }
  return rep;
}

double t_star(double L, double a, double tm) {
  require_domain(L > 0.0 && a > 0.0 && tm > 0.0 && tm < 2.0, "T* needs L > 0, a > 0 and 0 < 2^- < 2");
  const double m = std::pow(L, a + 1.0);
  const double M = std::pow(L, -2.0 * (2.0 + tm * a) / (2.0 - tm));
  const double root = std::sqrt(1.0 / L + std::sqrt(M) / m + std::sqrt(M) / (4.0 * m * m)) + std::pow(M, 0.25) / (2.0 * m);
  return root * root;
}

exit_report exit_time_experiment(const exit_spec& spec) {
  const auto P = ode_params::for_dimension(spec.N, spec.signs);
  require(!spec.gamma0.empty(), error_code::invalid_argument, "exit experiment needs at least one gamma0");
  require_domain(spec.lambda1 > 0.0 && spec.horizon > 0.0, "lambda1 and horizon must be positive");
  exit_report rep;
  rep.all_exited = true;
  for (double g0 : spec.gamma0) {
    require_domain(g0 > 0.0 && g0 < 1.0, "gamma0 must lie in (0, 1)");
    std::vector<double> lam{spec.lambda1};
    while (lam.size() < P.count()) lam.push_back(lam.back() * g0);
    const auto init = seed_zero_energy(P, lam);
    events ev;
    ev.gamma_max = 1.0;
    ev.hyp = spec.hyp;
    const auto tr = integrate(P, init, default_dt(P, init), spec.horizon * spec.lambda1, ev, 1u << 30);
    exit_run run;
    run.gamma0 = g0;
    run.lambda1 = spec.lambda1;
    run.t_exit = tr.t_stop;
    run.t_exit_normalized = tr.t_stop / spec.lambda1;
    run.reason = tr.reason;
    run.exited = tr.reason != stop_reason::horizon;
    rep.all_exited = rep.all_exited && run.exited;
    rep.max_normalized = std::max(rep.max_normalized, run.t_exit_normalized);
    rep.runs.push_back(run);
  }
  if (spec.hyp.L > 0.0) rep.t_star = t_star(spec.hyp.L, spec.hyp.a, two_minus(P.kappa2, spec.C_monotonicity));
  return rep;
}

}  // namespace nlwlab::ode
