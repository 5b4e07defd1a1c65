#include "nlwlab/quadrature.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include <boost/math/quadrature/exp_sinh.hpp>
#include <boost/math/quadrature/gauss.hpp>
#include <boost/math/quadrature/gauss_kronrod.hpp>

#include "nlwlab/errors.hpp"
#include "nlwlab/radial.hpp"

namespace nlwlab {

double log_integral(const radial_fn& f, double a, double b, double rel_tol) {
  require_domain(a > 0.0 && b > a, "log_integral needs 0 < a < b");
  auto g = [&](double x) {
    const double r = std::exp(x);
    return f(r) * r;
  };
  // split into unit-length pieces in log r so each panel sees one scale
  const double la = std::log(a), lb = std::log(b);
  const int pieces = std::max(1, static_cast<int>(std::ceil(lb - la)));
  const double step = (lb - la) / pieces;
  double s = 0.0;
  for (int k = 0; k < pieces; ++k) {
    const double x0 = la + k * step;
    const double x1 = k + 1 == pieces ? lb : x0 + step;
    s += boost::math::quadrature::gauss_kronrod<double, 31>::integrate(g, x0, x1, 12, rel_tol);
  }
  return s;
}

double tail_integral(const radial_fn& f, double R, double rel_tol) {
  require_domain(R > 0.0, "tail_integral needs R > 0");
  boost::math::quadrature::exp_sinh<double> integrator;
  // far-out evaluations can overflow to inf*0; those points carry no mass
  return integrator.integrate(
      [&](double r) {
        const double v = f(r);
        return std::isfinite(v) ? v : 0.0;
      },
      R, std::numeric_limits<double>::infinity(),
                              rel_tol);
}

double radial_integral(int N, const radial_fn& f, std::vector<double> breakpoints, double rel_tol) {
  check_dimension(N);
  std::erase_if(breakpoints, [](double b) { return !(b > 0.0) || !std::isfinite(b); });
  if (breakpoints.empty()) breakpoints.push_back(1.0);
  std::sort(breakpoints.begin(), breakpoints.end());
  const double lo = breakpoints.front() * 1e-14;
  const double hi = breakpoints.back() * 1e4;
  auto weighted = [&](double r) { return f(r) * std::pow(r, N - 1); };
  std::vector<double> pts{lo};
  pts.insert(pts.end(), breakpoints.begin(), breakpoints.end());
  pts.push_back(hi);
  double s = 0.0;
  for (std::size_t k = 0; k + 1 < pts.size(); ++k)
    if (pts[k + 1] > pts[k]) s += log_integral(weighted, pts[k], pts[k + 1], rel_tol);
  s += tail_integral(weighted, hi, rel_tol);
  return sphere_area(N) * s;
}

double mapped_tail(int N, const radial_fn& f, double R) {
  require_domain(R > 0.0, "mapped_tail needs R > 0");
  auto g = [&](double u) {
    if (u <= 0.0) return 0.0;
    const double r = 1.0 / u;
    return f(r) * std::pow(r, N - 1) / (u * u);
  };
  return sphere_area(N) * boost::math::quadrature::gauss<double, 30>::integrate(g, 0.0, 1.0 / R);
}

}  // namespace nlwlab
