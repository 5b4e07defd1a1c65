#pragma once

#include <functional>
#include <vector>

namespace nlwlab {

using radial_fn = std::function<double(double)>;

// ∫_a^b f(r) dr for 0 < a < b < ∞, adaptive Gauss–Kronrod in log r.
double log_integral(const radial_fn& f, double a, double b, double rel_tol = 1e-12);

// ∫_R^∞ f(r) dr for R > 0, integrand decaying at least like r^{-1-ε}.
double tail_integral(const radial_fn& f, double R, double rel_tol = 1e-12);

// ω_{N-1} ∫_0^∞ f(r) r^{N-1} dr, split at the given breakpoints (scales of the integrand).
double radial_integral(int N, const radial_fn& f, std::vector<double> breakpoints, double rel_tol = 1e-12);

// ω_{N-1} ∫_R^∞ f(r) r^{N-1} dr via the substitution u = 1/r and a fixed 30-point Gauss rule;
// accurate when f is analytic in 1/r beyond R.
double mapped_tail(int N, const radial_fn& f, double R);

}  // namespace nlwlab
