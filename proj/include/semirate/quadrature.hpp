#pragma once

#include <complex>
#include <functional>

namespace semirate::quad {

struct Result {
  double value = 0.0;
  double error = 0.0;  // absolute error estimate
};

// Adaptive Gauss-Kronrod on a finite interval. Integrand must be bounded.
Result integrate(const std::function<double(double)>& f, double a, double b,
                 double abs_tol = 1e-11);

// tanh-sinh rule for finite intervals; tolerates integrable endpoint
// singularities like (x-a)^{p}, p > -1.
Result integrate_singular(const std::function<double(double)>& f, double a,
                          double b, double abs_tol = 1e-11);

// exp-sinh rule on [a, inf). Integrand must decay.
Result integrate_to_inf(const std::function<double(double)>& f, double a,
                        double abs_tol = 1e-11);

std::complex<double> integrate_complex(
    const std::function<std::complex<double>(double)>& f, double a, double b,
    double abs_tol = 1e-11, bool singular_endpoints = false);

// Scans [a,b] on a log-spaced grid (augmented with the given breakpoints),
// brackets every sign change and bisects each to machine precision.
std::vector<double> sign_change_roots(const std::function<double(double)>& f,
                                      double a, double b, int scan_points = 4096,
                                      const std::vector<double>& breakpoints = {});

// One-dimensional minimisation by golden-section on [a,b].
double golden_min(const std::function<double(double)>& f, double a, double b,
                  double tol = 1e-10);

}  // namespace semirate::quad
