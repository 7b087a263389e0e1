#pragma once

// Test-only oracles, independent of the library's production paths.

#include <cmath>
#include <functional>
#include <vector>

namespace oracle {

// \int_a^b e^{-s} s^k ds via the finite incomplete-gamma sum
// Gamma(k+1, x) = k! e^{-x} sum_{j<=k} x^j/j!. Exact up to rounding.
inline double exp_poly_moment(int k, double a, double b) {
  auto upper = [k](double x) {
    double fact = 1.0, sum = 1.0, pow = 1.0;
    for (int j = 1; j <= k; ++j) {
      fact *= j;
      pow *= x;
      double jf = 1.0;
      for (int i = 1; i <= j; ++i) jf *= i;
      sum += pow / jf;
    }
    return fact * std::exp(-x) * sum;
  };
  return upper(a) - upper(b);
}

// \int_a^b e^{-s} P(s) ds for P given by coefficients (ascending powers)
inline double exp_poly_integral(const std::vector<double>& coeffs, double a,
                                double b) {
  double total = 0.0;
  for (size_t k = 0; k < coeffs.size(); ++k)
    total += coeffs[k] * exp_poly_moment(static_cast<int>(k), a, b);
  return total;
}

// ascending-power coefficients of L^{(1)}_k from the recurrence; exact in
// double for small k (used with k <= 7)
inline std::vector<double> laguerre_l1_coeffs(int k) {
  std::vector<double> lm1{1.0};
  if (k == 0) return lm1;
  std::vector<double> l{2.0, -1.0};
  for (int n = 1; n < k; ++n) {
    std::vector<double> lp1(n + 2, 0.0);
    for (int j = 0; j <= n; ++j) {
      lp1[j] += (2.0 * n + 2.0) * l[j];
      lp1[j + 1] -= l[j];
    }
    for (size_t j = 0; j < lm1.size(); ++j) lp1[j] -= (n + 1.0) * lm1[j];
    for (double& c : lp1) c /= (n + 1.0);
    lm1 = l;
    l = lp1;
  }
  return l;
}

inline double eval_poly(const std::vector<double>& coeffs, double s) {
  double v = 0.0;
  for (size_t k = coeffs.size(); k-- > 0;) v = v * s + coeffs[k];
  return v;
}

// second-order one-sided finite differences at 0+ with one Richardson step
inline double fd_first_derivative(const std::function<double(double)>& f,
                                  double h) {
  auto d = [&](double hh) {
    return (-3.0 * f(0.0) + 4.0 * f(hh) - f(2.0 * hh)) / (2.0 * hh);
  };
  double d1 = d(h), d2 = d(h / 2.0);
  return (4.0 * d2 - d1) / 3.0;
}

inline double fd_second_derivative(const std::function<double(double)>& f,
                                   double h) {
  auto d = [&](double hh) {
    return (2.0 * f(0.0) - 5.0 * f(hh) + 4.0 * f(2.0 * hh) - f(3.0 * hh)) /
           (hh * hh);
  };
  double d1 = d(h), d2 = d(h / 2.0);
  return (4.0 * d2 - d1) / 3.0;
}

}  // namespace oracle
