#include "semirate/specfun.hpp"

#include <Eigen/Dense>
#include <boost/math/special_functions/gamma.hpp>

#include <algorithm>
#include <cmath>
#include <limits>

#include "semirate/errors.hpp"
#include "semirate/quadrature.hpp"

namespace semirate::specfun {

namespace {

// L^{(a)}_k via (n+1) L_{n+1} = (2n+a+1-s) L_n - (n+a) L_{n-1}
double laguerre_rec(int alpha, int k, double s) {
  if (k < 0) return 0.0;
  double lm1 = 1.0;
  if (k == 0) return lm1;
  double l = 1.0 + alpha - s;
  for (int n = 1; n < k; ++n) {
    double lp1 = ((2.0 * n + alpha + 1.0 - s) * l - (n + alpha) * lm1) / (n + 1.0);
    lm1 = l;
    l = lp1;
  }
  return l;
}

bool near_integer(double x, double tol = 1e-9) {
  return std::abs(x - std::round(x)) < tol;
}

// Neumaier compensated summation.
struct Kahan {
  double sum = 0.0, c = 0.0;
  void add(double x) {
    double t = sum + x;
    if (std::abs(sum) >= std::abs(x))
      c += (sum - t) + x;
    else
      c += (x - t) + sum;
    sum = t;
  }
  double get() const { return sum + c; }
};

// Large-s value of q_beta: only the algebraic branch of the 1F1 asymptotics
// survives the e^{-s} prefactor at the switch point,
//   q_beta(s) ~ beta/Gamma(1-beta) s^{-1-beta} sum_k (1+beta)_k (beta)_k / (k! s^k).
// Near integer beta 1/Gamma(1-beta) vanishes and the tail is exponential;
// integer beta is dispatched to the Laguerre form before reaching this.
double q_beta_asymptotic(double beta, double s, int terms = 6) {
  if (near_integer(beta)) return 0.0;
  double rg = 1.0 / boost::math::tgamma(1.0 - beta);  // may be negative
  double term = 1.0, sum = 1.0;
  for (int k = 1; k < terms; ++k) {
    term *= (beta + k) * (beta + k - 1.0) / (k * s);
    sum += term;
  }
  return beta * rg * std::pow(s, -1.0 - beta) * sum;
}

double q_beta_switch(double beta) {
  // ascending series is safe well beyond this; asymptotics need s >> beta^2
  return std::max(60.0, 4.0 * beta * beta + 40.0);
}

struct SignedInterval {
  double lo, hi;
};

}  // namespace

double laguerre_l1(int k, double s) {
  if (k < 0) throw ConfigError("laguerre_l1: negative degree");
  return laguerre_rec(1, k, s);
}

std::vector<double> laguerre_l1_roots(int k) {
  if (k <= 0) return {};
  // Zeros of L^{(1)}_k are the eigenvalues of the symmetric Jacobi matrix of
  // the recurrence (the orthogonal-polynomial form of the companion matrix).
  Eigen::MatrixXd J = Eigen::MatrixXd::Zero(k, k);
  for (int n = 0; n < k; ++n) {
    J(n, n) = 2.0 * n + 2.0;  // a = 1
    if (n + 1 < k) {
      double off = std::sqrt((n + 1.0) * (n + 2.0));
      J(n, n + 1) = off;
      J(n + 1, n) = off;
    }
  }
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(J);
  std::vector<double> roots(es.eigenvalues().data(), es.eigenvalues().data() + k);
  std::sort(roots.begin(), roots.end());
  // Newton polish with analytic derivative d/ds L^{(1)}_k = -L^{(2)}_{k-1}
  for (double& r : roots) {
    for (int it = 0; it < 4; ++it) {
      double f = laguerre_rec(1, k, r);
      double df = -laguerre_rec(2, k - 1, r);
      if (df == 0.0) break;
      double step = f / df;
      r -= step;
      if (std::abs(step) < 1e-14 * std::max(1.0, r)) break;
    }
  }
  return roots;
}

double kummer_1f1(double a, double b, double s) {
  if (b <= 0.0 && near_integer(b))
    throw ConfigError("kummer_1f1: b must not be a nonpositive integer");
  if (s == 0.0 || a == 0.0) return 1.0;
  if (s < 0.0) throw ConfigError("kummer_1f1: s >= 0 required");

  // terminating series, exact
  if (a <= 0.0 && near_integer(a)) {
    int m = static_cast<int>(-std::llround(a));
    long double term = 1.0L, sum = 1.0L;
    for (int n = 1; n <= m; ++n) {
      term *= (a + n - 1.0L) / ((b + n - 1.0L) * n) * s;
      sum += term;
    }
    return static_cast<double>(sum);
  }

  if (s > 690.0)  // e^s would overflow inside the sum
    throw NumericalError("kummer_1f1: argument too large for series evaluation");

  long double term = 1.0L, peak = 1.0L;
  Kahan sum;
  sum.add(1.0);
  for (int n = 1; n < 100000; ++n) {
    term *= (a + n - 1.0L) / ((b + n - 1.0L) * n) * s;
    sum.add(static_cast<double>(term));
    peak = std::max(peak, std::abs(term));
    if (std::abs(term) < 1e-18L * std::max<long double>(1.0L, std::abs(sum.get())) &&
        n > s)
      break;
    if (n == 99999)
      throw NumericalError("kummer_1f1: series did not converge");
  }
  double result = sum.get();
  // cancellation report: digits lost relative to target accuracy
  if (peak * 1e-18L > std::abs(result) * 1e-10L && std::abs(result) > 0.0)
    throw NumericalError("kummer_1f1: catastrophic cancellation in series");
  return result;
}

double bessel_i1(double x) {
  if (x < 0.0) return -bessel_i1(-x);
  if (x < 20.0) {
    double half = 0.5 * x;
    double term = half;  // m = 0: (x/2)/(0! 1!)
    double sum = term;
    double h2 = half * half;
    for (int m = 1; m < 200; ++m) {
      term *= h2 / (m * (m + 1.0));
      sum += term;
      if (term < 1e-18 * sum) break;
    }
    return sum;
  }
  // asymptotic: I_1(x) ~ e^x/sqrt(2 pi x) (1 - 3/(8x) - 15/(128x^2) - ...)
  double ix = 1.0 / x;
  double series = 1.0 - 0.375 * ix - 0.1171875 * ix * ix -
                  0.1025390625 * ix * ix * ix;
  return std::exp(x) / std::sqrt(2.0 * M_PI * x) * series;
}

double q_beta(double beta, double s) {
  if (beta <= 0.0 || s <= 0.0) throw ConfigError("q_beta: beta > 0, s > 0 required");
  if (near_integer(beta)) {
    int m = static_cast<int>(std::llround(beta));
    return std::exp(-s) * laguerre_l1(m - 1, s);
  }
  if (s > q_beta_switch(beta)) return q_beta_asymptotic(beta, s);
  return beta * std::exp(-s) * kummer_1f1(1.0 - beta, 2.0, s);
}

namespace {

// |q_beta| integrated over [0, S] with exact sign splits, S past the last root.
double abs_q_integral_finite(double beta, double lo, double hi,
                             const std::vector<double>& roots, double* err) {
  std::vector<double> cuts;
  cuts.push_back(lo);
  for (double r : roots)
    if (r > lo && r < hi) cuts.push_back(r);
  cuts.push_back(hi);
  double total = 0.0, total_err = 0.0;
  for (size_t i = 0; i + 1 < cuts.size(); ++i) {
    auto f = [&](double s) { return q_beta(beta, s); };
    auto piece = quad::integrate(f, cuts[i], cuts[i + 1], 1e-12);
    total += std::abs(piece.value);
    total_err += piece.error;
  }
  if (err) *err += total_err;
  return total;
}

}  // namespace

double c_beta(double beta, double* err_estimate) {
  if (beta <= 0.0) throw ConfigError("c_beta: beta > 0 required");
  double err = 0.0;
  double integral = 0.0;

  if (near_integer(beta)) {
    int m = static_cast<int>(std::llround(beta));
    integral = laguerre_abs_mean(m);
    err = 1e-12 * integral;
  } else {
    // roots of 1F1(1-beta; 2; s): at most ceil(beta)-1 of them, all moderate
    double scan_hi = 8.0 * beta + 60.0;
    auto f = [&](double s) { return q_beta(beta, s); };
    auto roots = quad::sign_change_roots(f, 1e-12, scan_hi, 4096);
    double S = q_beta_switch(beta) * 1.5;
    integral = abs_q_integral_finite(beta, 0.0, S, roots, &err);
    // polynomial tail, integrated termwise from the asymptotic series
    double rg = std::abs(1.0 / boost::math::tgamma(1.0 - beta));
    double term = 1.0, tail = 0.0;
    for (int k = 0; k < 4; ++k) {
      if (k > 0) term *= (beta + k) * (beta + k - 1.0) / (k * S);
      tail += term * std::pow(S, -beta - k) / (beta + k);
    }
    double omitted = term * ((beta + 4) * (beta + 3) / (4.0 * S)) *
                     std::pow(S, -beta - 4) / (beta + 4);
    integral += beta * rg * tail;
    err += beta * rg * std::abs(omitted) + 1e-13;
  }

  if (err_estimate) *err_estimate = err;
  return 1.0 + integral;
}

double laguerre_abs_mean(int m) {
  if (m < 1) throw ConfigError("laguerre_abs_mean: m >= 1 required");
  auto roots = laguerre_l1_roots(m - 1);
  auto f = [&](double s) { return std::exp(-s) * laguerre_l1(m - 1, s); };
  std::vector<double> cuts;
  cuts.push_back(0.0);
  for (double r : roots) cuts.push_back(r);
  double total = 0.0;
  for (size_t i = 0; i + 1 < cuts.size(); ++i)
    total += std::abs(quad::integrate(f, cuts[i], cuts[i + 1], 1e-13).value);
  total += std::abs(quad::integrate_to_inf(f, cuts.back(), 1e-13).value);
  return total;
}

double laguerre_sq_mean_unit(int m) {
  if (m < 1) throw ConfigError("laguerre_sq_mean_unit: m >= 1 required");
  auto f = [&](double s) {
    double l = laguerre_l1(m - 1, s);
    return std::exp(-s) * l * l;
  };
  return quad::integrate(f, 0.0, 1.0, 1e-13).value;
}

double watson_identity_residual(int m, double s) {
  if (m < 1 || s <= 0.0)
    throw ConfigError("watson_identity_residual: m >= 1, s > 0 required");
  double l = laguerre_l1(m - 1, s);
  double lhs = M_PI / (2.0 * m) * std::exp(-s) * l * l;
  auto f = [&](double theta) {
    double c2 = std::cos(0.5 * theta);
    c2 *= c2;
    double sinth = std::sin(theta);
    return laguerre_l1(m - 1, 4.0 * s * c2) * std::exp(-2.0 * s * c2) *
           (std::sin(s * sinth) / s) * sinth;
  };
  double rhs = quad::integrate(f, 0.0, M_PI, 1e-13).value;
  return std::abs(lhs - rhs);
}

void CbetaTable::build(const std::vector<double>& betas) {
  for (double b : betas) {
    CbetaEntry e;
    e.beta = b;
    e.value = c_beta(b, &e.err);
    e.upper_bound = std::pow(2.0, b + 1.0);
    e.bound_ok = (e.value >= 1.0 - e.err - 1e-12) &&
                 (e.value <= e.upper_bound + e.err + 1e-12);
    entries_[b] = e;
  }
}

void CbetaTable::write_csv(std::ostream& os) const {
  os << "beta,c_beta,err,upper_bound,ok\n";
  char buf[160];
  for (const auto& [b, e] : entries_) {
    std::snprintf(buf, sizeof(buf), "%.12g,%.12g,%.3g,%.12g,%d\n", e.beta,
                  e.value, e.err, e.upper_bound, e.bound_ok ? 1 : 0);
    os << buf;
  }
}

}  // namespace semirate::specfun
