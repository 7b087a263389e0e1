#pragma once

#include <map>
#include <ostream>
#include <vector>

namespace semirate::specfun {

// Generalized Laguerre polynomial L^{(1)}_k(s) by the three-term recurrence.
double laguerre_l1(int k, double s);

// All real roots of L^{(1)}_k, ascending (companion matrix + Newton polish).
std::vector<double> laguerre_l1_roots(int k);

// Confluent hypergeometric 1F1(a; b; s), s >= 0, b not a nonpositive integer.
// Relative accuracy target 1e-10.
double kummer_1f1(double a, double b, double s);

// Modified Bessel function I_1: ascending series for x < 20, asymptotic
// expansion beyond.
double bessel_i1(double x);

// q_beta(s) = beta e^{-s} 1F1(1-beta; 2; s): the density of 1 - u_{beta,1}.
double q_beta(double beta, double s);

// c_beta = 1 + \int_0^inf |q_beta(s)| ds, with sign changes bracketed and the
// heavy polynomial tail (non-integer beta) added from the asymptotic series.
double c_beta(double beta, double* err_estimate = nullptr);

// \int_0^inf e^{-s} |L^{(1)}_{m-1}(s)| ds, all polynomial roots split exactly.
double laguerre_abs_mean(int m);

// \int_0^1 e^{-s} L^{(1)}_{m-1}(s)^2 ds (bounded by (5/2) m).
double laguerre_sq_mean_unit(int m);

// Difference between (pi/2m) e^{-s} L^{(1)}_{m-1}(s)^2 and its representation
// as an oscillatory integral over [0, pi] (Watson's identity), in absolute value.
double watson_identity_residual(int m, double s);

struct CbetaEntry {
  double beta = 0.0;
  double value = 0.0;
  double err = 0.0;
  double upper_bound = 0.0;  // 2^{beta+1}
  bool bound_ok = false;     // 1 <= value <= upper_bound (within err)
};

class CbetaTable {
 public:
  void build(const std::vector<double>& betas);
  const std::map<double, CbetaEntry>& entries() const { return entries_; }
  void write_csv(std::ostream& os) const;

 private:
  std::map<double, CbetaEntry> entries_;
};

}  // namespace semirate::specfun
