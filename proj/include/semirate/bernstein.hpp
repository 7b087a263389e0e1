#pragma once

#include <complex>
#include <string>

#include "semirate/measure.hpp"

namespace semirate {

enum class BernsteinKind { Yosida, DunfordSegal, Euler, Identity, Custom };

// Levy-Khintchine data (a, b, mu): phi(z) = a + bz + \int (1 - e^{-zs}) mu(ds).
struct LevyTriple {
  double a = 0.0;
  double b = 0.0;
  HalfLineMeasure mu;
};

struct DerivativesAtZero {
  double phi0 = 0.0;
  double d1 = 0.0;       // phi'(0+), +inf if divergent
  double d2 = 0.0;       // phi''(0+) <= 0, meaningful only if d2_finite
  bool d2_finite = true;
};

class BernsteinFunction;

// Subordination data nu_t with L(nu_t) = e^{-t phi}; built-in kinds carry
// closed-form atom/density representations.
class SubordinationMeasure {
 public:
  SubordinationMeasure(BernsteinKind kind, double t, HalfLineMeasure measure);

  BernsteinKind kind() const { return kind_; }
  double t() const { return t_; }
  const HalfLineMeasure& measure() const { return measure_; }

  double mass() const;  // = e^{-t phi(0)}
  std::complex<double> laplace(std::complex<double> z) const;

  // distribution helpers used by the Delta kernels; "below" means [0, s],
  // "above" the complement, computed tail-stably per kind
  double mass_below(double s) const;
  double mass_above(double s) const;
  double first_moment_below(double s) const;
  double first_moment_above(double s) const;

  // \int_{[0,S]} (S - tau)^alpha nu_t(dtau), alpha > 0
  double frac_moment_below(double S, double alpha) const;
  // \int_{[0,s)} (s - tau)^{alpha-1} nu_t(dtau); one-sided singular for alpha < 1
  double frac_kernel_density(double s, double alpha) const;

 private:
  BernsteinKind kind_;
  double t_;
  HalfLineMeasure measure_;
};

class BernsteinFunction {
 public:
  static BernsteinFunction yosida();         // z/(z+1)
  static BernsteinFunction dunford_segal();  // 1 - e^{-z}
  static BernsteinFunction euler();          // log(1+z)
  static BernsteinFunction identity();       // z (phi'' = 0 degenerate case)
  static BernsteinFunction custom(LevyTriple triple);
  static BernsteinFunction from_json_text(const std::string& text);
  static BernsteinFunction by_name(const std::string& name);

  BernsteinKind kind() const { return kind_; }
  const std::string& name() const { return name_; }
  const LevyTriple& triple() const { return triple_; }

  std::complex<double> eval(std::complex<double> z) const;
  std::complex<double> derivative(std::complex<double> z) const;  // phi'
  DerivativesAtZero derivatives_at_zero() const;
  bool is_in_phi(double tol = 1e-9) const;
  double second_derivative_abs() const;  // |phi''(0+)|, throws if divergent

  // A^1_+ norm of a bounded Bernstein function: a + 2 mu((0,inf)).
  // Throws UnboundedFunctionError if b > 0 or mu is infinite.
  double bounded_norm() const;

  // Closed-form nu_t for the three built-ins; UnsupportedKind otherwise.
  SubordinationMeasure subordination_measure(double t) const;

 private:
  BernsteinFunction(BernsteinKind kind, std::string name, LevyTriple triple,
                    DerivativesAtZero d);
  BernsteinKind kind_;
  std::string name_;
  LevyTriple triple_;
  DerivativesAtZero derivs_;
};

}  // namespace semirate
