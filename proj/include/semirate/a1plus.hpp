#pragma once

#include <complex>
#include <functional>
#include <optional>
#include <utility>

#include "semirate/bernstein.hpp"
#include "semirate/measure.hpp"

namespace semirate {

// An element of the algebra of Laplace transforms of bounded measures on
// [0, inf): the measure is the ground truth, the optional closed form is the
// exact pointwise evaluator.
class A1Element {
 public:
  using Eval = std::function<std::complex<double>(std::complex<double>)>;

  explicit A1Element(HalfLineMeasure measure, Eval closed_form = nullptr)
      : measure_(std::move(measure)), closed_form_(std::move(closed_form)) {}

  const HalfLineMeasure& measure() const { return measure_; }
  double norm(double* err = nullptr) const;  // total variation of the measure
  std::complex<double> eval(std::complex<double> z) const;

  A1Element multiply(const A1Element& other) const;  // measure convolution

 private:
  HalfLineMeasure measure_;
  Eval closed_form_;
};

// u_{beta,tau}(z) = (z/(z+tau))^beta: atom 1 at 0 minus density tau q_beta(tau s)
A1Element make_u(double beta, double tau);
// v_{beta,tau}(z) = (z+tau)^{-beta}: density e^{-tau s} s^{beta-1}/Gamma(beta)
A1Element make_v(double beta, double tau);
// e^{-t phi}: the subordination measure itself (norm 1 on the class Phi)
A1Element semigroup_element(const BernsteinFunction& phi, double t);
// Delta_t = e^{-t phi} - e^{-tz}: nu_t minus a unit atom at t
A1Element delta_element(const BernsteinFunction& phi, double t);

// Antiderivative kernel G_t with z^{-2} Delta_t = L[G_t]; G_t >= 0 and
// \int G_t = t |phi''(0+)|/2.
class DeltaKernel {
 public:
  DeltaKernel(BernsteinFunction phi, double t);
  double operator()(double s) const;
  double integral(double* err = nullptr) const;
  double t() const { return t_; }
  const BernsteinFunction& phi() const { return phi_; }

 private:
  BernsteinFunction phi_;
  double t_;
  std::optional<SubordinationMeasure> nu_;
};

DeltaKernel delta_kernel(const BernsteinFunction& phi, double t);

// 2^beta c_beta^{alpha/beta} a^{1-alpha/beta} b^{alpha/beta}, 0 <= alpha <= beta
double interpolation_bound(double a, double b, double beta, double alpha);

// 8 (t |phi''(0+)|)^{alpha/2}, alpha in [0, 2]
double delta_fractional_bound(const BernsteinFunction& phi, double t, double alpha);
// tighter two-sided interpolation with beta = 2, a = ||Delta_t||, b = t|phi''|/2
double delta_fractional_bound_tight(const BernsteinFunction& phi, double t,
                                    double alpha);

// (8 (|phi''| t/n)^{alpha/2}, 8 (|phi''| t^2/n)^{alpha/2})
std::pair<double, double> scaled_delta_bounds(const BernsteinFunction& phi,
                                              double t, int n, double alpha);

// exact ||Delta_t||: total variation of nu_t - delta_t
double delta_norm(const BernsteinFunction& phi, double t);

// directly computed ||z^{-alpha} Delta_t||, alpha in (0, 2]: total variation
// of the fractional integral of nu_t - delta_t, sign changes bracketed
double frac_delta_norm(const BernsteinFunction& phi, double t, double alpha,
                       double* err = nullptr);

}  // namespace semirate
