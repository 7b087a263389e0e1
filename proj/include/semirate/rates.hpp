#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "semirate/a1plus.hpp"
#include "semirate/bernstein.hpp"
#include "semirate/opcalc.hpp"

namespace semirate {

// One (scheme, phi, alpha, t, n) experiment. For upper bounds margin =
// bound - error, for lower bounds margin = error - bound; both must stay
// above -tol_slack * bound.
struct RateRecord {
  std::string scheme;
  std::string phi;
  double alpha = 0.0;
  double t = 0.0;
  int n = 1;
  double error = 0.0;
  double bound = 0.0;
  double margin = 0.0;
  std::string slope_axis;
  bool lower = false;
};

struct SlopeFit {
  std::string axis;
  int points = 0;
  double exponent = 0.0;
  double r2 = 0.0;
  double predicted = 0.0;
  std::string label;
};

struct CheckReport {
  std::vector<RateRecord> records;
  std::vector<SlopeFit> fits;
  std::vector<std::string> notes;
  bool pass = true;
  void merge(const CheckReport& other);
};

struct GridOptions {
  std::vector<double> t_grid;
  std::vector<int> n_grid;
  std::vector<double> alphas;
  double tol_slack = 1e-9;
  bool fail_fast = false;
  std::uint64_t seed = 42;
  int threads = 0;  // 0 = hardware concurrency

  static GridOptions defaults();  // honors SEMIRATE_TOL / SEMIRATE_THREADS
};

std::vector<double> default_t_grid();  // log-spaced [0.1, 100], 16 points
std::vector<int> default_n_grid();     // 1, 2, 4, ..., 1024
std::vector<double> default_alphas();  // 0.5, 1, 1.5, 2

// Theorem 5.1 (5.2)/(5.3) for one phi in the class Phi, plus the alpha = 2
// sharpened constants (5.7)/(5.8).
CheckReport check_general_upper(const BernsteinFunction& phi, const Generator& A,
                                const GridOptions& opts);

// The three named schemes with their published constants 16M / 8M / 8M and
// the resolvent-variant of the first scheme with 8M (t^2/n)^{alpha/2}.
CheckReport check_classical(const Generator& A, const GridOptions& opts);

// Analytic-semigroup improvements: the n = 1 domain estimate, the uniform
// C/t operator estimate with its explicit constant, and the full
// C/(n t^{1-alpha}) resp. C t^alpha / n sweeps (alpha restricted to [0,1]).
CheckReport check_analytic(const BernsteinFunction& phi, const Generator& A,
                           const GridOptions& opts);

// Building blocks: the phi'(A)-corrected estimate, the scalar Laplace
// inequality, the resolvent-type product estimate, and the
// t psi(A) e^{-t phi(A)} bound with its closed-form constant.
CheckReport check_building_blocks(const BernsteinFunction& phi,
                                  const BernsteinFunction& psi,
                                  const Generator& A, const GridOptions& opts);

// Operator interpolation ||A^{-alpha} B|| <= 2(1+M0) a^{1-alpha} b^alpha.
CheckReport check_operator_interpolation(const Generator& A, const Matrix& B,
                                         const GridOptions& opts,
                                         const std::string& label = "B");

// Interpolated decay of A^{-alpha} Delta_t(A) with constants a = C0/t, b = C1
// taken from the analytic estimates.
CheckReport check_interpolated_decay(const BernsteinFunction& phi,
                                     const Generator& A, const GridOptions& opts);

enum class SpectrumKind { ImagAxis, PosReals };

struct LowerBoundConstants {
  double r = 2.0;
  double d = 0.0;        // second moment of mu below r
  double c_osc = 0.0;    // 1 - e^{-2d/pi^2}
  double T_osc = 0.0;    // r^2/pi^2
  double c_real = 0.0;   // |phi''(0+)|/(4e)
  double delta = 0.0;    // scan-certified range for the real-axis estimate
  double T_real = 0.0;   // 1/delta
};
LowerBoundConstants lower_bound_constants(const BernsteinFunction& phi,
                                          double r = 2.0);

// Sharpness: diagonal generators densely sampling i R or R_+, auto-refined
// until the maximizer is resolved; checks c t^{alpha/2} resp. c t^{alpha-1}
// and their scaled forms.
CheckReport check_lower_bounds(const BernsteinFunction& phi, SpectrumKind kind,
                               const GridOptions& opts);

// Remark-style breakdown for alpha > 2: maxima of |lambda^{-alpha}
// Delta_t(lambda)| over grids refined toward 0 by factors of 2.
std::vector<double> breakdown_maxima(const BernsteinFunction& phi, double alpha,
                                     double t, int refinements);

// Least-squares exponent of log(error) vs log(axis); records at the noise
// floor (error <= 1e-13) are dropped; fewer than 4 usable points throws.
SlopeFit fit_order(const std::vector<RateRecord>& records,
                   const std::string& axis, double predicted);

// (I + tA/n)^{-n} x by n repeated linear solves; independent of the
// spectral route.
Vector euler_resolvent_apply(const Generator& A, double t, int n, const Vector& x);

std::string witness_json(const Generator& A, const RateRecord& rec,
                         const Vector* x);

}  // namespace semirate
