#include "semirate/quadrature.hpp"

#include <boost/math/quadrature/exp_sinh.hpp>
#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <boost/math/quadrature/tanh_sinh.hpp>

#include <algorithm>
#include <cmath>
#include <vector>

#include "semirate/errors.hpp"

namespace semirate::quad {

namespace {
constexpr int kMaxDepth = 18;
}

Result integrate(const std::function<double(double)>& f, double a, double b,
                 double abs_tol) {
  if (!(a <= b)) throw ConfigError("integrate: empty interval");
  if (a == b) return {0.0, 0.0};
  double err = 0.0;
  double v = boost::math::quadrature::gauss_kronrod<double, 15>::integrate(
      f, a, b, kMaxDepth, 1e-14, &err);
  if (!std::isfinite(v) || err > std::max(abs_tol, 1e-12 * std::abs(v)) * 100.0)
    throw QuadratureError("gauss_kronrod did not converge", err);
  return {v, err};
}

Result integrate_singular(const std::function<double(double)>& f, double a,
                          double b, double abs_tol) {
  if (a == b) return {0.0, 0.0};
  static thread_local boost::math::quadrature::tanh_sinh<double> ts;
  double err = 0.0, l1 = 0.0;
  double v = ts.integrate(f, a, b, 1e-13, &err, &l1);
  if (!std::isfinite(v))
    throw QuadratureError("tanh_sinh produced non-finite value", err);
  return {v, err * std::max(1.0, l1)};
}

Result integrate_to_inf(const std::function<double(double)>& f, double a,
                        double abs_tol) {
  static thread_local boost::math::quadrature::exp_sinh<double> es;
  double err = 0.0, l1 = 0.0;
  auto g = [&](double u) { return f(a + u); };
  double v = es.integrate(g, 1e-13, &err, &l1);
  if (!std::isfinite(v))
    throw QuadratureError("exp_sinh produced non-finite value", err);
  return {v, err * std::max(1.0, l1)};
}

std::complex<double> integrate_complex(
    const std::function<std::complex<double>(double)>& f, double a, double b,
    double abs_tol, bool singular_endpoints) {
  auto re = [&](double s) { return f(s).real(); };
  auto im = [&](double s) { return f(s).imag(); };
  if (singular_endpoints) {
    return {integrate_singular(re, a, b, abs_tol).value,
            integrate_singular(im, a, b, abs_tol).value};
  }
  return {integrate(re, a, b, abs_tol).value, integrate(im, a, b, abs_tol).value};
}

std::vector<double> sign_change_roots(const std::function<double(double)>& f,
                                      double a, double b, int scan_points,
                                      const std::vector<double>& breakpoints) {
  std::vector<double> grid;
  grid.reserve(scan_points + 8 * breakpoints.size() + 2);
  const double la = std::log(a), lb = std::log(b);
  for (int i = 0; i <= scan_points; ++i)
    grid.push_back(std::exp(la + (lb - la) * i / scan_points));
  // cluster extra points next to breakpoints: one-sided singularities there
  for (double c : breakpoints) {
    for (int j = 2; j <= 40; j += 2) {
      double off = std::ldexp(std::max(c, 1.0), -j);
      if (c - off > a) grid.push_back(c - off);
      if (c + off < b) grid.push_back(c + off);
    }
  }
  std::sort(grid.begin(), grid.end());
  grid.erase(std::unique(grid.begin(), grid.end()), grid.end());

  std::vector<double> roots;
  double prev_x = grid.front(), prev_f = f(prev_x);
  for (size_t i = 1; i < grid.size(); ++i) {
    double x = grid[i], fx = f(x);
    if (std::isfinite(prev_f) && std::isfinite(fx) && prev_f * fx < 0.0) {
      double lo = prev_x, hi = x, flo = prev_f;
      for (int it = 0; it < 200 && (hi - lo) > 1e-15 * std::max(1.0, hi); ++it) {
        double mid = 0.5 * (lo + hi), fm = f(mid);
        if (fm == 0.0) { lo = hi = mid; break; }
        if (flo * fm < 0.0) hi = mid;
        else { lo = mid; flo = fm; }
      }
      roots.push_back(0.5 * (lo + hi));
    }
    prev_x = x;
    prev_f = fx;
  }
  return roots;
}

double golden_min(const std::function<double(double)>& f, double a, double b,
                  double tol) {
  const double gr = 0.5 * (std::sqrt(5.0) - 1.0);
  double c = b - gr * (b - a), d = a + gr * (b - a);
  double fc = f(c), fd = f(d);
  while (b - a > tol * std::max(1.0, std::abs(a) + std::abs(b))) {
    if (fc < fd) {
      b = d; d = c; fd = fc;
      c = b - gr * (b - a); fc = f(c);
    } else {
      a = c; c = d; fc = fd;
      d = a + gr * (b - a); fd = f(d);
    }
  }
  return 0.5 * (a + b);
}

}  // namespace semirate::quad
