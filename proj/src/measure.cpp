#include "semirate/measure.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "semirate/errors.hpp"
#include "semirate/quadrature.hpp"

namespace semirate {

namespace {
constexpr double kInf = std::numeric_limits<double>::infinity();

std::vector<double> panel_cuts(double lo, double hi,
                               const std::vector<double>& breakpoints) {
  std::vector<double> cuts{lo};
  for (double b : breakpoints)
    if (b > lo && b < hi) cuts.push_back(b);
  cuts.push_back(hi);
  std::sort(cuts.begin(), cuts.end());
  cuts.erase(std::unique(cuts.begin(), cuts.end()), cuts.end());
  return cuts;
}
}  // namespace

HalfLineMeasure HalfLineMeasure::from_atoms(std::vector<Atom> atoms) {
  HalfLineMeasure m;
  for (const Atom& a : atoms) m.add_atom(a.location, a.weight);
  return m;
}

HalfLineMeasure HalfLineMeasure::from_density(
    std::function<double(double)> density, double lo, double hi,
    std::vector<double> breakpoints, bool singular_at_lo) {
  if (!(lo >= 0.0 && hi > lo))
    throw ConfigError("HalfLineMeasure: bad density support");
  HalfLineMeasure m;
  m.density_ = std::move(density);
  m.lo_ = lo;
  m.hi_ = hi;
  m.breakpoints_ = std::move(breakpoints);
  m.singular_at_lo_ = singular_at_lo;
  std::sort(m.breakpoints_.begin(), m.breakpoints_.end());
  return m;
}

HalfLineMeasure HalfLineMeasure::from_samples(const std::vector<double>& grid,
                                              const std::vector<double>& values) {
  if (grid.size() < 2 || grid.size() != values.size())
    throw ConfigError("HalfLineMeasure: grid/values size mismatch");
  for (size_t i = 0; i + 1 < grid.size(); ++i)
    if (!(grid[i] < grid[i + 1]))
      throw ConfigError("HalfLineMeasure: grid must be strictly increasing");
  if (grid.front() < 0.0) throw ConfigError("HalfLineMeasure: negative grid");
  auto g = grid;
  auto v = values;
  auto density = [g, v](double s) {
    if (s < g.front() || s > g.back()) return 0.0;
    auto it = std::upper_bound(g.begin(), g.end(), s);
    size_t i = std::min<size_t>(g.size() - 2, std::max<ptrdiff_t>(0, it - g.begin() - 1));
    double w = (s - g[i]) / (g[i + 1] - g[i]);
    return v[i] * (1.0 - w) + v[i + 1] * w;
  };
  return from_density(density, grid.front(), grid.back(), grid);
}

HalfLineMeasure& HalfLineMeasure::add_atom(double location, double weight) {
  if (location < 0.0) throw ConfigError("HalfLineMeasure: atom location < 0");
  for (Atom& a : atoms_) {
    if (a.location == location) {  // keep locations distinct
      a.weight += weight;
      return *this;
    }
  }
  atoms_.push_back({location, weight});
  std::sort(atoms_.begin(), atoms_.end(),
            [](const Atom& x, const Atom& y) { return x.location < y.location; });
  return *this;
}

HalfLineMeasure& HalfLineMeasure::set_power_tail(double exponent) {
  if (!(exponent > 1.0))
    throw ConfigError("HalfLineMeasure: power tail must have exponent > 1");
  if (!density_) throw ConfigError("HalfLineMeasure: tail needs a density");
  tail_exponent_ = exponent;
  return *this;
}

double HalfLineMeasure::density_at(double s) const {
  if (!density_) return 0.0;
  if (s < lo_) return 0.0;
  if (s > hi_) {
    if (!tail_exponent_) return 0.0;
    return density_(hi_) * std::pow(s / hi_, -*tail_exponent_);
  }
  return density_(s);
}

double HalfLineMeasure::density_integral(
    const std::function<double(double)>& weight_fn, bool absolute,
    double* err) const {
  if (!density_) return 0.0;
  auto f = [&](double s) {
    double d = density_(s) * weight_fn(s);
    return absolute ? std::abs(d) : d;
  };
  double total = 0.0, e = 0.0;
  auto cuts = panel_cuts(lo_, hi_, breakpoints_);
  for (size_t i = 0; i + 1 < cuts.size(); ++i) {
    quad::Result r;
    if (i == 0 && singular_at_lo_)
      r = quad::integrate_singular(f, cuts[i], cuts[i + 1]);
    else
      r = quad::integrate(f, cuts[i], cuts[i + 1]);
    total += r.value;
    e += r.error;
  }
  if (err) *err += e;
  return total;
}

double HalfLineMeasure::mass() const {
  if (!moment_finite(0)) return kInf;
  double s = 0.0;
  for (const Atom& a : atoms_) s += a.weight;
  s += density_integral([](double) { return 1.0; }, false, nullptr);
  if (tail_exponent_) {
    double p = *tail_exponent_;
    s += density_(hi_) * hi_ / (p - 1.0);
  }
  return s;
}

bool HalfLineMeasure::moment_finite(int k) const {
  if (density_ && singular_at_lo_ && lo_ == 0.0) {
    // declared ~ s^{-1} singularity (the only kind produced here)
    if (k < 1) return false;
  }
  if (tail_exponent_ && !(*tail_exponent_ > k + 1.0)) return false;
  return true;
}

double HalfLineMeasure::moment(int k, bool finite_check) const {
  if (!moment_finite(k)) {
    if (finite_check) return kInf;
    throw NumericalError("HalfLineMeasure: divergent moment");
  }
  double s = 0.0;
  for (const Atom& a : atoms_) s += a.weight * std::pow(a.location, k);
  s += density_integral([k](double x) { return std::pow(x, k); }, false, nullptr);
  if (tail_exponent_) {
    double p = *tail_exponent_;
    s += density_(hi_) * std::pow(hi_, k + 1) / (p - k - 1.0);
  }
  return s;
}

double HalfLineMeasure::moment_below(double r, int k) const {
  double s = 0.0;
  for (const Atom& a : atoms_)
    if (a.location <= r) s += a.weight * std::pow(a.location, k);
  if (density_ && r > lo_) {
    auto f = [&](double x) { return density_at(x) * std::pow(x, k); };
    auto cuts = panel_cuts(lo_, std::min(r, hi_), breakpoints_);
    for (size_t i = 0; i + 1 < cuts.size(); ++i) {
      if (i == 0 && singular_at_lo_)
        s += quad::integrate_singular(f, cuts[i], cuts[i + 1]).value;
      else
        s += quad::integrate(f, cuts[i], cuts[i + 1]).value;
    }
    if (r > hi_ && tail_exponent_) {
      auto tail = [&](double x) { return density_at(x) * std::pow(x, k); };
      s += quad::integrate(tail, hi_, r).value;
    }
  }
  return s;
}

double HalfLineMeasure::total_variation(double* err) const {
  double tv = 0.0, e = 0.0;
  for (const Atom& a : atoms_) tv += std::abs(a.weight);
  if (density_) {
    // split |density| exactly at its sign changes
    auto f = [&](double s) { return density_(s); };
    double scan_lo = std::max(lo_, 1e-12);
    auto roots = quad::sign_change_roots(f, scan_lo, hi_, 4096, breakpoints_);
    std::vector<double> cuts = panel_cuts(lo_, hi_, breakpoints_);
    cuts.insert(cuts.end(), roots.begin(), roots.end());
    std::sort(cuts.begin(), cuts.end());
    cuts.erase(std::unique(cuts.begin(), cuts.end()), cuts.end());
    for (size_t i = 0; i + 1 < cuts.size(); ++i) {
      quad::Result r;
      if (i == 0 && singular_at_lo_)
        r = quad::integrate_singular(f, cuts[i], cuts[i + 1]);
      else
        r = quad::integrate(f, cuts[i], cuts[i + 1]);
      tv += std::abs(r.value);
      e += r.error;
    }
    if (tail_exponent_) {
      double p = *tail_exponent_;
      double tail = std::abs(density_(hi_)) * hi_ / (p - 1.0);
      tv += tail;
      e += tail / hi_;  // leading-order correction not applied past hi_
    }
  }
  if (err) *err = e;
  return tv;
}

std::complex<double> HalfLineMeasure::laplace(std::complex<double> z) const {
  if (!(z.real() >= -1e-15) || !std::isfinite(z.real()) || !std::isfinite(z.imag()))
    throw ConfigError("HalfLineMeasure::laplace: Re z >= 0 required");
  std::complex<double> s = 0.0;
  for (const Atom& a : atoms_) s += a.weight * std::exp(-z * a.location);
  if (density_) {
    auto f = [&](double x) { return density_(x) * std::exp(-z * x); };
    auto cuts = panel_cuts(lo_, hi_, breakpoints_);
    for (size_t i = 0; i + 1 < cuts.size(); ++i)
      s += quad::integrate_complex(f, cuts[i], cuts[i + 1], 1e-11,
                                   i == 0 && singular_at_lo_);
    if (tail_exponent_) {
      auto fr = [&](double x) { return (density_at(x) * std::exp(-z * x)).real(); };
      auto fi = [&](double x) { return (density_at(x) * std::exp(-z * x)).imag(); };
      s += std::complex<double>(quad::integrate_to_inf(fr, hi_).value,
                                quad::integrate_to_inf(fi, hi_).value);
    }
  }
  return s;
}

HalfLineMeasure HalfLineMeasure::convolve(const HalfLineMeasure& other) const {
  if (tail_exponent_ || other.tail_exponent_)
    throw ConfigError("HalfLineMeasure::convolve: power tails unsupported");
  HalfLineMeasure out;
  for (const Atom& a : atoms_)
    for (const Atom& b : other.atoms_)
      out.add_atom(a.location + b.location, a.weight * b.weight);

  const bool d1 = static_cast<bool>(density_), d2 = static_cast<bool>(other.density_);
  if (!d1 && !d2) return out;

  double lo = (d1 ? lo_ : atoms_.front().location) +
              (d2 ? other.lo_ : other.atoms_.front().location);
  double hi = (d1 ? hi_ : atoms_.back().location) +
              (d2 ? other.hi_ : other.atoms_.back().location);
  auto self = *this;
  auto oth = other;
  auto dens = [self, oth](double s) {
    double v = 0.0;
    // atom x density cross terms
    for (const Atom& a : self.atoms_)
      v += a.weight * oth.density_at(s - a.location);
    for (const Atom& b : oth.atoms_)
      v += b.weight * self.density_at(s - b.location);
    if (self.density_ && oth.density_) {
      double tlo = std::max(self.lo_, s - oth.hi_);
      double thi = std::min(self.hi_, s - oth.lo_);
      if (thi > tlo) {
        auto f = [&](double tau) {
          return self.density_at(tau) * oth.density_at(s - tau);
        };
        v += quad::integrate(f, tlo, thi, 1e-10).value;
      }
    }
    return v;
  };
  std::vector<double> bp;
  for (const Atom& a : atoms_)
    for (double b : other.breakpoints_) bp.push_back(a.location + b);
  for (const Atom& b : other.atoms_)
    for (double c : breakpoints_) bp.push_back(b.location + c);
  HalfLineMeasure md = from_density(dens, lo, hi, bp);
  md.atoms_ = out.atoms_;
  return md;
}

HalfLineMeasure HalfLineMeasure::scaled(double factor) const {
  HalfLineMeasure m = *this;
  for (Atom& a : m.atoms_) a.weight *= factor;
  if (density_) {
    auto d = density_;
    m.density_ = [d, factor](double s) { return factor * d(s); };
  }
  return m;
}

}  // namespace semirate
