#include "semirate/bernstein.hpp"

#include <boost/math/special_functions/gamma.hpp>
#include <json.hpp>

#include <cmath>
#include <limits>

#include "semirate/errors.hpp"
#include "semirate/quadrature.hpp"
#include "semirate/specfun.hpp"

namespace semirate {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

HalfLineMeasure yosida_levy_measure() {
  // mu(ds) = e^{-s} ds
  return HalfLineMeasure::from_density([](double s) { return std::exp(-s); },
                                       0.0, 45.0);
}

HalfLineMeasure dunford_segal_levy_measure() {
  return HalfLineMeasure::from_atoms({{1.0, 1.0}});
}

HalfLineMeasure euler_levy_measure() {
  // mu(ds) = e^{-s}/s ds, infinite mass near 0
  return HalfLineMeasure::from_density(
      [](double s) { return std::exp(-s) / s; }, 0.0, 48.0, {}, true);
}

// Poisson probabilities until the discarded tail mass drops below 1e-14
std::vector<Atom> poisson_atoms(double t) {
  std::vector<Atom> atoms;
  double p = std::exp(-t), cum = p;
  atoms.push_back({0.0, p});
  for (int k = 1; k < 100000; ++k) {
    p *= t / k;
    atoms.push_back({static_cast<double>(k), p});
    cum += p;
    if (1.0 - cum < 1e-14 && k > t) break;
  }
  return atoms;
}

}  // namespace

BernsteinFunction::BernsteinFunction(BernsteinKind kind, std::string name,
                                     LevyTriple triple, DerivativesAtZero d)
    : kind_(kind), name_(std::move(name)), triple_(std::move(triple)), derivs_(d) {}

BernsteinFunction BernsteinFunction::yosida() {
  return {BernsteinKind::Yosida, "yosida", {0.0, 0.0, yosida_levy_measure()},
          {0.0, 1.0, -2.0, true}};
}

BernsteinFunction BernsteinFunction::dunford_segal() {
  return {BernsteinKind::DunfordSegal, "dunford-segal",
          {0.0, 0.0, dunford_segal_levy_measure()}, {0.0, 1.0, -1.0, true}};
}

BernsteinFunction BernsteinFunction::euler() {
  return {BernsteinKind::Euler, "euler", {0.0, 0.0, euler_levy_measure()},
          {0.0, 1.0, -1.0, true}};
}

BernsteinFunction BernsteinFunction::identity() {
  return {BernsteinKind::Identity, "identity", {0.0, 1.0, HalfLineMeasure{}},
          {0.0, 1.0, 0.0, true}};
}

BernsteinFunction BernsteinFunction::custom(LevyTriple triple) {
  if (triple.a < 0.0 || triple.b < 0.0)
    throw ConfigError("custom Bernstein function: a, b >= 0 required");
  for (const Atom& at : triple.mu.atoms()) {
    if (at.location <= 0.0)
      throw ConfigError("custom Bernstein function: mu may not charge {0}");
    if (at.weight < 0.0)
      throw ConfigError("custom Bernstein function: mu must be nonnegative");
  }
  DerivativesAtZero d;
  d.phi0 = triple.a;
  if (triple.mu.moment_finite(1))
    d.d1 = triple.b + triple.mu.moment(1);
  else
    d.d1 = kInf;
  if (triple.mu.moment_finite(2)) {
    d.d2 = -triple.mu.moment(2);
    d.d2_finite = true;
  } else {
    d.d2 = -kInf;
    d.d2_finite = false;
  }
  return {BernsteinKind::Custom, "custom", std::move(triple), d};
}

BernsteinFunction BernsteinFunction::from_json_text(const std::string& text) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(text);
  } catch (const std::exception& e) {
    throw ConfigError(std::string("phi JSON parse error: ") + e.what());
  }
  LevyTriple triple;
  triple.a = j.value("a", 0.0);
  triple.b = j.value("b", 0.0);
  HalfLineMeasure mu;
  if (j.contains("density")) {
    const auto& d = j.at("density");
    std::vector<double> grid = d.at("grid").get<std::vector<double>>();
    std::vector<double> values = d.at("values").get<std::vector<double>>();
    for (double v : values)
      if (v < 0.0) throw ConfigError("phi JSON: density must be nonnegative");
    mu = HalfLineMeasure::from_samples(grid, values);
  }
  if (j.contains("atoms")) {
    for (const auto& a : j.at("atoms")) {
      if (!a.is_array() || a.size() != 2)
        throw ConfigError("phi JSON: atoms must be [location, weight] pairs");
      mu.add_atom(a[0].get<double>(), a[1].get<double>());
    }
  }
  triple.mu = std::move(mu);
  return custom(std::move(triple));
}

BernsteinFunction BernsteinFunction::by_name(const std::string& name) {
  if (name == "yosida") return yosida();
  if (name == "dunford-segal") return dunford_segal();
  if (name == "euler") return euler();
  if (name == "identity") return identity();
  throw ConfigError("unknown Bernstein function: " + name);
}

std::complex<double> BernsteinFunction::eval(std::complex<double> z) const {
  if (!std::isfinite(z.real()) || !std::isfinite(z.imag()))
    throw ConfigError("BernsteinFunction::eval: non-finite z");
  if (z.real() < -1e-12)
    throw ConfigError("BernsteinFunction::eval: Re z >= 0 required");
  switch (kind_) {
    case BernsteinKind::Yosida:
      return z / (z + 1.0);
    case BernsteinKind::DunfordSegal:
      return 1.0 - std::exp(-z);
    case BernsteinKind::Euler:
      return std::log(1.0 + z);
    case BernsteinKind::Identity:
      return z;
    case BernsteinKind::Custom: {
      std::complex<double> s = triple_.a + triple_.b * z;
      for (const Atom& at : triple_.mu.atoms())
        s += at.weight * (1.0 - std::exp(-z * at.location));
      if (triple_.mu.has_density()) {
        auto f = [&](double x) {
          return triple_.mu.density_at(x) * (1.0 - std::exp(-z * x));
        };
        // (1 - e^{-zx}) ~ zx kills a 1/x singularity at 0
        s += quad::integrate_complex(f, triple_.mu.support_lo(),
                                     triple_.mu.support_hi(), 1e-11,
                                     triple_.mu.singular_at_lo());
        if (triple_.mu.power_tail()) {
          auto fr = [&](double x) { return (f(x)).real(); };
          auto fi = [&](double x) { return (f(x)).imag(); };
          s += std::complex<double>(
              quad::integrate_to_inf(fr, triple_.mu.support_hi()).value,
              quad::integrate_to_inf(fi, triple_.mu.support_hi()).value);
        }
      }
      return s;
    }
  }
  throw std::logic_error("unreachable");
}

std::complex<double> BernsteinFunction::derivative(std::complex<double> z) const {
  switch (kind_) {
    case BernsteinKind::Yosida: {
      auto w = z + 1.0;
      return 1.0 / (w * w);
    }
    case BernsteinKind::DunfordSegal:
      return std::exp(-z);
    case BernsteinKind::Euler:
      return 1.0 / (1.0 + z);
    case BernsteinKind::Identity:
      return 1.0;
    case BernsteinKind::Custom: {
      std::complex<double> s = triple_.b;
      for (const Atom& at : triple_.mu.atoms())
        s += at.weight * at.location * std::exp(-z * at.location);
      if (triple_.mu.has_density()) {
        auto f = [&](double x) {
          return triple_.mu.density_at(x) * x * std::exp(-z * x);
        };
        s += quad::integrate_complex(f, triple_.mu.support_lo(),
                                     triple_.mu.support_hi(), 1e-11,
                                     triple_.mu.singular_at_lo());
      }
      return s;
    }
  }
  throw std::logic_error("unreachable");
}

DerivativesAtZero BernsteinFunction::derivatives_at_zero() const { return derivs_; }

bool BernsteinFunction::is_in_phi(double tol) const {
  return std::abs(derivs_.phi0) <= tol && std::isfinite(derivs_.d1) &&
         std::abs(derivs_.d1 - 1.0) <= tol && derivs_.d2_finite;
}

double BernsteinFunction::second_derivative_abs() const {
  if (!derivs_.d2_finite)
    throw NumericalError("phi''(0+) is not finite");
  return std::abs(derivs_.d2);
}

double BernsteinFunction::bounded_norm() const {
  if (triple_.b > 0.0)
    throw UnboundedFunctionError("unbounded Bernstein function (b > 0)");
  if (!triple_.mu.moment_finite(0))
    throw UnboundedFunctionError("unbounded Bernstein function (mu infinite)");
  return triple_.a + 2.0 * triple_.mu.mass();
}

SubordinationMeasure BernsteinFunction::subordination_measure(double t) const {
  if (!(t > 0.0)) throw ConfigError("subordination_measure: t > 0 required");
  switch (kind_) {
    case BernsteinKind::Euler: {
      // Gamma(t, 1): s^{t-1} e^{-s} / Gamma(t)
      double lg = std::lgamma(t);
      auto dens = [t, lg](double s) {
        return std::exp((t - 1.0) * std::log(s) - s - lg);
      };
      double hi = t + 50.0 + 12.0 * std::sqrt(t + 1.0);
      auto m = HalfLineMeasure::from_density(dens, 0.0, hi, {}, t < 1.0);
      return {BernsteinKind::Euler, t, std::move(m)};
    }
    case BernsteinKind::DunfordSegal: {
      auto m = HalfLineMeasure::from_atoms(poisson_atoms(t));
      return {BernsteinKind::DunfordSegal, t, std::move(m)};
    }
    case BernsteinKind::Yosida: {
      // e^{-t} delta_0 + e^{-t-s} sqrt(t/s) I_1(2 sqrt(ts)) ds
      auto dens = [t](double s) {
        double ts = t * s;
        if (ts < 1e-10)
          return t * std::exp(-t - s) * (1.0 + 0.5 * ts);
        return std::exp(-t - s) * std::sqrt(t / s) *
               specfun::bessel_i1(2.0 * std::sqrt(ts));
      };
      double hi = (std::sqrt(t) + 8.0) * (std::sqrt(t) + 8.0) + 10.0;
      auto m = HalfLineMeasure::from_density(dens, 0.0, hi);
      m.add_atom(0.0, std::exp(-t));
      return {BernsteinKind::Yosida, t, std::move(m)};
    }
    default:
      throw UnsupportedKindError(
          "subordination_measure: closed form only for the built-in kinds");
  }
}

SubordinationMeasure::SubordinationMeasure(BernsteinKind kind, double t,
                                           HalfLineMeasure measure)
    : kind_(kind), t_(t), measure_(std::move(measure)) {}

double SubordinationMeasure::mass() const { return measure_.mass(); }

std::complex<double> SubordinationMeasure::laplace(std::complex<double> z) const {
  return measure_.laplace(z);
}

double SubordinationMeasure::mass_below(double s) const {
  if (s < 0.0) return 0.0;
  switch (kind_) {
    case BernsteinKind::Euler:
      return boost::math::gamma_p(t_, s);
    default: {
      double v = 0.0;
      for (const Atom& a : measure_.atoms())
        if (a.location <= s) v += a.weight;
      if (measure_.has_density() && s > measure_.support_lo())
        v += measure_.moment_below(s, 0);
      return v;
    }
  }
}

double SubordinationMeasure::mass_above(double s) const {
  switch (kind_) {
    case BernsteinKind::Euler:
      return boost::math::gamma_q(t_, s);
    case BernsteinKind::DunfordSegal: {
      double v = 0.0;
      for (const Atom& a : measure_.atoms())
        if (a.location > s) v += a.weight;
      return v;
    }
    default: {
      double v = 0.0;
      for (const Atom& a : measure_.atoms())
        if (a.location > s) v += a.weight;
      if (measure_.has_density() && s < measure_.support_hi()) {
        auto f = [&](double x) { return measure_.density_at(x); };
        v += quad::integrate(f, std::max(s, measure_.support_lo()),
                             measure_.support_hi(), 1e-13)
                 .value;
      }
      return v;
    }
  }
}

double SubordinationMeasure::first_moment_below(double s) const {
  switch (kind_) {
    case BernsteinKind::Euler:
      return t_ * boost::math::gamma_p(t_ + 1.0, s);
    default: {
      double v = 0.0;
      for (const Atom& a : measure_.atoms())
        if (a.location <= s) v += a.weight * a.location;
      if (measure_.has_density() && s > measure_.support_lo())
        v += measure_.moment_below(s, 1);
      return v;
    }
  }
}

double SubordinationMeasure::first_moment_above(double s) const {
  switch (kind_) {
    case BernsteinKind::Euler:
      return t_ * boost::math::gamma_q(t_ + 1.0, s);
    default: {
      double v = 0.0;
      for (const Atom& a : measure_.atoms())
        if (a.location > s) v += a.weight * a.location;
      if (measure_.has_density() && s < measure_.support_hi()) {
        auto f = [&](double x) { return x * measure_.density_at(x); };
        v += quad::integrate(f, std::max(s, measure_.support_lo()),
                             measure_.support_hi(), 1e-13)
                 .value;
      }
      return v;
    }
  }
}

double SubordinationMeasure::frac_moment_below(double S, double alpha) const {
  if (!(alpha > 0.0)) throw ConfigError("frac_moment_below: alpha > 0");
  double v = 0.0;
  for (const Atom& a : measure_.atoms())
    if (a.location <= S) v += a.weight * std::pow(S - a.location, alpha);
  if (measure_.has_density() && S > measure_.support_lo()) {
    double up = std::min(S, measure_.support_hi());
    auto f = [&](double tau) {
      return measure_.density_at(tau) * std::pow(S - tau, alpha);
    };
    if (measure_.singular_at_lo())
      v += quad::integrate_singular(f, measure_.support_lo(), up, 1e-12).value;
    else
      v += quad::integrate(f, measure_.support_lo(), up, 1e-12).value;
  }
  return v;
}

double SubordinationMeasure::frac_kernel_density(double s, double alpha) const {
  double v = 0.0;
  for (const Atom& a : measure_.atoms())
    if (a.location < s) v += a.weight * std::pow(s - a.location, alpha - 1.0);
  if (measure_.has_density() && s > measure_.support_lo()) {
    double up = std::min(s, measure_.support_hi());
    auto f = [&](double tau) {
      return measure_.density_at(tau) * std::pow(s - tau, alpha - 1.0);
    };
    // singular at tau = s for alpha < 1 (and possibly at tau = 0): tanh_sinh
    v += quad::integrate_singular(f, measure_.support_lo(), up, 1e-12).value;
  }
  return v;
}

}  // namespace semirate
