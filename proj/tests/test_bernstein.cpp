#include <doctest.h>

#include <cmath>
#include <complex>

#include "oracle_helpers.hpp"
#include "semirate/bernstein.hpp"
#include "semirate/errors.hpp"
#include "semirate/quadrature.hpp"

using namespace semirate;
using Cx = std::complex<double>;

namespace {
LevyTriple exp2_triple() {
  // mu(ds) = 4 e^{-2s} ds: moments 1 and 1
  LevyTriple t;
  t.mu = HalfLineMeasure::from_density(
      [](double s) { return 4.0 * std::exp(-2.0 * s); }, 0.0, 25.0);
  return t;
}
}  // namespace

TEST_CASE("closed-form evaluation") {
  auto y = BernsteinFunction::yosida();
  auto e = BernsteinFunction::euler();
  CHECK(std::abs(y.eval(0.0)) == 0.0);
  CHECK(e.eval(1.0).real() == doctest::Approx(std::log(2.0)));
  CHECK_THROWS_AS(y.eval(Cx(-1.0, 0.0)), ConfigError);
  CHECK_THROWS_AS(y.eval(Cx(std::nan(""), 0.0)), ConfigError);
}

TEST_CASE("custom triple with a unit atom matches 1 - e^{-z}") {
  LevyTriple t;
  t.mu = HalfLineMeasure::from_atoms({{1.0, 1.0}});
  auto phi = BernsteinFunction::custom(std::move(t));
  auto ds = BernsteinFunction::dunford_segal();
  for (Cx z : {Cx(0.0, 0.0), Cx(1.0, 0.0), Cx(0.5, 2.0), Cx(0.0, 3.0), Cx(10.0, -4.0)}) {
    CHECK(std::abs(phi.eval(z) - ds.eval(z)) < 1e-12);
  }
}

TEST_CASE("derivatives at zero") {
  auto d1 = BernsteinFunction::yosida().derivatives_at_zero();
  CHECK(d1.phi0 == 0.0);
  CHECK(d1.d1 == 1.0);
  CHECK(d1.d2 == -2.0);
  auto d2 = BernsteinFunction::dunford_segal().derivatives_at_zero();
  CHECK(d2.d2 == -1.0);
  auto d3 = BernsteinFunction::euler().derivatives_at_zero();
  CHECK(d3.d2 == -1.0);

  auto custom = BernsteinFunction::custom(exp2_triple());
  auto dc = custom.derivatives_at_zero();
  CHECK(dc.phi0 == 0.0);
  CHECK(dc.d1 == doctest::Approx(1.0).epsilon(1e-10));
  CHECK(dc.d2 == doctest::Approx(-1.0).epsilon(1e-10));
  CHECK(dc.d2_finite);
}

TEST_CASE("derivatives match finite differences of eval") {
  for (const auto& phi :
       {BernsteinFunction::yosida(), BernsteinFunction::dunford_segal(),
        BernsteinFunction::euler()}) {
    auto f = [&](double s) { return phi.eval(Cx(s, 0.0)).real(); };
    auto d = phi.derivatives_at_zero();
    CHECK(oracle::fd_first_derivative(f, 1e-4) ==
          doctest::Approx(d.d1).epsilon(1e-5));
    CHECK(oracle::fd_second_derivative(f, 1e-4) ==
          doctest::Approx(d.d2).epsilon(1e-5));
  }
}

TEST_CASE("class membership") {
  CHECK(BernsteinFunction::euler().is_in_phi(1e-9));
  CHECK(BernsteinFunction::identity().is_in_phi(1e-9));
  LevyTriple shifted;
  shifted.a = 1.0;
  shifted.mu = HalfLineMeasure::from_atoms({{1.0, 1.0}});
  CHECK_FALSE(BernsteinFunction::custom(std::move(shifted)).is_in_phi(1e-9));
}

TEST_CASE("bounded norm") {
  CHECK(BernsteinFunction::yosida().bounded_norm() ==
        doctest::Approx(2.0).epsilon(1e-10));
  CHECK(BernsteinFunction::dunford_segal().bounded_norm() == doctest::Approx(2.0));
  CHECK_THROWS_AS(BernsteinFunction::euler().bounded_norm(),
                  UnboundedFunctionError);
  CHECK_THROWS_AS(BernsteinFunction::identity().bounded_norm(),
                  UnboundedFunctionError);
}

TEST_CASE("subordination closed forms have the right transforms") {
  // Gamma: L nu_1 = (1+z)^{-1}
  auto nu_e = BernsteinFunction::euler().subordination_measure(1.0);
  for (Cx z : {Cx(0.5, 0.0), Cx(1.0, 1.0), Cx(3.0, -2.0)}) {
    CHECK(std::abs(nu_e.laplace(z) - 1.0 / (1.0 + z)) < 1e-10);
  }
  // Poisson mass is 1
  auto nu_d = BernsteinFunction::dunford_segal().subordination_measure(3.0);
  CHECK(nu_d.mass() == doctest::Approx(1.0).epsilon(1e-12));
  // compound construction at t = 2, z = 1: e^{-2 phi(1)} = e^{-1}
  auto nu_y = BernsteinFunction::yosida().subordination_measure(2.0);
  CHECK(std::abs(nu_y.laplace(1.0) - std::exp(-1.0)) < 1e-9);
}

TEST_CASE("subordination transform equals e^{-t phi} on a grid") {
  for (const auto& phi :
       {BernsteinFunction::yosida(), BernsteinFunction::dunford_segal(),
        BernsteinFunction::euler()}) {
    for (double t : {0.5, 2.0}) {
      auto nu = phi.subordination_measure(t);
      CHECK(nu.mass() <= 1.0 + 1e-12);
      CHECK(nu.mass() == doctest::Approx(1.0).epsilon(1e-10));
      for (Cx z : {Cx(0.2, 0.0), Cx(1.0, 0.5), Cx(0.0, 2.0)}) {
        Cx expected = std::exp(-t * phi.eval(z));
        CHECK(std::abs(nu.laplace(z) - expected) < 1e-9);
      }
    }
  }
  CHECK_THROWS_AS(BernsteinFunction::identity().subordination_measure(1.0),
                  UnsupportedKindError);
  CHECK_THROWS_AS(BernsteinFunction::custom(exp2_triple()).subordination_measure(1.0),
                  UnsupportedKindError);
}

TEST_CASE("distribution helpers agree with direct quadrature") {
  auto nu = BernsteinFunction::euler().subordination_measure(2.0);
  // below + above = total
  for (double s : {0.5, 2.0, 7.0}) {
    CHECK(nu.mass_below(s) + nu.mass_above(s) == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(nu.first_moment_below(s) + nu.first_moment_above(s) ==
          doctest::Approx(2.0).epsilon(1e-12));  // mean of Gamma(2,1)
  }
}

TEST_CASE("eval is monotone on the half-line with nonnegative real part") {
  for (const auto& phi :
       {BernsteinFunction::yosida(), BernsteinFunction::dunford_segal(),
        BernsteinFunction::euler()}) {
    double prev = -1.0;
    for (double s = 0.0; s <= 20.0; s += 0.25) {
      double v = phi.eval(Cx(s, 0.0)).real();
      CHECK(v >= prev);
      prev = v;
    }
    for (double re : {0.0, 0.5, 3.0})
      for (double im : {-5.0, -1.0, 0.0, 2.0, 10.0})
        CHECK(phi.eval(Cx(re, im)).real() >= -1e-13);
  }
}

TEST_CASE("JSON loading and validation") {
  auto phi = BernsteinFunction::from_json_text(
      R"({"a": 0, "b": 0, "atoms": [[1.0, 1.0]]})");
  CHECK(std::abs(phi.eval(1.0) - (1.0 - std::exp(-1.0))) < 1e-14);
  auto with_density = BernsteinFunction::from_json_text(
      R"({"a": 0, "b": 0.5, "density": {"grid": [0, 1, 2], "values": [0, 1, 0]}})");
  CHECK(with_density.derivatives_at_zero().d1 ==
        doctest::Approx(1.5).epsilon(1e-10));
  CHECK_THROWS_AS(BernsteinFunction::from_json_text("{"), ConfigError);
  CHECK_THROWS_AS(BernsteinFunction::from_json_text(
                      R"({"a": 0, "atoms": [[0.0, 1.0]]})"),
                  ConfigError);
  CHECK_THROWS_AS(BernsteinFunction::from_json_text(
                      R"({"a": -1, "atoms": [[1.0, 1.0]]})"),
                  ConfigError);
  CHECK_THROWS_AS(BernsteinFunction::from_json_text(
                      R"({"density": {"grid": [0, 1], "values": [-1, 0]}})"),
                  ConfigError);
}
