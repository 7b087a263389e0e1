#include <doctest.h>

#include <cmath>

#include "semirate/errors.hpp"
#include "semirate/measure.hpp"

using namespace semirate;

TEST_CASE("atom bookkeeping") {
  auto m = HalfLineMeasure::from_atoms({{1.0, 2.0}, {0.0, -3.0}});
  CHECK(m.mass() == doctest::Approx(-1.0));
  CHECK(m.total_variation() == doctest::Approx(5.0));
  CHECK(m.moment(1) == doctest::Approx(2.0));
  // merging keeps locations distinct
  m.add_atom(1.0, -2.0);
  CHECK(m.total_variation() == doctest::Approx(3.0));
}

TEST_CASE("piecewise-linear samples integrate exactly") {
  auto m = HalfLineMeasure::from_samples({0.0, 1.0, 2.0}, {0.0, 1.0, 0.0});
  CHECK(m.mass() == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(m.moment(1) == doctest::Approx(1.0).epsilon(1e-12));  // symmetric hat
  CHECK(m.density_at(0.5) == doctest::Approx(0.5));
  CHECK(m.density_at(3.0) == 0.0);
}

TEST_CASE("exponential density Laplace transform") {
  auto m = HalfLineMeasure::from_density([](double s) { return std::exp(-s); },
                                         0.0, 50.0);
  for (std::complex<double> z : {std::complex<double>(0.5, 0.0),
                                 std::complex<double>(1.0, 2.0),
                                 std::complex<double>(0.0, 1.0)}) {
    CHECK(std::abs(m.laplace(z) - 1.0 / (1.0 + z)) < 1e-10);
  }
}

TEST_CASE("declared power tail enters moments and variation") {
  auto m = HalfLineMeasure::from_density([](double s) { return std::pow(s, -3.5); },
                                         1.0, 10.0);
  m.set_power_tail(3.5);
  // mass = int_1^inf s^{-3.5} = 1/2.5
  CHECK(m.mass() == doctest::Approx(1.0 / 2.5).epsilon(1e-9));
  CHECK(m.moment_finite(1));
  CHECK(m.moment(1) == doctest::Approx(1.0 / 1.5).epsilon(1e-9));
  CHECK_FALSE(m.moment_finite(3));
  CHECK(std::isinf(m.moment(3, true)));
  CHECK_THROWS_AS(m.moment(3), NumericalError);
}

TEST_CASE("total variation splits signs") {
  auto m = HalfLineMeasure::from_density(
      [](double s) { return std::exp(-s) * (2.0 - s); }, 0.0, 45.0);
  // int e^{-s}|2-s| = 1 + 2 e^{-2}
  CHECK(m.total_variation() ==
        doctest::Approx(1.0 + 2.0 * std::exp(-2.0)).epsilon(1e-10));
  CHECK(m.mass() == doctest::Approx(1.0).epsilon(1e-10));
}

TEST_CASE("convolution of atoms and exponentials") {
  auto f = HalfLineMeasure::from_atoms({{0.5, 2.0}});
  auto g = HalfLineMeasure::from_atoms({{1.5, -1.0}, {0.0, 1.0}});
  auto fg = f.convolve(g);
  CHECK(fg.mass() == doctest::Approx(0.0));
  CHECK(fg.total_variation() == doctest::Approx(4.0));

  // exp(-s) * exp(-2s): density (e^{-s} - e^{-2s})
  auto a = HalfLineMeasure::from_density([](double s) { return std::exp(-s); },
                                         0.0, 45.0);
  auto b = HalfLineMeasure::from_density(
      [](double s) { return 2.0 * std::exp(-2.0 * s); }, 0.0, 30.0);
  auto ab = a.convolve(b);
  for (double s : {0.3, 1.0, 2.5}) {
    CHECK(ab.density_at(s) ==
          doctest::Approx(2.0 * (std::exp(-s) - std::exp(-2.0 * s))).epsilon(1e-8));
  }
  CHECK(ab.mass() == doctest::Approx(1.0).epsilon(1e-6));
}

TEST_CASE("validation") {
  CHECK_THROWS_AS(HalfLineMeasure::from_samples({1.0}, {1.0}), ConfigError);
  CHECK_THROWS_AS(HalfLineMeasure::from_samples({1.0, 0.5}, {1.0, 1.0}),
                  ConfigError);
  HalfLineMeasure m;
  CHECK_THROWS_AS(m.add_atom(-1.0, 1.0), ConfigError);
}
