#include <doctest.h>

#include <cmath>

#include "semirate/quadrature.hpp"

using namespace semirate;

TEST_CASE("adaptive panels on smooth integrands") {
  auto r = quad::integrate([](double x) { return x * x; }, 0.0, 1.0);
  CHECK(r.value == doctest::Approx(1.0 / 3.0).epsilon(1e-13));
  auto osc = quad::integrate([](double x) { return std::sin(10.0 * x); }, 0.0,
                             M_PI);
  CHECK(osc.value == doctest::Approx((1.0 - std::cos(10.0 * M_PI)) / 10.0)
                         .epsilon(1e-12));
}

TEST_CASE("endpoint singularities") {
  auto r = quad::integrate_singular(
      [](double x) { return 1.0 / std::sqrt(x); }, 0.0, 1.0);
  CHECK(r.value == doctest::Approx(2.0).epsilon(1e-12));
  auto both = quad::integrate_singular(
      [](double x) { return 1.0 / std::sqrt(x * (1.0 - x)); }, 0.0, 1.0);
  CHECK(both.value == doctest::Approx(M_PI).epsilon(1e-11));
}

TEST_CASE("semi-infinite tails") {
  auto r = quad::integrate_to_inf([](double x) { return std::exp(-x); }, 0.0);
  CHECK(r.value == doctest::Approx(1.0).epsilon(1e-12));
  auto shifted =
      quad::integrate_to_inf([](double x) { return std::exp(-0.5 * x); }, 2.0);
  CHECK(shifted.value == doctest::Approx(2.0 * std::exp(-1.0)).epsilon(1e-12));
}

TEST_CASE("sign change bracketing") {
  auto roots = quad::sign_change_roots(
      [](double x) { return std::sin(x); }, 1.0, 20.0, 4096);
  REQUIRE(roots.size() == 6);
  for (size_t k = 0; k < roots.size(); ++k)
    CHECK(roots[k] == doctest::Approx((k + 1) * M_PI).epsilon(1e-12));
}

TEST_CASE("golden minimisation") {
  double x = quad::golden_min(
      [](double t) { return (t - 3.0) * (t - 3.0) + 1.0; }, 0.0, 10.0);
  CHECK(x == doctest::Approx(3.0).epsilon(1e-7));
}
