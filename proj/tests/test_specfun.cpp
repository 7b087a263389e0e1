#include <doctest.h>

#include <boost/math/special_functions/bessel.hpp>
#include <boost/math/special_functions/laguerre.hpp>

#include <cmath>
#include <sstream>

#include "oracle_helpers.hpp"
#include "semirate/errors.hpp"
#include "semirate/specfun.hpp"

using namespace semirate;

TEST_CASE("generalized Laguerre values") {
  CHECK(specfun::laguerre_l1(0, 0.7) == 1.0);
  CHECK(specfun::laguerre_l1(2, 0.0) == doctest::Approx(3.0));
  // degree-2 polynomial is 3 - 3s + s^2/2
  for (double s : {0.1, 0.5, 1.0, 2.0, 7.0}) {
    CHECK(specfun::laguerre_l1(2, s) ==
          doctest::Approx(3.0 - 3.0 * s + 0.5 * s * s).epsilon(1e-14));
  }
  CHECK(specfun::laguerre_l1(2, 2.0) == doctest::Approx(-1.0));
  for (int k : {1, 3, 5, 10, 20}) {
    for (double s : {0.2, 1.0, 3.7, 11.0, 25.0}) {
      CHECK(specfun::laguerre_l1(k, s) ==
            doctest::Approx(boost::math::laguerre(unsigned(k), 1, s))
                .epsilon(1e-11));
    }
  }
}

TEST_CASE("Laguerre roots bracket every sign change") {
  for (int k : {1, 2, 5, 12, 29}) {
    auto roots = specfun::laguerre_l1_roots(k);
    REQUIRE(int(roots.size()) == k);
    for (double r : roots) {
      CHECK(std::abs(specfun::laguerre_l1(k, r)) < 1e-7 * std::pow(10.0, k / 10));
      CHECK(r > 0.0);
    }
    for (size_t i = 0; i + 1 < roots.size(); ++i) CHECK(roots[i] < roots[i + 1]);
  }
}

TEST_CASE("confluent hypergeometric") {
  CHECK(specfun::kummer_1f1(0.3, 2.0, 0.0) == 1.0);
  CHECK(specfun::kummer_1f1(0.0, 2.0, 5.0) == 1.0);
  // terminating case 1F1(-2; 2; s) = 1 - s + s^2/6
  for (double s : {0.3, 1.0, 4.0, 9.0}) {
    CHECK(specfun::kummer_1f1(-2.0, 2.0, s) ==
          doctest::Approx(1.0 - s + s * s / 6.0).epsilon(1e-14));
  }
  // 1F1(1; 2; s) = (e^s - 1)/s across the series/large-argument range
  for (double s : {0.5, 5.0, 25.0, 60.0, 200.0}) {
    CHECK(specfun::kummer_1f1(1.0, 2.0, s) ==
          doctest::Approx(std::expm1(s) / s).epsilon(1e-11));
  }
  CHECK_THROWS_AS(specfun::kummer_1f1(0.5, -1.0, 1.0), ConfigError);
}

TEST_CASE("Bessel I1 series and asymptotic branches") {
  for (double x : {0.01, 0.5, 3.0, 19.5, 20.5, 40.0, 80.0}) {
    CHECK(specfun::bessel_i1(x) ==
          doctest::Approx(boost::math::cyl_bessel_i(1, x)).epsilon(2e-10));
  }
}

TEST_CASE("q_beta closed forms") {
  for (double s : {0.2, 1.0, 3.0, 10.0}) {
    CHECK(specfun::q_beta(1.0, s) == doctest::Approx(std::exp(-s)).epsilon(1e-12));
    CHECK(specfun::q_beta(2.0, s) ==
          doctest::Approx(std::exp(-s) * (2.0 - s)).epsilon(1e-12));
  }
  CHECK(specfun::q_beta(3.0, 1.0) ==
        doctest::Approx(0.5 * std::exp(-1.0)).epsilon(1e-12));
}

TEST_CASE("q_m equals the Laguerre kernel") {
  for (int m = 1; m <= 12; ++m) {
    for (int i = 0; i < 64; ++i) {
      double s = 0.05 + 0.7 * i;
      double lhs = specfun::q_beta(double(m), s);
      double rhs = std::exp(-s) * specfun::laguerre_l1(m - 1, s);
      CHECK(lhs == doctest::Approx(rhs).epsilon(1e-10));
    }
  }
}

TEST_CASE("q_beta large-argument evaluation stays smooth across the switch") {
  for (double beta : {0.5, 1.7, 2.3, 4.6}) {
    double s0 = std::max(60.0, 4.0 * beta * beta + 40.0);
    double below = specfun::q_beta(beta, s0 * 0.999);
    double above = specfun::q_beta(beta, s0 * 1.001);
    CHECK(below == doctest::Approx(above).epsilon(1e-6));
  }
}

TEST_CASE("c_beta exact values") {
  CHECK(specfun::c_beta(1.0) == doctest::Approx(2.0).epsilon(1e-10));
  CHECK(specfun::c_beta(2.0) ==
        doctest::Approx(2.0 * (1.0 + std::exp(-2.0))).epsilon(1e-10));
  // beta in (0,1]: the kernel is nonnegative with unit integral
  double err = 0.0;
  double c_half = specfun::c_beta(0.5, &err);
  CHECK(std::abs(c_half - 2.0) < 1e-8 + 3.0 * err);
}

TEST_CASE("c_m against the closed-form piecewise integral") {
  // oracle: exact integration of e^{-s} |L_{m-1}| with polynomial coefficients
  for (int m = 2; m <= 7; ++m) {
    auto coeffs = oracle::laguerre_l1_coeffs(m - 1);
    auto roots = specfun::laguerre_l1_roots(m - 1);
    std::vector<double> cuts{0.0};
    cuts.insert(cuts.end(), roots.begin(), roots.end());
    cuts.push_back(200.0);
    double total = 0.0;
    for (size_t i = 0; i + 1 < cuts.size(); ++i)
      total += std::abs(oracle::exp_poly_integral(coeffs, cuts[i], cuts[i + 1]));
    double expected = 1.0 + total;
    CHECK(specfun::c_beta(double(m)) == doctest::Approx(expected).epsilon(1e-9));
    CHECK(1.0 + specfun::laguerre_abs_mean(m) ==
          doctest::Approx(expected).epsilon(1e-9));
  }
}

TEST_CASE("c_3 lies in the certified interval") {
  double c3 = specfun::c_beta(3.0);
  CHECK(c3 >= 1.0);
  CHECK(c3 <= 1.0 + 2.0 * std::sqrt(3.0));
}

TEST_CASE("laguerre_abs_mean small cases") {
  CHECK(specfun::laguerre_abs_mean(1) == doctest::Approx(1.0).epsilon(1e-12));
  // m = 2: integral of e^{-s}|2-s| = 1 + 2 e^{-2}
  CHECK(specfun::laguerre_abs_mean(2) ==
        doctest::Approx(1.0 + 2.0 * std::exp(-2.0)).epsilon(1e-11));
  CHECK(specfun::laguerre_abs_mean(10) <= 2.0 * std::sqrt(10.0));
}

TEST_CASE("unit-interval square mean") {
  CHECK(specfun::laguerre_sq_mean_unit(1) ==
        doctest::Approx(1.0 - std::exp(-1.0)).epsilon(1e-12));
  for (int m : {2, 7, 19, 30})
    CHECK(specfun::laguerre_sq_mean_unit(m) <= 2.5 * m);
}

TEST_CASE("Watson identity residuals") {
  CHECK(specfun::watson_identity_residual(1, 1.0) <= 1e-8);
  CHECK(specfun::watson_identity_residual(2, 0.5) <= 1e-8);
  CHECK(specfun::watson_identity_residual(5, 1.0) <= 1e-7);
}

TEST_CASE("submultiplicative split dominates the direct value") {
  for (double beta : {2.5, 3.5, 6.5}) {
    int m = int(beta);
    double alpha = beta - m;
    double direct = specfun::c_beta(beta);
    double split = specfun::c_beta(double(m)) * specfun::c_beta(alpha);
    CHECK(direct <= split * (1.0 + 1e-9));
  }
}

TEST_CASE("stated root bounds for fractional orders") {
  for (double beta = 1.5; beta <= 10.5; beta += 1.0) {
    CHECK(specfun::c_beta(beta) <= 2.0 * (1.0 + 2.0 * std::sqrt(beta)));
  }
}

TEST_CASE("c_beta table flags and CSV shape") {
  specfun::CbetaTable table;
  table.build({0.5, 1.0, 2.0});
  CHECK(table.entries().size() == 3);
  for (const auto& [b, e] : table.entries()) CHECK(e.bound_ok);
  std::ostringstream os;
  table.write_csv(os);
  CHECK(os.str().rfind("beta,c_beta,err,upper_bound,ok\n", 0) == 0);
}
