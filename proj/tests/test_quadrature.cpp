#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <complex>
#include <numbers>

#include "heatcount/quadrature.hpp"

using namespace heatcount;
using Catch::Matchers::WithinAbs;
using std::numbers::pi;

TEST_CASE("Smooth integrands", "[quadrature]") {
  auto sq = [](double x) { return std::complex<double>(x * x); };
  CHECK_THAT(integrate(sq, 0.0, 1.0).real(), WithinAbs(1.0 / 3.0, 1e-12));

  auto s = [](double x) { return std::complex<double>(std::sin(x)); };
  CHECK_THAT(integrate(s, 0.0, pi).real(), WithinAbs(2.0, 1e-10));
}

TEST_CASE("Complex-valued integrand", "[quadrature]") {
  auto f = [](double x) { return std::exp(std::complex<double>(0.0, x)); };
  auto v = integrate(f, 0.0, 1.0);
  CHECK_THAT(v.real(), WithinAbs(std::sin(1.0), 1e-12));
  CHECK_THAT(v.imag(), WithinAbs(1.0 - std::cos(1.0), 1e-12));
}

TEST_CASE("Oscillatory integrand with a wavelength hint", "[quadrature]") {
  const double k = 200.0;
  auto f = [&](double x) { return std::complex<double>(std::cos(k * x)); };
  auto v = integrate_oscillatory(f, 0.0, 1.0, {}, {}, 2.0 * pi / k);
  CHECK_THAT(v.real(), WithinAbs(std::sin(k) / k, 1e-10));
}

TEST_CASE("Narrow resonance with a breakpoint", "[quadrature]") {
  const double x0 = 0.5, g = 1e-5;
  auto f = [&](double x) {
    double d = x - x0;
    return std::complex<double>(g / (d * d + g * g));
  };
  double exact = std::atan((1.0 - x0) / g) + std::atan(x0 / g);
  auto v = integrate_oscillatory(f, 0.0, 1.0, {}, {x0 - g, x0, x0 + g});
  CHECK_THAT(v.real(), WithinAbs(exact, 1e-7 * exact));
}

TEST_CASE("Failure modes", "[quadrature]") {
  auto f = [](double x) { return std::complex<double>(std::cos(1000.0 * x)); };
  QuadratureSpec starved;
  starved.rel_tol = 1e-15;
  starved.abs_tol = 1e-300;
  starved.max_subdivisions = 2;
  try {
    integrate_oscillatory(f, 0.0, 1.0, starved);
    FAIL("expected QuadratureError");
  } catch (const QuadratureError& e) {
    CHECK(std::isfinite(e.estimate.real()));
    CHECK(e.error_bound > 0.0);
  }

  CHECK_THROWS_AS(integrate([](double) { return std::complex<double>(1.0); }, 1.0, 0.0),
                  std::invalid_argument);
}
