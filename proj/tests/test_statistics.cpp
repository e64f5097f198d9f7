#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <complex>
#include <numbers>

#include "heatcount/series.hpp"
#include "heatcount/statistics.hpp"

using namespace heatcount;
using Catch::Matchers::WithinAbs;

namespace {

// CF of a Gaussian N(mu, sigma^2): exp(i mu chi - sigma^2 chi^2 / 2)
Complex gaussian_cf(double chi, double mu, double sigma) {
  return std::exp(Complex(-0.5 * sigma * sigma * chi * chi, mu * chi));
}

double gaussian_pdf(double q, double mu, double var) {
  return std::exp(-0.5 * (q - mu) * (q - mu) / var) /
         std::sqrt(2.0 * std::numbers::pi * var);
}

ModelParams tiny_model() {
  ModelParams p;
  p.m_rc = 4;
  return p;
}

}  // namespace

TEST_CASE("Finite-difference moments on an analytic CF", "[statistics]") {
  const double mu = 0.3, sigma = 0.5;
  const double eps = 1e-3;
  CHECK_THAT(fd_mean(gaussian_cf(eps, mu, sigma), eps), WithinAbs(mu, 1e-6));
  CHECK_THAT(fd_variance(gaussian_cf(eps, mu, sigma), eps),
             WithinAbs(sigma * sigma, 1e-6));
  CHECK_THROWS_AS(fd_mean(Complex(1.0), 0.0), std::invalid_argument);
  CHECK_THROWS_AS(fd_variance(Complex(1.0), -1.0), std::invalid_argument);
}

TEST_CASE("Finite-difference estimator converges at second order", "[statistics]") {
  const double mu = 0.3, sigma = 0.5;
  std::vector<double> steps{0.04, 0.02, 0.01, 0.005};
  std::vector<double> log_eps, log_err_mean, log_err_var;
  for (double eps : steps) {
    Complex phi = gaussian_cf(eps, mu, sigma);
    log_eps.push_back(std::log(eps));
    log_err_mean.push_back(std::log(std::abs(fd_mean(phi, eps) - mu)));
    log_err_var.push_back(std::log(std::abs(fd_variance(phi, eps) - sigma * sigma)));
  }
  CHECK(linear_fit_slope(log_eps, log_err_mean) > 1.9);
  CHECK(linear_fit_slope(log_eps, log_err_var) > 1.9);
}

TEST_CASE("CF scan over a chi grid", "[statistics]") {
  EngineContext ctx = make_context(tiny_model());
  std::vector<double> chi{-0.5, 0.0, 0.5};
  CFScanPair pair = cf_scan_both(ctx, chi, 5.0, 1);
  REQUIRE(pair.full.ok());
  REQUIRE(pair.residual.ok());
  // chi = 0 is the plain trace: exactly 1
  CHECK_THAT(std::abs(pair.full.values[1] - Complex(1.0)), WithinAbs(0.0, 1e-10));
  CHECK_THAT(std::abs(pair.residual.values[1] - Complex(1.0)), WithinAbs(0.0, 1e-10));
  // CF of a real random variable: phi(-chi) = conj phi(chi)
  CHECK(std::abs(pair.full.values[0] - std::conj(pair.full.values[2])) < 1e-10);
  CHECK(std::abs(pair.residual.values[0] - std::conj(pair.residual.values[2])) < 1e-10);
  // serial and threaded scans agree bit for bit
  CFScanPair threaded = cf_scan_both(ctx, chi, 5.0, 4);
  for (size_t i = 0; i < chi.size(); ++i) {
    CHECK(pair.full.values[i] == threaded.full.values[i]);
    CHECK(pair.residual.values[i] == threaded.residual.values[i]);
  }
  CHECK_THROWS_AS(cf_scan_both(ctx, {}, 5.0), std::invalid_argument);
  CHECK_THROWS_AS(cf_scan_both(ctx, chi, -1.0), std::invalid_argument);
}

TEST_CASE("CF scan captures per-point failures", "[statistics]") {
  EngineContext ctx = make_context(tiny_model());
  ctx.es.coupling_op(0, 0) = std::numeric_limits<double>::quiet_NaN();
  CFScanPair pair = cf_scan_both(ctx, {0.0, 0.5}, 1.0, 1);
  CHECK_FALSE(pair.full.ok());
  for (size_t i = 0; i < 2; ++i) {
    CHECK(std::isnan(pair.full.values[i].real()));
    CHECK_FALSE(pair.full.point_errors[i].empty());
  }
}

TEST_CASE("Exact CF series matches the pointwise oracle", "[statistics]") {
  ModelParams p;
  CFSeries s = exact_cf_series(p, {0.0, 0.5}, 10.0);
  REQUIRE(s.ok());
  CHECK_THAT(std::abs(s.values[0] - Complex(1.0)), WithinAbs(0.0, 1e-10));
  CHECK(std::abs(s.values[1] - Complex(0.998354360983807, 0.0429174891101718)) < 1e-8);
}

TEST_CASE("Moment trajectories at t = 0", "[statistics]") {
  EngineContext ctx = make_context(tiny_model());
  MomentScanPair pair = moment_series_both(ctx, {0.0, 1.0}, 0.005);
  CHECK_THAT(pair.full.mean[0], WithinAbs(0.0, 1e-9));
  CHECK_THAT(pair.full.variance[0], WithinAbs(0.0, 1e-6));
  CHECK_THAT(pair.residual.mean[0], WithinAbs(0.0, 1e-9));
  CHECK_THROWS_AS(moment_series_both(ctx, {0.0}, 0.0), std::invalid_argument);
}

TEST_CASE("Windowed inverse transform of a Gaussian CF", "[statistics]") {
  // The Gaussian chi window of width sigma_w convolves the target with
  // N(0, 1/sigma_w^2); compare against that analytic expectation.
  const double mu = 0.3, sigma = 0.5;
  const double chi_max = 40.0;
  const int n = 1601;
  CFSeries cf;
  cf.kind = CFKind::exact_full;
  cf.t = 0.0;
  cf.chi = linspace(-chi_max, chi_max, n);
  cf.values.resize(n);
  cf.point_errors.assign(n, "");
  for (int i = 0; i < n; ++i) cf.values[i] = gaussian_cf(cf.chi[i], mu, sigma);

  std::vector<double> q = linspace(-2.0, 2.6, 47);
  HeatDistribution dist = distribution_from_cf(cf, q);
  const double var_eff = sigma * sigma + 1.0 / (dist.window_sigma * dist.window_sigma);
  for (size_t i = 0; i < q.size(); ++i)
    CHECK_THAT(dist.p[i], WithinAbs(gaussian_pdf(q[i], mu, var_eff), 1e-6));
  CHECK_THAT(dist.norm, WithinAbs(1.0, 1e-4));
}

TEST_CASE("Inverse transform input validation", "[statistics]") {
  CFSeries cf;
  cf.chi = {-1.0, 0.0, 1.0};
  cf.values = {Complex(1.0), Complex(1.0), Complex(1.0)};
  cf.point_errors.assign(3, "");
  CHECK_NOTHROW(distribution_from_cf(cf, {0.0}));

  CFSeries small = cf;
  small.chi = {-1.0, 1.0};
  small.values.resize(2);
  small.point_errors.resize(2);
  CHECK_THROWS_AS(distribution_from_cf(small, {0.0}), std::invalid_argument);

  CFSeries skew = cf;
  skew.chi = {-1.0, 0.0, 2.0};
  CHECK_THROWS_AS(distribution_from_cf(skew, {0.0}), std::invalid_argument);

  CFSeries failed = cf;
  failed.point_errors[1] = "boom";
  CHECK_THROWS_AS(distribution_from_cf(failed, {0.0}), std::invalid_argument);

  CHECK_THROWS_AS(distribution_from_cf(cf, {}), std::invalid_argument);
}
