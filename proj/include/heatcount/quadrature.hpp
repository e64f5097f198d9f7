#pragma once

#include <algorithm>
#include <cmath>
#include <complex>
#include <queue>
#include <stdexcept>
#include <string>
#include <vector>

// Adaptive Gauss-Kronrod (G7,K15) quadrature for complex-valued integrands on
// a finite interval. Panels are kept in a worklist ordered by error estimate;
// the caller can seed breakpoints (known sharp features) and a minimum
// oscillation wavelength so the initial panels already resolve the integrand.

namespace heatcount {

struct QuadratureSpec {
  double rel_tol = 1e-8;
  double abs_tol = 1e-12;
  int max_subdivisions = 20000;
};

// Thrown when the error estimate cannot be pushed below tolerance; carries
// the best available estimate so callers can still report context.
struct QuadratureError : std::runtime_error {
  std::complex<double> estimate;
  double error_bound;
  QuadratureError(const std::string& msg, std::complex<double> est, double err)
      : std::runtime_error(msg), estimate(est), error_bound(err) {}
};

namespace detail {

// 15-point Kronrod abscissae (positive half) and weights; the embedded
// 7-point Gauss rule uses the odd-indexed abscissae.
inline constexpr double kKronrodX[8] = {
    0.991455371120812639206854697526329,
    0.949107912342758524526189684047851,
    0.864864423359769072789712788640926,
    0.741531185599394439863864773280788,
    0.586087235467691130294144838258730,
    0.405845151377397166906606412076961,
    0.207784955007898467600689403773245,
    0.000000000000000000000000000000000};
inline constexpr double kKronrodW[8] = {
    0.022935322010529224963732008058970,
    0.063092092629978553290700663189204,
    0.104790010322250183839876322541518,
    0.140653259715525918745189590510238,
    0.169004726639267902826583426598550,
    0.190350578064785409913256402421014,
    0.204432940075298892414161999234649,
    0.209482141084727828012999174891714};
inline constexpr double kGaussW[4] = {
    0.129484966168869693270611432679082,
    0.279705391489276667901467771423780,
    0.381830050505118944950369775488975,
    0.417959183673469387755102040816327};

struct Panel {
  double a, b;
  std::complex<double> value;
  double error;
};

template <class F>
inline Panel gk15(const F& f, double a, double b) {
  const double center = 0.5 * (a + b);
  const double half = 0.5 * (b - a);
  std::complex<double> fv[15];
  for (int i = 0; i < 7; ++i) {
    fv[i] = f(center - half * kKronrodX[i]);
    fv[14 - i] = f(center + half * kKronrodX[i]);
  }
  fv[7] = f(center);

  std::complex<double> kron = kKronrodW[7] * fv[7];
  std::complex<double> gauss = kGaussW[3] * fv[7];
  for (int i = 0; i < 7; ++i) kron += kKronrodW[i] * (fv[i] + fv[14 - i]);
  for (int i = 0; i < 3; ++i) gauss += kGaussW[i] * (fv[2 * i + 1] + fv[13 - 2 * i]);
  kron *= half;
  gauss *= half;

  // QUADPACK-style sharpened error estimate based on the deviation of the
  // integrand from its mean over the panel.
  std::complex<double> mean = kron / (b - a);
  double resasc = kKronrodW[7] * std::abs(fv[7] - mean);
  for (int i = 0; i < 7; ++i)
    resasc += kKronrodW[i] * (std::abs(fv[i] - mean) + std::abs(fv[14 - i] - mean));
  resasc *= std::abs(half);
  double err = std::abs(kron - gauss);
  if (resasc != 0.0 && err != 0.0)
    err = resasc * std::min(1.0, std::pow(200.0 * err / resasc, 1.5));
  return {a, b, kron, err};
}

}  // namespace detail

// Integrate f over [a,b]. `breakpoints` are interior locations of sharp
// features; `min_scale` is the shortest oscillation wavelength of f (panels
// start no wider than a third of it, capped at 4000 initial panels).
template <class F>
inline std::complex<double> integrate_oscillatory(F&& f, double a, double b,
                                                  const QuadratureSpec& spec = {},
                                                  const std::vector<double>& breakpoints = {},
                                                  double min_scale = 0.0) {
  if (!(b > a)) throw std::invalid_argument("integrate_oscillatory: need b > a");
  if (!(spec.rel_tol > 0.0) || !(spec.abs_tol > 0.0))
    throw std::invalid_argument("integrate_oscillatory: tolerances must be positive");

  std::vector<double> edges{a, b};
  for (double p : breakpoints)
    if (p > a && p < b) edges.push_back(p);
  std::sort(edges.begin(), edges.end());
  edges.erase(std::unique(edges.begin(), edges.end()), edges.end());

  std::vector<double> grid;
  const double max_width =
      (min_scale > 0.0) ? std::max(min_scale / 3.0, (b - a) / 4000.0) : (b - a);
  for (size_t i = 0; i + 1 < edges.size(); ++i) {
    grid.push_back(edges[i]);
    double width = edges[i + 1] - edges[i];
    int pieces = std::max(1, int(std::ceil(width / max_width)));
    for (int k = 1; k < pieces; ++k) grid.push_back(edges[i] + width * k / pieces);
  }
  grid.push_back(b);

  auto worse = [](const detail::Panel& x, const detail::Panel& y) { return x.error < y.error; };
  std::priority_queue<detail::Panel, std::vector<detail::Panel>, decltype(worse)> queue(worse);

  std::complex<double> total = 0.0;
  double err_total = 0.0;
  // contributions from panels too narrow to split further
  std::complex<double> frozen = 0.0;
  double err_frozen = 0.0;

  for (size_t i = 0; i + 1 < grid.size(); ++i) {
    auto p = detail::gk15(f, grid[i], grid[i + 1]);
    total += p.value;
    err_total += p.error;
    queue.push(p);
  }

  int splits = 0;
  auto converged = [&] {
    return err_total + err_frozen <=
           std::max(spec.abs_tol, spec.rel_tol * std::abs(total + frozen));
  };
  while (!converged() && !queue.empty()) {
    if (splits >= spec.max_subdivisions)
      throw QuadratureError("integrate_oscillatory: subdivision budget exhausted",
                            total + frozen, err_total + err_frozen);
    detail::Panel worst = queue.top();
    queue.pop();
    double mid = 0.5 * (worst.a + worst.b);
    if (mid <= worst.a || mid >= worst.b ||
        (worst.b - worst.a) < 1e-15 * (std::abs(worst.a) + std::abs(worst.b) + 1.0)) {
      // cannot be refined further in double precision
      frozen += worst.value;
      err_frozen += worst.error;
      total -= worst.value;
      err_total -= worst.error;
      continue;
    }
    auto left = detail::gk15(f, worst.a, mid);
    auto right = detail::gk15(f, mid, worst.b);
    total += left.value + right.value - worst.value;
    err_total += left.error + right.error - worst.error;
    queue.push(left);
    queue.push(right);
    ++splits;
  }
  if (!converged())
    throw QuadratureError("integrate_oscillatory: ran out of refinable panels",
                          total + frozen, err_total + err_frozen);
  return total + frozen;
}

template <class F>
inline std::complex<double> integrate(F&& f, double a, double b,
                                      const QuadratureSpec& spec = {}) {
  return integrate_oscillatory(std::forward<F>(f), a, b, spec);
}

}  // namespace heatcount
