#pragma once

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <vector>

// Grid construction and small time-series utilities (detrending, envelope
// extraction, peak picking) shared by the statistics layer and the tests.

namespace heatcount {

inline std::vector<double> linspace(double a, double b, int n) {
  if (n < 1) throw std::invalid_argument("linspace: need at least one point");
  if (n == 1) return {a};
  std::vector<double> out(n);
  for (int i = 0; i < n; ++i) out[i] = a + (b - a) * double(i) / double(n - 1);
  out.back() = b;
  return out;
}

// Inclusive [a, b] with the given step (last point within half a step of b).
inline std::vector<double> grid_step(double a, double b, double step) {
  if (!(step > 0.0)) throw std::invalid_argument("grid_step: step must be positive");
  if (b < a) throw std::invalid_argument("grid_step: need b >= a");
  int n = int(std::floor((b - a) / step + 0.5)) + 1;
  std::vector<double> out(n);
  for (int i = 0; i < n; ++i) out[i] = a + step * i;
  return out;
}

// Boxcar mean of y over |t - t_i| <= half_width, truncated at the ends.
inline std::vector<double> moving_average(const std::vector<double>& t,
                                          const std::vector<double>& y,
                                          double half_width) {
  if (t.size() != y.size()) throw std::invalid_argument("moving_average: size mismatch");
  std::vector<double> out(y.size());
  size_t lo = 0, hi = 0;
  for (size_t i = 0; i < t.size(); ++i) {
    while (lo < t.size() && t[lo] < t[i] - half_width) ++lo;
    while (hi < t.size() && t[hi] <= t[i] + half_width) ++hi;
    double acc = 0.0;
    for (size_t k = lo; k < hi; ++k) acc += y[k];
    out[i] = acc / double(hi - lo);
  }
  return out;
}

inline double sample_std(const std::vector<double>& y) {
  if (y.size() < 2) throw std::invalid_argument("sample_std: need at least two points");
  double mean = 0.0;
  for (double v : y) mean += v;
  mean /= double(y.size());
  double acc = 0.0;
  for (double v : y) acc += (v - mean) * (v - mean);
  return std::sqrt(acc / double(y.size() - 1));
}

// Standard deviation of y minus its moving average, restricted to [t_lo, t_hi].
inline double detrended_std(const std::vector<double>& t, const std::vector<double>& y,
                            double half_width, double t_lo, double t_hi) {
  auto trend = moving_average(t, y, half_width);
  std::vector<double> resid;
  for (size_t i = 0; i < t.size(); ++i)
    if (t[i] >= t_lo && t[i] <= t_hi) resid.push_back(y[i] - trend[i]);
  return sample_std(resid);
}

// Upper envelope: windowed maximum of |y|.
inline std::vector<double> envelope_abs(const std::vector<double>& t,
                                        const std::vector<double>& y,
                                        double half_width) {
  if (t.size() != y.size()) throw std::invalid_argument("envelope_abs: size mismatch");
  std::vector<double> out(y.size());
  size_t lo = 0, hi = 0;
  for (size_t i = 0; i < t.size(); ++i) {
    while (lo < t.size() && t[lo] < t[i] - half_width) ++lo;
    while (hi < t.size() && t[hi] <= t[i] + half_width) ++hi;
    double best = 0.0;
    for (size_t k = lo; k < hi; ++k) best = std::max(best, std::abs(y[k]));
    out[i] = best;
  }
  return out;
}

// Indices i where y[i] strictly dominates every other sample within
// half_window points; equal-valued plateaus keep their first index.
inline std::vector<size_t> peak_indices(const std::vector<double>& y, size_t half_window) {
  std::vector<size_t> out;
  for (size_t i = 0; i < y.size(); ++i) {
    size_t lo = i >= half_window ? i - half_window : 0;
    size_t hi = std::min(y.size(), i + half_window + 1);
    bool best = true;
    for (size_t k = lo; k < hi && best; ++k) {
      if (k == i) continue;
      if (y[k] > y[i] || (y[k] == y[i] && k < i)) best = false;
    }
    if (best && i > 0 && i + 1 < y.size()) out.push_back(i);
  }
  return out;
}

// Least-squares slope of y against t.
inline double linear_fit_slope(const std::vector<double>& t, const std::vector<double>& y) {
  if (t.size() != y.size() || t.size() < 2)
    throw std::invalid_argument("linear_fit_slope: need two same-length series");
  double mt = 0.0, my = 0.0;
  for (size_t i = 0; i < t.size(); ++i) {
    mt += t[i];
    my += y[i];
  }
  mt /= double(t.size());
  my /= double(t.size());
  double num = 0.0, den = 0.0;
  for (size_t i = 0; i < t.size(); ++i) {
    num += (t[i] - mt) * (y[i] - my);
    den += (t[i] - mt) * (t[i] - mt);
  }
  if (den == 0.0) throw std::invalid_argument("linear_fit_slope: degenerate abscissae");
  return num / den;
}

// Refine a sampled peak position with a parabola through its neighbours.
inline double refine_peak(const std::vector<double>& t, const std::vector<double>& y,
                          size_t i) {
  if (i == 0 || i + 1 >= y.size()) return t[i];
  double den = y[i - 1] - 2.0 * y[i] + y[i + 1];
  if (den >= 0.0) return t[i];
  double shift = 0.5 * (y[i - 1] - y[i + 1]) / den;
  return t[i] + shift * (t[i + 1] - t[i]);
}

}  // namespace heatcount
