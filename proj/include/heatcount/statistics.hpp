#pragma once

#include <cmath>
#include <complex>
#include <limits>
#include <numbers>
#include <stdexcept>
#include <string>
#include <vector>

#include "heatcount/ibm.hpp"
#include "heatcount/parallel.hpp"
#include "heatcount/rcme.hpp"

// Counting statistics built on top of the master-equation engine: grids of
// the characteristic function, finite-difference moments, and the windowed
// inverse transform giving the heat distribution.

namespace heatcount {

enum class CFKind { rc_full, rc_residual, exact_full };

struct CFSeries {
  CFKind kind = CFKind::rc_full;
  double t = 0.0;                          // observation time (ps)
  std::vector<double> chi;                 // counting grid (1/eV)
  std::vector<Complex> values;             // Phi(chi, t)
  std::vector<std::string> point_errors;   // empty string = clean point
  bool warning = false;

  bool ok() const {
    for (const auto& e : point_errors)
      if (!e.empty()) return false;
    return true;
  }
};

struct CFScanPair {
  CFSeries full, residual;
};

// Phi over a chi grid at fixed time for both counting variants; one
// propagation per grid point, grid points distributed over threads. Errors
// are captured per point (value = NaN) instead of aborting the scan.
inline CFScanPair cf_scan_both(const EngineContext& ctx, const std::vector<double>& chi_grid,
                               double t, int threads = 0) {
  if (chi_grid.empty()) throw std::invalid_argument("cf_scan_both: empty chi grid");
  if (!(t >= 0.0)) throw std::invalid_argument("cf_scan_both: negative time");

  const int n = int(chi_grid.size());
  CFScanPair out;
  out.full = {CFKind::rc_full, t, chi_grid, std::vector<Complex>(n),
              std::vector<std::string>(n), false};
  out.residual = {CFKind::rc_residual, t, chi_grid, std::vector<Complex>(n),
                  std::vector<std::string>(n), false};
  const Complex nan{std::numeric_limits<double>::quiet_NaN(),
                    std::numeric_limits<double>::quiet_NaN()};
  std::vector<char> warned(n, 0);

  parallel_for(n, resolve_threads(threads), [&](int i) {
    try {
      CfTrajectory traj = cf_trajectory(ctx, chi_grid[i], {t});
      out.full.values[i] = traj.full[0];
      out.residual.values[i] = traj.residual[0];
      warned[i] = traj.warning ? 1 : 0;
    } catch (const std::exception& e) {
      out.full.values[i] = nan;
      out.residual.values[i] = nan;
      out.full.point_errors[i] = e.what();
      out.residual.point_errors[i] = e.what();
    }
  });
  for (int i = 0; i < n; ++i)
    if (warned[i]) out.full.warning = out.residual.warning = true;
  return out;
}

inline CFSeries cf_scan(const EngineContext& ctx, CountingVariant variant,
                        const std::vector<double>& chi_grid, double t, int threads = 0) {
  CFScanPair pair = cf_scan_both(ctx, chi_grid, t, threads);
  return variant == CountingVariant::full_environment ? pair.full : pair.residual;
}

inline CFSeries exact_cf_series(const ModelParams& p, const std::vector<double>& chi_grid,
                                double t, const QuadratureSpec& spec = {}, int threads = 0) {
  if (chi_grid.empty()) throw std::invalid_argument("exact_cf_series: empty chi grid");
  const int n = int(chi_grid.size());
  CFSeries out{CFKind::exact_full, t, chi_grid, std::vector<Complex>(n),
               std::vector<std::string>(n), false};
  const Complex nan{std::numeric_limits<double>::quiet_NaN(),
                    std::numeric_limits<double>::quiet_NaN()};
  parallel_for(n, resolve_threads(threads), [&](int i) {
    try {
      out.values[i] = exact_cf(chi_grid[i], t, p, spec);
    } catch (const std::exception& e) {
      out.values[i] = nan;
      out.point_errors[i] = e.what();
    }
  });
  return out;
}

// Central-difference moments from Phi at a single small chi (Phi(-chi) is
// the conjugate, so one evaluation suffices): mean to O(chi^2) from the
// imaginary part, variance to O(chi^2) from the real part.
inline double fd_mean(Complex phi_eps, double chi_eps) {
  if (!(chi_eps > 0.0)) throw std::invalid_argument("fd_mean: chi_eps must be positive");
  return std::imag(phi_eps) / chi_eps;
}

inline double fd_variance(Complex phi_eps, double chi_eps) {
  if (!(chi_eps > 0.0)) throw std::invalid_argument("fd_variance: chi_eps must be positive");
  const double mean = fd_mean(phi_eps, chi_eps);
  return (2.0 - 2.0 * std::real(phi_eps)) / (chi_eps * chi_eps) - mean * mean;
}

struct MomentSeries {
  std::vector<double> times;
  std::vector<double> mean;      // eV
  std::vector<double> variance;  // eV^2
  double chi_eps = 0.0;          // 0 marks an analytic series
  bool warning = false;
  std::string note;
};

struct MomentScanPair {
  MomentSeries full, residual;
};

// Finite-difference moment trajectories for both variants from a single
// propagation at chi = chi_eps.
inline MomentScanPair moment_series_both(const EngineContext& ctx,
                                         const std::vector<double>& times,
                                         double chi_eps = 0.005) {
  if (!(chi_eps > 0.0))
    throw std::invalid_argument("moment_series_both: chi_eps must be positive");
  CfTrajectory traj = cf_trajectory(ctx, chi_eps, times);
  MomentScanPair out;
  for (auto* ms : {&out.full, &out.residual}) {
    ms->times = times;
    ms->chi_eps = chi_eps;
    ms->warning = traj.warning;
    ms->note = traj.note;
    ms->mean.reserve(times.size());
    ms->variance.reserve(times.size());
  }
  for (size_t k = 0; k < times.size(); ++k) {
    out.full.mean.push_back(fd_mean(traj.full[k], chi_eps));
    out.full.variance.push_back(fd_variance(traj.full[k], chi_eps));
    out.residual.mean.push_back(fd_mean(traj.residual[k], chi_eps));
    out.residual.variance.push_back(fd_variance(traj.residual[k], chi_eps));
  }
  return out;
}

inline MomentSeries moment_series(const EngineContext& ctx, CountingVariant variant,
                                  const std::vector<double>& times, double chi_eps = 0.005) {
  MomentScanPair pair = moment_series_both(ctx, times, chi_eps);
  return variant == CountingVariant::full_environment ? pair.full : pair.residual;
}

inline MomentSeries exact_moment_series(const ModelParams& p, const std::vector<double>& times,
                                        const QuadratureSpec& spec = {}, int threads = 0) {
  MomentSeries out;
  out.times = times;
  out.chi_eps = 0.0;
  out.mean.assign(times.size(), 0.0);
  out.variance.assign(times.size(), 0.0);
  parallel_for(int(times.size()), resolve_threads(threads), [&](int i) {
    out.mean[i] = exact_mean(times[i], p, spec);
    out.variance[i] = exact_variance(times[i], p, spec);
  });
  return out;
}

struct HeatDistribution {
  std::vector<double> q;  // eV
  std::vector<double> p;  // 1/eV
  double window_sigma;    // Gaussian window width in chi (1/eV)
  double norm;            // trapezoid integral of p over the q grid
};

// Windowed inverse transform P(q) = dchi/(2 pi) sum_j W(chi_j) Phi_j e^{-i chi_j q}
// with W a Gaussian of width sigma = chi_max / 2. Requires a uniform chi grid
// symmetric about zero. The result is not renormalized; `norm` reports how
// much probability the grid captured.
inline HeatDistribution distribution_from_cf(const CFSeries& cf,
                                             const std::vector<double>& q_grid) {
  const size_t n = cf.chi.size();
  if (n < 3) throw std::invalid_argument("distribution_from_cf: chi grid too small");
  if (q_grid.empty()) throw std::invalid_argument("distribution_from_cf: empty q grid");
  if (!cf.ok())
    throw std::invalid_argument("distribution_from_cf: chi grid has failed points");
  const double dchi = cf.chi[1] - cf.chi[0];
  for (size_t i = 0; i + 1 < n; ++i)
    if (std::abs(cf.chi[i + 1] - cf.chi[i] - dchi) > 1e-9 * std::abs(dchi))
      throw std::invalid_argument("distribution_from_cf: chi grid must be uniform");
  if (std::abs(cf.chi.front() + cf.chi.back()) > 1e-9 * std::abs(cf.chi.back()))
    throw std::invalid_argument("distribution_from_cf: chi grid must be symmetric about 0");

  const double sigma = 0.5 * cf.chi.back();
  if (!(sigma > 0.0)) throw std::invalid_argument("distribution_from_cf: degenerate grid");

  HeatDistribution out;
  out.q = q_grid;
  out.p.resize(q_grid.size());
  out.window_sigma = sigma;
  for (size_t iq = 0; iq < q_grid.size(); ++iq) {
    Complex acc = 0.0;
    for (size_t j = 0; j < n; ++j) {
      const double w = std::exp(-0.5 * cf.chi[j] * cf.chi[j] / (sigma * sigma));
      acc += w * cf.values[j] *
             std::exp(-kImagUnit * cf.chi[j] * q_grid[iq]);
    }
    out.p[iq] = (dchi / (2.0 * std::numbers::pi)) * acc.real();
  }
  out.norm = 0.0;
  for (size_t iq = 0; iq + 1 < q_grid.size(); ++iq)
    out.norm += 0.5 * (out.p[iq] + out.p[iq + 1]) * (q_grid[iq + 1] - q_grid[iq]);
  return out;
}

}  // namespace heatcount
