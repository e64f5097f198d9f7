#pragma once

#include <cmath>
#include <complex>
#include <numbers>
#include <stdexcept>
#include <vector>

#include "heatcount/model.hpp"
#include "heatcount/quadrature.hpp"
#include "heatcount/units.hpp"

// Exact pure-dephasing (delta = 0) references. The characteristic function of
// full-environment heat, its first two moments, and the TLS coherence are all
// single integrals over the unmapped spectral density:
//
//   Phi_ex(chi,t) = exp(-2 I),
//   I = int_0^wcut dw J/w^2 (1-cos(w t/hbar)) [coth(bw/2)(1-cos(w chi)) - i sin(w chi)]
//   <Q>(t)  = 2 int dw J/w    (1-cos(w t/hbar))
//   var(t)  = 2 int dw J coth(bw/2) (1-cos(w t/hbar))
//   <sx>(t) = cos(eps t/hbar) exp(-Gdec),  Gdec = 4 int dw J/w^2 coth(bw/2)(1-cos(w t/hbar))
//
// for rho_S(0) = |+><+|. The deterministic phases of the two sigma_z branches
// cancel, so the coherence carries no frequency shift beyond eps itself.

namespace heatcount {

using Complex = std::complex<double>;  // same alias as the operator algebra header

namespace detail {

inline double oscillation_wavelength(double t_ps, double chi) {
  double rate = std::max(std::abs(t_ps) / kHbar, std::abs(chi));
  return rate > 0.0 ? 2.0 * std::numbers::pi / rate : 0.0;
}

// 1 - cos(x) without cancellation near x = 0.
inline double one_minus_cos(double x) {
  double s = std::sin(0.5 * x);
  return 2.0 * s * s;
}

inline void require_dephasing(const ModelParams& p, const char* who) {
  p.validate();
  if (p.delta != 0.0)
    throw std::invalid_argument(std::string(who) + ": closed form requires delta = 0");
}

}  // namespace detail

inline Complex exact_cf(double chi, double t_ps, const ModelParams& p,
                        const QuadratureSpec& spec = {}) {
  detail::require_dephasing(p, "exact_cf");
  const double beta = beta_from_temperature(p.temperature);
  auto f = [&](double w) -> Complex {
    const double j = j_underdamped(w, p);
    const double osc = detail::one_minus_cos(w * t_ps / kHbar);
    const double coth = 1.0 / std::tanh(0.5 * beta * w);
    return (j / (w * w)) * osc *
           Complex(coth * detail::one_minus_cos(w * chi), -std::sin(w * chi));
  };
  Complex expo = integrate_oscillatory(f, 0.0, p.omega_cut, spec,
                                       detail::resonance_breakpoints(p),
                                       detail::oscillation_wavelength(t_ps, chi));
  return std::exp(-2.0 * expo);
}

inline double exact_mean(double t_ps, const ModelParams& p,
                         const QuadratureSpec& spec = {}) {
  detail::require_dephasing(p, "exact_mean");
  auto f = [&](double w) -> Complex {
    return 2.0 * j_underdamped(w, p) / w * detail::one_minus_cos(w * t_ps / kHbar);
  };
  return integrate_oscillatory(f, 0.0, p.omega_cut, spec,
                               detail::resonance_breakpoints(p),
                               detail::oscillation_wavelength(t_ps, 0.0))
      .real();
}

inline double exact_variance(double t_ps, const ModelParams& p,
                             const QuadratureSpec& spec = {}) {
  detail::require_dephasing(p, "exact_variance");
  const double beta = beta_from_temperature(p.temperature);
  auto f = [&](double w) -> Complex {
    return 2.0 * j_underdamped(w, p) / std::tanh(0.5 * beta * w) *
           detail::one_minus_cos(w * t_ps / kHbar);
  };
  return integrate_oscillatory(f, 0.0, p.omega_cut, spec,
                               detail::resonance_breakpoints(p),
                               detail::oscillation_wavelength(t_ps, 0.0))
      .real();
}

// Dephasing exponent Gdec(t); exp(-Gdec) is the coherence envelope.
inline double decoherence_exponent(double t_ps, const ModelParams& p,
                                   const QuadratureSpec& spec = {}) {
  detail::require_dephasing(p, "decoherence_exponent");
  const double beta = beta_from_temperature(p.temperature);
  auto f = [&](double w) -> Complex {
    return 4.0 * j_underdamped(w, p) / (w * w) / std::tanh(0.5 * beta * w) *
           detail::one_minus_cos(w * t_ps / kHbar);
  };
  return integrate_oscillatory(f, 0.0, p.omega_cut, spec,
                               detail::resonance_breakpoints(p),
                               detail::oscillation_wavelength(t_ps, 0.0))
      .real();
}

// <sigma_x(t)> for rho_S(0) = |+><+|.
inline double exact_coherence(double t_ps, const ModelParams& p,
                              const QuadratureSpec& spec = {}) {
  return std::cos(p.epsilon * t_ps / kHbar) *
         std::exp(-decoherence_exponent(t_ps, p, spec));
}

}  // namespace heatcount
