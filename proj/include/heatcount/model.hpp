#pragma once

#include <cmath>
#include <complex>
#include <numbers>
#include <optional>
#include <stdexcept>
#include <vector>

#include "heatcount/quadrature.hpp"
#include "heatcount/tolerances.hpp"
#include "heatcount/units.hpp"

// Spin-boson model inputs and the reaction-coordinate mapping. The bath is an
// underdamped resonance J(w) = alpha Gamma w0^2 w / ((w0^2-w^2)^2 + Gamma^2 w^2)
// with a hard cutoff at omega_cut; after extracting the reaction coordinate
// (frequency Omega, coupling lambda) the residual bath is Ohmic, gamma*w, with
// the same cutoff.

namespace heatcount {

struct ModelParams {
  double epsilon = 2.0;        // TLS splitting (eV)
  double delta = 0.0;          // TLS tunneling (eV); 0 = pure dephasing
  double alpha = 0.1;          // dimensionless coupling strength
  double gamma_width = 1e-3;   // resonance width Gamma (eV)
  double omega0 = 0.05;        // resonance frequency (eV)
  double temperature = 300.0;  // K
  int m_rc = 20;               // oscillator levels kept in the reaction coordinate
  double omega_cut = 0.5;      // hard spectral cutoff (eV)

  void validate() const {
    if (!std::isfinite(epsilon)) throw std::invalid_argument("model: epsilon must be finite");
    if (!std::isfinite(delta)) throw std::invalid_argument("model: delta must be finite");
    if (!(alpha > 0.0)) throw std::invalid_argument("model: alpha must be positive");
    if (!(gamma_width > 0.0)) throw std::invalid_argument("model: gamma_width must be positive");
    if (!(omega0 > 0.0)) throw std::invalid_argument("model: omega0 must be positive");
    if (!(temperature > 0.0)) throw std::invalid_argument("model: temperature must be positive");
    if (m_rc < 2) throw std::invalid_argument("model: m_rc must be at least 2");
    if (!(omega_cut > omega0)) throw std::invalid_argument("model: omega_cut must exceed omega0");
  }
};

struct RCParams {
  double omega_rc;   // reaction-coordinate frequency Omega (eV)
  double lambda_rc;  // TLS-RC coupling lambda (eV)
  double gamma_rc;   // residual-bath strength gamma (dimensionless)
};

inline double j_underdamped(double omega, const ModelParams& p) {
  if (omega < 0.0) throw std::invalid_argument("j_underdamped: omega must be >= 0");
  if (omega > p.omega_cut) return 0.0;
  const double w0sq = p.omega0 * p.omega0;
  const double det = w0sq - omega * omega;
  return p.alpha * p.gamma_width * w0sq * omega /
         (det * det + p.gamma_width * p.gamma_width * omega * omega);
}

inline double j_residual(double omega, const RCParams& rc, const ModelParams& p) {
  if (omega < 0.0) throw std::invalid_argument("j_residual: omega must be >= 0");
  return (omega <= p.omega_cut) ? rc.gamma_rc * omega : 0.0;
}

inline double bose_occupation(double omega, double beta) {
  if (!(omega > 0.0)) throw std::invalid_argument("bose_occupation: omega must be positive");
  return 1.0 / std::expm1(beta * omega);
}

namespace detail {

// Interior breakpoints resolving the resonance of the underdamped density.
inline std::vector<double> resonance_breakpoints(const ModelParams& p) {
  std::vector<double> out;
  for (double k : {-30.0, -10.0, -3.0, -1.0, 0.0, 1.0, 3.0, 10.0, 30.0}) {
    double w = p.omega0 + k * p.gamma_width;
    if (w > 0.0) out.push_back(w);
  }
  return out;
}

}  // namespace detail

// Integral of J(w)/w over (0, cutoff]. The undamped resonance form is used
// directly (no hard cutoff inside the integrand) so the caller can probe
// convergence past omega_cut; the default upper limit is omega_cut itself.
inline double reorganization_energy(const ModelParams& p,
                                    std::optional<double> cutoff = std::nullopt,
                                    const QuadratureSpec& spec = {}) {
  p.validate();
  const double upper = cutoff.value_or(p.omega_cut);
  if (!(upper > 0.0)) throw std::invalid_argument("reorganization_energy: cutoff must be positive");
  const double w0sq = p.omega0 * p.omega0;
  auto f = [&](double w) -> std::complex<double> {
    const double det = w0sq - w * w;
    return p.alpha * p.gamma_width * w0sq /
           (det * det + p.gamma_width * p.gamma_width * w * w);
  };
  return integrate_oscillatory(f, 0.0, upper, spec, detail::resonance_breakpoints(p)).real();
}

// Reaction-coordinate parameters for the underdamped density, checked against
// the reorganization-energy identity integral J/w = lambda^2/Omega.
inline RCParams map_to_rc(const ModelParams& p) {
  p.validate();
  RCParams rc{p.omega0,
              std::sqrt(std::numbers::pi * p.alpha * p.omega0 / 2.0),
              p.gamma_width / (2.0 * std::numbers::pi * p.omega0)};
  const double target = rc.lambda_rc * rc.lambda_rc / rc.omega_rc;
  const double integral = reorganization_energy(p, 200.0 * p.omega0);
  if (std::abs(integral - target) > kTol.reorg_identity_rel * target)
    throw std::runtime_error("map_to_rc: reorganization-energy consistency check failed");
  return rc;
}

}  // namespace heatcount
