#pragma once

#include <stdexcept>

// Unit conventions used throughout: energies and frequencies in eV, times in
// ps, temperatures in K. hbar then carries eV.ps and every exp(-i H t / hbar)
// is dimensionless; rates are eV / hbar = ps^-1. Counting parameters chi are
// conjugate to energy and carry 1/eV.

namespace heatcount {

inline constexpr double kHbar = 0.6582119569;        // eV ps
inline constexpr double kBoltzmann = 8.617333262e-5; // eV / K

// Inverse temperature in 1/eV.
inline double beta_from_temperature(double temperature_k) {
  if (!(temperature_k > 0.0))
    throw std::invalid_argument("temperature must be positive (K)");
  return 1.0 / (kBoltzmann * temperature_k);
}

}  // namespace heatcount
