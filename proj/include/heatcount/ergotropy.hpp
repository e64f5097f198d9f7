#pragma once

#include <algorithm>
#include <stdexcept>
#include <string>
#include <vector>

#include "heatcount/linalg.hpp"
#include "heatcount/rcme.hpp"

// Ergotropy: maximal unitarily extractable work. The passive state pairs the
// populations of rho, sorted descending, with the energies of h, sorted
// ascending; the ergotropy is the energy gap to it.

namespace heatcount {

inline Operator passive_state(const Operator& rho, const Operator& h) {
  if (rho.rows() != h.rows() || rho.cols() != h.cols() || rho.rows() != rho.cols())
    throw std::invalid_argument("passive_state: dimension mismatch");
  // propagated states carry O(1e-8) Hermiticity drift; symmetrize before
  // validating and diagonalizing
  Operator sym = 0.5 * (rho + rho.adjoint());
  validate_density_matrix(sym, int(sym.rows()), "passive_state");
  SpectralDecomposition pops = hermitian_eig(sym);
  SpectralDecomposition levels = hermitian_eig(h);

  const int d = int(rho.rows());
  Operator out = Operator::Zero(d, d);
  // pops.eigenvalues ascending; walk them backwards against ascending energies
  for (int k = 0; k < d; ++k) {
    const double population = pops.eigenvalues(d - 1 - k);
    out += population * levels.eigenvectors.col(k) * levels.eigenvectors.col(k).adjoint();
  }
  return out;
}

inline double ergotropy(const Operator& rho, const Operator& h) {
  const Operator passive = passive_state(rho, h);
  return std::real((h * (rho - passive)).trace());
}

struct ErgotropySeries {
  std::vector<double> times;
  std::vector<double> tls;  // eV, reduced TLS state against the bare TLS Hamiltonian
  std::vector<double> es;   // eV, extended-system state against H_ES
  bool warning = false;
  std::string note;
};

inline ErgotropySeries ergotropy_series(const EngineContext& ctx,
                                        const std::vector<double>& times) {
  Chi0Dynamics dyn = dynamics_chi0(ctx, times);
  const Operator h_tls =
      0.5 * ctx.model.epsilon * pauli_z() + 0.5 * ctx.model.delta * pauli_x();

  ErgotropySeries out;
  out.times = times;
  out.warning = dyn.warning;
  out.note = dyn.note;
  out.tls.reserve(times.size());
  out.es.reserve(times.size());
  for (size_t k = 0; k < times.size(); ++k) {
    out.tls.push_back(ergotropy(dyn.rho_tls[k], h_tls));
    out.es.push_back(ergotropy(dyn.rho_es[k], ctx.es.h_es));
  }
  return out;
}

}  // namespace heatcount
