#pragma once

// Central numeric tolerances. Every magic threshold used by the library lives
// here so that tests and production code agree on what "zero" means.

namespace heatcount {

struct Tolerances {
  // Relative Frobenius defect ||H - H^dag|| / ||H|| accepted for operators
  // that play the role of a Hamiltonian or observable.
  double hermiticity_rel = 1e-10;
  // Relative reconstruction error accepted from the Hermitian eigensolver,
  // ||V D V^dag - H|| / ||H||.
  double eig_reconstruction_rel = 1e-10;
  // Absolute tolerances for density-matrix inputs (trace 1, Hermiticity).
  double rho_trace_abs = 1e-8;
  double rho_hermiticity_abs = 1e-8;
  // Eigenvalue gaps below this (eV) are treated as degenerate when
  // classifying Bohr frequencies of the extended system.
  double gap_degeneracy_ev = 1e-9;
  // Entries of a generator with |L_ij| <= structural_zero_rel * max|L| are
  // treated as structural zeros when splitting into independent blocks; the
  // split is accepted only if the total off-block Frobenius mass stays below
  // offblock_norm_rel * ||L||_F.
  double structural_zero_rel = 1e-14;
  double offblock_norm_rel = 1e-12;
  // Propagation emits a warning when the state norm grows beyond
  // amplification_warn times the initial norm (generators here are
  // contractive or neutral, so large growth signals a bad generator).
  double amplification_warn = 1e6;
  // Requested times are snapped onto the step lattice; a residual offset
  // below this (ps) is ignored rather than given its own propagator.
  double time_anchor_ps = 1e-9;
  // Relative error accepted between the integrated reorganization energy and
  // its closed form when validating the reaction-coordinate mapping.
  double reorg_identity_rel = 1e-3;
};

inline constexpr Tolerances kTol{};

}  // namespace heatcount
