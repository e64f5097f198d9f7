#pragma once

#include <cmath>
#include <numbers>
#include <stdexcept>
#include <string>
#include <vector>

#include "heatcount/linalg.hpp"
#include "heatcount/model.hpp"
#include "heatcount/tolerances.hpp"
#include "heatcount/units.hpp"

// Counting-field master equation for the extended system (TLS tensor RC).
// The generalized state obeys, in eV/ps units,
//
//   d rho / dt = -(i/hbar)[H_ES, rho]
//                - (1/hbar)( A A1 rho - A rho A2 - A3 rho A + rho A4 A )
//
// with A = I (x) (b + b^dag) and four chi-dependent rate operators defined in
// the H_ES eigenbasis per transition gap l = lam_m - lam_n:
//
//   l > 0:  A1 = pi A_mn J(l) N(l)              A2 = pi A_mn J(l)(1+N(l)) e^{+i chi l}
//           A3 = pi A_mn J(l) N(l) e^{-i chi l} A4 = pi A_mn J(l)(1+N(l))
//   l < 0, a = -l:
//           A1 = pi A_mn J(a)(1+N(a))           A2 = pi A_mn J(a) N(a) e^{-i chi a}
//           A3 = pi A_mn J(a)(1+N(a)) e^{+i chi a}  A4 = pi A_mn J(a) N(a)
//   l = 0:  all four equal pi A_mn gamma / beta (the J N product limit).
//
// J is the residual Ohmic density with the hard cutoff. Principal-value and
// counter terms are omitted. At chi = 0 this collapses to the standard
// reaction-coordinate master equation (A2 -> A4, A3 -> A1).
//
// Counting variants differ only in initial condition and readout, not in the
// generator: "full" counts the pre-mapping environment (thermal RC factor
// dressed by e^{-i chi Omega n}, readout weighted by e^{+i chi Omega n}),
// "residual" counts the post-mapping bath (plain thermal RC, plain trace).

namespace heatcount {

enum class CountingVariant { full_environment, residual_environment };

struct ExtendedSystem {
  int dim_tls = 2;
  int dim_rc = 0;
  Operator h_es;                  // eV
  Operator coupling_op;           // A = I (x) (b + b^dag)
  Operator h_rc;                  // Omega I (x) n, the counting weight
  SpectralDecomposition spectral; // of h_es
};

inline Operator plus_state() { return 0.5 * Operator::Ones(2, 2); }

inline void validate_density_matrix(const Operator& rho, int dim, const char* who) {
  if (rho.rows() != dim || rho.cols() != dim)
    throw std::invalid_argument(std::string(who) + ": density matrix has wrong dimension");
  if (std::abs(rho.trace() - Complex(1.0)) > kTol.rho_trace_abs)
    throw std::invalid_argument(std::string(who) + ": density matrix trace is not 1");
  if ((rho - rho.adjoint()).norm() > kTol.rho_hermiticity_abs)
    throw std::invalid_argument(std::string(who) + ": density matrix is not Hermitian");
}

inline ExtendedSystem build_extended_system(const ModelParams& p, const RCParams& rc) {
  p.validate();
  const int m = p.m_rc;
  const Operator b = boson_annihilation(m);
  const Operator pos = b + b.adjoint();
  const Operator num = b.adjoint() * b;
  const Operator id_tls = identity_op(2);
  const Operator id_rc = identity_op(m);

  ExtendedSystem es;
  es.dim_rc = m;
  es.h_es = 0.5 * p.epsilon * kron(pauli_z(), id_rc) +
            0.5 * p.delta * kron(pauli_x(), id_rc) +
            rc.omega_rc * kron(id_tls, num) +
            rc.lambda_rc * kron(pauli_z(), pos);
  es.coupling_op = kron(id_tls, pos);
  es.h_rc = rc.omega_rc * kron(id_tls, num);
  es.spectral = hermitian_eig(es.h_es);
  return es;
}

struct RateOperators {
  Operator a1, a2, a3, a4;
};

// Rate tables in the H_ES eigenbasis. Detailed balance is exact here entry by
// entry (N/(1+N) = e^{-beta gap}); rotating back to the computational basis
// adds rounding noise on exponentially small entries, so tests of the KMS
// ratios should use these tables directly.
inline RateOperators rate_tables(const ExtendedSystem& es, double chi,
                                 const ModelParams& p, const RCParams& rc) {
  const Operator& v = es.spectral.eigenvectors;
  const Eigen::VectorXd& lam = es.spectral.eigenvalues;
  const double beta = beta_from_temperature(p.temperature);
  const int d = int(lam.size());
  const double pi = std::numbers::pi;

  Operator a_eig = v.adjoint() * es.coupling_op * v;
  Operator m1(d, d), m2(d, d), m3(d, d), m4(d, d);
  for (int m = 0; m < d; ++m) {
    for (int n = 0; n < d; ++n) {
      const double gap = lam(m) - lam(n);
      const Complex amn = a_eig(m, n);
      if (std::abs(gap) <= kTol.gap_degeneracy_ev) {
        const Complex val = pi * amn * rc.gamma_rc / beta;
        m1(m, n) = m2(m, n) = m3(m, n) = m4(m, n) = val;
      } else if (gap > 0.0) {
        const double j = j_residual(gap, rc, p);
        const double occ = bose_occupation(gap, beta);
        m1(m, n) = pi * amn * j * occ;
        m2(m, n) = pi * amn * j * (1.0 + occ) * std::exp(kImagUnit * chi * gap);
        m3(m, n) = pi * amn * j * occ * std::exp(-kImagUnit * chi * gap);
        m4(m, n) = pi * amn * j * (1.0 + occ);
      } else {
        const double a = -gap;
        const double j = j_residual(a, rc, p);
        const double occ = bose_occupation(a, beta);
        m1(m, n) = pi * amn * j * (1.0 + occ);
        m2(m, n) = pi * amn * j * occ * std::exp(-kImagUnit * chi * a);
        m3(m, n) = pi * amn * j * (1.0 + occ) * std::exp(kImagUnit * chi * a);
        m4(m, n) = pi * amn * j * occ;
      }
    }
  }
  return {std::move(m1), std::move(m2), std::move(m3), std::move(m4)};
}

inline RateOperators rate_operators(const ExtendedSystem& es, double chi,
                                    const ModelParams& p, const RCParams& rc) {
  RateOperators t = rate_tables(es, chi, p, rc);
  const Operator& v = es.spectral.eigenvectors;
  return {v * t.a1 * v.adjoint(), v * t.a2 * v.adjoint(),
          v * t.a3 * v.adjoint(), v * t.a4 * v.adjoint()};
}

inline SuperOperator build_liouvillian(const ExtendedSystem& es, double chi,
                                       const ModelParams& p, const RCParams& rc) {
  const RateOperators r = rate_operators(es, chi, p, rc);
  const Operator& a = es.coupling_op;
  const int d = int(a.rows());
  const Operator id = identity_op(d);

  SuperOperator ham = kron(id, es.h_es) - kron(es.h_es.transpose(), id);
  SuperOperator diss = kron(id, Operator(a * r.a1))     // A A1 rho
                     - kron(r.a2.transpose(), a)        // A rho A2
                     - kron(a.transpose(), r.a3)        // A3 rho A
                     + kron(Operator((r.a4 * a).transpose()), id);  // rho A4 A
  return (-kImagUnit / kHbar) * ham - (1.0 / kHbar) * diss;
}

struct GeneralizedState {
  CountingVariant variant = CountingVariant::full_environment;
  double chi = 0.0;
  double t = 0.0;
  StateVector vec;  // vectorized generalized density operator
};

// Thermal RC factor dressed by the counting variant's phase; the trace of the
// full-variant state times the readout weight is exactly 1 at t = 0.
inline GeneralizedState initial_state(CountingVariant variant, double chi,
                                      const Operator& rho_s0, const ExtendedSystem& es,
                                      const ModelParams& p, const RCParams& rc) {
  validate_density_matrix(rho_s0, es.dim_tls, "initial_state");
  const double beta = beta_from_temperature(p.temperature);
  const int m = es.dim_rc;

  double z = 0.0;
  for (int n = 0; n < m; ++n) z += std::exp(-beta * rc.omega_rc * n);
  Eigen::VectorXcd diag(m);
  for (int n = 0; n < m; ++n) {
    const double s = rc.omega_rc * n;
    Complex w = std::exp(-beta * s);
    if (variant == CountingVariant::full_environment)
      w *= std::exp(-kImagUnit * chi * s);
    diag(n) = w / z;
  }
  Operator rho_rc = diag.asDiagonal();
  return {variant, chi, 0.0, vectorize(kron(rho_s0, rho_rc))};
}

inline Complex cf_value(const GeneralizedState& state, const ExtendedSystem& es) {
  const Eigen::Index dim = es.h_es.rows();
  if (state.vec.size() != dim * dim)
    throw std::invalid_argument("cf_value: state does not match system dimension");
  Complex acc = 0.0;
  for (Eigen::Index j = 0; j < dim; ++j) {
    const Complex diag = state.vec(j * dim + j);
    if (state.variant == CountingVariant::full_environment)
      acc += std::exp(kImagUnit * state.chi * es.h_rc(j, j).real()) * diag;
    else
      acc += diag;
  }
  return acc;
}

struct EngineContext {
  ModelParams model;
  RCParams rc;
  ExtendedSystem es;
  Operator rho_s0;
};

inline EngineContext make_context(const ModelParams& p, const Operator& rho_s0) {
  validate_density_matrix(rho_s0, 2, "make_context");
  EngineContext ctx{p, map_to_rc(p), {}, rho_s0};
  ctx.es = build_extended_system(p, ctx.rc);
  return ctx;
}

inline EngineContext make_context(const ModelParams& p) {
  return make_context(p, plus_state());
}

// Both counting variants of Phi(chi, t) from a single propagation (the
// generator depends on chi only; the variants differ in boundary data).
struct CfTrajectory {
  double chi = 0.0;
  std::vector<double> times;
  std::vector<Complex> full;
  std::vector<Complex> residual;
  bool warning = false;
  std::string note;
};

inline CfTrajectory cf_trajectory(const EngineContext& ctx, double chi,
                                  const std::vector<double>& times) {
  const SuperOperator gen = build_liouvillian(ctx.es, chi, ctx.model, ctx.rc);
  GeneralizedState full0 = initial_state(CountingVariant::full_environment, chi,
                                         ctx.rho_s0, ctx.es, ctx.model, ctx.rc);
  GeneralizedState res0 = initial_state(CountingVariant::residual_environment, chi,
                                        ctx.rho_s0, ctx.es, ctx.model, ctx.rc);
  Eigen::MatrixXcd init(full0.vec.size(), 2);
  init.col(0) = full0.vec;
  init.col(1) = res0.vec;

  PropagationResult prop = propagate(gen, init, times);
  CfTrajectory out;
  out.chi = chi;
  out.times = times;
  out.warning = prop.warning;
  out.note = prop.note;
  out.full.reserve(times.size());
  out.residual.reserve(times.size());
  for (size_t k = 0; k < times.size(); ++k) {
    GeneralizedState sf{CountingVariant::full_environment, chi, times[k],
                        prop.states[k].col(0)};
    GeneralizedState sr{CountingVariant::residual_environment, chi, times[k],
                        prop.states[k].col(1)};
    out.full.push_back(cf_value(sf, ctx.es));
    out.residual.push_back(cf_value(sr, ctx.es));
  }
  return out;
}

// chi = 0 dynamics: physical states of the extended system and the reduced
// TLS, plus the coherence observable <sigma_x>.
struct Chi0Dynamics {
  std::vector<double> times;
  std::vector<Operator> rho_es;
  std::vector<Operator> rho_tls;
  std::vector<double> sx;
  bool warning = false;
  std::string note;
};

inline Chi0Dynamics dynamics_chi0(const EngineContext& ctx,
                                  const std::vector<double>& times) {
  const SuperOperator gen = build_liouvillian(ctx.es, 0.0, ctx.model, ctx.rc);
  GeneralizedState s0 = initial_state(CountingVariant::full_environment, 0.0,
                                      ctx.rho_s0, ctx.es, ctx.model, ctx.rc);
  PropagationResult prop = propagate(gen, s0.vec, times);

  Chi0Dynamics out;
  out.times = times;
  out.warning = prop.warning;
  out.note = prop.note;
  out.rho_es.reserve(times.size());
  out.rho_tls.reserve(times.size());
  out.sx.reserve(times.size());
  for (size_t k = 0; k < times.size(); ++k) {
    Operator rho = devectorize(prop.states[k].col(0));
    Operator red = partial_trace_second(rho, ctx.es.dim_tls, ctx.es.dim_rc);
    out.sx.push_back(std::real(red(0, 1) + red(1, 0)));
    out.rho_es.push_back(std::move(rho));
    out.rho_tls.push_back(std::move(red));
  }
  return out;
}

}  // namespace heatcount
