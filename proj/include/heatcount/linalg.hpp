#pragma once

#include <Eigen/Dense>
#include <unsupported/Eigen/MatrixFunctions>

#include <algorithm>
#include <cmath>
#include <complex>
#include <map>
#include <numeric>
#include <stdexcept>
#include <string>
#include <vector>

#include "heatcount/tolerances.hpp"

// Dense complex operator algebra on small Hilbert spaces, plus vectorization
// (column stacking) and generator propagation. Everything here is basis-free
// plumbing; physics lives in the model/equation headers.

namespace heatcount {

using Complex = std::complex<double>;
using Operator = Eigen::MatrixXcd;
using SuperOperator = Eigen::MatrixXcd;
using StateVector = Eigen::VectorXcd;

inline constexpr Complex kImagUnit{0.0, 1.0};

inline Operator identity_op(int dim) {
  if (dim < 1) throw std::invalid_argument("identity_op: dim must be >= 1");
  return Operator::Identity(dim, dim);
}

inline Operator pauli_x() {
  Operator s(2, 2);
  s << 0, 1, 1, 0;
  return s;
}

inline Operator pauli_z() {
  Operator s(2, 2);
  s << 1, 0, 0, -1;
  return s;
}

// Truncated ladder operator: <n-1|b|n> = sqrt(n), n = 1..dim-1.
inline Operator boson_annihilation(int dim) {
  if (dim < 2) throw std::invalid_argument("boson_annihilation: dim must be >= 2");
  Operator b = Operator::Zero(dim, dim);
  for (int n = 1; n < dim; ++n) b(n - 1, n) = std::sqrt(double(n));
  return b;
}

inline Operator kron(const Operator& a, const Operator& b) {
  Operator out(a.rows() * b.rows(), a.cols() * b.cols());
  for (Eigen::Index i = 0; i < a.rows(); ++i)
    for (Eigen::Index j = 0; j < a.cols(); ++j)
      out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
  return out;
}

inline double hermiticity_defect(const Operator& h) {
  double scale = h.norm();
  if (scale == 0.0) return 0.0;
  return (h - h.adjoint()).norm() / scale;
}

struct SpectralDecomposition {
  Eigen::VectorXd eigenvalues;  // ascending
  Operator eigenvectors;        // columns, unitary
};

inline SpectralDecomposition hermitian_eig(const Operator& h) {
  if (h.rows() != h.cols())
    throw std::invalid_argument("hermitian_eig: matrix must be square");
  if (hermiticity_defect(h) > kTol.hermiticity_rel)
    throw std::invalid_argument("hermitian_eig: matrix is not Hermitian");
  Eigen::SelfAdjointEigenSolver<Operator> solver(h);
  if (solver.info() != Eigen::Success)
    throw std::runtime_error("hermitian_eig: eigensolver did not converge");
  SpectralDecomposition out{solver.eigenvalues(), solver.eigenvectors()};
  double scale = h.norm();
  if (scale > 0.0) {
    double defect = (out.eigenvectors * out.eigenvalues.asDiagonal() *
                         out.eigenvectors.adjoint() - h).norm() / scale;
    if (defect > kTol.eig_reconstruction_rel)
      throw std::runtime_error("hermitian_eig: reconstruction defect " +
                               std::to_string(defect));
  }
  return out;
}

// vec(rho) by column stacking; vec(A X B) = (B^T kron A) vec(X).
inline StateVector vectorize(const Operator& rho) {
  return Eigen::Map<const StateVector>(rho.data(), rho.size());
}

inline Operator devectorize(const StateVector& v) {
  auto dim = static_cast<Eigen::Index>(std::llround(std::sqrt(double(v.size()))));
  if (dim * dim != v.size())
    throw std::invalid_argument("devectorize: length is not a perfect square");
  return Eigen::Map<const Operator>(v.data(), dim, dim);
}

// Superoperator of rho -> A rho.
inline SuperOperator left_mult(const Operator& a) {
  if (a.rows() != a.cols()) throw std::invalid_argument("left_mult: square input required");
  return kron(identity_op(int(a.rows())), a);
}

// Superoperator of rho -> rho B.
inline SuperOperator right_mult(const Operator& b) {
  if (b.rows() != b.cols()) throw std::invalid_argument("right_mult: square input required");
  return kron(b.transpose(), identity_op(int(b.rows())));
}

// Trace over the second factor of a dim_a x dim_b composite.
inline Operator partial_trace_second(const Operator& rho, int dim_a, int dim_b) {
  if (rho.rows() != Eigen::Index(dim_a) * dim_b || rho.cols() != rho.rows())
    throw std::invalid_argument("partial_trace_second: dimension mismatch");
  Operator out = Operator::Zero(dim_a, dim_a);
  for (int i = 0; i < dim_a; ++i)
    for (int j = 0; j < dim_a; ++j)
      for (int k = 0; k < dim_b; ++k)
        out(i, j) += rho(i * dim_b + k, j * dim_b + k);
  return out;
}

namespace detail {

struct UnionFind {
  std::vector<int> parent;
  explicit UnionFind(int n) : parent(n) { std::iota(parent.begin(), parent.end(), 0); }
  int find(int i) {
    while (parent[i] != i) i = parent[i] = parent[parent[i]];
    return i;
  }
  void unite(int a, int b) {
    a = find(a);
    b = find(b);
    if (a != b) parent[b] = a;
  }
};

// Index groups that evolve independently: i and j share a group when
// |gen(i,j)| or |gen(j,i)| exceeds tol_abs. Also reports the Frobenius mass
// of everything outside the blocks, so the caller can reject the split.
inline std::vector<std::vector<int>> independent_blocks(const SuperOperator& gen,
                                                        double tol_abs,
                                                        double* offblock_frobenius) {
  const int n = int(gen.rows());
  UnionFind uf(n);
  const double tol_sq = tol_abs * tol_abs;
  for (int c = 0; c < n; ++c)
    for (int r = 0; r < n; ++r)
      if (r != c && std::norm(gen(r, c)) > tol_sq) uf.unite(r, c);

  std::vector<int> slot(n, -1), comp(n);
  std::vector<std::vector<int>> groups;
  for (int i = 0; i < n; ++i) {
    int root = uf.find(i);
    if (slot[root] < 0) {
      slot[root] = int(groups.size());
      groups.emplace_back();
    }
    comp[i] = slot[root];
    groups[comp[i]].push_back(i);
  }
  double mass = 0.0;
  for (int c = 0; c < n; ++c)
    for (int r = 0; r < n; ++r)
      if (comp[r] != comp[c]) mass += std::norm(gen(r, c));
  *offblock_frobenius = std::sqrt(mass);
  return groups;
}

}  // namespace detail

struct PropagationResult {
  // states[k] holds exp(gen * times[k]) applied to each initial column.
  std::vector<Eigen::MatrixXcd> states;
  bool warning = false;
  std::string note;
};

// Evolve the columns of `initial` under d/dt v = gen v to each requested time.
// Times must be ascending and non-negative. The generator is exponentiated
// once per lattice step dt (the smallest grid spacing, capped at 1 ps) and the
// requested times are anchored to multiples of dt; sub-step remainders get
// their own cached exponentials. The generator is split into independent
// blocks first, which is what keeps the 1600-dimensional superoperators of
// this project affordable: at delta=0 they fall apart into four 400-blocks.
inline PropagationResult propagate(const SuperOperator& gen,
                                   const Eigen::MatrixXcd& initial,
                                   const std::vector<double>& times) {
  const Eigen::Index dim = gen.rows();
  if (gen.cols() != dim) throw std::invalid_argument("propagate: generator must be square");
  if (initial.rows() != dim)
    throw std::invalid_argument("propagate: initial vectors do not match generator");
  if (!gen.allFinite())
    throw std::invalid_argument("propagate: generator has non-finite entries");
  for (size_t k = 0; k < times.size(); ++k) {
    if (!(times[k] >= 0.0))
      throw std::invalid_argument("propagate: times must be non-negative");
    if (k > 0 && times[k] < times[k - 1])
      throw std::invalid_argument("propagate: times must be ascending");
  }

  PropagationResult out;
  out.states.reserve(times.size());
  if (times.empty()) return out;

  double dt = 1.0;
  double prev = 0.0;
  for (double t : times) {
    double gap = t - prev;
    if (gap > kTol.time_anchor_ps) dt = std::min(dt, gap);
    prev = t;
  }

  std::vector<long long> step_of(times.size());
  std::vector<double> rem_of(times.size());
  for (size_t k = 0; k < times.size(); ++k) {
    step_of[k] = std::llround(times[k] / dt);
    double r = times[k] - double(step_of[k]) * dt;
    rem_of[k] = (std::abs(r) <= kTol.time_anchor_ps) ? 0.0 : r;
  }

  const double scale = gen.cwiseAbs().maxCoeff();
  double offblock = 0.0;
  auto groups = detail::independent_blocks(gen, kTol.structural_zero_rel * scale, &offblock);
  if (groups.size() > 1 && offblock > kTol.offblock_norm_rel * gen.norm()) {
    groups.assign(1, std::vector<int>(dim));
    std::iota(groups[0].begin(), groups[0].end(), 0);
  }

  struct Block {
    std::vector<int> idx;
    Eigen::MatrixXcd sub_gen, step_prop, work;
    std::map<double, Eigen::MatrixXcd> rem_props;
  };
  std::vector<Block> blocks(groups.size());
  for (size_t g = 0; g < groups.size(); ++g) {
    Block& b = blocks[g];
    b.idx = std::move(groups[g]);
    const int m = int(b.idx.size());
    b.sub_gen.resize(m, m);
    for (int i = 0; i < m; ++i)
      for (int j = 0; j < m; ++j) b.sub_gen(i, j) = gen(b.idx[i], b.idx[j]);
    b.step_prop = (b.sub_gen * dt).exp();
    b.work.resize(m, initial.cols());
    for (int i = 0; i < m; ++i) b.work.row(i) = initial.row(b.idx[i]);
    for (size_t k = 0; k < times.size(); ++k)
      if (rem_of[k] != 0.0 && !b.rem_props.count(rem_of[k]))
        b.rem_props.emplace(rem_of[k], (b.sub_gen * rem_of[k]).exp());
  }

  double ref_norm = 0.0;
  for (Eigen::Index c = 0; c < initial.cols(); ++c)
    ref_norm = std::max(ref_norm, initial.col(c).norm());

  long long step_now = 0;
  for (size_t k = 0; k < times.size(); ++k) {
    for (; step_now < step_of[k]; ++step_now)
      for (Block& b : blocks) b.work = b.step_prop * b.work;
    Eigen::MatrixXcd snap(dim, initial.cols());
    for (Block& b : blocks) {
      const Eigen::MatrixXcd& w =
          (rem_of[k] == 0.0) ? b.work
                             : (b.rem_props.at(rem_of[k]) * b.work).eval();
      for (size_t i = 0; i < b.idx.size(); ++i) snap.row(b.idx[i]) = w.row(i);
    }
    if (!out.warning) {
      double now = 0.0;
      for (Eigen::Index c = 0; c < snap.cols(); ++c)
        now = std::max(now, snap.col(c).norm());
      if (!snap.allFinite()) {
        out.warning = true;
        out.note = "non-finite state at t = " + std::to_string(times[k]);
      } else if (now > kTol.amplification_warn * std::max(ref_norm, 1e-300)) {
        out.warning = true;
        out.note = "state norm amplified beyond " +
                   std::to_string(kTol.amplification_warn) + " at t = " +
                   std::to_string(times[k]);
      }
    }
    out.states.push_back(std::move(snap));
  }
  return out;
}

inline PropagationResult propagate(const SuperOperator& gen, const StateVector& initial,
                                   const std::vector<double>& times) {
  return propagate(gen, Eigen::MatrixXcd(initial), times);
}

}  // namespace heatcount
