#include <catch2/catch_amalgamated.hpp>

#include <cmath>

#include "heatcount/linalg.hpp"
#include "heatcount/units.hpp"

using namespace heatcount;
using Catch::Matchers::WithinAbs;

TEST_CASE("Pauli and ladder operators", "[linalg]") {
  CHECK((pauli_x() * pauli_x() - identity_op(2)).norm() == 0.0);
  CHECK((pauli_z() * pauli_z() - identity_op(2)).norm() == 0.0);
  CHECK((pauli_x() * pauli_z() + pauli_z() * pauli_x()).norm() == 0.0);

  Operator b = boson_annihilation(4);
  CHECK_THAT(std::abs(b(0, 1)), WithinAbs(1.0, 1e-15));
  CHECK_THAT(std::abs(b(1, 2)), WithinAbs(std::sqrt(2.0), 1e-15));
  CHECK_THAT(std::abs(b(2, 3)), WithinAbs(std::sqrt(3.0), 1e-15));
  // number operator from the ladder pair
  Operator num = b.adjoint() * b;
  for (int n = 0; n < 4; ++n) CHECK_THAT(num(n, n).real(), WithinAbs(double(n), 1e-14));
  CHECK_THROWS_AS(boson_annihilation(1), std::invalid_argument);
}

TEST_CASE("Kronecker product", "[linalg]") {
  Operator a(2, 2), b(2, 2);
  a << 1, 2, 3, 4;
  b << 0, 5, 6, 7;
  Operator k = kron(a, b);
  REQUIRE(k.rows() == 4);
  CHECK(k(0, 1) == Complex(5));   // a00 * b01
  CHECK(k(3, 0) == Complex(18));  // a10 * b10
  CHECK(k(3, 3) == Complex(28));  // a11 * b11
  CHECK((kron(identity_op(3), identity_op(2)) - identity_op(6)).norm() == 0.0);
}

TEST_CASE("Hermitian eigendecomposition", "[linalg]") {
  Operator h(2, 2);
  h << 1.0, kImagUnit, -kImagUnit, 1.0;
  SpectralDecomposition sd = hermitian_eig(h);
  CHECK_THAT(sd.eigenvalues(0), WithinAbs(0.0, 1e-14));
  CHECK_THAT(sd.eigenvalues(1), WithinAbs(2.0, 1e-14));
  Operator rebuilt = sd.eigenvectors * sd.eigenvalues.asDiagonal().toDenseMatrix().cast<Complex>() *
                     sd.eigenvectors.adjoint();
  CHECK((rebuilt - h).norm() < 1e-13);

  Operator bad(2, 2);
  bad << 1, 2, 3, 4;  // not Hermitian
  CHECK_THROWS_AS(hermitian_eig(bad), std::invalid_argument);
}

TEST_CASE("Vectorization is column stacking", "[linalg]") {
  Operator x(2, 2);
  x << 1, 2, 3, 4;
  StateVector v = vectorize(x);
  CHECK(v(0) == Complex(1));
  CHECK(v(1) == Complex(3));
  CHECK(v(2) == Complex(2));
  CHECK(v(3) == Complex(4));
  CHECK((devectorize(v) - x).norm() == 0.0);
}

TEST_CASE("Left/right multiplication superoperators", "[linalg]") {
  Operator a = Operator::Random(3, 3);
  Operator b = Operator::Random(3, 3);
  Operator x = Operator::Random(3, 3);
  StateVector lhs = left_mult(a) * right_mult(b) * vectorize(x);
  CHECK((devectorize(lhs) - a * x * b).norm() < 1e-13);
}

TEST_CASE("Partial trace over the second factor", "[linalg]") {
  Operator rho_a = Operator::Random(2, 2);
  rho_a = 0.5 * (rho_a + rho_a.adjoint()).eval();
  Operator rho_b = Operator::Random(3, 3);
  rho_b = 0.5 * (rho_b + rho_b.adjoint()).eval();
  Operator joint = kron(rho_a, rho_b);
  Operator red = partial_trace_second(joint, 2, 3);
  CHECK((red - rho_a * rho_b.trace()).norm() < 1e-13);
}

TEST_CASE("Propagation: trivial generators", "[linalg]") {
  SECTION("zero generator leaves the state fixed") {
    SuperOperator gen = SuperOperator::Zero(3, 3);
    StateVector v0(3);
    v0 << 1.0, 2.0, Complex(0.0, 1.0);
    auto res = propagate(gen, v0, {0.0, 1.5, 7.0});
    for (const auto& s : res.states) CHECK((s.col(0) - v0).norm() < 1e-14);
    CHECK_FALSE(res.warning);
  }
  SECTION("scalar decay") {
    SuperOperator gen(1, 1);
    gen << -0.7;
    StateVector v0(1);
    v0 << 2.0;
    auto res = propagate(gen, v0, {0.0, 0.5, 2.0, 3.25});
    for (size_t k = 0; k < 4; ++k) {
      double t = std::vector<double>{0.0, 0.5, 2.0, 3.25}[k];
      CHECK_THAT(res.states[k](0, 0).real(), WithinAbs(2.0 * std::exp(-0.7 * t), 1e-12));
    }
  }
}

TEST_CASE("Propagation: coherent rotation under a commutator", "[linalg]") {
  // d rho/dt = -(i/hbar)[H, rho] with H = sigma_z rotates the coherence of
  // |+><+| as e^{-2it/hbar}; <sigma_x>(t) = cos(2t/hbar).
  Operator h = pauli_z();
  SuperOperator gen = (-kImagUnit / kHbar) * (left_mult(h) - right_mult(h));
  Operator rho0 = 0.5 * Operator::Ones(2, 2);
  std::vector<double> times{0.0, 0.3, 1.0, 2.0};
  auto res = propagate(gen, vectorize(rho0), times);
  for (size_t k = 0; k < times.size(); ++k) {
    Operator rho = devectorize(res.states[k].col(0));
    double sx = std::real(rho(0, 1) + rho(1, 0));
    CHECK_THAT(sx, WithinAbs(std::cos(2.0 * times[k] / kHbar), 1e-11));
  }
}

TEST_CASE("Propagation: decoupled blocks match the dense exponential", "[linalg]") {
  // Two 2x2 blocks interleaved over indices {0,2} and {1,3}; the blocked
  // path must agree with exponentiating the full generator, including
  // off-lattice times that need remainder exponentials.
  SuperOperator gen = SuperOperator::Zero(4, 4);
  gen(0, 0) = Complex(-0.2, 1.3);
  gen(0, 2) = Complex(0.4, -0.1);
  gen(2, 0) = Complex(-0.3, 0.0);
  gen(2, 2) = Complex(-0.1, -0.8);
  gen(1, 1) = Complex(-0.5, 0.2);
  gen(1, 3) = Complex(0.2, 0.2);
  gen(3, 1) = Complex(0.1, -0.4);
  gen(3, 3) = Complex(-0.4, 0.6);
  StateVector v0(4);
  v0 << 1.0, Complex(0.5, -0.5), -2.0, Complex(0.0, 1.0);

  std::vector<double> times{0.3, 0.7, 1.0};
  auto res = propagate(gen, v0, times);
  for (size_t k = 0; k < times.size(); ++k) {
    StateVector ref = (gen * times[k]).exp() * v0;
    CHECK((res.states[k].col(0) - ref).norm() < 1e-12);
  }
}

TEST_CASE("Propagation: input validation and warnings", "[linalg]") {
  SuperOperator gen = SuperOperator::Zero(2, 2);
  StateVector v0 = StateVector::Ones(2);
  StateVector v3 = StateVector::Ones(3);
  CHECK_THROWS_AS(propagate(SuperOperator::Zero(2, 3), v0, {0.0}), std::invalid_argument);
  CHECK_THROWS_AS(propagate(gen, v3, {0.0}), std::invalid_argument);
  CHECK_THROWS_AS(propagate(gen, v0, {1.0, 0.5}), std::invalid_argument);
  CHECK_THROWS_AS(propagate(gen, v0, {-1.0}), std::invalid_argument);
  SuperOperator nan_gen = gen;
  nan_gen(0, 0) = std::numeric_limits<double>::quiet_NaN();
  CHECK_THROWS_AS(propagate(nan_gen, v0, {1.0}), std::invalid_argument);

  SuperOperator grow(1, 1);
  grow << 5.0;  // e^{5t} crosses the amplification guard well before t = 4
  StateVector one = StateVector::Ones(1);
  auto res = propagate(grow, one, {0.0, 4.0});
  CHECK(res.warning);
  CHECK_FALSE(res.note.empty());
}
