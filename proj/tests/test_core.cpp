// Copyright 2026 The QRC Memory Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include <cmath>
#include <numbers>
#include <random>
#include <vector>

#include <unsupported/Eigen/MatrixFunctions>

#include "doctest.h"
#include "qrc/core.hpp"
#include "qrc/error.hpp"
#include "test_util.hpp"

using namespace qrc;
using qrc::testing::random_complex;
using qrc::testing::random_hermitian;

namespace {

const Complex kI(0.0, 1.0);

ComplexMatrix identity(Eigen::Index n) { return ComplexMatrix::Identity(n, n); }

}  // namespace

TEST_CASE("kron identity, block structure and shape") {
  CHECK(max_abs(kron(identity(2), identity(2)) - identity(4)) == 0.0);

  const ComplexMatrix x = pauli(Axis::kX);
  const ComplexMatrix z = pauli(Axis::kZ);
  ComplexMatrix expected = ComplexMatrix::Zero(4, 4);
  expected.block(0, 2, 2, 2) = z;
  expected.block(2, 0, 2, 2) = z;
  CHECK(max_abs(kron(x, z) - expected) == 0.0);

  std::mt19937_64 rng(1);
  const ComplexMatrix a = random_complex(2, 3, rng);
  const ComplexMatrix b = random_complex(4, 5, rng);
  const ComplexMatrix ab = kron(a, b);
  CHECK(ab.rows() == 8);
  CHECK(ab.cols() == 15);
  for (int i = 0; i < 2; ++i)
    for (int j = 0; j < 3; ++j)
      for (int k = 0; k < 4; ++k)
        for (int l = 0; l < 5; ++l) CHECK(ab(i * 4 + k, j * 5 + l) == a(i, j) * b(k, l));
}

TEST_CASE("kron is associative") {
  std::mt19937_64 rng(2);
  for (int t = 0; t < 10; ++t) {
    const ComplexMatrix a = random_complex(2, 3, rng);
    const ComplexMatrix b = random_complex(3, 2, rng);
    const ComplexMatrix c = random_complex(2, 2, rng);
    CHECK(max_abs(kron(kron(a, b), c) - kron(a, kron(b, c))) <= 1e-14);
  }
}

TEST_CASE("pauli_site conventions") {
  ComplexMatrix zdiag = ComplexMatrix::Zero(2, 2);
  zdiag(0, 0) = 1.0;
  zdiag(1, 1) = -1.0;
  CHECK(max_abs(pauli_site(Axis::kZ, 0, 1) - zdiag) == 0.0);
  CHECK(max_abs(pauli_site(Axis::kX, 1, 2) - kron(identity(2), pauli(Axis::kX))) == 0.0);
  ComplexMatrix lower = ComplexMatrix::Zero(2, 2);
  lower(1, 0) = 1.0;
  CHECK(max_abs(pauli_site(Axis::kMinus, 0, 1) - lower) == 0.0);
  CHECK(max_abs(pauli(Axis::kPlus) - lower.adjoint()) == 0.0);
  // sigma_minus maps the +1 eigenstate of sigma_z to the -1 eigenstate.
  ComplexVector up = ComplexVector::Zero(2);
  up(0) = 1.0;
  const ComplexVector down = pauli(Axis::kMinus) * up;
  CHECK(std::abs(down(1) - Complex(1.0)) == 0.0);
  CHECK_THROWS_AS(pauli_site(Axis::kX, 3, 3), Error);
}

TEST_CASE("matrix_exp closed forms") {
  CHECK(max_abs(matrix_exp(ComplexMatrix::Zero(4, 4)) - identity(4)) <= 1e-15);

  ComplexMatrix d = ComplexMatrix::Zero(2, 2);
  d(0, 0) = 1.0;
  d(1, 1) = -2.0;
  const ComplexMatrix ed = matrix_exp(d);
  CHECK(std::abs(ed(0, 0) - std::exp(1.0)) <= 1e-14 * std::exp(1.0));
  CHECK(std::abs(ed(1, 1) - std::exp(-2.0)) <= 1e-15);
  CHECK(std::abs(ed(0, 1)) == 0.0);

  const double theta = std::numbers::pi / 4.0;
  const ComplexMatrix x = pauli(Axis::kX);
  const ComplexMatrix expected = std::cos(theta) * identity(2) - kI * std::sin(theta) * x;
  CHECK(max_abs(matrix_exp(-kI * theta * x) - expected) <= 1e-14);
}

TEST_CASE("matrix_exp of anti-Hermitian generators is unitary") {
  std::mt19937_64 rng(3);
  for (Eigen::Index dim : {2, 4, 8, 16}) {
    const ComplexMatrix h = random_hermitian(dim, rng);
    const ComplexMatrix prod = matrix_exp(-kI * h) * matrix_exp(kI * h);
    CHECK(max_abs(prod - identity(dim)) <= 1e-10);
  }
}

TEST_CASE("matrix_exp agrees with an eigendecomposition oracle") {
  std::mt19937_64 rng(4);
  for (Eigen::Index dim : {2, 5, 16}) {
    const ComplexMatrix h = random_hermitian(dim, rng) * 3.0;
    Eigen::SelfAdjointEigenSolver<ComplexMatrix> es(h);
    const ComplexVector phases =
        (-kI * es.eigenvalues().cast<Complex>()).array().exp().matrix();
    const ComplexMatrix oracle =
        es.eigenvectors() * phases.asDiagonal() * es.eigenvectors().adjoint();
    const ComplexMatrix got = matrix_exp(-kI * h);
    CHECK(spectral_norm(got - oracle) <= 1e-11 * spectral_norm(oracle));
  }
}

TEST_CASE("matrix_exp agrees with a Pade oracle on non-normal matrices") {
  std::mt19937_64 rng(5);
  for (double scale : {0.1, 1.0, 5.0}) {
    const ComplexMatrix a = random_complex(9, 9, rng) * scale;
    const ComplexMatrix oracle = a.exp();
    const ComplexMatrix got = matrix_exp(a, 1e-12);
    CHECK(spectral_norm(got - oracle) <= 1e-10 * spectral_norm(oracle));
  }
  CHECK_THROWS_AS(matrix_exp(ComplexMatrix::Zero(2, 3)), Error);
}

TEST_CASE("DensityMatrix validation") {
  ComplexMatrix bad = ComplexMatrix::Identity(2, 2);
  CHECK_THROWS_AS(DensityMatrix{bad}, Error);  // trace 2
  ComplexMatrix neg = ComplexMatrix::Zero(2, 2);
  neg(0, 0) = 1.5;
  neg(1, 1) = -0.5;
  CHECK_THROWS_AS(DensityMatrix{neg}, Error);
  ComplexMatrix nonherm = ComplexMatrix::Identity(2, 2) / 2.0;
  nonherm(0, 1) = 0.1;
  CHECK_THROWS_AS(DensityMatrix{nonherm}, Error);
  CHECK_NOTHROW(DensityMatrix{ComplexMatrix::Identity(4, 4) / 4.0});

  std::mt19937_64 rng(6);
  for (int t = 0; t < 20; ++t) {
    const DensityMatrix rho = random_density(8, rng);
    CHECK(std::abs(rho.matrix().trace() - Complex(1.0)) <= 1e-12);
    CHECK(rho.min_eigenvalue() > 0.0);
    CHECK(max_abs(rho.matrix() - rho.matrix().adjoint()) <= 1e-15);
  }
}

TEST_CASE("partial_trace examples") {
  std::mt19937_64 rng(7);
  const DensityMatrix a = random_density(2, rng);
  const DensityMatrix b = random_density(4, rng);
  const std::vector<std::size_t> dims{2, 4};
  const std::vector<std::size_t> keep_a{0};
  const std::vector<std::size_t> keep_b{1};
  const ComplexMatrix ab = kron(a.matrix(), b.matrix());
  CHECK(max_abs(partial_trace(ab, dims, keep_a) - a.matrix()) <= 1e-14);
  CHECK(max_abs(partial_trace(ab, dims, keep_b) - b.matrix()) <= 1e-14);

  ComplexVector bell = ComplexVector::Zero(4);
  bell(0) = bell(3) = 1.0 / std::sqrt(2.0);
  const DensityMatrix phi = DensityMatrix::pure(bell);
  const std::vector<std::size_t> qubits{2, 2};
  CHECK(max_abs(partial_trace(phi.matrix(), qubits, keep_a) - identity(2) / 2.0) <= 1e-15);

  const std::vector<std::size_t> bad_dims{2, 2};
  CHECK_THROWS_AS(partial_trace(ab, bad_dims, keep_a), Error);
  const std::vector<std::size_t> none;
  CHECK_THROWS_AS(partial_trace(ab, dims, none), Error);
}

TEST_CASE("partial_trace matches explicit index sums and is linear") {
  std::mt19937_64 rng(8);
  const std::vector<std::size_t> dims{2, 2};
  const std::vector<std::size_t> k0{0};
  const std::vector<std::size_t> k1{1};
  for (int t = 0; t < 100; ++t) {
    const ComplexMatrix r1 = random_density(4, rng).matrix();
    const ComplexMatrix r2 = random_density(4, rng).matrix();
    const ComplexMatrix p0 = partial_trace(r1, dims, k0);
    const ComplexMatrix p1 = partial_trace(r1, dims, k1);
    CHECK(max_abs(p0 - qrc::testing::trace_out_second(r1, 2, 2)) <= 1e-15);
    CHECK(max_abs(p1 - qrc::testing::trace_out_first(r1, 2, 2)) <= 1e-15);
    CHECK(std::abs(p0.trace() - Complex(1.0)) <= 1e-12);
    CHECK(std::abs(p1.trace() - Complex(1.0)) <= 1e-12);
    const double alpha = 0.3;
    const ComplexMatrix mix = alpha * r1 + (1.0 - alpha) * r2;
    CHECK(max_abs(partial_trace(mix, dims, k0) -
                  (alpha * p0 + (1.0 - alpha) * partial_trace(r2, dims, k0))) <= 1e-15);
  }
  // Middle factor of a three-qubit product state.
  const DensityMatrix a = random_density(2, rng);
  const DensityMatrix b = random_density(2, rng);
  const DensityMatrix c = random_density(2, rng);
  const std::vector<std::size_t> three{2, 2, 2};
  const std::vector<std::size_t> middle{1};
  const std::vector<std::size_t> outer{2, 0};
  const ComplexMatrix abc = kron(kron(a.matrix(), b.matrix()), c.matrix());
  CHECK(max_abs(partial_trace(abc, three, middle) - b.matrix()) <= 1e-15);
  CHECK(max_abs(partial_trace(abc, three, outer) - kron(a.matrix(), c.matrix())) <= 1e-15);
}

TEST_CASE("vectorization convention") {
  const ComplexVector v = vectorize(identity(2) / 2.0);
  CHECK(v.size() == 4);
  CHECK(v(0) == Complex(0.5));
  CHECK(v(1) == Complex(0.0));
  CHECK(v(2) == Complex(0.0));
  CHECK(v(3) == Complex(0.5));

  const ComplexVector plus = vectorize(pauli(Axis::kPlus));
  CHECK(plus(0) == Complex(0.0));
  CHECK(plus(1) == Complex(0.0));
  CHECK(plus(2) == Complex(1.0));
  CHECK(plus(3) == Complex(0.0));

  std::mt19937_64 rng(9);
  const ComplexMatrix rho = random_density(8, rng).matrix();
  CHECK((devectorize(vectorize(rho)).array() == rho.array()).all());
  CHECK_THROWS_AS(devectorize(ComplexVector::Zero(5)), Error);
}

TEST_CASE("vectorization sandwich identity") {
  std::mt19937_64 rng(10);
  for (int t = 0; t < 20; ++t) {
    const ComplexMatrix a = random_complex(4, 4, rng);
    const ComplexMatrix x = random_complex(4, 4, rng);
    const ComplexMatrix b = random_complex(4, 4, rng);
    const ComplexVector lhs = vectorize(a * x * b);
    const ComplexVector rhs = kron(b.transpose(), a) * vectorize(x);
    CHECK((lhs - rhs).cwiseAbs().maxCoeff() <= 1e-12);
  }
}
