// Copyright 2026 The backaction-sim authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <cmath>

#include "doctest.h"
#include "test_util.hpp"

using namespace backaction::qmath;

TEST_CASE("tensor: identity times identity") {
  ComplexMatrix i2 = ComplexMatrix::identity(2);
  CHECK(approx_equal(tensor(i2, i2), ComplexMatrix::identity(4), 0.0));
}

TEST_CASE("tensor: sigma_z (x) sigma_x block structure") {
  ComplexMatrix t = tensor(pauli_z(), pauli_x());
  ComplexMatrix expected{{0, 1, 0, 0},
                         {1, 0, 0, 0},
                         {0, 0, 0, -1},
                         {0, 0, -1, 0}};
  CHECK(approx_equal(t, expected, 0.0));
}

TEST_CASE("tensor: |0><0| (x) |-><-| is a rank-1 projector") {
  ComplexMatrix p = tensor(ComplexMatrix::outer(ket_zero(), ket_zero()),
                           ComplexMatrix::outer(ket_minus(), ket_minus()));
  // Worked by hand: 0.5 on (0,0) and (1,1), -0.5 on (0,1) and (1,0),
  // zero elsewhere.
  ComplexMatrix expected{{0.5, -0.5, 0, 0},
                         {-0.5, 0.5, 0, 0},
                         {0, 0, 0, 0},
                         {0, 0, 0, 0}};
  CHECK(approx_equal(p, expected, 1e-15));
  CHECK(std::abs(p.trace() - Complex{1.0}) < 1e-15);
  auto vals = eigh(p).values;
  CHECK(std::abs(vals.back() - 1.0) < 1e-12);
}

TEST_CASE("tensor: associativity and trace multiplicativity") {
  // Exact equality on matrices whose entry products do not round.
  ComplexMatrix x = pauli_x(), z = pauli_z(), i2 = ComplexMatrix::identity(2);
  CHECK(approx_equal(tensor(tensor(x, z), i2), tensor(x, tensor(z, i2)), 0.0));

  testutil::Rand rand(11);
  for (int rep = 0; rep < 20; rep++) {
    ComplexMatrix a = testutil::random_ginibre(rand, 2);
    ComplexMatrix b = testutil::random_ginibre(rand, 2);
    ComplexMatrix c = testutil::random_ginibre(rand, 2);
    CHECK(approx_equal(tensor(tensor(a, b), c), tensor(a, tensor(b, c)),
                       1e-12));
    Complex lhs = tensor(a, b).trace();
    Complex rhs = a.trace() * b.trace();
    CHECK(std::abs(lhs - rhs) < 1e-12);
  }
}

TEST_CASE("eigvals: pauli z") {
  auto vals = eigvals_hermitian(HermitianOperator(pauli_z()));
  REQUIRE(vals.size() == 2);
  CHECK(std::abs(vals[0] + 1.0) < 1e-12);
  CHECK(std::abs(vals[1] - 1.0) < 1e-12);
}

TEST_CASE("eigvals: cos^2 I + sin^2 sigma_x at 45 degrees") {
  double c2 = 0.5, s2 = 0.5;
  ComplexMatrix m = ComplexMatrix::identity(2) * Complex{c2} +
                    pauli_x() * Complex{s2};
  auto vals = eigvals_hermitian(HermitianOperator(m));
  CHECK(std::abs(vals[0]) < 1e-12);
  CHECK(std::abs(vals[1] - 1.0) < 1e-12);
}

TEST_CASE("eigvals: identity of dimension 4") {
  auto vals = eigvals_hermitian(HermitianOperator(ComplexMatrix::identity(4)));
  for (double v : vals) CHECK(std::abs(v - 1.0) < 1e-14);
}

TEST_CASE("eigh: spectral reconstruction and trace sum on random Hermitians") {
  testutil::Rand rand(23);
  for (int rep = 0; rep < 50; rep++) {
    HermitianOperator a = testutil::random_hermitian(rand, 4);
    EigenSystem sys = eigh(a.matrix());
    double sum = 0;
    for (double v : sys.values) sum += v;
    CHECK(std::abs(sum - a.matrix().trace().real()) < 1e-9);

    ComplexMatrix recon(4, 4);
    for (int k = 0; k < 4; k++) {
      std::vector<Complex> v = sys.vectors.column(k);
      recon = recon + ComplexMatrix::outer(v, v) * Complex{sys.values[k]};
    }
    CHECK(max_abs_diff(recon, a.matrix()) < 1e-9);
    for (size_t k = 1; k < sys.values.size(); k++) {
      CHECK(sys.values[k - 1] <= sys.values[k]);
    }
  }
}

TEST_CASE("is_psd") {
  ComplexMatrix proj = (pauli_z() + ComplexMatrix::identity(2)) * Complex{0.5};
  CHECK(is_psd(HermitianOperator(proj), 1e-10));
  CHECK(!is_psd(HermitianOperator(pauli_x()), 1e-10));
  // cos^2 I - sin^2 sigma_x at 60 degrees has min eigenvalue -1/2.
  double c2 = 0.25, s2 = 0.75;
  ComplexMatrix m = ComplexMatrix::identity(2) * Complex{c2} -
                    pauli_x() * Complex{s2};
  CHECK(!is_psd(HermitianOperator(m), 1e-10));
  CHECK(std::abs(min_eigenvalue(m) + 0.5) < 1e-12);
}

TEST_CASE("dephase: plus state loses all coherence") {
  DensityMatrix plus = DensityMatrix::pure(ket_plus());
  DensityMatrix out = dephase(plus, ComplexMatrix::identity(2));
  CHECK(approx_equal(out.matrix(),
                     ComplexMatrix::identity(2) * Complex{0.5}, 1e-14));
}

TEST_CASE("dephase: diagonal states are fixed points") {
  ComplexMatrix rho{{0.7, 0}, {0, 0.3}};
  DensityMatrix out = dephase(DensityMatrix(rho), ComplexMatrix::identity(2));
  CHECK(approx_equal(out.matrix(), rho, 1e-14));
}

TEST_CASE("dephase: strips off-diagonals in the computational basis") {
  ComplexMatrix rho{{0.75, Complex{0, 0.2}}, {Complex{0, -0.2}, 0.25}};
  DensityMatrix out = dephase(DensityMatrix(rho), ComplexMatrix::identity(2));
  ComplexMatrix expected{{0.75, 0}, {0, 0.25}};
  CHECK(approx_equal(out.matrix(), expected, 1e-14));
}

TEST_CASE("dephase: idempotent, and rejects non-orthonormal bases") {
  testutil::Rand rand(5);
  for (int rep = 0; rep < 20; rep++) {
    DensityMatrix rho = testutil::random_density(rand, 2);
    ComplexMatrix basis = testutil::random_unitary(rand, 2).matrix();
    DensityMatrix once = dephase(rho, basis);
    DensityMatrix twice = dephase(once, basis);
    CHECK(max_abs_diff(once.matrix(), twice.matrix()) < 1e-12);
  }
  ComplexMatrix bad{{1, 0}, {1, 0}};
  CHECK_THROWS_AS(dephase(DensityMatrix::pure(ket_plus()), bad),
                  std::invalid_argument);
}

TEST_CASE("classical_fidelity: basic values") {
  std::vector<double> p = {0.3, 0.7};
  CHECK(std::abs(classical_fidelity(p, p) - 1.0) < 1e-12);

  std::vector<double> e0 = {1, 0}, e1 = {0, 1};
  CHECK(classical_fidelity(e0, e1) == 0.0);

  std::vector<double> half = {0.5, 0.5};
  CHECK(std::abs(classical_fidelity(half, e0) - std::sqrt(0.5)) < 1e-12);
}

TEST_CASE("classical_fidelity: symmetric, 1 only at equality") {
  testutil::Rand rand(7);
  for (int rep = 0; rep < 50; rep++) {
    double a = rand.uniform(), b = rand.uniform();
    std::vector<double> p = {a, 1 - a}, q = {b, 1 - b};
    double f_pq = classical_fidelity(p, q);
    double f_qp = classical_fidelity(q, p);
    CHECK(std::abs(f_pq - f_qp) < 1e-12);
    CHECK(f_pq <= 1.0 + 1e-12);
    if (std::abs(a - b) > 1e-3) CHECK(f_pq < 1.0 - 1e-9);
  }
}

TEST_CASE("classical_fidelity: contract violations") {
  std::vector<double> p = {0.5, 0.5};
  std::vector<double> q3 = {0.5, 0.25, 0.25};
  CHECK_THROWS_AS(classical_fidelity(p, q3), std::invalid_argument);
  std::vector<double> nonsum = {0.5, 0.2};
  CHECK_THROWS_AS(classical_fidelity(p, nonsum), std::invalid_argument);
  std::vector<double> neg = {1.5, -0.5};
  CHECK_THROWS_AS(classical_fidelity(p, neg), std::invalid_argument);
}

TEST_CASE("constructors enforce their contracts") {
  ComplexMatrix not_herm{{0, 1}, {0, 0}};
  CHECK_THROWS_AS(HermitianOperator{not_herm}, std::invalid_argument);
  ComplexMatrix not_unitary{{1, 0}, {0, 2}};
  CHECK_THROWS_AS(UnitaryOperator{not_unitary}, std::invalid_argument);
  ComplexMatrix bad_trace{{0.5, 0}, {0, 0.25}};
  CHECK_THROWS_AS(DensityMatrix{bad_trace}, std::invalid_argument);
  ComplexMatrix neg_eig{{1.5, 0}, {0, -0.5}};
  CHECK_THROWS_AS(DensityMatrix{neg_eig}, std::invalid_argument);
  std::vector<Complex> entries = {Complex{std::nan("")}, 0, 0, 0};
  CHECK_THROWS_AS(ComplexMatrix(2, 2, entries), std::invalid_argument);
}
