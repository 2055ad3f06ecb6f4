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

#ifndef BACKACTION_TESTS_TEST_UTIL_HPP
#define BACKACTION_TESTS_TEST_UTIL_HPP

#include <cmath>
#include <numbers>
#include <vector>

#include "backaction/qmath.hpp"
#include "backaction/rng.hpp"
#include "backaction/schemes.hpp"

namespace testutil {

using backaction::qmath::Complex;
using backaction::qmath::ComplexMatrix;

class Rand {
 public:
  explicit Rand(uint64_t seed) : gen_(seed) {}
  double uniform() { return gen_.next_uniform(); }
  double normal() {
    // Box-Muller; one value per call is plenty for test sizes.
    double u1 = std::max(uniform(), 1e-300);
    double u2 = uniform();
    return std::sqrt(-2.0 * std::log(u1)) *
           std::cos(2.0 * std::numbers::pi * u2);
  }
  Complex cgauss() { return Complex{normal(), normal()}; }

 private:
  backaction::rng::SplitMix64 gen_;
};

inline ComplexMatrix random_ginibre(Rand &rand, int d) {
  ComplexMatrix g(d, d);
  for (int r = 0; r < d; r++) {
    for (int c = 0; c < d; c++) g.at(r, c) = rand.cgauss();
  }
  return g;
}

// Gram-Schmidt on Ginibre columns gives a Haar-ish unitary, accurate enough
// for property tests.
inline backaction::qmath::UnitaryOperator random_unitary(Rand &rand, int d) {
  ComplexMatrix g = random_ginibre(rand, d);
  std::vector<std::vector<Complex>> cols;
  for (int c = 0; c < d; c++) {
    std::vector<Complex> v = g.column(c);
    for (const auto &u : cols) {
      Complex overlap = backaction::qmath::inner(u, v);
      for (int r = 0; r < d; r++) v[r] -= overlap * u[r];
    }
    double n = std::sqrt(backaction::qmath::norm2(v));
    for (Complex &x : v) x /= n;
    cols.push_back(std::move(v));
  }
  ComplexMatrix u(d, d);
  for (int c = 0; c < d; c++) {
    for (int r = 0; r < d; r++) u.at(r, c) = cols[c][r];
  }
  return backaction::qmath::UnitaryOperator(u);
}

inline backaction::qmath::DensityMatrix random_density(Rand &rand, int d) {
  ComplexMatrix g = random_ginibre(rand, d);
  ComplexMatrix rho = g * g.adjoint();
  Complex tr = rho.trace();
  return backaction::qmath::DensityMatrix(rho * (1.0 / tr.real()));
}

inline backaction::qmath::DensityMatrix random_diagonal_density(Rand &rand,
                                                                int d) {
  std::vector<double> p(d);
  double sum = 0;
  for (double &x : p) {
    x = rand.uniform() + 1e-6;
    sum += x;
  }
  ComplexMatrix rho(d, d);
  for (int k = 0; k < d; k++) rho.at(k, k) = p[k] / sum;
  return backaction::qmath::DensityMatrix(rho);
}

inline backaction::qmath::HermitianOperator random_hermitian(Rand &rand,
                                                             int d) {
  ComplexMatrix g = random_ginibre(rand, d);
  return backaction::qmath::HermitianOperator((g + g.adjoint()) *
                                              Complex{0.5});
}

inline backaction::schemes::Hamiltonian random_hamiltonian(Rand &rand, int d) {
  std::vector<double> energies(d);
  for (int k = 0; k < d; k++) energies[k] = 2.0 * rand.uniform() - 1.0;
  return backaction::schemes::Hamiltonian(energies,
                                          random_unitary(rand, d).matrix());
}

// The four explicit collective-measurement effects for U(theta) at the
// optimal lambda = tan(theta), written out as an independent oracle.
inline std::vector<std::pair<backaction::schemes::OutcomeLabel, ComplexMatrix>>
explicit_cm_effects(double theta) {
  using backaction::qmath::ket_minus;
  using backaction::qmath::ket_one;
  using backaction::qmath::ket_plus;
  using backaction::qmath::ket_zero;
  using backaction::qmath::pauli_x;
  using backaction::qmath::tensor;
  double c2 = std::cos(theta) * std::cos(theta);
  double s2 = std::sin(theta) * std::sin(theta);
  ComplexMatrix eye = ComplexMatrix::identity(2);
  ComplexMatrix p0 = ComplexMatrix::outer(ket_zero(), ket_zero());
  ComplexMatrix p1 = ComplexMatrix::outer(ket_one(), ket_one());
  ComplexMatrix pp = ComplexMatrix::outer(ket_plus(), ket_plus());
  ComplexMatrix pm = ComplexMatrix::outer(ket_minus(), ket_minus());
  return {
      {{0, 0}, tensor(p0, eye * Complex{c2} + pauli_x() * Complex{s2})},
      {{0, 1}, tensor(p0, pm * Complex{2.0 * s2})},
      {{1, 0}, tensor(p1, pp * Complex{2.0 * s2})},
      {{1, 1}, tensor(p1, eye * Complex{c2} - pauli_x() * Complex{s2})},
  };
}

}  // namespace testutil

#endif
