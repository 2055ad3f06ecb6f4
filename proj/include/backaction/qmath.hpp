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

#ifndef BACKACTION_QMATH_HPP
#define BACKACTION_QMATH_HPP

#include <complex>
#include <initializer_list>
#include <span>
#include <vector>

namespace backaction::qmath {

using Complex = std::complex<double>;

// Tolerance defaults shared across the library. Tests reference these rather
// than re-declaring magic numbers.
inline constexpr double HERMITICITY_TOL = 1e-10;
inline constexpr double UNITARITY_TOL = 1e-10;
inline constexpr double PSD_TOL = 1e-10;
inline constexpr double PROB_TOL = 1e-9;

/// Dense complex matrix, row-major, immutable in spirit: every operation
/// returns a fresh value. Sized for Hilbert spaces of dimension <= ~16.
class ComplexMatrix {
 public:
  ComplexMatrix() : rows_(0), cols_(0) {}
  ComplexMatrix(int rows, int cols);
  ComplexMatrix(int rows, int cols, std::vector<Complex> entries);
  ComplexMatrix(std::initializer_list<std::initializer_list<Complex>> rows);

  static ComplexMatrix identity(int dim);
  static ComplexMatrix zero(int rows, int cols);
  // |ket><bra|
  static ComplexMatrix outer(std::span<const Complex> ket,
                             std::span<const Complex> bra);

  int rows() const { return rows_; }
  int cols() const { return cols_; }
  bool is_square() const { return rows_ == cols_; }

  Complex &at(int r, int c) { return entries_[r * cols_ + c]; }
  const Complex &at(int r, int c) const { return entries_[r * cols_ + c]; }
  const std::vector<Complex> &entries() const { return entries_; }

  ComplexMatrix adjoint() const;
  ComplexMatrix transpose() const;
  ComplexMatrix conjugate() const;
  Complex trace() const;
  double max_abs() const;  // max entrywise modulus

  std::vector<Complex> column(int c) const;
  std::vector<Complex> row(int r) const;

  ComplexMatrix operator+(const ComplexMatrix &other) const;
  ComplexMatrix operator-(const ComplexMatrix &other) const;
  ComplexMatrix operator*(const ComplexMatrix &other) const;
  ComplexMatrix operator*(Complex scalar) const;
  friend ComplexMatrix operator*(Complex scalar, const ComplexMatrix &m) {
    return m * scalar;
  }
  std::vector<Complex> operator*(std::span<const Complex> vec) const;

  bool operator==(const ComplexMatrix &other) const = default;

  // Throws std::invalid_argument when any entry is NaN/Inf.
  void check_finite() const;

 private:
  int rows_, cols_;
  std::vector<Complex> entries_;
};

ComplexMatrix tensor(const ComplexMatrix &a, const ComplexMatrix &b);
std::vector<Complex> tensor(std::span<const Complex> a,
                            std::span<const Complex> b);

double max_abs_diff(const ComplexMatrix &a, const ComplexMatrix &b);
bool approx_equal(const ComplexMatrix &a, const ComplexMatrix &b, double tol);

Complex inner(std::span<const Complex> bra_of, std::span<const Complex> ket);
double norm2(std::span<const Complex> vec);

/// Square matrix certified Hermitian at construction (max deviation from the
/// adjoint at most HERMITICITY_TOL).
class HermitianOperator {
 public:
  explicit HermitianOperator(ComplexMatrix m);
  const ComplexMatrix &matrix() const { return matrix_; }
  int dim() const { return matrix_.rows(); }
  bool operator==(const HermitianOperator &other) const = default;

 private:
  ComplexMatrix matrix_;
};

/// Square matrix certified unitary at construction (max |U^dag U - I| at most
/// UNITARITY_TOL).
class UnitaryOperator {
 public:
  explicit UnitaryOperator(ComplexMatrix m);
  const ComplexMatrix &matrix() const { return matrix_; }
  int dim() const { return matrix_.rows(); }
  bool operator==(const UnitaryOperator &other) const = default;

 private:
  ComplexMatrix matrix_;
};

/// Density matrix: Hermitian, unit trace, positive semidefinite (min
/// eigenvalue >= -PSD_TOL), all checked at construction.
class DensityMatrix {
 public:
  explicit DensityMatrix(ComplexMatrix m);
  static DensityMatrix pure(std::span<const Complex> ket);
  const ComplexMatrix &matrix() const { return matrix_; }
  int dim() const { return matrix_.rows(); }

 private:
  ComplexMatrix matrix_;
};

/// Two identical copies, rho (x) rho.
DensityMatrix two_copies(const DensityMatrix &rho);

struct EigenSystem {
  std::vector<double> values;  // ascending
  ComplexMatrix vectors;       // column k pairs with values[k]
};

// Cyclic Jacobi diagonalization for complex Hermitian matrices. Accurate to
// machine precision for the dimensions used here (<= 16); throws
// std::runtime_error if the sweep cap is hit without convergence.
EigenSystem eigh(const ComplexMatrix &hermitian);

std::vector<double> eigvals_hermitian(const HermitianOperator &a);
double min_eigenvalue(const ComplexMatrix &hermitian);
bool is_psd(const HermitianOperator &a, double tol);

// Projection onto the diagonal in the given orthonormal basis (columns):
// sum_k <k|m|k> |k><k|. The basis must be square and orthonormal within
// HERMITICITY_TOL.
ComplexMatrix diagonal_part(const ComplexMatrix &m, const ComplexMatrix &basis);
ComplexMatrix off_diagonal_part(const ComplexMatrix &m,
                                const ComplexMatrix &basis);

/// Dephasing channel D_H: removes all coherence between the given basis
/// states, leaving a classical mixture.
DensityMatrix dephase(const DensityMatrix &rho, const ComplexMatrix &basis);

/// Bhattacharyya overlap sum_k sqrt(p_k q_k) between two probability vectors
/// of equal length. Entries may undershoot zero by at most 1e-12 (clamped);
/// each vector must sum to 1 within PROB_TOL.
double classical_fidelity(std::span<const double> p, std::span<const double> q);

// Pauli matrices and friends, handy across the library and tests.
ComplexMatrix pauli_x();
ComplexMatrix pauli_y();
ComplexMatrix pauli_z();
std::vector<Complex> ket_zero();
std::vector<Complex> ket_one();
std::vector<Complex> ket_plus();
std::vector<Complex> ket_minus();

}  // namespace backaction::qmath

#endif
