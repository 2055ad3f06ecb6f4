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

#include "backaction/qmath.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>
#include <string>

namespace backaction::qmath {

ComplexMatrix::ComplexMatrix(int rows, int cols)
    : rows_(rows), cols_(cols), entries_(static_cast<size_t>(rows) * cols) {
  if (rows <= 0 || cols <= 0) {
    throw std::invalid_argument("matrix dimensions must be positive");
  }
}

ComplexMatrix::ComplexMatrix(int rows, int cols, std::vector<Complex> entries)
    : rows_(rows), cols_(cols), entries_(std::move(entries)) {
  if (rows <= 0 || cols <= 0) {
    throw std::invalid_argument("matrix dimensions must be positive");
  }
  if (entries_.size() != static_cast<size_t>(rows) * cols) {
    throw std::invalid_argument("entry count does not match dimensions");
  }
  check_finite();
}

ComplexMatrix::ComplexMatrix(
    std::initializer_list<std::initializer_list<Complex>> rows)
    : rows_(static_cast<int>(rows.size())), cols_(0) {
  if (rows_ == 0) {
    throw std::invalid_argument("matrix dimensions must be positive");
  }
  cols_ = static_cast<int>(rows.begin()->size());
  entries_.reserve(static_cast<size_t>(rows_) * cols_);
  for (const auto &r : rows) {
    if (static_cast<int>(r.size()) != cols_) {
      throw std::invalid_argument("ragged rows in matrix literal");
    }
    entries_.insert(entries_.end(), r.begin(), r.end());
  }
  check_finite();
}

ComplexMatrix ComplexMatrix::identity(int dim) {
  ComplexMatrix m(dim, dim);
  for (int i = 0; i < dim; i++) m.at(i, i) = 1.0;
  return m;
}

ComplexMatrix ComplexMatrix::zero(int rows, int cols) {
  return ComplexMatrix(rows, cols);
}

ComplexMatrix ComplexMatrix::outer(std::span<const Complex> ket,
                                   std::span<const Complex> bra) {
  ComplexMatrix m(static_cast<int>(ket.size()), static_cast<int>(bra.size()));
  for (int r = 0; r < m.rows(); r++) {
    for (int c = 0; c < m.cols(); c++) {
      m.at(r, c) = ket[r] * std::conj(bra[c]);
    }
  }
  return m;
}

void ComplexMatrix::check_finite() const {
  for (const Complex &e : entries_) {
    if (!std::isfinite(e.real()) || !std::isfinite(e.imag())) {
      throw std::invalid_argument("matrix contains a non-finite entry");
    }
  }
}

ComplexMatrix ComplexMatrix::adjoint() const {
  ComplexMatrix m(cols_, rows_);
  for (int r = 0; r < rows_; r++) {
    for (int c = 0; c < cols_; c++) m.at(c, r) = std::conj(at(r, c));
  }
  return m;
}

ComplexMatrix ComplexMatrix::transpose() const {
  ComplexMatrix m(cols_, rows_);
  for (int r = 0; r < rows_; r++) {
    for (int c = 0; c < cols_; c++) m.at(c, r) = at(r, c);
  }
  return m;
}

ComplexMatrix ComplexMatrix::conjugate() const {
  ComplexMatrix m(rows_, cols_);
  for (size_t i = 0; i < entries_.size(); i++) {
    m.entries_[i] = std::conj(entries_[i]);
  }
  return m;
}

Complex ComplexMatrix::trace() const {
  if (!is_square()) throw std::invalid_argument("trace of non-square matrix");
  Complex t = 0;
  for (int i = 0; i < rows_; i++) t += at(i, i);
  return t;
}

double ComplexMatrix::max_abs() const {
  double m = 0;
  for (const Complex &e : entries_) m = std::max(m, std::abs(e));
  return m;
}

std::vector<Complex> ComplexMatrix::column(int c) const {
  std::vector<Complex> v(rows_);
  for (int r = 0; r < rows_; r++) v[r] = at(r, c);
  return v;
}

std::vector<Complex> ComplexMatrix::row(int r) const {
  std::vector<Complex> v(cols_);
  for (int c = 0; c < cols_; c++) v[c] = at(r, c);
  return v;
}

ComplexMatrix ComplexMatrix::operator+(const ComplexMatrix &other) const {
  if (rows_ != other.rows_ || cols_ != other.cols_) {
    throw std::invalid_argument("matrix shape mismatch in addition");
  }
  ComplexMatrix m(rows_, cols_);
  for (size_t i = 0; i < entries_.size(); i++) {
    m.entries_[i] = entries_[i] + other.entries_[i];
  }
  return m;
}

ComplexMatrix ComplexMatrix::operator-(const ComplexMatrix &other) const {
  if (rows_ != other.rows_ || cols_ != other.cols_) {
    throw std::invalid_argument("matrix shape mismatch in subtraction");
  }
  ComplexMatrix m(rows_, cols_);
  for (size_t i = 0; i < entries_.size(); i++) {
    m.entries_[i] = entries_[i] - other.entries_[i];
  }
  return m;
}

ComplexMatrix ComplexMatrix::operator*(const ComplexMatrix &other) const {
  if (cols_ != other.rows_) {
    throw std::invalid_argument("matrix shape mismatch in product");
  }
  ComplexMatrix m(rows_, other.cols_);
  for (int r = 0; r < rows_; r++) {
    for (int k = 0; k < cols_; k++) {
      Complex a = at(r, k);
      if (a == Complex{}) continue;
      for (int c = 0; c < other.cols_; c++) {
        m.at(r, c) += a * other.at(k, c);
      }
    }
  }
  return m;
}

ComplexMatrix ComplexMatrix::operator*(Complex scalar) const {
  ComplexMatrix m(rows_, cols_);
  for (size_t i = 0; i < entries_.size(); i++) {
    m.entries_[i] = entries_[i] * scalar;
  }
  return m;
}

std::vector<Complex> ComplexMatrix::operator*(
    std::span<const Complex> vec) const {
  if (static_cast<int>(vec.size()) != cols_) {
    throw std::invalid_argument("matrix/vector shape mismatch");
  }
  std::vector<Complex> out(rows_);
  for (int r = 0; r < rows_; r++) {
    Complex acc = 0;
    for (int c = 0; c < cols_; c++) acc += at(r, c) * vec[c];
    out[r] = acc;
  }
  return out;
}

ComplexMatrix tensor(const ComplexMatrix &a, const ComplexMatrix &b) {
  ComplexMatrix m(a.rows() * b.rows(), a.cols() * b.cols());
  for (int i = 0; i < a.rows(); i++) {
    for (int j = 0; j < a.cols(); j++) {
      Complex aij = a.at(i, j);
      for (int k = 0; k < b.rows(); k++) {
        for (int l = 0; l < b.cols(); l++) {
          m.at(i * b.rows() + k, j * b.cols() + l) = aij * b.at(k, l);
        }
      }
    }
  }
  return m;
}

std::vector<Complex> tensor(std::span<const Complex> a,
                            std::span<const Complex> b) {
  std::vector<Complex> out(a.size() * b.size());
  for (size_t i = 0; i < a.size(); i++) {
    for (size_t k = 0; k < b.size(); k++) {
      out[i * b.size() + k] = a[i] * b[k];
    }
  }
  return out;
}

double max_abs_diff(const ComplexMatrix &a, const ComplexMatrix &b) {
  return (a - b).max_abs();
}

bool approx_equal(const ComplexMatrix &a, const ComplexMatrix &b, double tol) {
  return a.rows() == b.rows() && a.cols() == b.cols() &&
         max_abs_diff(a, b) <= tol;
}

Complex inner(std::span<const Complex> bra_of, std::span<const Complex> ket) {
  if (bra_of.size() != ket.size()) {
    throw std::invalid_argument("vector length mismatch in inner product");
  }
  Complex acc = 0;
  for (size_t i = 0; i < ket.size(); i++) acc += std::conj(bra_of[i]) * ket[i];
  return acc;
}

double norm2(std::span<const Complex> vec) {
  double acc = 0;
  for (const Complex &e : vec) acc += std::norm(e);
  return acc;
}

HermitianOperator::HermitianOperator(ComplexMatrix m) : matrix_(std::move(m)) {
  if (!matrix_.is_square()) {
    throw std::invalid_argument("Hermitian operator must be square");
  }
  matrix_.check_finite();
  if (max_abs_diff(matrix_, matrix_.adjoint()) > HERMITICITY_TOL) {
    throw std::invalid_argument("matrix is not Hermitian within tolerance");
  }
}

UnitaryOperator::UnitaryOperator(ComplexMatrix m) : matrix_(std::move(m)) {
  if (!matrix_.is_square()) {
    throw std::invalid_argument("unitary operator must be square");
  }
  matrix_.check_finite();
  ComplexMatrix gram = matrix_.adjoint() * matrix_;
  if (max_abs_diff(gram, ComplexMatrix::identity(matrix_.rows())) >
      UNITARITY_TOL) {
    throw std::invalid_argument("matrix is not unitary within tolerance");
  }
}

DensityMatrix::DensityMatrix(ComplexMatrix m) : matrix_(std::move(m)) {
  if (!matrix_.is_square()) {
    throw std::invalid_argument("density matrix must be square");
  }
  matrix_.check_finite();
  if (max_abs_diff(matrix_, matrix_.adjoint()) > HERMITICITY_TOL) {
    throw std::invalid_argument("density matrix is not Hermitian");
  }
  if (std::abs(matrix_.trace() - Complex{1.0}) > HERMITICITY_TOL) {
    throw std::invalid_argument("density matrix trace differs from 1");
  }
  if (min_eigenvalue(matrix_) < -PSD_TOL) {
    throw std::invalid_argument("density matrix has a negative eigenvalue");
  }
}

DensityMatrix DensityMatrix::pure(std::span<const Complex> ket) {
  double n = norm2(ket);
  if (std::abs(n - 1.0) > PROB_TOL) {
    throw std::invalid_argument("pure-state vector is not normalized");
  }
  return DensityMatrix(ComplexMatrix::outer(ket, ket));
}

DensityMatrix two_copies(const DensityMatrix &rho) {
  return DensityMatrix(tensor(rho.matrix(), rho.matrix()));
}

namespace {

// One complex Jacobi rotation zeroing m(p,q); accumulates into vecs.
void jacobi_rotate(ComplexMatrix &m, ComplexMatrix &vecs, int p, int q) {
  const int n = m.rows();
  Complex d = m.at(p, q);
  double ad = std::abs(d);
  if (ad == 0) return;
  Complex phase = d / ad;
  double app = m.at(p, p).real();
  double aqq = m.at(q, q).real();
  double tau = (app - aqq) / (2.0 * ad);
  double t = tau >= 0 ? 1.0 / (tau + std::sqrt(1.0 + tau * tau))
                      : 1.0 / (tau - std::sqrt(1.0 + tau * tau));
  double c = 1.0 / std::sqrt(1.0 + t * t);
  double s = t * c;
  Complex jp = s * phase;              // J(p,q) = -s e^{i phi}
  Complex jc = s * std::conj(phase);   // J(q,p) = +s e^{-i phi}

  // m <- J^dag m
  for (int k = 0; k < n; k++) {
    Complex mp = m.at(p, k), mq = m.at(q, k);
    m.at(p, k) = c * mp + jp * mq;
    m.at(q, k) = -jc * mp + c * mq;
  }
  // m <- m J, vecs <- vecs J
  for (int k = 0; k < n; k++) {
    Complex mp = m.at(k, p), mq = m.at(k, q);
    m.at(k, p) = c * mp + jc * mq;
    m.at(k, q) = -jp * mp + c * mq;
    Complex vp = vecs.at(k, p), vq = vecs.at(k, q);
    vecs.at(k, p) = c * vp + jc * vq;
    vecs.at(k, q) = -jp * vp + c * vq;
  }
  // Exact zeros on the eliminated pair keep the sweep criterion honest.
  m.at(p, q) = 0;
  m.at(q, p) = 0;
}

}  // namespace

EigenSystem eigh(const ComplexMatrix &hermitian) {
  if (!hermitian.is_square()) {
    throw std::invalid_argument("eigh requires a square matrix");
  }
  const int n = hermitian.rows();
  // Symmetrize once so that tiny Hermiticity violations cannot bias sweeps.
  ComplexMatrix m = (hermitian + hermitian.adjoint()) * Complex{0.5};
  ComplexMatrix vecs = ComplexMatrix::identity(n);

  double scale = std::max(m.max_abs(), 1e-300);
  const double off_tol = 1e-14 * scale;
  const int max_sweeps = 60;
  bool converged = false;
  for (int sweep = 0; sweep < max_sweeps && !converged; sweep++) {
    double off = 0;
    for (int p = 0; p < n; p++) {
      for (int q = p + 1; q < n; q++) off = std::max(off, std::abs(m.at(p, q)));
    }
    if (off <= off_tol) {
      converged = true;
      break;
    }
    for (int p = 0; p < n; p++) {
      for (int q = p + 1; q < n; q++) {
        if (std::abs(m.at(p, q)) > off_tol * 1e-2) jacobi_rotate(m, vecs, p, q);
      }
    }
  }
  if (!converged) {
    double off = 0;
    for (int p = 0; p < n; p++) {
      for (int q = p + 1; q < n; q++) off = std::max(off, std::abs(m.at(p, q)));
    }
    if (off > off_tol) {
      throw std::runtime_error(
          "Jacobi eigensolver failed to converge after " +
          std::to_string(max_sweeps) +
          " sweeps (residual off-diagonal " + std::to_string(off) + ")");
    }
  }

  std::vector<int> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(), [&](int a, int b) {
    return m.at(a, a).real() < m.at(b, b).real();
  });

  EigenSystem sys;
  sys.values.resize(n);
  sys.vectors = ComplexMatrix(n, n);
  for (int k = 0; k < n; k++) {
    sys.values[k] = m.at(order[k], order[k]).real();
    for (int r = 0; r < n; r++) sys.vectors.at(r, k) = vecs.at(r, order[k]);
  }
  return sys;
}

std::vector<double> eigvals_hermitian(const HermitianOperator &a) {
  return eigh(a.matrix()).values;
}

double min_eigenvalue(const ComplexMatrix &hermitian) {
  return eigh(hermitian).values.front();
}

bool is_psd(const HermitianOperator &a, double tol) {
  return min_eigenvalue(a.matrix()) >= -tol;
}

namespace {

void check_orthonormal_basis(const ComplexMatrix &basis, int dim) {
  if (basis.rows() != dim || basis.cols() != dim) {
    throw std::invalid_argument("basis does not span the space");
  }
  ComplexMatrix gram = basis.adjoint() * basis;
  if (max_abs_diff(gram, ComplexMatrix::identity(dim)) > HERMITICITY_TOL) {
    throw std::invalid_argument("basis is not orthonormal within tolerance");
  }
}

}  // namespace

ComplexMatrix diagonal_part(const ComplexMatrix &m, const ComplexMatrix &basis) {
  if (!m.is_square()) {
    throw std::invalid_argument("diagonal_part requires a square matrix");
  }
  check_orthonormal_basis(basis, m.rows());
  ComplexMatrix out(m.rows(), m.cols());
  for (int k = 0; k < basis.cols(); k++) {
    std::vector<Complex> ket = basis.column(k);
    Complex diag = inner(ket, m * std::span<const Complex>(ket));
    ComplexMatrix proj = ComplexMatrix::outer(ket, ket);
    out = out + proj * diag;
  }
  return out;
}

ComplexMatrix off_diagonal_part(const ComplexMatrix &m,
                                const ComplexMatrix &basis) {
  return m - diagonal_part(m, basis);
}

DensityMatrix dephase(const DensityMatrix &rho, const ComplexMatrix &basis) {
  return DensityMatrix(diagonal_part(rho.matrix(), basis));
}

double classical_fidelity(std::span<const double> p,
                          std::span<const double> q) {
  if (p.size() != q.size()) {
    throw std::invalid_argument("probability vectors differ in length");
  }
  double sp = 0, sq = 0;
  for (size_t i = 0; i < p.size(); i++) {
    if (p[i] < -1e-12 || q[i] < -1e-12) {
      throw std::invalid_argument("probability entry below zero");
    }
    sp += p[i];
    sq += q[i];
  }
  if (std::abs(sp - 1.0) > PROB_TOL || std::abs(sq - 1.0) > PROB_TOL) {
    throw std::invalid_argument("probability vector does not sum to 1");
  }
  double f = 0;
  for (size_t i = 0; i < p.size(); i++) {
    f += std::sqrt(std::max(0.0, p[i]) * std::max(0.0, q[i]));
  }
  return f;
}

ComplexMatrix pauli_x() { return ComplexMatrix{{0, 1}, {1, 0}}; }
ComplexMatrix pauli_y() {
  return ComplexMatrix{{0, Complex{0, -1}}, {Complex{0, 1}, 0}};
}
ComplexMatrix pauli_z() { return ComplexMatrix{{1, 0}, {0, -1}}; }

std::vector<Complex> ket_zero() { return {1, 0}; }
std::vector<Complex> ket_one() { return {0, 1}; }
std::vector<Complex> ket_plus() {
  double r = 1.0 / std::sqrt(2.0);
  return {r, r};
}
std::vector<Complex> ket_minus() {
  double r = 1.0 / std::sqrt(2.0);
  return {r, -r};
}

}  // namespace backaction::qmath
