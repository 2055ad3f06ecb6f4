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

#include "backaction/schemes.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>
#include <string>

namespace backaction::schemes {

Hamiltonian::Hamiltonian(std::vector<double> energies,
                         ComplexMatrix eigenvector_columns)
    : energies_(std::move(energies)), basis_(std::move(eigenvector_columns)) {
  const int d = static_cast<int>(energies_.size());
  if (d == 0) throw std::invalid_argument("Hamiltonian needs >= 1 level");
  if (basis_.rows() != d || basis_.cols() != d) {
    throw std::invalid_argument("eigenvector matrix must be d x d");
  }
  ComplexMatrix gram = basis_.adjoint() * basis_;
  if (qmath::max_abs_diff(gram, ComplexMatrix::identity(d)) >
      qmath::HERMITICITY_TOL) {
    throw std::invalid_argument("Hamiltonian eigenvectors not orthonormal");
  }
  ComplexMatrix op = operator_matrix();
  if (qmath::max_abs_diff(op, op.adjoint()) > 1e-12) {
    throw std::invalid_argument("Hamiltonian reconstruction not Hermitian");
  }
}

Hamiltonian Hamiltonian::computational(std::vector<double> energies) {
  int d = static_cast<int>(energies.size());
  return Hamiltonian(std::move(energies), ComplexMatrix::identity(d));
}

Hamiltonian Hamiltonian::degenerate_qubit() {
  return computational({0.0, 0.0});
}

ComplexMatrix Hamiltonian::projector(int i) const {
  std::vector<Complex> v = basis_.column(i);
  return ComplexMatrix::outer(v, v);
}

ComplexMatrix Hamiltonian::operator_matrix() const {
  ComplexMatrix op(dim(), dim());
  for (int i = 0; i < dim(); i++) {
    op = op + projector(i) * Complex{energies_[i]};
  }
  return op;
}

Povm::Povm(std::vector<Effect> effects) : effects_(std::move(effects)) {
  if (effects_.empty()) throw std::invalid_argument("POVM with no effects");
  const int d = effects_.front().second.dim();
  ComplexMatrix sum(d, d);
  for (const auto &[label, effect] : effects_) {
    if (effect.dim() != d) {
      throw std::invalid_argument("POVM effects differ in dimension");
    }
    if (!qmath::is_psd(effect, qmath::PSD_TOL)) {
      throw std::invalid_argument("POVM effect is not positive semidefinite");
    }
    sum = sum + effect.matrix();
  }
  if (qmath::max_abs_diff(sum, ComplexMatrix::identity(d)) > qmath::PROB_TOL) {
    throw std::invalid_argument("POVM does not satisfy completeness");
  }
}

const HermitianOperator &Povm::effect(OutcomeLabel label) const {
  for (const auto &[l, e] : effects_) {
    if (l == label) return e;
  }
  throw std::invalid_argument("no effect with label (" +
                              std::to_string(label.i) + "," +
                              std::to_string(label.j_prime) + ")");
}

TransitionTable::TransitionTable(std::map<OutcomeLabel, double> probs,
                                 std::map<OutcomeLabel, double> std_errors)
    : probs_(std::move(probs)), std_errors_(std::move(std_errors)) {
  double sum = 0;
  for (const auto &[label, p] : probs_) {
    if (p < -qmath::PROB_TOL || p > 1 + qmath::PROB_TOL) {
      throw std::invalid_argument("transition probability out of range");
    }
    sum += p;
  }
  if (std::abs(sum - 1.0) > qmath::PROB_TOL) {
    throw std::invalid_argument("transition probabilities do not sum to 1");
  }
}

double TransitionTable::probability(OutcomeLabel label) const {
  auto it = probs_.find(label);
  if (it == probs_.end()) {
    throw std::invalid_argument("label missing from transition table");
  }
  return std::clamp(it->second, 0.0, 1.0);
}

double TransitionTable::std_error(OutcomeLabel label) const {
  auto it = std_errors_.find(label);
  return it == std_errors_.end() ? 0.0 : it->second;
}

std::vector<double> TransitionTable::final_marginal(int dim_j_prime) const {
  std::vector<double> out(dim_j_prime, 0.0);
  for (const auto &[label, p] : probs_) {
    if (label.j_prime < 0 || label.j_prime >= dim_j_prime) {
      throw std::invalid_argument("label j' outside marginal dimension");
    }
    out[label.j_prime] += std::clamp(p, 0.0, 1.0);
  }
  return out;
}

std::vector<double> TransitionTable::final_marginal_std_error(
    int dim_j_prime) const {
  std::vector<double> var(dim_j_prime, 0.0);
  for (const auto &[label, e] : std_errors_) {
    if (label.j_prime >= 0 && label.j_prime < dim_j_prime) {
      var[label.j_prime] += e * e;
    }
  }
  for (double &v : var) v = std::sqrt(v);
  return var;
}

WorkDistribution::WorkDistribution(std::vector<WorkAtom> atoms)
    : atoms_(std::move(atoms)) {
  double sum = 0;
  for (size_t k = 0; k < atoms_.size(); k++) {
    if (atoms_[k].p < 0) throw std::invalid_argument("negative atom weight");
    if (k > 0 && atoms_[k].w - atoms_[k - 1].w < WORK_MERGE_TOL) {
      throw std::invalid_argument("work atoms not strictly ascending");
    }
    sum += atoms_[k].p;
  }
  if (std::abs(sum - 1.0) > qmath::PROB_TOL) {
    throw std::invalid_argument("work distribution does not sum to 1");
  }
}

double WorkDistribution::mean() const {
  double m = 0;
  for (const WorkAtom &a : atoms_) m += a.w * a.p;
  return m;
}

PureQubitState::PureQubitState(double p0_in, double p1_in, double phase_in)
    : p0(p0_in), p1(p1_in), phase(phase_in) {
  if (p0 < 0 || p1 < 0 || std::abs(p0 + p1 - 1.0) > 1e-12) {
    throw std::invalid_argument("populations must be >= 0 and sum to 1");
  }
}

PureQubitState PureQubitState::from_p0(double p0) {
  if (p0 < 0 || p0 > 1) throw std::invalid_argument("p0 outside [0, 1]");
  return PureQubitState(p0, 1.0 - p0);
}

PureQubitState PureQubitState::from_alpha_deg(double alpha_deg) {
  double c = std::cos(2.0 * alpha_deg * std::numbers::pi / 180.0);
  return from_p0(c * c);
}

PureQubitState PureQubitState::plus() { return from_p0(0.5); }

std::vector<Complex> PureQubitState::ket() const {
  return {Complex{std::sqrt(p0)},
          std::polar(std::sqrt(p1), phase)};
}

DensityMatrix PureQubitState::density() const {
  return DensityMatrix::pure(ket());
}

UnitaryOperator u_theta(double theta_rad) {
  double c = std::cos(theta_rad), s = std::sin(theta_rad);
  return UnitaryOperator(ComplexMatrix{{c, s}, {s, -c}});
}

namespace {

// |<j'|U|i>|^2 over the eigenbases of h and h_prime.
double transition_weight(const UnitaryOperator &u, const Hamiltonian &h,
                         const Hamiltonian &h_prime, int i, int j_prime) {
  std::vector<Complex> ui = u.matrix() * std::span<const Complex>(
                                             h.eigenvector(i));
  Complex amp = qmath::inner(h_prime.eigenvector(j_prime), ui);
  return std::norm(amp);
}

void check_dims(const UnitaryOperator &u, const Hamiltonian &h,
                const Hamiltonian &h_prime) {
  if (u.dim() != h.dim() || u.dim() != h_prime.dim()) {
    throw std::invalid_argument("dimension mismatch between U, H, H'");
  }
}

}  // namespace

Povm tpm_povm(const UnitaryOperator &u, const Hamiltonian &h,
              const Hamiltonian &h_prime) {
  check_dims(u, h, h_prime);
  std::vector<Povm::Effect> effects;
  for (int i = 0; i < h.dim(); i++) {
    ComplexMatrix proj = h.projector(i);
    for (int j = 0; j < h_prime.dim(); j++) {
      double w = transition_weight(u, h, h_prime, i, j);
      effects.emplace_back(OutcomeLabel{i, j},
                           HermitianOperator(proj * Complex{w}));
    }
  }
  return Povm(std::move(effects));
}

std::vector<std::pair<OutcomeLabel, ComplexMatrix>> cm_effect_matrices(
    const UnitaryOperator &u, const Hamiltonian &h, const Hamiltonian &h_prime,
    double lambda) {
  check_dims(u, h, h_prime);
  const int d = h.dim();
  ComplexMatrix eye = ComplexMatrix::identity(d);
  std::vector<std::pair<OutcomeLabel, ComplexMatrix>> out;
  for (int j = 0; j < h_prime.dim(); j++) {
    // T_j' = U^dag |j'><j'| U, off-diagonal part taken in the {|i>} basis.
    std::vector<Complex> jp = h_prime.eigenvector(j);
    ComplexMatrix t = u.matrix().adjoint() * ComplexMatrix::outer(jp, jp) *
                      u.matrix();
    ComplexMatrix t_off = qmath::off_diagonal_part(t, h.basis());
    for (int i = 0; i < d; i++) {
      ComplexMatrix proj = h.projector(i);
      double w = transition_weight(u, h, h_prime, i, j);
      ComplexMatrix effect = qmath::tensor(proj * Complex{w}, eye) +
                             qmath::tensor(proj, t_off) * Complex{lambda};
      out.emplace_back(OutcomeLabel{i, j}, std::move(effect));
    }
  }
  std::sort(out.begin(), out.end(),
            [](const auto &a, const auto &b) { return a.first < b.first; });
  return out;
}

double lambda_max(const UnitaryOperator &u, const Hamiltonian &h,
                  const Hamiltonian &h_prime) {
  auto feasible = [&](double lambda) {
    for (const auto &[label, m] : cm_effect_matrices(u, h, h_prime, lambda)) {
      if (qmath::min_eigenvalue(m) < -qmath::PSD_TOL) return false;
    }
    return true;
  };
  if (!feasible(0.0)) {
    throw std::runtime_error(
        "collective measurement infeasible at lambda = 0");
  }
  // The effects are affine in lambda and PSD at 0, so feasibility is an
  // interval [0, lambda*]; bisect its right edge, capped at 1.
  if (feasible(1.0)) return 1.0;
  double lo = 0.0, hi = 1.0;
  for (int iter = 0; iter < 60 && hi - lo > 1e-12; iter++) {
    double mid = 0.5 * (lo + hi);
    (feasible(mid) ? lo : hi) = mid;
  }
  return lo;
}

Povm cm_povm(const UnitaryOperator &u, const Hamiltonian &h,
             const Hamiltonian &h_prime, double lambda) {
  std::vector<Povm::Effect> effects;
  for (auto &[label, m] : cm_effect_matrices(u, h, h_prime, lambda)) {
    if (qmath::min_eigenvalue(m) < -qmath::PSD_TOL) {
      throw std::runtime_error(
          "collective-measurement effect (" + std::to_string(label.i) + "," +
          std::to_string(label.j_prime) +
          ") is not PSD; lambda = " + std::to_string(lambda) + " too large");
    }
    effects.emplace_back(label, HermitianOperator(std::move(m)));
  }
  return Povm(std::move(effects));
}

TransitionTable transition_probs(const Povm &povm, const DensityMatrix &state) {
  if (povm.dim() != state.dim()) {
    throw std::invalid_argument("POVM/state dimension mismatch");
  }
  std::map<OutcomeLabel, double> probs;
  for (const auto &[label, effect] : povm.effects()) {
    Complex p = (effect.matrix() * state.matrix()).trace();
    probs[label] = std::clamp(p.real(), 0.0, 1.0);
  }
  return TransitionTable(std::move(probs));
}

std::map<OutcomeLabel, double> work_values(const Hamiltonian &h,
                                           const Hamiltonian &h_prime) {
  std::map<OutcomeLabel, double> w;
  for (int i = 0; i < h.dim(); i++) {
    for (int j = 0; j < h_prime.dim(); j++) {
      w[OutcomeLabel{i, j}] = h.energy(i) - h_prime.energy(j);
    }
  }
  return w;
}

WorkDistribution work_distribution(const TransitionTable &table,
                                   const std::map<OutcomeLabel, double> &wmap) {
  std::vector<WorkAtom> raw;
  for (const auto &[label, p] : table.entries()) {
    auto it = wmap.find(label);
    if (it == wmap.end()) {
      throw std::invalid_argument("work value missing for label (" +
                                  std::to_string(label.i) + "," +
                                  std::to_string(label.j_prime) + ")");
    }
    raw.push_back({it->second, std::clamp(p, 0.0, 1.0)});
  }
  std::sort(raw.begin(), raw.end(),
            [](const WorkAtom &a, const WorkAtom &b) { return a.w < b.w; });
  std::vector<WorkAtom> merged;
  for (const WorkAtom &a : raw) {
    if (!merged.empty() && a.w - merged.back().w < WORK_MERGE_TOL) {
      merged.back().p += a.p;
    } else {
      merged.push_back(a);
    }
  }
  return WorkDistribution(std::move(merged));
}

double avg_work_unmeasured(const DensityMatrix &rho, const UnitaryOperator &u,
                           const Hamiltonian &h, const Hamiltonian &h_prime) {
  check_dims(u, h, h_prime);
  if (rho.dim() != h.dim()) {
    throw std::invalid_argument("state dimension mismatch");
  }
  ComplexMatrix evolved =
      u.matrix() * rho.matrix() * u.matrix().adjoint();
  double e_initial = (h.operator_matrix() * rho.matrix()).trace().real();
  double e_final = (h_prime.operator_matrix() * evolved).trace().real();
  return e_initial - e_final;
}

double avg_work_tpm(const DensityMatrix &rho, const UnitaryOperator &u,
                    const Hamiltonian &h, const Hamiltonian &h_prime) {
  // Route 1: sum of P^{(ij')} w^{(ij')} over the TPM table.
  TransitionTable table = transition_probs(tpm_povm(u, h, h_prime), rho);
  auto wmap = work_values(h, h_prime);
  double from_table = 0;
  for (const auto &[label, p] : table.entries()) {
    from_table += std::clamp(p, 0.0, 1.0) * wmap.at(label);
  }
  // Route 2: dephased-state form. The two must agree; a mismatch means the
  // POVM construction and the dephasing operator disagree about the basis.
  DensityMatrix dephased = qmath::dephase(rho, h.basis());
  double from_dephased = avg_work_unmeasured(dephased, u, h, h_prime);
  if (std::abs(from_table - from_dephased) > 1e-10) {
    throw std::runtime_error("TPM average-work routes disagree");
  }
  return from_table;
}

double avg_work_cm(const DensityMatrix &rho, const UnitaryOperator &u,
                   const Hamiltonian &h, const Hamiltonian &h_prime,
                   double lambda) {
  TransitionTable table =
      transition_probs(cm_povm(u, h, h_prime, lambda), qmath::two_copies(rho));
  auto wmap = work_values(h, h_prime);
  double from_table = 0;
  for (const auto &[label, p] : table.entries()) {
    from_table += std::clamp(p, 0.0, 1.0) * wmap.at(label);
  }
  double interpolated = (1.0 - lambda) * avg_work_tpm(rho, u, h, h_prime) +
                        lambda * avg_work_unmeasured(rho, u, h, h_prime);
  if (std::abs(from_table - interpolated) > 1e-10) {
    throw std::runtime_error("CM average work violates the interpolation law");
  }
  return from_table;
}

double l1_coherence(const DensityMatrix &rho) {
  double c = 0;
  for (int r = 0; r < rho.dim(); r++) {
    for (int k = 0; k < rho.dim(); k++) {
      if (r != k) c += std::abs(rho.matrix().at(r, k));
    }
  }
  return c;
}

double cohering_power_unitary(const UnitaryOperator &u) {
  // max over basis inputs |j> of C_l1(U|j><j|U^dag) = (sum_i |U_ij|)^2 - 1.
  double best = 0;
  for (int j = 0; j < u.dim(); j++) {
    double colsum = 0;
    for (int i = 0; i < u.dim(); i++) colsum += std::abs(u.matrix().at(i, j));
    best = std::max(best, colsum * colsum - 1.0);
  }
  return best;
}

std::vector<double> ideal_final_dist(const UnitaryOperator &u,
                                     const PureQubitState &state) {
  if (u.dim() != 2) throw std::invalid_argument("expected a qubit unitary");
  std::vector<Complex> evolved =
      u.matrix() * std::span<const Complex>(state.ket());
  return {std::norm(evolved[0]), std::norm(evolved[1])};
}

double backaction_fidelity(Scheme scheme, const UnitaryOperator &u,
                           const PureQubitState &state) {
  Hamiltonian h = Hamiltonian::degenerate_qubit();
  DensityMatrix rho = state.density();
  TransitionTable table = [&] {
    if (scheme == Scheme::kTpm) {
      return transition_probs(tpm_povm(u, h, h), rho);
    }
    double lambda = lambda_max(u, h, h);
    return transition_probs(cm_povm(u, h, h, lambda), qmath::two_copies(rho));
  }();
  return qmath::classical_fidelity(table.final_marginal(2),
                                   ideal_final_dist(u, state));
}

namespace closed_form {

std::vector<double> ideal_marginal(double p0, double theta_rad) {
  double p1 = 1.0 - p0;
  double c = std::cos(theta_rad), s = std::sin(theta_rad);
  double a0 = std::sqrt(p0) * c + std::sqrt(p1) * s;
  double a1 = std::sqrt(p1) * c - std::sqrt(p0) * s;
  return {a0 * a0, a1 * a1};
}

std::vector<double> cm_marginal(double p0, double theta_rad) {
  double p1 = 1.0 - p0;
  double c2 = std::cos(theta_rad) * std::cos(theta_rad);
  double s2 = std::sin(theta_rad) * std::sin(theta_rad);
  double cross = 2.0 * std::sqrt(p0 * p1) * s2;
  return {p0 * c2 + p1 * s2 + cross, p0 * s2 + p1 * c2 - cross};
}

std::vector<double> tpm_marginal(double p0, double theta_rad) {
  double p1 = 1.0 - p0;
  double c2 = std::cos(theta_rad) * std::cos(theta_rad);
  double s2 = std::sin(theta_rad) * std::sin(theta_rad);
  return {p0 * c2 + p1 * s2, p0 * s2 + p1 * c2};
}

double cm_fidelity(double p0, double theta_rad) {
  return qmath::classical_fidelity(cm_marginal(p0, theta_rad),
                                   ideal_marginal(p0, theta_rad));
}

double tpm_fidelity(double p0, double theta_rad) {
  return qmath::classical_fidelity(tpm_marginal(p0, theta_rad),
                                   ideal_marginal(p0, theta_rad));
}

}  // namespace closed_form

}  // namespace backaction::schemes
