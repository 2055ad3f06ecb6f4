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

#ifndef BACKACTION_SCHEMES_HPP
#define BACKACTION_SCHEMES_HPP

#include <compare>
#include <map>
#include <vector>

#include "backaction/qmath.hpp"

namespace backaction::schemes {

using qmath::Complex;
using qmath::ComplexMatrix;
using qmath::DensityMatrix;
using qmath::HermitianOperator;
using qmath::UnitaryOperator;

// Atoms of a work distribution closer than this merge into one.
inline constexpr double WORK_MERGE_TOL = 1e-9;

/// Hamiltonian given by its spectral data: H = sum_i E_i |i><i|. The
/// eigenvector columns must be orthonormal; energies may be degenerate (the
/// photonic experiment uses all-zero energies).
class Hamiltonian {
 public:
  Hamiltonian(std::vector<double> energies, ComplexMatrix eigenvector_columns);
  static Hamiltonian computational(std::vector<double> energies);
  static Hamiltonian degenerate_qubit();

  int dim() const { return static_cast<int>(energies_.size()); }
  double energy(int i) const { return energies_.at(i); }
  const std::vector<double> &energies() const { return energies_; }
  const ComplexMatrix &basis() const { return basis_; }
  std::vector<Complex> eigenvector(int i) const { return basis_.column(i); }
  ComplexMatrix projector(int i) const;
  ComplexMatrix operator_matrix() const;  // sum_i E_i |i><i|

 private:
  std::vector<double> energies_;
  ComplexMatrix basis_;
};

/// Transition |i> -> |j'> between eigenstates of the initial and final
/// Hamiltonians.
struct OutcomeLabel {
  int i = 0;
  int j_prime = 0;
  auto operator<=>(const OutcomeLabel &) const = default;
};

/// Finite POVM: labeled effects, each PSD within PSD_TOL, summing to the
/// identity within PROB_TOL entrywise. Validated at construction.
class Povm {
 public:
  using Effect = std::pair<OutcomeLabel, HermitianOperator>;
  explicit Povm(std::vector<Effect> effects);

  int dim() const { return effects_.front().second.dim(); }
  size_t size() const { return effects_.size(); }
  const std::vector<Effect> &effects() const { return effects_; }
  const HermitianOperator &effect(OutcomeLabel label) const;

 private:
  std::vector<Effect> effects_;
};

/// Probabilities per transition label, summing to 1. Optionally carries a
/// standard error per entry when estimated from counts.
class TransitionTable {
 public:
  explicit TransitionTable(std::map<OutcomeLabel, double> probs,
                           std::map<OutcomeLabel, double> std_errors = {});

  // Clamped to [0, 1] on read.
  double probability(OutcomeLabel label) const;
  const std::map<OutcomeLabel, double> &entries() const { return probs_; }
  bool has_std_errors() const { return !std_errors_.empty(); }
  double std_error(OutcomeLabel label) const;
  const std::map<OutcomeLabel, double> &std_errors() const {
    return std_errors_;
  }

  // P^{(j')} = sum_i P^{(i j')}, as a dense vector over j' in [0, dim).
  std::vector<double> final_marginal(int dim_j_prime) const;
  std::vector<double> final_marginal_std_error(int dim_j_prime) const;

 private:
  std::map<OutcomeLabel, double> probs_;
  std::map<OutcomeLabel, double> std_errors_;
};

struct WorkAtom {
  double w = 0;
  double p = 0;
};

/// Work distribution as a list of (work value, probability) atoms, strictly
/// ascending in w, duplicates merged within WORK_MERGE_TOL.
class WorkDistribution {
 public:
  explicit WorkDistribution(std::vector<WorkAtom> atoms);
  const std::vector<WorkAtom> &atoms() const { return atoms_; }
  double mean() const;

 private:
  std::vector<WorkAtom> atoms_;
};

/// Pure qubit state sqrt(p0)|0> + e^{i phase} sqrt(p1)|1>. The experiment
/// prepares the phase-0 family via a half-wave plate at angle alpha, with
/// p0 = cos^2(2 alpha).
struct PureQubitState {
  double p0 = 1;
  double p1 = 0;
  double phase = 0;

  PureQubitState(double p0_in, double p1_in, double phase_in = 0);
  static PureQubitState from_p0(double p0);
  static PureQubitState from_alpha_deg(double alpha_deg);
  static PureQubitState plus();

  std::vector<Complex> ket() const;
  DensityMatrix density() const;
};

enum class Scheme { kTpm, kCm };

/// U(theta) = cos(theta) sigma_z + sin(theta) sigma_x, the tunable family of
/// coherent processes realized in the experiment. Hermitian and unitary.
UnitaryOperator u_theta(double theta_rad);

Povm tpm_povm(const UnitaryOperator &u, const Hamiltonian &h,
              const Hamiltonian &h_prime);

/// Largest lambda in [0, 1] keeping every collective-measurement effect PSD
/// (bisection against the min-eigenvalue feasibility test). For U(theta) with
/// theta in (0, pi/4] this equals tan(theta); for processes whose effects
/// carry no off-diagonal part any lambda is feasible and the cap of 1 is
/// returned.
double lambda_max(const UnitaryOperator &u, const Hamiltonian &h,
                  const Hamiltonian &h_prime);

/// Collective-measurement POVM on the two-copy space:
/// M^{(ij')} = M_TPM^{(ij')} (x) I + lambda |i><i| (x) offdiag(U^dag |j'><j'| U).
/// Throws std::runtime_error if lambda makes any effect lose positivity.
Povm cm_povm(const UnitaryOperator &u, const Hamiltonian &h,
             const Hamiltonian &h_prime, double lambda);

// Raw effect matrices without POVM validation; shared by lambda_max and
// cm_povm.
std::vector<std::pair<OutcomeLabel, ComplexMatrix>> cm_effect_matrices(
    const UnitaryOperator &u, const Hamiltonian &h, const Hamiltonian &h_prime,
    double lambda);

/// Generalized Born rule: P^{(label)} = tr(effect * state).
TransitionTable transition_probs(const Povm &povm, const DensityMatrix &state);

std::map<OutcomeLabel, double> work_values(const Hamiltonian &h,
                                           const Hamiltonian &h_prime);

WorkDistribution work_distribution(const TransitionTable &table,
                                   const std::map<OutcomeLabel, double> &wmap);

double avg_work_unmeasured(const DensityMatrix &rho, const UnitaryOperator &u,
                           const Hamiltonian &h, const Hamiltonian &h_prime);

double avg_work_tpm(const DensityMatrix &rho, const UnitaryOperator &u,
                    const Hamiltonian &h, const Hamiltonian &h_prime);

double avg_work_cm(const DensityMatrix &rho, const UnitaryOperator &u,
                   const Hamiltonian &h, const Hamiltonian &h_prime,
                   double lambda);

/// l1-norm coherence: sum of |rho_ij| over i != j in the computational basis
/// of the stored matrix.
double l1_coherence(const DensityMatrix &rho);

/// Cohering power of a unitary: the maximal l1 coherence reachable from a
/// basis state, max_j (sum_i |U_ij|)^2 - 1. Equals |sin 2 theta| for
/// U(theta).
double cohering_power_unitary(const UnitaryOperator &u);

/// Final-state distribution of the unmeasured evolution,
/// P_Id^{(j')} = |<j'| U |Phi>|^2.
std::vector<double> ideal_final_dist(const UnitaryOperator &u,
                                     const PureQubitState &state);

/// Classical fidelity between a scheme's measured final-state marginal and
/// the unmeasured distribution. Degenerate qubit Hamiltonians; the CM runs at
/// its optimal lambda.
double backaction_fidelity(Scheme scheme, const UnitaryOperator &u,
                           const PureQubitState &state);

// Closed forms for the U(theta) family on sqrt(p0)|0> + sqrt(p1)|1>, used by
// the reproduction reports and as cross-checks on the operator pipeline.
namespace closed_form {
std::vector<double> ideal_marginal(double p0, double theta_rad);
std::vector<double> cm_marginal(double p0, double theta_rad);
std::vector<double> tpm_marginal(double p0, double theta_rad);
double cm_fidelity(double p0, double theta_rad);
double tpm_fidelity(double p0, double theta_rad);
}  // namespace closed_form

}  // namespace backaction::schemes

#endif
