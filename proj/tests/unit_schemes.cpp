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
#include <numbers>

#include "doctest.h"
#include "test_util.hpp"

#include "backaction/serialize.hpp"

using namespace backaction::qmath;
using namespace backaction::schemes;

namespace {
constexpr double PI = std::numbers::pi;

// Element-wise Born rule sum_{kl} M_{kl} rho_{lk}, deliberately avoiding the
// matrix-product path used by the implementation.
double born_brute_force(const ComplexMatrix &effect, const ComplexMatrix &rho) {
  Complex acc = 0;
  for (int k = 0; k < effect.rows(); k++) {
    for (int l = 0; l < effect.cols(); l++) {
      acc += effect.at(k, l) * rho.at(l, k);
    }
  }
  return acc.real();
}

}  // namespace

TEST_CASE("tpm_povm: identity process on a diagonal pair") {
  Hamiltonian h = Hamiltonian::computational({0.0, 1.0});
  Povm povm = tpm_povm(UnitaryOperator(ComplexMatrix::identity(2)), h, h);
  REQUIRE(povm.size() == 4);
  CHECK(approx_equal(povm.effect({0, 0}).matrix(),
                     ComplexMatrix::outer(ket_zero(), ket_zero()), 1e-14));
  CHECK(approx_equal(povm.effect({1, 1}).matrix(),
                     ComplexMatrix::outer(ket_one(), ket_one()), 1e-14));
  CHECK(povm.effect({0, 1}).matrix().max_abs() < 1e-14);
  CHECK(povm.effect({1, 0}).matrix().max_abs() < 1e-14);
}

TEST_CASE("tpm_povm: U(pi/4) splits every transition evenly") {
  Hamiltonian h = Hamiltonian::degenerate_qubit();
  Povm povm = tpm_povm(u_theta(PI / 4), h, h);
  for (const auto &[label, effect] : povm.effects()) {
    ComplexMatrix proj = h.projector(label.i) * Complex{0.5};
    CHECK(approx_equal(effect.matrix(), proj, 1e-14));
  }
  // Born rule on |+> gives 1/4 per transition.
  TransitionTable table =
      transition_probs(povm, DensityMatrix::pure(ket_plus()));
  for (const auto &[label, p] : table.entries()) {
    CHECK(std::abs(p - 0.25) < 1e-14);
  }
}

TEST_CASE("lambda_max: tan(theta) for the U(theta) family") {
  Hamiltonian h = Hamiltonian::degenerate_qubit();
  CHECK(std::abs(lambda_max(u_theta(PI / 6), h, h) - std::tan(PI / 6)) < 1e-7);
  CHECK(std::abs(lambda_max(u_theta(PI / 4), h, h) - 1.0) < 1e-7);
  // Diagonal processes have no off-diagonal term; any lambda works, cap at 1.
  CHECK(lambda_max(UnitaryOperator(ComplexMatrix::identity(2)), h, h) == 1.0);
}

TEST_CASE("cm_povm: matches the explicit four-effect form at lambda=tan") {
  Hamiltonian h = Hamiltonian::degenerate_qubit();
  for (int k = 0; k <= 19; k++) {
    double theta = (PI / 4) * (k + 1) / 20.0;
    Povm povm = cm_povm(u_theta(theta), h, h, std::tan(theta));
    for (const auto &[label, expected] : testutil::explicit_cm_effects(theta)) {
      CHECK(max_abs_diff(povm.effect(label).matrix(), expected) < 1e-10);
    }
  }
}

TEST_CASE("cm_povm: lambda=0 reduces to TPM (x) I") {
  Hamiltonian h = Hamiltonian::degenerate_qubit();
  UnitaryOperator u = u_theta(0.31);
  Povm cm = cm_povm(u, h, h, 0.0);
  Povm tpm = tpm_povm(u, h, h);
  for (const auto &[label, effect] : cm.effects()) {
    ComplexMatrix expected =
        tensor(tpm.effect(label).matrix(), ComplexMatrix::identity(2));
    CHECK(max_abs_diff(effect.matrix(), expected) < 1e-14);
  }
}

TEST_CASE("cm_povm: |+> (x) |+> at theta=pi/4 concentrates on 0'") {
  Hamiltonian h = Hamiltonian::degenerate_qubit();
  DensityMatrix rho2 = two_copies(DensityMatrix::pure(ket_plus()));
  TransitionTable t = transition_probs(cm_povm(u_theta(PI / 4), h, h, 1.0), rho2);
  CHECK(std::abs(t.probability({0, 0}) - 0.5) < 1e-12);
  CHECK(t.probability({0, 1}) < 1e-12);
  CHECK(std::abs(t.probability({1, 0}) - 0.5) < 1e-12);
  CHECK(t.probability({1, 1}) < 1e-12);
}

TEST_CASE("cm_povm: oversized lambda is rejected") {
  Hamiltonian h = Hamiltonian::degenerate_qubit();
  CHECK_THROWS_AS(cm_povm(u_theta(PI / 6), h, h, 1.0), std::runtime_error);
}

TEST_CASE("transition_probs: diagonal states follow rho_ii |<j'|U|i>|^2") {
  testutil::Rand rand(31);
  Hamiltonian h = Hamiltonian::degenerate_qubit();
  for (int rep = 0; rep < 20; rep++) {
    UnitaryOperator u = testutil::random_unitary(rand, 2);
    DensityMatrix rho = testutil::random_diagonal_density(rand, 2);
    TransitionTable t = transition_probs(tpm_povm(u, h, h), rho);
    for (const auto &[label, p] : t.entries()) {
      std::vector<Complex> ui =
          u.matrix() * std::span<const Complex>(h.eigenvector(label.i));
      double weight = std::norm(inner(h.eigenvector(label.j_prime), ui));
      double expected = rho.matrix().at(label.i, label.i).real() * weight;
      CHECK(std::abs(p - expected) < 1e-12);
    }
  }
}

TEST_CASE("transition_probs: coherence-blind states see no CM/TPM difference") {
  testutil::Rand rand(37);
  Hamiltonian h = Hamiltonian::degenerate_qubit();
  for (int rep = 0; rep < 200; rep++) {
    UnitaryOperator u = testutil::random_unitary(rand, 2);
    DensityMatrix rho = testutil::random_diagonal_density(rand, 2);
    double lambda = lambda_max(u, h, h);
    TransitionTable tpm = transition_probs(tpm_povm(u, h, h), rho);
    TransitionTable cm =
        transition_probs(cm_povm(u, h, h, lambda), two_copies(rho));
    for (const auto &[label, p] : tpm.entries()) {
      CHECK(std::abs(p - cm.probability(label)) < 1e-9);
    }
  }
}

TEST_CASE("transition_probs: CM marginal for p0=0.75 at theta=pi/6") {
  Hamiltonian h = Hamiltonian::degenerate_qubit();
  PureQubitState state = PureQubitState::from_p0(0.75);
  double theta = PI / 6;
  TransitionTable t = transition_probs(cm_povm(u_theta(theta), h, h,
                                               std::tan(theta)),
                                       two_copies(state.density()));
  // p0 cos^2 + p1 sin^2 + 2 sqrt(p0 p1) sin^2 = 0.625 + sqrt(3)/8.
  double expected = 0.625 + std::sqrt(3.0) / 8.0;
  CHECK(std::abs(t.final_marginal(2)[0] - expected) < 1e-12);
  CHECK(std::abs(expected - 0.84151) < 5e-6);
}

TEST_CASE("transition_probs: agrees with the element-wise Born oracle") {
  testutil::Rand rand(41);
  Hamiltonian h = Hamiltonian::degenerate_qubit();
  for (int rep = 0; rep < 50; rep++) {
    double theta = rand.uniform() * PI / 4;
    double lambda = rand.uniform() * std::tan(theta);
    Povm povm = cm_povm(u_theta(theta), h, h, lambda);
    DensityMatrix rho2 = two_copies(testutil::random_density(rand, 2));
    TransitionTable t = transition_probs(povm, rho2);
    for (const auto &[label, effect] : povm.effects()) {
      double oracle = born_brute_force(effect.matrix(), rho2.matrix());
      CHECK(std::abs(t.probability(label) - oracle) < 1e-12);
    }
  }
}

TEST_CASE("transition_probs: dimension mismatch") {
  Hamiltonian h = Hamiltonian::degenerate_qubit();
  Povm povm = tpm_povm(u_theta(0.3), h, h);
  DensityMatrix rho2 = two_copies(DensityMatrix::pure(ket_plus()));
  CHECK_THROWS_AS(transition_probs(povm, rho2), std::invalid_argument);
}

TEST_CASE("work_values") {
  Hamiltonian degenerate = Hamiltonian::degenerate_qubit();
  for (const auto &[label, w] : work_values(degenerate, degenerate)) {
    CHECK(w == 0.0);
  }
  Hamiltonian h01 = Hamiltonian::computational({0.0, 1.0});
  auto w = work_values(h01, h01);
  CHECK(w.at({0, 1}) == -1.0);
  CHECK(w.at({1, 0}) == 1.0);
  CHECK(w.at({0, 0}) == 0.0);
  auto w2 = work_values(Hamiltonian::computational({0.0, 2.0}),
                        Hamiltonian::computational({0.0, 1.0}));
  CHECK(w2.at({0, 0}) == 0.0);
  CHECK(w2.at({0, 1}) == -1.0);
  CHECK(w2.at({1, 0}) == 2.0);
  CHECK(w2.at({1, 1}) == 1.0);
}

TEST_CASE("work_distribution: degenerate energies give one atom") {
  Hamiltonian h = Hamiltonian::degenerate_qubit();
  TransitionTable t = transition_probs(
      tpm_povm(u_theta(PI / 4), h, h), DensityMatrix::pure(ket_plus()));
  WorkDistribution dist = work_distribution(t, work_values(h, h));
  REQUIRE(dist.atoms().size() == 1);
  CHECK(dist.atoms()[0].w == 0.0);
  CHECK(std::abs(dist.atoms()[0].p - 1.0) < 1e-12);
}

TEST_CASE("work_distribution: merges equal-work transitions") {
  std::map<OutcomeLabel, double> probs = {
      {{0, 0}, 0.25}, {{0, 1}, 0.25}, {{1, 0}, 0.25}, {{1, 1}, 0.25}};
  Hamiltonian h01 = Hamiltonian::computational({0.0, 1.0});
  WorkDistribution dist =
      work_distribution(TransitionTable(probs), work_values(h01, h01));
  REQUIRE(dist.atoms().size() == 3);
  CHECK(dist.atoms()[0].w == -1.0);
  CHECK(std::abs(dist.atoms()[0].p - 0.25) < 1e-12);
  CHECK(dist.atoms()[1].w == 0.0);
  CHECK(std::abs(dist.atoms()[1].p - 0.5) < 1e-12);
  CHECK(dist.atoms()[2].w == 1.0);
  CHECK(std::abs(dist.atoms()[2].p - 0.25) < 1e-12);
}

TEST_CASE("work_distribution: missing label is an error") {
  std::map<OutcomeLabel, double> probs = {{{0, 0}, 1.0}};
  std::map<OutcomeLabel, double> empty_wmap;
  CHECK_THROWS_AS(work_distribution(TransitionTable(probs), empty_wmap),
                  std::invalid_argument);
}

TEST_CASE("avg_work_unmeasured") {
  Hamiltonian h01 = Hamiltonian::computational({0.0, 1.0});
  DensityMatrix ground = DensityMatrix::pure(ket_zero());
  UnitaryOperator eye{ComplexMatrix::identity(2)};
  CHECK(std::abs(avg_work_unmeasured(ground, eye, h01, h01)) < 1e-14);

  Hamiltonian degenerate = Hamiltonian::degenerate_qubit();
  DensityMatrix plus = DensityMatrix::pure(ket_plus());
  CHECK(std::abs(avg_work_unmeasured(plus, u_theta(0.4), degenerate,
                                     degenerate)) < 1e-14);

  // U(pi/4)|+> = |0>: all initial coherence converts to extracted work.
  CHECK(std::abs(avg_work_unmeasured(plus, u_theta(PI / 4), h01, h01) - 0.5) <
        1e-12);
}

TEST_CASE("avg_work_tpm") {
  Hamiltonian h01 = Hamiltonian::computational({0.0, 1.0});
  DensityMatrix plus = DensityMatrix::pure(ket_plus());
  // The dephased |+> is maximally mixed, so measured work vanishes.
  CHECK(std::abs(avg_work_tpm(plus, u_theta(PI / 4), h01, h01)) < 1e-12);

  testutil::Rand rand(43);
  for (int rep = 0; rep < 20; rep++) {
    DensityMatrix rho = testutil::random_diagonal_density(rand, 2);
    UnitaryOperator u = testutil::random_unitary(rand, 2);
    double tpm = avg_work_tpm(rho, u, h01, h01);
    double unmeasured = avg_work_unmeasured(rho, u, h01, h01);
    CHECK(std::abs(tpm - unmeasured) < 1e-10);
  }

  Hamiltonian degenerate = Hamiltonian::degenerate_qubit();
  CHECK(avg_work_tpm(plus, u_theta(0.7), degenerate, degenerate) == 0.0);
}

TEST_CASE("avg_work_cm: interpolation endpoints and the pi/4 example") {
  Hamiltonian h01 = Hamiltonian::computational({0.0, 1.0});
  DensityMatrix plus = DensityMatrix::pure(ket_plus());
  UnitaryOperator u = u_theta(PI / 4);
  CHECK(std::abs(avg_work_cm(plus, u, h01, h01, 0.0) -
                 avg_work_tpm(plus, u, h01, h01)) < 1e-12);
  CHECK(std::abs(avg_work_cm(plus, u, h01, h01, 1.0) -
                 avg_work_unmeasured(plus, u, h01, h01)) < 1e-12);
  CHECK(std::abs(avg_work_cm(plus, u, h01, h01, 1.0) - 0.5) < 1e-12);
}

TEST_CASE("avg_work_cm: interpolation identity on random instances") {
  testutil::Rand rand(47);
  for (int rep = 0; rep < 200; rep++) {
    DensityMatrix rho = testutil::random_density(rand, 2);
    UnitaryOperator u = testutil::random_unitary(rand, 2);
    Hamiltonian h = testutil::random_hamiltonian(rand, 2);
    Hamiltonian hp = testutil::random_hamiltonian(rand, 2);
    double lambda = rand.uniform() * lambda_max(u, h, hp);
    double cm = avg_work_cm(rho, u, h, hp, lambda);
    double expected = (1 - lambda) * avg_work_tpm(rho, u, h, hp) +
                      lambda * avg_work_unmeasured(rho, u, h, hp);
    CHECK(std::abs(cm - expected) < 1e-9);
  }
}

TEST_CASE("l1_coherence") {
  CHECK(l1_coherence(DensityMatrix::pure(ket_zero())) == 0.0);
  CHECK(std::abs(l1_coherence(DensityMatrix::pure(ket_plus())) - 1.0) < 1e-12);
  DensityMatrix phi = PureQubitState::from_p0(0.75).density();
  CHECK(std::abs(l1_coherence(phi) - std::sqrt(3.0) / 2.0) < 1e-12);
}

TEST_CASE("cohering_power_unitary") {
  CHECK(cohering_power_unitary(UnitaryOperator(ComplexMatrix::identity(2))) ==
        0.0);
  CHECK(cohering_power_unitary(UnitaryOperator(pauli_x())) == 0.0);
  CHECK(std::abs(cohering_power_unitary(u_theta(PI / 4)) - 1.0) < 1e-12);
  // Tabulated row: theta = 16.7 degrees, printed cohering power 0.551.
  CHECK(std::abs(cohering_power_unitary(u_theta(16.7 * PI / 180.0)) - 0.551) <
        1e-3);
  for (int k = 0; k <= 30; k++) {
    double theta = k * PI / 60.0;
    CHECK(std::abs(cohering_power_unitary(u_theta(theta)) -
                   std::abs(std::sin(2 * theta))) < 1e-12);
  }
}

TEST_CASE("ideal_final_dist") {
  auto dist = ideal_final_dist(u_theta(PI / 4), PureQubitState::plus());
  CHECK(std::abs(dist[0] - 1.0) < 1e-14);
  CHECK(dist[1] < 1e-14);

  PureQubitState phi = PureQubitState::from_p0(0.3);
  auto at_zero = ideal_final_dist(u_theta(0.0), phi);
  CHECK(std::abs(at_zero[0] - 0.3) < 1e-14);
  CHECK(std::abs(at_zero[1] - 0.7) < 1e-14);

  // sqrt(0.75) cos(30) + sqrt(0.25) sin(30) = 1 exactly.
  auto aligned = ideal_final_dist(u_theta(PI / 6),
                                  PureQubitState::from_p0(0.75));
  CHECK(std::abs(aligned[0] - 1.0) < 1e-14);
}

TEST_CASE("backaction_fidelity: headline values") {
  PureQubitState plus = PureQubitState::plus();
  CHECK(std::abs(backaction_fidelity(Scheme::kCm, u_theta(PI / 4), plus) -
                 1.0) < 1e-11);
  CHECK(std::abs(backaction_fidelity(Scheme::kTpm, u_theta(PI / 4), plus) -
                 std::sqrt(0.5)) < 1e-11);

  PureQubitState phi = PureQubitState::from_p0(0.75);
  double f_cm = backaction_fidelity(Scheme::kCm, u_theta(PI / 6), phi);
  double f_tpm = backaction_fidelity(Scheme::kTpm, u_theta(PI / 6), phi);
  CHECK(std::abs(f_cm - 0.91734) < 5e-6);
  CHECK(std::abs(f_tpm - 0.79057) < 5e-6);
}

TEST_CASE("backaction_fidelity: operator path matches the closed forms") {
  testutil::Rand rand(53);
  for (int rep = 0; rep < 40; rep++) {
    double theta = rand.uniform() * PI / 4;
    double p0 = rand.uniform();
    PureQubitState state = PureQubitState::from_p0(p0);
    CHECK(std::abs(backaction_fidelity(Scheme::kCm, u_theta(theta), state) -
                   closed_form::cm_fidelity(p0, theta)) < 1e-10);
    CHECK(std::abs(backaction_fidelity(Scheme::kTpm, u_theta(theta), state) -
                   closed_form::tpm_fidelity(p0, theta)) < 1e-10);
  }
}

TEST_CASE("povm invariants: completeness and positivity by construction") {
  Hamiltonian h = Hamiltonian::degenerate_qubit();
  for (int k = 0; k <= 15; k++) {
    double theta = (PI / 4) * k / 15.0;
    Povm cm = cm_povm(u_theta(theta), h, h, std::tan(theta));
    ComplexMatrix sum(4, 4);
    for (const auto &[label, effect] : cm.effects()) {
      sum = sum + effect.matrix();
      CHECK(min_eigenvalue(effect.matrix()) >= -1e-10);
    }
    CHECK(max_abs_diff(sum, ComplexMatrix::identity(4)) < 1e-9);
  }
}

TEST_CASE("hamiltonian: rejects non-orthonormal eigenvectors") {
  ComplexMatrix skew{{1, 0.5}, {0, 1}};
  CHECK_THROWS_AS(Hamiltonian({0.0, 1.0}, skew), std::invalid_argument);
}

TEST_CASE("serialization: POVM and matrix survive a JSON round trip") {
  namespace ser = backaction::serialize;
  Hamiltonian h = Hamiltonian::degenerate_qubit();
  Povm povm = cm_povm(u_theta(PI / 6), h, h, std::tan(PI / 6));
  Povm back = ser::povm_from_json(ser::povm_to_json(povm));
  REQUIRE(back.size() == povm.size());
  for (const auto &[label, effect] : povm.effects()) {
    CHECK(max_abs_diff(back.effect(label).matrix(), effect.matrix()) < 1e-15);
  }

  ComplexMatrix m{{Complex{0.1, -0.3}, 1.0}, {Complex{0, 2}, -0.5}};
  CHECK(approx_equal(ser::matrix_from_json(ser::matrix_to_json(m)), m, 0.0));

  std::map<OutcomeLabel, double> probs = {
      {{0, 0}, 0.25}, {{0, 1}, 0.25}, {{1, 0}, 0.25}, {{1, 1}, 0.25}};
  Hamiltonian h01 = Hamiltonian::computational({0.0, 1.0});
  WorkDistribution dist =
      work_distribution(TransitionTable(probs), work_values(h01, h01));
  std::string json = ser::distribution_to_json(dist);
  CHECK(json.find("\"atoms\"") != std::string::npos);
  CHECK(json.find("-1.0") != std::string::npos);
}

TEST_CASE("pure qubit state: population bookkeeping") {
  CHECK_THROWS_AS(PureQubitState(0.6, 0.6), std::invalid_argument);
  PureQubitState from_alpha = PureQubitState::from_alpha_deg(15.0);
  CHECK(std::abs(from_alpha.p0 - 0.75) < 1e-12);
  PureQubitState phased(0.5, 0.5, PI / 2);
  DensityMatrix rho = phased.density();
  CHECK(std::abs(rho.matrix().at(0, 1).imag() + 0.5) < 1e-12);
}
