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

#include "backaction/montecarlo.hpp"
#include "backaction/refdata.hpp"
#include "backaction/rng.hpp"
#include "backaction/serialize.hpp"

using namespace backaction;
using namespace backaction::qmath;
using namespace backaction::schemes;
using namespace backaction::mc;

namespace {
constexpr double PI = std::numbers::pi;

Povm cm_plus_povm() {
  Hamiltonian h = Hamiltonian::degenerate_qubit();
  return cm_povm(u_theta(PI / 4), h, h, 1.0);
}

}  // namespace

TEST_CASE("sample_counts: a deterministic POVM puts every shot on one label") {
  Povm trivial(std::vector<Povm::Effect>{
      {{0, 0}, HermitianOperator(ComplexMatrix::identity(2))}});
  CountTable counts = sample_counts(
      trivial, DensityMatrix::pure(ket_plus()), {5000, 9, SourceModel::kFixedN});
  CHECK(counts.total == 5000);
  CHECK(counts.counts.at({0, 0}) == 5000);
}

TEST_CASE("sample_counts: proportions track the Born weights at 1e5 shots") {
  DensityMatrix rho2 = two_copies(DensityMatrix::pure(ket_plus()));
  CountTable counts =
      sample_counts(cm_plus_povm(), rho2, {100000, 2024, SourceModel::kFixedN});
  TransitionTable t = proportions(counts);
  double sigma = std::sqrt(0.25 / 100000.0);
  CHECK(std::abs(t.probability({0, 0}) - 0.5) < 5 * sigma);
  CHECK(std::abs(t.probability({1, 0}) - 0.5) < 5 * sigma);
  // Zero-probability labels never fire.
  CHECK(counts.counts.at({0, 1}) == 0);
  CHECK(counts.counts.at({1, 1}) == 0);
}

TEST_CASE("sample_counts: Poisson source totals close to rate * duration") {
  Povm trivial(std::vector<Povm::Effect>{
      {{0, 0}, HermitianOperator(ComplexMatrix::identity(2))}});
  DensityMatrix rho = DensityMatrix::pure(ket_zero());
  for (uint64_t seed : {1ull, 2ull, 3ull, 4ull, 5ull}) {
    ShotConfig cfg{1, seed, SourceModel::kPoisson, 1e4, 1.0};
    CountTable counts = sample_counts(trivial, rho, cfg);
    CHECK(std::abs(static_cast<double>(counts.total) - 1e4) < 5 * 100.0);
  }
  // The sampler's mean over many seeds should be tight around the rate.
  double acc = 0;
  int reps = 50;
  for (int s = 0; s < reps; s++) acc += sample_poisson(1e4, 77 + s, 2);
  CHECK(std::abs(acc / reps - 1e4) < 100.0);
}

TEST_CASE("sample_counts: bit-for-bit reproducible") {
  DensityMatrix rho2 = two_copies(DensityMatrix::pure(ket_plus()));
  ShotConfig cfg{20000, 123456, SourceModel::kFixedN};
  CountTable a = sample_counts(cm_plus_povm(), rho2, cfg);
  CountTable b = sample_counts(cm_plus_povm(), rho2, cfg);
  CHECK(a.total == b.total);
  CHECK(a.counts == b.counts);
  ShotConfig other = cfg;
  other.seed = 654321;
  CountTable c = sample_counts(cm_plus_povm(), rho2, other);
  CHECK(a.counts != c.counts);
}

TEST_CASE("sample_counts: shot draws are pure functions of (seed, index)") {
  // Re-derive the sampler's choices from the counter RNG; any hidden state
  // would break the split-and-merge contract.
  Hamiltonian h = Hamiltonian::degenerate_qubit();
  Povm povm = tpm_povm(u_theta(0.6), h, h);
  DensityMatrix rho = DensityMatrix::pure(ket_plus());
  ShotConfig cfg{3000, 99, SourceModel::kFixedN};
  CountTable table = sample_counts(povm, rho, cfg);

  TransitionTable born = transition_probs(povm, rho);
  std::vector<OutcomeLabel> labels;
  std::vector<double> cumulative;
  double acc = 0;
  for (const auto &[label, effect] : povm.effects()) {
    acc += born.probability(label);
    labels.push_back(label);
    cumulative.push_back(acc);
  }
  std::map<OutcomeLabel, uint64_t> manual;
  for (const auto &l : labels) manual[l] = 0;
  for (uint64_t i = 0; i < cfg.n_shots; i++) {
    double u = rng::counter_uniform(cfg.seed, 1, i);
    size_t pick = 0;
    while (pick < cumulative.size() && u >= cumulative[pick]) pick++;
    if (pick >= labels.size()) pick = labels.size() - 1;
    manual[labels[pick]]++;
  }
  CHECK(manual == table.counts);
}

TEST_CASE("sample_counts: any shot partition merges to the full run") {
  DensityMatrix rho2 = two_copies(DensityMatrix::pure(ket_plus()));
  Povm povm = cm_plus_povm();
  ShotConfig cfg{10000, 31415, SourceModel::kFixedN};
  CountTable full = sample_counts(povm, rho2, cfg);

  CountTable halves = merge_counts(
      sample_counts_range(povm, rho2, cfg, 0, 5000),
      sample_counts_range(povm, rho2, cfg, 5000, 10000));
  CHECK(halves.total == full.total);
  CHECK(halves.counts == full.counts);

  CountTable thirds = merge_counts(
      merge_counts(sample_counts_range(povm, rho2, cfg, 0, 3000),
                   sample_counts_range(povm, rho2, cfg, 3000, 4000)),
      sample_counts_range(povm, rho2, cfg, 4000, 10000));
  CHECK(thirds.counts == full.counts);

  CHECK_THROWS_AS(sample_counts_range(povm, rho2, cfg, 5, 4),
                  std::invalid_argument);
}

TEST_CASE("proportions: arithmetic and error bars") {
  CountTable counts;
  counts.counts = {{{0, 0}, 25}, {{0, 1}, 25}, {{1, 0}, 25}, {{1, 1}, 25}};
  counts.total = 100;
  TransitionTable t = proportions(counts);
  for (const auto &[label, p] : t.entries()) {
    CHECK(std::abs(p - 0.25) < 1e-14);
    CHECK(std::abs(t.std_error(label) - std::sqrt(0.25 * 0.75 / 100.0)) <
          1e-12);
  }

  CountTable all_one;
  all_one.counts = {{{0, 0}, 100}, {{0, 1}, 0}};
  all_one.total = 100;
  TransitionTable t1 = proportions(all_one);
  CHECK(t1.probability({0, 0}) == 1.0);
  CHECK(t1.probability({0, 1}) == 0.0);

  CountTable empty;
  CHECK_THROWS_AS(proportions(empty), std::invalid_argument);
}

TEST_CASE("proportions: published single-setting counts normalize back") {
  CountTable counts;
  counts.counts = {{{0, 0}, 464}, {{0, 1}, 1}, {{1, 0}, 532}, {{1, 1}, 3}};
  counts.total = 1000;
  TransitionTable t = proportions(counts);
  const auto &data = refdata::kPlusStateSetting;
  CHECK(std::abs(t.probability({0, 0}) - data.cm[0]) < 1e-12);
  CHECK(std::abs(t.probability({0, 1}) - data.cm[1]) < 1e-12);
  CHECK(std::abs(t.probability({1, 0}) - data.cm[2]) < 1e-12);
  CHECK(std::abs(t.probability({1, 1}) - data.cm[3]) < 1e-12);
}

TEST_CASE("empirical_fidelity: exact agreement gives 1") {
  std::map<OutcomeLabel, double> probs = {
      {{0, 0}, 0.6}, {{0, 1}, 0.0}, {{1, 0}, 0.4}, {{1, 1}, 0.0}};
  TransitionTable t{probs};
  std::vector<double> ideal = {1.0, 0.0};
  CHECK(std::abs(empirical_fidelity(t, ideal).value - 1.0) < 1e-12);
}

TEST_CASE("empirical_fidelity: reproduces the published headline numbers") {
  const auto &data = refdata::kPlusStateSetting;
  std::vector<double> ideal = {1.0, 0.0};

  std::map<OutcomeLabel, double> cm = {{{0, 0}, data.cm[0]},
                                       {{0, 1}, data.cm[1]},
                                       {{1, 0}, data.cm[2]},
                                       {{1, 1}, data.cm[3]}};
  CHECK(std::abs(empirical_fidelity(TransitionTable{cm}, ideal).value -
                 data.f_cm) < 1e-3);

  std::map<OutcomeLabel, double> tpm = {{{0, 0}, data.tpm[0]},
                                        {{0, 1}, data.tpm[1]},
                                        {{1, 0}, data.tpm[2]},
                                        {{1, 1}, data.tpm[3]}};
  CHECK(std::abs(empirical_fidelity(TransitionTable{tpm}, ideal).value -
                 data.f_tpm) < 1e-3);
}

TEST_CASE("empirical_fidelity: error propagation shrinks with shot count") {
  DensityMatrix rho2 = two_copies(DensityMatrix::pure(ket_plus()));
  std::vector<double> ideal = {1.0, 0.0};
  auto estimate = [&](uint64_t n) {
    TransitionTable t = proportions(
        sample_counts(cm_plus_povm(), rho2, {n, 5, SourceModel::kFixedN}));
    return empirical_fidelity(t, ideal);
  };
  FidelityEstimate small = estimate(1000);
  FidelityEstimate large = estimate(100000);
  CHECK(small.std_error > large.std_error);
  CHECK(large.std_error > 0.0);
  CHECK(std::abs(large.value - 1.0) < 0.01);
}

TEST_CASE("count table serialization") {
  CountTable counts;
  counts.counts = {{{0, 0}, 7}, {{1, 1}, 3}};
  counts.total = 10;
  CHECK(serialize::counts_to_csv(counts) ==
        "label_i,label_jprime,count\n0,0,7\n1,1,3\n");
  std::string json = serialize::counts_to_json(counts);
  CHECK(json.find("\"total\":10") != std::string::npos);
}

TEST_CASE("consistency: 20 seeds stay within five binomial sigma") {
  DensityMatrix rho2 = two_copies(DensityMatrix::pure(ket_plus()));
  Povm povm = cm_plus_povm();
  int ok = 0;
  const uint64_t n = 20000;
  for (uint64_t seed = 0; seed < 20; seed++) {
    CountTable counts =
        sample_counts(povm, rho2, {n, seed, SourceModel::kFixedN});
    TransitionTable t = proportions(counts);
    bool within = true;
    for (const auto &[label, p] :
         std::map<OutcomeLabel, double>{{{0, 0}, 0.5},
                                        {{0, 1}, 0.0},
                                        {{1, 0}, 0.5},
                                        {{1, 1}, 0.0}}) {
      double bound = 5.0 * std::sqrt(p * (1 - p) / static_cast<double>(n));
      if (std::abs(t.probability(label) - p) > bound) within = false;
    }
    if (within) ok++;
  }
  CHECK(ok >= 19);
}
