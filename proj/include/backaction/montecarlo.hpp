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

#ifndef BACKACTION_MONTECARLO_HPP
#define BACKACTION_MONTECARLO_HPP

#include <cstdint>
#include <map>
#include <span>

#include "backaction/schemes.hpp"

namespace backaction::mc {

enum class SourceModel { kFixedN, kPoisson };

/// Shot budget and seeding for a counting run. With kPoisson the total shot
/// count is itself drawn as Poisson(rate * duration), mimicking a photon
/// source with a fixed coincidence rate.
struct ShotConfig {
  uint64_t n_shots = 1;
  uint64_t seed = 0;
  SourceModel source_model = SourceModel::kFixedN;
  double rate_per_second = 1e4;
  double duration_seconds = 1.0;
};

/// Coincidence counts per outcome label.
struct CountTable {
  std::map<schemes::OutcomeLabel, uint64_t> counts;
  uint64_t total = 0;
};

/// Draws shot outcomes from the exact Born distribution of (povm, state).
/// Deterministic given the seed, and independent of how shots are split
/// across threads (counter-mode RNG, one draw index per shot).
CountTable sample_counts(const schemes::Povm &povm,
                         const qmath::DensityMatrix &state,
                         const ShotConfig &cfg);

/// Worker form: draws only the shot indices [first_shot, last_shot) of the
/// run described by cfg (the source model is ignored; the caller fixes the
/// total). Merging range tables with merge_counts reproduces the full-run
/// table bit for bit, whatever the partition.
CountTable sample_counts_range(const schemes::Povm &povm,
                               const qmath::DensityMatrix &state,
                               const ShotConfig &cfg, uint64_t first_shot,
                               uint64_t last_shot);

CountTable merge_counts(const CountTable &a, const CountTable &b);

/// Normalizes counts to proportion estimates with binomial standard errors
/// sqrt(p(1-p)/total). Throws std::invalid_argument when total = 0.
schemes::TransitionTable proportions(const CountTable &counts);

struct FidelityEstimate {
  double value = 0;
  double std_error = 0;
};

/// Fidelity of the table's final-state marginal against an ideal
/// distribution, with first-order error propagation from the per-entry
/// standard errors (zero when the table carries none).
FidelityEstimate empirical_fidelity(const schemes::TransitionTable &table,
                                    std::span<const double> ideal);

/// Poisson sampler used by the kPoisson source model (exponential-arrival
/// counting; exact for any rate, deterministic per (seed, stream)).
uint64_t sample_poisson(double mean, uint64_t seed, uint64_t stream);

}  // namespace backaction::mc

#endif
