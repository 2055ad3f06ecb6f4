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

#include "backaction/montecarlo.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <vector>

#include "backaction/rng.hpp"

namespace backaction::mc {

namespace {
// Stream ids keep the shot draws and the Poisson total independent.
constexpr uint64_t kStreamShots = 1;
constexpr uint64_t kStreamSource = 2;
}  // namespace

uint64_t sample_poisson(double mean, uint64_t seed, uint64_t stream) {
  if (!(mean > 0)) throw std::invalid_argument("Poisson mean must be > 0");
  // Count exponential arrivals until their sum passes the mean.
  double acc = 0;
  uint64_t k = 0;
  while (true) {
    double u = rng::counter_uniform(seed, stream, k);
    acc += -std::log1p(-u);
    if (acc >= mean) return k;
    k++;
  }
}

namespace {

// Cumulative Born distribution in fixed label order (the POVM's effect
// order), for inverse-CDF sampling with deterministic tie handling.
struct BornCdf {
  std::vector<schemes::OutcomeLabel> labels;
  std::vector<double> cumulative;
  std::vector<bool> zero;

  BornCdf(const schemes::Povm &povm, const qmath::DensityMatrix &state) {
    schemes::TransitionTable born = schemes::transition_probs(povm, state);
    double acc = 0;
    for (const auto &[label, effect] : povm.effects()) {
      double p = born.probability(label);
      acc += p;
      labels.push_back(label);
      cumulative.push_back(acc);
      zero.push_back(p == 0.0);
    }
  }

  size_t draw(double u) const {
    // First label whose cumulative weight strictly exceeds u; zero-weight
    // labels have empty intervals and can never win.
    size_t pick = std::upper_bound(cumulative.begin(), cumulative.end(), u) -
                  cumulative.begin();
    if (pick >= labels.size()) {
      pick = labels.size() - 1;
      while (pick > 0 && zero[pick]) pick--;
    }
    return pick;
  }
};

CountTable sample_range(const BornCdf &cdf, const ShotConfig &cfg,
                        uint64_t first_shot, uint64_t last_shot) {
  CountTable table;
  for (const schemes::OutcomeLabel &label : cdf.labels) table.counts[label] = 0;
  for (uint64_t shot = first_shot; shot < last_shot; shot++) {
    double u = rng::counter_uniform(cfg.seed, kStreamShots, shot);
    table.counts[cdf.labels[cdf.draw(u)]]++;
  }
  table.total = last_shot - first_shot;
  return table;
}

}  // namespace

CountTable sample_counts(const schemes::Povm &povm,
                         const qmath::DensityMatrix &state,
                         const ShotConfig &cfg) {
  uint64_t n = cfg.n_shots;
  if (cfg.source_model == SourceModel::kPoisson) {
    if (!(cfg.rate_per_second > 0)) {
      throw std::invalid_argument("Poisson rate must be > 0");
    }
    n = sample_poisson(cfg.rate_per_second * cfg.duration_seconds, cfg.seed,
                       kStreamSource);
  } else if (cfg.n_shots < 1) {
    throw std::invalid_argument("n_shots must be >= 1");
  }
  return sample_range(BornCdf(povm, state), cfg, 0, n);
}

CountTable sample_counts_range(const schemes::Povm &povm,
                               const qmath::DensityMatrix &state,
                               const ShotConfig &cfg, uint64_t first_shot,
                               uint64_t last_shot) {
  if (first_shot > last_shot) {
    throw std::invalid_argument("shot range is reversed");
  }
  return sample_range(BornCdf(povm, state), cfg, first_shot, last_shot);
}

CountTable merge_counts(const CountTable &a, const CountTable &b) {
  CountTable out = a;
  for (const auto &[label, n] : b.counts) out.counts[label] += n;
  out.total = a.total + b.total;
  return out;
}

schemes::TransitionTable proportions(const CountTable &counts) {
  if (counts.total == 0) {
    throw std::invalid_argument("cannot normalize an empty count table");
  }
  uint64_t check = 0;
  for (const auto &[label, n] : counts.counts) check += n;
  if (check != counts.total) {
    throw std::invalid_argument("count table total is inconsistent");
  }
  std::map<schemes::OutcomeLabel, double> probs, errs;
  double total = static_cast<double>(counts.total);
  for (const auto &[label, n] : counts.counts) {
    double p = static_cast<double>(n) / total;
    probs[label] = p;
    errs[label] = std::sqrt(p * (1.0 - p) / total);
  }
  return schemes::TransitionTable(std::move(probs), std::move(errs));
}

FidelityEstimate empirical_fidelity(const schemes::TransitionTable &table,
                                    std::span<const double> ideal) {
  int dim = static_cast<int>(ideal.size());
  std::vector<double> marginal = table.final_marginal(dim);
  std::vector<double> marginal_err = table.final_marginal_std_error(dim);

  FidelityEstimate est;
  double var = 0;
  for (int j = 0; j < dim; j++) {
    est.value += std::sqrt(std::max(0.0, marginal[j]) * ideal[j]);
    // d/dP sqrt(P * ideal) = ideal / (2 sqrt(P ideal)); vanishing terms
    // contribute nothing.
    double f_j = std::sqrt(std::max(0.0, marginal[j]) * ideal[j]);
    if (f_j > 1e-15) {
      double deriv = ideal[j] / (2.0 * f_j);
      var += deriv * deriv * marginal_err[j] * marginal_err[j];
    }
  }
  est.std_error = std::sqrt(var);
  return est;
}

}  // namespace backaction::mc
