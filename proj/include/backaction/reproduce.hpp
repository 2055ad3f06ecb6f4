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

#ifndef BACKACTION_REPRODUCE_HPP
#define BACKACTION_REPRODUCE_HPP

#include <string>
#include <vector>

// Comparison of this library's theory values against the embedded
// experimental dataset, with the per-target deviation bounds pinned here.
namespace backaction::repro {

struct Check {
  std::string name;
  double deviation = 0;
  double bound = 0;
  bool pass = false;
};

struct Report {
  std::string target;
  std::string csv;               // plot-ready artifact
  std::vector<Check> checks;
  bool pass = true;

  void add(std::string name, double deviation, double bound);
};

// Deviation bounds, one source of truth for reports and acceptance tests.
inline constexpr double PROCESS_THETA_BOUND_DEG = 0.05;
inline constexpr double PROCESS_COHERING_BOUND = 0.001;
inline constexpr double PROCESS_FIDELITY_BOUND = 0.04;
inline constexpr double PROCESS_FIDELITY_TYPICAL = 0.015;
inline constexpr double STATE_P0_BOUND = 0.001;
inline constexpr double STATE_FIDELITY_BOUND = 0.02;
inline constexpr double SINGLE_SETTING_PROB_BOUND = 0.04;
inline constexpr double HEADLINE_FIDELITY_BOUND = 0.005;

/// Process sweep (16 beta rows): recomputes theta and the cohering power
/// from beta under the table calibration, and both theory fidelities on a
/// |+> input.
Report reproduce_process_sweep();

/// State sweep (16 alpha rows): recomputes p0 = cos^2(2 alpha) and both
/// theory fidelities at theta = 30 degrees; also checks that both theory
/// curves attain their minimum at the p0 = 0.75 grid point.
Report reproduce_state_sweep();

/// Single setting |+>, U(pi/4): theory transition tables for both schemes
/// against the measured ones, plus the headline fidelities.
Report reproduce_single_setting();

/// Figure-axis re-exports of the sweeps (fidelity against cohering power,
/// and against p0).
Report reproduce_fidelity_vs_cohering_power();
Report reproduce_fidelity_vs_p0();

/// Dispatch by CLI target name: table-s1, table-s2, fig2, fig3, fig4.
Report reproduce_target(const std::string &target);

}  // namespace backaction::repro

#endif
