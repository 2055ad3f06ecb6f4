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

#ifndef BACKACTION_CLI_CORE_HPP
#define BACKACTION_CLI_CORE_HPP

#include <array>
#include <iosfwd>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "backaction/montecarlo.hpp"
#include "backaction/optics.hpp"
#include "backaction/schemes.hpp"

namespace backaction::cli {

/// Invalid configuration or command usage; the driver maps it to exit code 2.
class UsageError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

enum class SchemeSel { kTpm, kCm, kBoth };
enum class Backend { kAnalytic, kCircuit, kMonteCarlo };
enum class Format { kCsv, kJson };

struct RunConfig {
  SchemeSel scheme = SchemeSel::kBoth;

  // State: p0 directly or via the preparation angle (p0 = cos^2 2 alpha);
  // defaults to the maximally coherent |+> when neither is given.
  std::optional<double> p0;
  std::optional<double> alpha_deg;
  double phase_rad = 0;

  // Process: exactly one of theta, beta (with a calibration convention), or
  // gamma (theta = 2 gamma).
  std::optional<double> theta_deg;
  std::optional<double> beta_deg;
  std::optional<double> gamma_deg;
  optics::BetaConvention beta_convention = optics::BetaConvention::kTable;

  Backend backend = Backend::kAnalytic;
  mc::ShotConfig shots{100000, 0, mc::SourceModel::kFixedN, 1e4, 1.0};

  // E0, E1, E0', E1' in the computational basis; absent = degenerate (the
  // photonic setting, where all work values vanish).
  std::optional<std::array<double, 4>> energies;

  std::string out_path;  // empty = stdout
  Format format = Format::kCsv;
};

struct SchemeResult {
  std::string scheme;  // "TPM" or "CM"
  std::map<schemes::OutcomeLabel, double> probs;
  std::map<schemes::OutcomeLabel, double> std_errors;  // empty unless sampled
  std::vector<double> final_marginal;
  double fidelity = 0;
  double fidelity_std_error = 0;
  double avg_work = 0;
};

struct RunRecord {
  std::string variable;  // which knob produced this record (theta/beta/...)
  double variable_value = 0;
  double theta_deg = 0;
  double p0 = 0;
  double lambda = 0;
  double c_l1 = 0;           // input-state coherence
  double c_unitary = 0;      // cohering power of U
  double w_unmeasured = 0;
  double w_tpm = 0;
  double w_cm = 0;
  bool outside_calibrated_regime = false;  // theta beyond 45 degrees
  std::vector<SchemeResult> results;
};

/// Validates the configuration (UsageError names the offending field) and
/// computes the full result record for one setting.
RunRecord cmd_run(const RunConfig &config);

struct SweepSpec {
  enum class Var { kBeta, kAlpha, kTheta, kP0 };
  Var variable = Var::kTheta;
  std::vector<double> grid;

  static SweepSpec linspace(Var variable, double start, double stop,
                            int count);
  static Var var_from_name(const std::string &name);
  static std::string var_name(Var v);
};

/// One record per grid point, in grid order. Points evaluate concurrently;
/// BACKACTION_SIM_THREADS caps the worker count.
std::vector<RunRecord> cmd_sweep(const RunConfig &base, const SweepSpec &spec);

std::string records_to_csv(const RunConfig &config,
                           const std::vector<RunRecord> &records);
std::string records_to_json(const RunConfig &config,
                            const std::vector<RunRecord> &records);

/// Writes the artifact (file or stdout per config), echoes the comparison
/// report, and returns the process exit code (0 ok, 1 threshold failure,
/// 2 usage).
int run_reproduce(const std::string &target, const std::string &out_path,
                  std::ostream &console, std::ostream &errors);

/// Parses, lowers, compiles and validates a .qc file; prints the POVM JSON,
/// the completeness residual and per-effect minimum eigenvalues. Exit codes:
/// 0 ok, 1 failed validation, 2 parse/usage error.
int run_compile(const std::string &path,
                const std::map<std::string, double> &param_overrides,
                std::ostream &out, std::ostream &errors);

/// Worker cap for sweeps: hardware concurrency clamped by the
/// BACKACTION_SIM_THREADS environment variable (>= 1).
unsigned sweep_thread_cap(size_t grid_size);

}  // namespace backaction::cli

#endif
