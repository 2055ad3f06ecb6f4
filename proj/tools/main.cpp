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

#include <array>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "backaction/cli_core.hpp"
#include "backaction/version.hpp"
#include "json.hpp"

namespace {

using backaction::cli::Backend;
using backaction::cli::Format;
using backaction::cli::RunConfig;
using backaction::cli::SchemeSel;
using backaction::cli::SweepSpec;
using backaction::cli::UsageError;

// Flag holders; std::optional flags need the CLI11 "take last" treatment.
struct RunFlags {
  std::string scheme = "both";
  std::optional<double> p0, alpha_deg, theta_deg, beta_deg, gamma_deg;
  double phase_rad = 0;
  std::string beta_convention = "table";
  std::string backend = "analytic";
  uint64_t shots = 100000;
  uint64_t seed = 0;
  std::string source = "fixed";
  double rate = 1e4;
  double duration = 1.0;
  std::string energies;  // "E0,E1,E0p,E1p"
  std::string out;
  std::string format = "csv";
  std::string config_path;
};

std::optional<double> json_opt(const nlohmann::json &j, const char *key) {
  if (j.contains(key) && !j.at(key).is_null()) {
    return j.at(key).get<double>();
  }
  return std::nullopt;
}

// Config file first, flags override.
RunConfig build_config(const RunFlags &flags, const CLI::App *cmd) {
  RunConfig config;
  if (!flags.config_path.empty()) {
    std::ifstream in(flags.config_path);
    if (!in) throw UsageError("config: cannot open " + flags.config_path);
    nlohmann::json j;
    try {
      in >> j;
    } catch (const nlohmann::json::exception &e) {
      throw UsageError("config: " + std::string(e.what()));
    }
    if (j.contains("scheme")) {
      std::string s = j.at("scheme").get<std::string>();
      if (s == "TPM" || s == "tpm") config.scheme = SchemeSel::kTpm;
      else if (s == "CM" || s == "cm") config.scheme = SchemeSel::kCm;
      else if (s == "BOTH" || s == "both") config.scheme = SchemeSel::kBoth;
      else throw UsageError("config.scheme: unknown value " + s);
    }
    if (j.contains("state")) {
      const auto &st = j.at("state");
      config.p0 = json_opt(st, "p0");
      config.alpha_deg = json_opt(st, "alpha_deg");
      if (auto ph = json_opt(st, "phase_rad")) config.phase_rad = *ph;
    }
    if (j.contains("process")) {
      const auto &pr = j.at("process");
      config.theta_deg = json_opt(pr, "theta_deg");
      config.beta_deg = json_opt(pr, "beta_deg");
      config.gamma_deg = json_opt(pr, "gamma_deg");
      if (pr.contains("convention")) {
        std::string c = pr.at("convention").get<std::string>();
        if (c == "text") {
          config.beta_convention = backaction::optics::BetaConvention::kText;
        } else if (c == "table") {
          config.beta_convention = backaction::optics::BetaConvention::kTable;
        } else {
          throw UsageError("config.process.convention: unknown value " + c);
        }
      }
    }
    if (j.contains("backend")) {
      const auto &bk = j.at("backend");
      std::string kind = bk.value("kind", "analytic");
      if (kind == "analytic") config.backend = Backend::kAnalytic;
      else if (kind == "circuit") config.backend = Backend::kCircuit;
      else if (kind == "montecarlo") config.backend = Backend::kMonteCarlo;
      else throw UsageError("config.backend.kind: unknown value " + kind);
      if (bk.contains("shots")) {
        config.shots.n_shots = bk.at("shots").get<uint64_t>();
      }
      if (bk.contains("seed")) config.shots.seed = bk.at("seed").get<uint64_t>();
      if (bk.contains("source")) {
        std::string sm = bk.at("source").value("model", "fixed");
        config.shots.source_model = sm == "poisson"
                                        ? backaction::mc::SourceModel::kPoisson
                                        : backaction::mc::SourceModel::kFixedN;
        if (bk.at("source").contains("rate_per_s")) {
          config.shots.rate_per_second =
              bk.at("source").at("rate_per_s").get<double>();
        }
        if (bk.at("source").contains("duration_s")) {
          config.shots.duration_seconds =
              bk.at("source").at("duration_s").get<double>();
        }
      }
    }
    if (j.contains("energies") && !j.at("energies").is_null()) {
      auto v = j.at("energies").get<std::vector<double>>();
      if (v.size() != 4) throw UsageError("config.energies: need 4 values");
      config.energies = std::array<double, 4>{v[0], v[1], v[2], v[3]};
    }
    if (j.contains("output")) {
      config.out_path = j.at("output").value("path", "");
      std::string f = j.at("output").value("format", "csv");
      config.format = f == "json" ? Format::kJson : Format::kCsv;
    }
  }

  if (cmd->count("--scheme")) {
    if (flags.scheme == "tpm") config.scheme = SchemeSel::kTpm;
    else if (flags.scheme == "cm") config.scheme = SchemeSel::kCm;
    else if (flags.scheme == "both") config.scheme = SchemeSel::kBoth;
    else throw UsageError("--scheme must be tpm, cm, or both");
  }
  if (flags.p0) { config.p0 = flags.p0; config.alpha_deg.reset(); }
  if (flags.alpha_deg) { config.alpha_deg = flags.alpha_deg; config.p0.reset(); }
  if (cmd->count("--phase-rad")) config.phase_rad = flags.phase_rad;
  if (flags.theta_deg) {
    config.theta_deg = flags.theta_deg;
    config.beta_deg.reset();
    config.gamma_deg.reset();
  }
  if (flags.beta_deg) {
    config.beta_deg = flags.beta_deg;
    config.theta_deg.reset();
    config.gamma_deg.reset();
  }
  if (flags.gamma_deg) {
    config.gamma_deg = flags.gamma_deg;
    config.theta_deg.reset();
    config.beta_deg.reset();
  }
  if (cmd->count("--beta-convention")) {
    if (flags.beta_convention == "text") {
      config.beta_convention = backaction::optics::BetaConvention::kText;
    } else if (flags.beta_convention == "table") {
      config.beta_convention = backaction::optics::BetaConvention::kTable;
    } else {
      throw UsageError("--beta-convention must be text or table");
    }
  }
  if (cmd->count("--backend")) {
    if (flags.backend == "analytic") config.backend = Backend::kAnalytic;
    else if (flags.backend == "circuit") config.backend = Backend::kCircuit;
    else if (flags.backend == "montecarlo") config.backend = Backend::kMonteCarlo;
    else throw UsageError("--backend must be analytic, circuit, or montecarlo");
  }
  if (cmd->count("--shots")) config.shots.n_shots = flags.shots;
  if (cmd->count("--seed")) config.shots.seed = flags.seed;
  if (cmd->count("--source")) {
    config.shots.source_model = flags.source == "poisson"
                                    ? backaction::mc::SourceModel::kPoisson
                                    : backaction::mc::SourceModel::kFixedN;
  }
  if (cmd->count("--rate-per-s")) config.shots.rate_per_second = flags.rate;
  if (cmd->count("--duration-s")) config.shots.duration_seconds = flags.duration;
  if (cmd->count("--energies")) {
    std::array<double, 4> e{};
    std::stringstream ss(flags.energies);
    std::string item;
    int k = 0;
    while (std::getline(ss, item, ',') && k < 4) e[k++] = std::stod(item);
    if (k != 4) throw UsageError("--energies needs E0,E1,E0p,E1p");
    config.energies = e;
  }
  if (cmd->count("--out")) config.out_path = flags.out;
  if (cmd->count("--format")) {
    if (flags.format == "csv") config.format = Format::kCsv;
    else if (flags.format == "json") config.format = Format::kJson;
    else throw UsageError("--format must be csv or json");
  }
  return config;
}

void add_run_flags(CLI::App *cmd, RunFlags &flags) {
  cmd->add_option("--config", flags.config_path,
                  "JSON run-configuration file (flags override it)");
  cmd->add_option("--scheme", flags.scheme, "tpm, cm, or both");
  cmd->add_option("--p0", flags.p0, "population of |0> in the input state");
  cmd->add_option("--alpha-deg", flags.alpha_deg,
                  "preparation plate angle; p0 = cos^2(2 alpha)");
  cmd->add_option("--phase-rad", flags.phase_rad,
                  "relative phase of the input state");
  cmd->add_option("--theta-deg", flags.theta_deg, "process angle of U(theta)");
  cmd->add_option("--beta-deg", flags.beta_deg,
                  "measurement plate angle (needs --beta-convention)");
  cmd->add_option("--gamma-deg", flags.gamma_deg,
                  "plate angle of the projective module; theta = 2 gamma");
  cmd->add_option("--beta-convention", flags.beta_convention,
                  "beta<->theta calibration: table (default) or text");
  cmd->add_option("--backend", flags.backend,
                  "analytic, circuit, or montecarlo");
  cmd->add_option("--shots", flags.shots, "shot count for montecarlo");
  cmd->add_option("--seed", flags.seed, "RNG seed for montecarlo");
  cmd->add_option("--source", flags.source,
                  "montecarlo source model: fixed or poisson");
  cmd->add_option("--rate-per-s", flags.rate, "poisson coincidence rate");
  cmd->add_option("--duration-s", flags.duration, "poisson duration");
  cmd->add_option("--energies", flags.energies,
                  "E0,E1,E0p,E1p (default degenerate)");
  cmd->add_option("--out", flags.out, "output file (default stdout)");
  cmd->add_option("--format", flags.format, "csv or json");
}

int emit(const RunConfig &config, const std::string &payload) {
  if (config.out_path.empty()) {
    std::cout << payload;
    return 0;
  }
  std::ofstream out(config.out_path, std::ios::binary);
  if (!out) {
    std::cerr << "error: cannot write " << config.out_path << "\n";
    return 2;
  }
  out << payload;
  return 0;
}

}  // namespace

int main(int argc, char **argv) {
  CLI::App app{"Simulator for collective and two-projective work-measurement "
               "schemes on photonic qubits"};
  app.set_version_flag("--version", backaction::kVersion);
  app.require_subcommand(1);

  RunFlags run_flags;
  CLI::App *run_cmd = app.add_subcommand(
      "run", "Evaluate one setting and emit the full result record");
  add_run_flags(run_cmd, run_flags);

  RunFlags sweep_flags;
  std::string sweep_var = "theta";
  double sweep_start = 0, sweep_stop = 45;
  int sweep_count = 16;
  std::string sweep_values;
  CLI::App *sweep_cmd = app.add_subcommand(
      "sweep", "Evaluate a parameter grid, one CSV/JSON row per point");
  add_run_flags(sweep_cmd, sweep_flags);
  sweep_cmd->add_option("--variable", sweep_var, "beta, alpha, theta, or p0");
  sweep_cmd->add_option("--start", sweep_start, "grid start");
  sweep_cmd->add_option("--stop", sweep_stop, "grid stop");
  sweep_cmd->add_option("--count", sweep_count, "grid point count");
  sweep_cmd->add_option("--values", sweep_values,
                        "explicit comma-separated grid (overrides start/stop)");

  std::string repro_target, repro_out;
  CLI::App *repro_cmd = app.add_subcommand(
      "reproduce",
      "Compare theory against the embedded experimental dataset");
  repro_cmd->add_option("target", repro_target,
                        "table-s1, table-s2, fig2, fig3, or fig4")
      ->required();
  repro_cmd->add_option("--out", repro_out, "CSV artifact path");

  std::string compile_path;
  std::vector<std::string> compile_params;
  CLI::App *compile_cmd = app.add_subcommand(
      "compile", "Parse a .qc circuit file, compile and validate its POVM");
  compile_cmd->add_option("file", compile_path, ".qc circuit file")
      ->required();
  compile_cmd->add_option("--param", compile_params,
                          "override a parameter, e.g. --param beta=21");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError &e) {
    int code = app.exit(e);
    return code == 0 ? 0 : 2;  // 2 for any command-line usage problem
  }

  try {
    if (run_cmd->parsed()) {
      RunConfig config = build_config(run_flags, run_cmd);
      auto record = backaction::cli::cmd_run(config);
      std::string payload =
          config.format == Format::kJson
              ? backaction::cli::records_to_json(config, {record})
              : backaction::cli::records_to_csv(config, {record});
      return emit(config, payload);
    }
    if (sweep_cmd->parsed()) {
      RunConfig config = build_config(sweep_flags, sweep_cmd);
      SweepSpec spec;
      spec.variable = SweepSpec::var_from_name(sweep_var);
      if (!sweep_values.empty()) {
        std::stringstream ss(sweep_values);
        std::string item;
        while (std::getline(ss, item, ',')) {
          spec.grid.push_back(std::stod(item));
        }
      } else {
        spec = SweepSpec::linspace(spec.variable, sweep_start, sweep_stop,
                                   sweep_count);
      }
      auto records = backaction::cli::cmd_sweep(config, spec);
      std::string payload =
          config.format == Format::kJson
              ? backaction::cli::records_to_json(config, records)
              : backaction::cli::records_to_csv(config, records);
      return emit(config, payload);
    }
    if (repro_cmd->parsed()) {
      return backaction::cli::run_reproduce(repro_target, repro_out,
                                            std::cout, std::cerr);
    }
    if (compile_cmd->parsed()) {
      std::map<std::string, double> overrides;
      for (const std::string &p : compile_params) {
        auto eq = p.find('=');
        if (eq == std::string::npos) {
          throw UsageError("--param expects name=value");
        }
        overrides[p.substr(0, eq)] = std::stod(p.substr(eq + 1));
      }
      return backaction::cli::run_compile(compile_path, overrides, std::cout,
                                          std::cerr);
    }
  } catch (const UsageError &e) {
    std::cerr << "usage error: " << e.what() << "\n";
    return 2;
  } catch (const std::invalid_argument &e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception &e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
