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

#include "backaction/cli_core.hpp"

#include <atomic>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <numbers>
#include <ostream>
#include <sstream>
#include <thread>

#include "backaction/circuit_dsl.hpp"
#include "backaction/reproduce.hpp"
#include "backaction/serialize.hpp"
#include "backaction/version.hpp"
#include "json.hpp"

namespace backaction::cli {

namespace {

constexpr double DEG = std::numbers::pi / 180.0;

std::string fmt(double x) {
  char buf[48];
  std::snprintf(buf, sizeof buf, "%.9g", x);
  return buf;
}

struct ResolvedConfig {
  schemes::PureQubitState state;
  double theta_deg;
  schemes::Hamiltonian h;
  schemes::Hamiltonian h_prime;
};

ResolvedConfig resolve(const RunConfig &config) {
  if (config.p0 && config.alpha_deg) {
    throw UsageError("state: give either p0 or alpha-deg, not both");
  }
  double p0 = 0.5;
  if (config.p0) {
    if (*config.p0 < 0 || *config.p0 > 1) {
      throw UsageError("p0: must lie in [0, 1]");
    }
    p0 = *config.p0;
  } else if (config.alpha_deg) {
    double c = std::cos(2.0 * *config.alpha_deg * DEG);
    p0 = c * c;
  }

  int given = (config.theta_deg ? 1 : 0) + (config.beta_deg ? 1 : 0) +
              (config.gamma_deg ? 1 : 0);
  if (given != 1) {
    throw UsageError(
        "process: give exactly one of theta-deg, beta-deg, gamma-deg");
  }
  double theta_deg;
  if (config.theta_deg) {
    theta_deg = *config.theta_deg;
  } else if (config.beta_deg) {
    if (*config.beta_deg < 0 || *config.beta_deg > 45) {
      throw UsageError("beta-deg: must lie in [0, 45]");
    }
    theta_deg =
        optics::theta_from_beta_deg(*config.beta_deg, config.beta_convention);
  } else {
    theta_deg = 2.0 * *config.gamma_deg;
  }
  if (theta_deg < 0) throw UsageError("theta-deg: must be >= 0");

  std::vector<double> e = {0, 0}, ep = {0, 0};
  if (config.energies) {
    e = {(*config.energies)[0], (*config.energies)[1]};
    ep = {(*config.energies)[2], (*config.energies)[3]};
  }
  return ResolvedConfig{
      schemes::PureQubitState(p0, 1.0 - p0, config.phase_rad), theta_deg,
      schemes::Hamiltonian::computational(e),
      schemes::Hamiltonian::computational(ep)};
}

SchemeResult evaluate_scheme(const RunConfig &config, const ResolvedConfig &rc,
                             schemes::Scheme scheme, double lambda,
                             double w_tpm, double w_cm) {
  const double theta = rc.theta_deg * DEG;
  schemes::UnitaryOperator u = schemes::u_theta(theta);
  qmath::DensityMatrix rho = rc.state.density();
  bool is_cm = scheme == schemes::Scheme::kCm;

  schemes::Povm povm =
      is_cm ? schemes::cm_povm(u, rc.h, rc.h_prime, lambda)
            : schemes::tpm_povm(u, rc.h, rc.h_prime);
  if (config.backend == Backend::kCircuit) {
    optics::OpticalCircuit circuit =
        is_cm ? optics::build_module_b(optics::beta_from_theta_deg(
                    rc.theta_deg, optics::BetaConvention::kText))
              : optics::build_module_c(rc.theta_deg / 2.0);
    povm = optics::compile_to_povm(circuit);
  }

  qmath::DensityMatrix input = is_cm ? qmath::two_copies(rho) : rho;
  schemes::TransitionTable table = [&] {
    if (config.backend == Backend::kMonteCarlo) {
      return mc::proportions(mc::sample_counts(povm, input, config.shots));
    }
    return schemes::transition_probs(povm, input);
  }();

  SchemeResult result;
  result.scheme = is_cm ? "CM" : "TPM";
  result.probs = table.entries();
  result.std_errors = table.std_errors();
  result.final_marginal = table.final_marginal(2);
  std::vector<double> ideal = schemes::ideal_final_dist(u, rc.state);
  mc::FidelityEstimate fid = mc::empirical_fidelity(table, ideal);
  result.fidelity = fid.value;
  result.fidelity_std_error = fid.std_error;
  result.avg_work = is_cm ? w_cm : w_tpm;
  return result;
}

}  // namespace

RunRecord cmd_run(const RunConfig &config) {
  ResolvedConfig rc = resolve(config);
  const double theta = rc.theta_deg * DEG;
  schemes::UnitaryOperator u = schemes::u_theta(theta);
  qmath::DensityMatrix rho = rc.state.density();

  RunRecord record;
  if (config.theta_deg) {
    record.variable = "theta";
    record.variable_value = *config.theta_deg;
  } else if (config.beta_deg) {
    record.variable = "beta";
    record.variable_value = *config.beta_deg;
  } else {
    record.variable = "gamma";
    record.variable_value = *config.gamma_deg;
  }
  record.theta_deg = rc.theta_deg;
  record.p0 = rc.state.p0;
  record.lambda = schemes::lambda_max(u, rc.h, rc.h_prime);
  record.c_l1 = schemes::l1_coherence(rho);
  record.c_unitary = schemes::cohering_power_unitary(u);
  record.outside_calibrated_regime = rc.theta_deg > 45.0 + 1e-9;
  record.w_unmeasured = schemes::avg_work_unmeasured(rho, u, rc.h, rc.h_prime);
  record.w_tpm = schemes::avg_work_tpm(rho, u, rc.h, rc.h_prime);
  record.w_cm =
      schemes::avg_work_cm(rho, u, rc.h, rc.h_prime, record.lambda);

  if (config.scheme != SchemeSel::kCm) {
    record.results.push_back(evaluate_scheme(config, rc, schemes::Scheme::kTpm,
                                             record.lambda, record.w_tpm,
                                             record.w_cm));
  }
  if (config.scheme != SchemeSel::kTpm) {
    record.results.push_back(evaluate_scheme(config, rc, schemes::Scheme::kCm,
                                             record.lambda, record.w_tpm,
                                             record.w_cm));
  }
  return record;
}

SweepSpec SweepSpec::linspace(Var variable, double start, double stop,
                              int count) {
  if (count < 1) throw UsageError("sweep: count must be >= 1");
  SweepSpec spec;
  spec.variable = variable;
  for (int k = 0; k < count; k++) {
    double t = count == 1 ? 0.0 : static_cast<double>(k) / (count - 1);
    spec.grid.push_back(start + t * (stop - start));
  }
  return spec;
}

SweepSpec::Var SweepSpec::var_from_name(const std::string &name) {
  if (name == "beta") return Var::kBeta;
  if (name == "alpha") return Var::kAlpha;
  if (name == "theta") return Var::kTheta;
  if (name == "p0") return Var::kP0;
  throw UsageError("sweep variable must be beta, alpha, theta, or p0");
}

std::string SweepSpec::var_name(Var v) {
  switch (v) {
    case Var::kBeta:
      return "beta";
    case Var::kAlpha:
      return "alpha";
    case Var::kTheta:
      return "theta";
    default:
      return "p0";
  }
}

unsigned sweep_thread_cap(size_t grid_size) {
  unsigned n = std::max(1u, std::thread::hardware_concurrency());
  if (const char *env = std::getenv("BACKACTION_SIM_THREADS")) {
    long v = std::strtol(env, nullptr, 10);
    if (v >= 1) n = std::min<unsigned>(n, static_cast<unsigned>(v));
  }
  return static_cast<unsigned>(std::min<size_t>(n, std::max<size_t>(grid_size, 1)));
}

std::vector<RunRecord> cmd_sweep(const RunConfig &base, const SweepSpec &spec) {
  if (spec.grid.empty()) throw UsageError("sweep: grid is empty");

  auto point_config = [&](double value) {
    RunConfig c = base;
    switch (spec.variable) {
      case SweepSpec::Var::kBeta:
        if (value < 0 || value > 45) {
          throw UsageError("sweep: beta = " + fmt(value) +
                           " outside [0, 45]");
        }
        c.theta_deg.reset();
        c.gamma_deg.reset();
        c.beta_deg = value;
        break;
      case SweepSpec::Var::kAlpha:
        if (value < 0 || value > 45) {
          throw UsageError("sweep: alpha = " + fmt(value) +
                           " outside [0, 45]");
        }
        c.p0.reset();
        c.alpha_deg = value;
        break;
      case SweepSpec::Var::kTheta:
        if (value < 0 || value > 45) {
          throw UsageError("sweep: theta = " + fmt(value) +
                           " outside [0, 45]");
        }
        c.beta_deg.reset();
        c.gamma_deg.reset();
        c.theta_deg = value;
        break;
      case SweepSpec::Var::kP0:
        if (value < 0 || value > 1) {
          throw UsageError("sweep: p0 = " + fmt(value) + " outside [0, 1]");
        }
        c.alpha_deg.reset();
        c.p0 = value;
        break;
    }
    return c;
  };

  std::vector<RunRecord> records(spec.grid.size());
  std::vector<std::string> failures(spec.grid.size());
  std::atomic<size_t> next{0};
  unsigned workers = sweep_thread_cap(spec.grid.size());

  auto work = [&] {
    while (true) {
      size_t k = next.fetch_add(1);
      if (k >= spec.grid.size()) break;
      try {
        records[k] = cmd_run(point_config(spec.grid[k]));
        records[k].variable = SweepSpec::var_name(spec.variable);
        records[k].variable_value = spec.grid[k];
      } catch (const std::exception &e) {
        failures[k] = e.what();
      }
    }
  };
  if (workers <= 1) {
    work();
  } else {
    std::vector<std::thread> pool;
    for (unsigned t = 0; t < workers; t++) pool.emplace_back(work);
    for (std::thread &t : pool) t.join();
  }
  for (size_t k = 0; k < failures.size(); k++) {
    if (!failures[k].empty()) {
      throw UsageError("sweep point " + fmt(spec.grid[k]) + ": " +
                       failures[k]);
    }
  }
  return records;
}

namespace {

std::string metadata_line(const RunConfig &config) {
  std::ostringstream out;
  out << "# backaction-sim " << kVersion;
  out << " backend="
      << (config.backend == Backend::kAnalytic
              ? "analytic"
              : config.backend == Backend::kCircuit ? "circuit" : "montecarlo");
  out << " beta-convention="
      << (config.beta_convention == optics::BetaConvention::kTable ? "table"
                                                                   : "text");
  if (config.backend != Backend::kMonteCarlo) out << " seed=-";
  if (config.backend == Backend::kMonteCarlo) {
    out << " seed=" << config.shots.seed << " shots=" << config.shots.n_shots;
    out << " source="
        << (config.shots.source_model == mc::SourceModel::kPoisson ? "poisson"
                                                                   : "fixed");
    // Error bars are an artifact addition; the source experiment reports none.
    out << " errorbars=binomial-normal-approx(artifact-addition)";
  }
  if (config.energies) {
    out << " energies=" << fmt((*config.energies)[0]) << ","
        << fmt((*config.energies)[1]) << "," << fmt((*config.energies)[2])
        << "," << fmt((*config.energies)[3]);
  } else {
    out << " energies=degenerate";
  }
  return out.str();
}

const schemes::OutcomeLabel kLabels[4] = {{0, 0}, {0, 1}, {1, 0}, {1, 1}};

}  // namespace

std::string records_to_csv(const RunConfig &config,
                           const std::vector<RunRecord> &records) {
  std::ostringstream out;
  out << metadata_line(config) << "\n";
  out << "scheme,var,var_value,theta_deg,p0,lambda,c_l1,c_unitary,"
         "p_00,p_01,p_10,p_11,p_final_0,p_final_1,fidelity,fidelity_stderr,"
         "w_unmeasured(energy),w_tpm(energy),w_cm(energy),outside_regime\n";
  for (const RunRecord &r : records) {
    for (const SchemeResult &s : r.results) {
      out << s.scheme << "," << r.variable << "," << fmt(r.variable_value)
          << "," << fmt(r.theta_deg) << "," << fmt(r.p0) << ","
          << fmt(r.lambda) << "," << fmt(r.c_l1) << "," << fmt(r.c_unitary);
      for (const schemes::OutcomeLabel &label : kLabels) {
        auto it = s.probs.find(label);
        out << "," << fmt(it == s.probs.end() ? 0.0 : it->second);
      }
      out << "," << fmt(s.final_marginal[0]) << "," << fmt(s.final_marginal[1])
          << "," << fmt(s.fidelity) << "," << fmt(s.fidelity_std_error) << ","
          << fmt(r.w_unmeasured) << "," << fmt(r.w_tpm) << "," << fmt(r.w_cm)
          << "," << (r.outside_calibrated_regime ? 1 : 0) << "\n";
    }
  }
  return out.str();
}

std::string records_to_json(const RunConfig &config,
                            const std::vector<RunRecord> &records) {
  using nlohmann::json;
  json out;
  out["version"] = kVersion;
  out["metadata"] = metadata_line(config);
  json recs = json::array();
  for (const RunRecord &r : records) {
    json jr = {{"var", r.variable},
               {"var_value", r.variable_value},
               {"theta_deg", r.theta_deg},
               {"p0", r.p0},
               {"lambda", r.lambda},
               {"c_l1", r.c_l1},
               {"c_unitary", r.c_unitary},
               {"w_unmeasured", r.w_unmeasured},
               {"w_tpm", r.w_tpm},
               {"w_cm", r.w_cm},
               {"outside_calibrated_regime", r.outside_calibrated_regime}};
    json schemes_json = json::array();
    for (const SchemeResult &s : r.results) {
      json entries = json::array();
      for (const auto &[label, p] : s.probs) {
        json e = {{"label", {label.i, label.j_prime}}, {"p", p}};
        auto it = s.std_errors.find(label);
        if (it != s.std_errors.end()) e["std_error"] = it->second;
        entries.push_back(std::move(e));
      }
      schemes_json.push_back({{"scheme", s.scheme},
                              {"transitions", std::move(entries)},
                              {"final_marginal", s.final_marginal},
                              {"fidelity", s.fidelity},
                              {"fidelity_std_error", s.fidelity_std_error},
                              {"avg_work", s.avg_work}});
    }
    jr["schemes"] = std::move(schemes_json);
    recs.push_back(std::move(jr));
  }
  out["records"] = std::move(recs);
  return out.dump(2) + "\n";
}

int run_reproduce(const std::string &target, const std::string &out_path,
                  std::ostream &console, std::ostream &errors) {
  repro::Report report;
  try {
    report = repro::reproduce_target(target);
  } catch (const std::invalid_argument &e) {
    errors << "error: " << e.what() << "\n";
    return 2;
  }
  if (out_path.empty()) {
    console << report.csv;
  } else {
    std::ofstream out(out_path, std::ios::binary);
    if (!out) {
      errors << "error: cannot write " << out_path << "\n";
      return 2;
    }
    out << report.csv;
  }
  int failed = 0;
  for (const repro::Check &c : report.checks) {
    if (!c.pass) failed++;
    console << (c.pass ? "ok   " : "FAIL ") << report.target << " " << c.name
            << " deviation=" << fmt(c.deviation) << " bound=" << fmt(c.bound)
            << "\n";
  }
  console << report.target << ": " << (report.checks.size() - failed) << "/"
          << report.checks.size() << " checks passed\n";
  return report.pass ? 0 : 1;
}

int run_compile(const std::string &path,
                const std::map<std::string, double> &param_overrides,
                std::ostream &out, std::ostream &errors) {
  dsl::CircuitAst ast;
  optics::OpticalCircuit circuit;
  try {
    ast = dsl::parse_file(path, param_overrides);
    circuit = dsl::lower(ast);
  } catch (const dsl::ParseError &e) {
    const dsl::Diagnostic &d = e.diagnostic();
    errors << path << ":" << d.span.line << ":" << d.span.col_start
           << ": error: " << d.message;
    if (!d.hint.empty()) errors << " (" << d.hint << ")";
    errors << "\n";
    return 2;
  } catch (const std::invalid_argument &e) {
    errors << "error: " << e.what() << "\n";
    return 2;
  }
  try {
    if (circuit.detectors.empty()) {
      out << "# prep circuit (no detectors); propagation-only\n";
      out << serialize::circuit_to_json(circuit, 2) << "\n";
      return 0;
    }
    schemes::Povm povm = optics::compile_to_povm(circuit);
    qmath::ComplexMatrix sum(povm.dim(), povm.dim());
    out << serialize::povm_to_json(povm, 2) << "\n";
    for (const auto &[label, effect] : povm.effects()) {
      sum = sum + effect.matrix();
      out << "min_eigenvalue(" << label.i << "," << label.j_prime
          << ") = " << fmt(qmath::min_eigenvalue(effect.matrix())) << "\n";
    }
    double residual = qmath::max_abs_diff(
        sum, qmath::ComplexMatrix::identity(povm.dim()));
    out << "completeness_residual = " << fmt(residual) << "\n";
    return 0;
  } catch (const std::exception &e) {
    errors << "validation error: " << e.what() << "\n";
    return 1;
  }
}

}  // namespace backaction::cli
