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

#include "backaction/optics.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <numbers>
#include <set>
#include <stdexcept>

namespace backaction::optics {

namespace {
constexpr double DEG = std::numbers::pi / 180.0;
constexpr double AMP_EPS = 1e-12;
}  // namespace

ModeSpace::ModeSpace(std::vector<std::string> paths) : paths_(std::move(paths)) {
  std::set<std::string> seen;
  for (const std::string &p : paths_) {
    if (!seen.insert(p).second) {
      throw std::invalid_argument("duplicate path name: " + p);
    }
  }
}

int ModeSpace::path_index(const std::string &name) const {
  for (int i = 0; i < n_paths(); i++) {
    if (paths_[i] == name) return i;
  }
  return -1;
}

bool ModeSpace::has_path(const std::string &name) const {
  return path_index(name) >= 0;
}

void ModeSpace::add_path(const std::string &name) {
  if (has_path(name)) {
    throw std::invalid_argument("duplicate path name: " + name);
  }
  paths_.push_back(name);
}

int ModeSpace::mode_index(const Mode &m) const {
  int p = path_index(m.path);
  if (p < 0) throw std::invalid_argument("unknown path: " + m.path);
  return 2 * p + static_cast<int>(m.pol);
}

Mode ModeSpace::mode_at(int index) const {
  if (index < 0 || index >= dim()) {
    throw std::invalid_argument("mode index out of range");
  }
  return Mode{paths_[index / 2], static_cast<Pol>(index % 2)};
}

ModeAmplitudes ModeAmplitudes::vacuum(const ModeSpace &space) {
  return ModeAmplitudes{std::vector<Complex>(space.dim())};
}

ModeAmplitudes ModeAmplitudes::basis(const ModeSpace &space, const Mode &mode) {
  ModeAmplitudes a = vacuum(space);
  a.amps[space.mode_index(mode)] = 1.0;
  return a;
}

qmath::UnitaryOperator hwp_matrix(double angle_degrees) {
  double c = std::cos(2.0 * angle_degrees * DEG);
  double s = std::sin(2.0 * angle_degrees * DEG);
  return qmath::UnitaryOperator(ComplexMatrix{{c, s}, {s, -c}});
}

namespace {

void apply_hwp(const ModeSpace &space, const HwpElement &hwp,
               std::vector<Complex> &amps) {
  ComplexMatrix m = hwp_matrix(hwp.angle_deg).matrix();
  for (const std::string &path : hwp.acting_paths) {
    int p = space.path_index(path);
    if (p < 0) throw std::invalid_argument("HWP on unknown path: " + path);
    Complex h = amps[2 * p], v = amps[2 * p + 1];
    amps[2 * p] = m.at(0, 0) * h + m.at(0, 1) * v;
    amps[2 * p + 1] = m.at(1, 0) * h + m.at(1, 1) * v;
  }
}

void apply_bd(const ModeSpace &space, const BdElement &bd,
              std::vector<Complex> &amps) {
  // All displacements happen at once; a collision means two beams would
  // occupy the same output mode, which a displacer cannot merge.
  std::map<int, Complex> moved;
  std::set<std::string> sources;
  for (const auto &[src, dst] : bd.displacement) {
    int ps = space.path_index(src);
    int pd = space.path_index(dst);
    if (ps < 0) throw std::invalid_argument("BD source path unknown: " + src);
    if (pd < 0) throw std::invalid_argument("BD target path unknown: " + dst);
    if (!sources.insert(src).second) {
      throw std::invalid_argument("BD displaces path " + src + " twice");
    }
    Complex a = amps[2 * ps];
    amps[2 * ps] = 0;
    if (!moved.emplace(2 * pd, a).second) {
      throw std::runtime_error("BD routes two beams into path " + dst);
    }
  }
  for (const auto &[idx, a] : moved) {
    if (std::abs(amps[idx]) > AMP_EPS && std::abs(a) > AMP_EPS) {
      throw std::runtime_error("beam collision at " +
                               space.mode_at(idx).path + ":H");
    }
    amps[idx] += a;
  }
}

void apply_relabel(const ModeSpace &space, const RelabelElement &rl,
                   std::vector<Complex> &amps) {
  std::vector<Complex> out = amps;
  std::set<int> targets;
  for (const auto &[src, dst] : rl.relabel) {
    int ps = space.path_index(src);
    int pd = space.path_index(dst);
    if (ps < 0 || pd < 0) {
      throw std::invalid_argument("relabel references unknown path");
    }
    if (!targets.insert(pd).second) {
      throw std::invalid_argument("relabel target used twice");
    }
    out[2 * pd] = amps[2 * ps];
    out[2 * pd + 1] = amps[2 * ps + 1];
    if (std::none_of(rl.relabel.begin(), rl.relabel.end(),
                     [&](const auto &m) { return m.second == src; })) {
      out[2 * ps] = 0;
      out[2 * ps + 1] = 0;
    }
  }
  amps = std::move(out);
}

}  // namespace

ModeAmplitudes propagate(const OpticalCircuit &circuit, ModeAmplitudes input) {
  if (static_cast<int>(input.amps.size()) != circuit.space.dim()) {
    throw std::invalid_argument("input amplitudes do not match mode space");
  }
  double norm_in = input.norm2();
  for (const OpticalElement &el : circuit.elements) {
    std::visit(
        [&](const auto &e) {
          using T = std::decay_t<decltype(e)>;
          if constexpr (std::is_same_v<T, HwpElement>) {
            apply_hwp(circuit.space, e, input.amps);
          } else if constexpr (std::is_same_v<T, BdElement>) {
            apply_bd(circuit.space, e, input.amps);
          } else {
            apply_relabel(circuit.space, e, input.amps);
          }
        },
        el);
  }
  if (std::abs(input.norm2() - norm_in) > qmath::PROB_TOL) {
    throw std::runtime_error("propagation failed to preserve the norm");
  }
  if (!circuit.detectors.empty()) {
    std::set<int> covered;
    for (const Detector &d : circuit.detectors) {
      covered.insert(circuit.space.mode_index(d.mode));
    }
    for (int idx = 0; idx < circuit.space.dim(); idx++) {
      if (std::abs(input.amps[idx]) > 1e-9 && !covered.contains(idx)) {
        Mode m = circuit.space.mode_at(idx);
        throw std::runtime_error("amplitude on undetected mode " + m.path +
                                 (m.pol == Pol::H ? ":H" : ":V"));
      }
    }
  }
  return input;
}

ComplexMatrix transfer_matrix(const OpticalCircuit &circuit,
                              const std::vector<Mode> &encoding) {
  if (encoding.empty()) {
    throw std::invalid_argument("transfer matrix needs a nonempty encoding");
  }
  ComplexMatrix v(circuit.space.dim(), static_cast<int>(encoding.size()));
  for (size_t k = 0; k < encoding.size(); k++) {
    ModeAmplitudes col =
        propagate(circuit, ModeAmplitudes::basis(circuit.space, encoding[k]));
    for (int r = 0; r < circuit.space.dim(); r++) {
      v.at(r, static_cast<int>(k)) = col.amps[r];
    }
  }
  return v;
}

schemes::Povm compile_to_povm(const OpticalCircuit &circuit,
                              const std::vector<Mode> &encoding) {
  const int d = static_cast<int>(encoding.size());
  {
    std::set<Mode> distinct(encoding.begin(), encoding.end());
    if (static_cast<int>(distinct.size()) != d) {
      throw std::invalid_argument("encoding maps two basis states to one mode");
    }
  }
  if (circuit.detectors.empty()) {
    throw std::invalid_argument("circuit has no detectors to compile");
  }
  ComplexMatrix v = transfer_matrix(circuit, encoding);
  ComplexMatrix gram = v.adjoint() * v;
  if (qmath::max_abs_diff(gram, ComplexMatrix::identity(d)) > 1e-10) {
    throw std::runtime_error("circuit is not an isometry on the encoded modes");
  }

  std::map<int, schemes::OutcomeLabel> mode_to_label;
  for (const Detector &det : circuit.detectors) {
    int idx = circuit.space.mode_index(det.mode);
    if (!mode_to_label.emplace(idx, det.label).second) {
      throw std::invalid_argument("mode detected twice: " + det.mode.path);
    }
  }
  for (int r = 0; r < circuit.space.dim(); r++) {
    if (mode_to_label.contains(r)) continue;
    for (int k = 0; k < d; k++) {
      if (std::abs(v.at(r, k)) > 1e-9) {
        Mode m = circuit.space.mode_at(r);
        throw std::runtime_error("uncovered terminal mode " + m.path +
                                 (m.pol == Pol::H ? ":H" : ":V"));
      }
    }
  }

  std::map<schemes::OutcomeLabel, ComplexMatrix> effects;
  for (const auto &[idx, label] : mode_to_label) {
    ComplexMatrix contrib(d, d);
    for (int a = 0; a < d; a++) {
      for (int b = 0; b < d; b++) {
        contrib.at(a, b) = std::conj(v.at(idx, a)) * v.at(idx, b);
      }
    }
    auto [it, fresh] = effects.emplace(label, contrib);
    if (!fresh) it->second = it->second + contrib;
  }

  std::vector<schemes::Povm::Effect> list;
  for (auto &[label, m] : effects) {
    list.emplace_back(label, qmath::HermitianOperator(std::move(m)));
  }
  return schemes::Povm(std::move(list));
}

schemes::Povm compile_to_povm(const OpticalCircuit &circuit) {
  if (circuit.encoding.empty()) {
    throw std::invalid_argument("circuit carries no encoding");
  }
  return compile_to_povm(circuit, circuit.encoding);
}

OpticalCircuit build_module_a(double alpha_deg) {
  OpticalCircuit c;
  c.space = ModeSpace({"p1", "p0"});
  c.elements = {
      HwpElement{alpha_deg, {"p1"}},        // H1
      BdElement{{{"p1", "p0"}}},            // BD1
      HwpElement{45.0, {"p1"}},             // H2
      HwpElement{alpha_deg, {"p0", "p1"}},  // H3
  };
  c.encoding = {Mode{"p1", Pol::H}};
  return c;
}

OpticalCircuit build_module_a_one_copy(double alpha_deg) {
  OpticalCircuit c;
  c.space = ModeSpace({"in", "aux"});
  c.elements = {HwpElement{alpha_deg, {"in"}}};  // H4
  c.encoding = {Mode{"in", Pol::H}};
  return c;
}

OpticalCircuit build_module_b(double beta_deg) {
  OpticalCircuit c;
  c.space = ModeSpace({"p0", "p1", "b2", "b3", "b4", "b5"});
  c.elements = {
      // Branch conditioned on the path-copy outcome 1.
      HwpElement{22.5, {"p1"}},                       // H5
      BdElement{{{"p1", "b2"}}},                      // BD2
      HwpElement{beta_deg, {"b2"}},                   // H7
      HwpElement{45.0, {"p1"}},                       // H6
      BdElement{{{"b2", "b3"}, {"p1", "b2"}}},        // BD3
      // Branch conditioned on the path-copy outcome 0.
      HwpElement{67.5, {"p0"}},                       // H8
      BdElement{{{"p0", "b4"}}},                      // BD4
      HwpElement{beta_deg, {"b4"}},                   // H10
      HwpElement{45.0, {"p0"}},                       // H9
      BdElement{{{"b4", "b5"}, {"p0", "b4"}}},        // BD5
  };
  c.detectors = {
      {Mode{"b4", Pol::H}, {0, 0}},
      {Mode{"b4", Pol::V}, {0, 0}},
      {Mode{"b5", Pol::H}, {0, 1}},
      {Mode{"b2", Pol::H}, {1, 1}},
      {Mode{"b2", Pol::V}, {1, 1}},
      {Mode{"b3", Pol::H}, {1, 0}},
  };
  c.encoding = {
      Mode{"p0", Pol::H},
      Mode{"p0", Pol::V},
      Mode{"p1", Pol::H},
      Mode{"p1", Pol::V},
  };
  return c;
}

OpticalCircuit build_module_c(double gamma_deg) {
  OpticalCircuit c;
  c.space = ModeSpace({"in", "q0", "q1", "q2"});
  c.elements = {
      BdElement{{{"in", "q0"}}},      // first polarization measurement
      HwpElement{gamma_deg, {"q0"}},  // H11
      HwpElement{gamma_deg, {"in"}},  // H12
      BdElement{{{"q0", "q1"}, {"in", "q2"}}},  // second measurement split
  };
  c.detectors = {
      {Mode{"q1", Pol::H}, {0, 0}},
      {Mode{"q0", Pol::V}, {0, 1}},
      {Mode{"q2", Pol::H}, {1, 0}},
      {Mode{"in", Pol::V}, {1, 1}},
  };
  c.encoding = {Mode{"in", Pol::H}, Mode{"in", Pol::V}};
  return c;
}

double theta_from_beta_deg(double beta_deg, BetaConvention convention) {
  double x = convention == BetaConvention::kText
                 ? std::cos(2.0 * beta_deg * DEG)
                 : std::sin(2.0 * beta_deg * DEG);
  double s = std::abs(x) / std::sqrt(2.0);
  return std::asin(std::clamp(s, 0.0, 1.0)) / DEG;
}

double beta_from_theta_deg(double theta_deg, BetaConvention convention) {
  double s = std::sqrt(2.0) * std::sin(theta_deg * DEG);
  if (s < -1e-12 || s > 1.0 + 1e-12) {
    throw std::invalid_argument("theta outside the calibratable range");
  }
  s = std::clamp(s, 0.0, 1.0);
  double two_beta = convention == BetaConvention::kText ? std::acos(s)
                                                        : std::asin(s);
  return two_beta / (2.0 * DEG);
}

}  // namespace backaction::optics
