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

#ifndef BACKACTION_OPTICS_HPP
#define BACKACTION_OPTICS_HPP

#include <string>
#include <variant>
#include <vector>

#include "backaction/qmath.hpp"
#include "backaction/schemes.hpp"

namespace backaction::optics {

using qmath::Complex;
using qmath::ComplexMatrix;

enum class Pol { H = 0, V = 1 };

/// A (path, polarization) mode of the single photon.
struct Mode {
  std::string path;
  Pol pol = Pol::H;
  auto operator<=>(const Mode &) const = default;
};

/// Joint path (x) polarization mode space. Paths are ordered and unique;
/// flat mode index is 2 * path_index + pol.
class ModeSpace {
 public:
  ModeSpace() = default;
  explicit ModeSpace(std::vector<std::string> paths);

  int n_paths() const { return static_cast<int>(paths_.size()); }
  int dim() const { return 2 * n_paths(); }
  const std::vector<std::string> &paths() const { return paths_; }
  int path_index(const std::string &name) const;  // -1 when absent
  bool has_path(const std::string &name) const;
  void add_path(const std::string &name);
  int mode_index(const Mode &m) const;
  Mode mode_at(int index) const;

  bool operator==(const ModeSpace &) const = default;

 private:
  std::vector<std::string> paths_;
};

/// Half-wave plate at a rotation angle, inserted into a subset of paths.
struct HwpElement {
  double angle_deg = 0;
  std::vector<std::string> acting_paths;
  bool operator==(const HwpElement &) const = default;
};

/// Beam displacer: the H-polarized component of each source path moves to
/// the mapped path (all moves simultaneous); V components stay put. Target
/// paths are appended to the space on demand.
struct BdElement {
  std::vector<std::pair<std::string, std::string>> displacement;
  bool operator==(const BdElement &) const = default;
};

/// Pure bookkeeping permutation of path labels (not a physical element, and
/// not representable in the .qc text format).
struct RelabelElement {
  std::vector<std::pair<std::string, std::string>> relabel;
  bool operator==(const RelabelElement &) const = default;
};

using OpticalElement = std::variant<HwpElement, BdElement, RelabelElement>;

struct Detector {
  Mode mode;
  schemes::OutcomeLabel label;
  bool operator==(const Detector &) const = default;
};

/// An ordered optical circuit over a mode space, with optional detectors
/// (outcome map over terminal modes) and an optional computational-basis
/// encoding (basis index -> input mode) used for POVM compilation.
struct OpticalCircuit {
  ModeSpace space;
  std::vector<OpticalElement> elements;
  std::vector<Detector> detectors;
  std::vector<Mode> encoding;

  bool operator==(const OpticalCircuit &) const = default;
};

/// Amplitudes over a circuit's mode space, indexed per ModeSpace::mode_index.
struct ModeAmplitudes {
  std::vector<Complex> amps;

  static ModeAmplitudes vacuum(const ModeSpace &space);
  static ModeAmplitudes basis(const ModeSpace &space, const Mode &mode);
  double norm2() const { return qmath::norm2(amps); }
};

/// Polarization action of a half-wave plate at rotation angle x (degrees):
/// |H> -> cos2x |H> + sin2x |V>, |V> -> sin2x |H> - cos2x |V>.
qmath::UnitaryOperator hwp_matrix(double angle_degrees);

/// Sequentially applies every element. Norm is preserved within PROB_TOL;
/// throws std::runtime_error on beam collisions at a displacer or, when the
/// circuit has detectors, on leftover amplitude in an undetected mode.
ModeAmplitudes propagate(const OpticalCircuit &circuit, ModeAmplitudes input);

/// Transfer matrix from the encoded input modes (columns, in encoding order)
/// to the full mode space (rows).
ComplexMatrix transfer_matrix(const OpticalCircuit &circuit,
                              const std::vector<Mode> &encoding);

/// Born-rule compilation: for each outcome the effect is K^dag K, K being the
/// block of transfer-matrix rows routed to that outcome's detectors. Requires
/// an isometric circuit and full detector coverage of reachable modes.
schemes::Povm compile_to_povm(const OpticalCircuit &circuit,
                              const std::vector<Mode> &encoding);
schemes::Povm compile_to_povm(const OpticalCircuit &circuit);

// ---------------------------------------------------------------------------
// Builders for the three modules of the experimental apparatus.
//
// Module A (state preparation), two-copy variant. Input |p1, H>:
//   H1(alpha) on p1, BD1 {p1->p0}, H2(45) on p1, H3(alpha) on {p0, p1}
// giving sqrt(p0)|path 0> + sqrt(p1)|path 1> in the path copy and the same
// qubit in polarization on each path, i.e. |Phi> (x) |Phi> with
// p0 = cos^2(2 alpha).
OpticalCircuit build_module_a(double alpha_deg);

// One-copy variant: a single plate H4(alpha) preparing |Phi> in polarization.
OpticalCircuit build_module_a_one_copy(double alpha_deg);

// Module B (collective measurement), six plates and four displacers in two
// path-conditional branches:
//   path p1: H5(22.5) -> BD2 {p1->b2} -> H7(beta) on b2 -> H6(45) on p1
//            -> BD3 {b2->b3, p1->b2}; detectors b3:H -> (1,0),
//            b2:H and b2:V -> (1,1)
//   path p0: H8(67.5) -> BD4 {p0->b4} -> H10(beta) on b4 -> H9(45) on p0
//            -> BD5 {b4->b5, p0->b4}; detectors b5:H -> (0,1),
//            b4:H and b4:V -> (0,0)
// The plate angle beta realizes U(theta) with cos^2(2 beta) = 2 sin^2(theta)
// (the TEXT convention below).
OpticalCircuit build_module_b(double beta_deg);

// Module C (two projective measurements): BD {in->q0} splits the first
// measurement into paths, one gamma plate per path applies U(theta = 2 gamma),
// and a second displacer { q0->q1, in->q2 } separates the final polarization
// measurement. Compiles to the TPM POVM of U(2 gamma).
OpticalCircuit build_module_c(double gamma_deg);

/// The two published calibrations relating the plate angle beta to the
/// process angle theta. kText: cos^2(2 beta) = 2 sin^2(theta), what the
/// as-described layout realizes. kTable: sin^2(2 beta) = 2 sin^2(theta),
/// consistent with the tabulated (beta, theta) pairs; default for
/// reproductions.
enum class BetaConvention { kText, kTable };

double theta_from_beta_deg(double beta_deg, BetaConvention convention);
double beta_from_theta_deg(double theta_deg, BetaConvention convention);

}  // namespace backaction::optics

#endif
