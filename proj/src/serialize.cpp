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

#include "backaction/serialize.hpp"

#include <sstream>
#include <stdexcept>

#include "json.hpp"

namespace backaction::serialize {

using nlohmann::json;

namespace {

json matrix_to_value(const qmath::ComplexMatrix &m) {
  json rows = json::array();
  for (int r = 0; r < m.rows(); r++) {
    json row = json::array();
    for (int c = 0; c < m.cols(); c++) {
      row.push_back({m.at(r, c).real(), m.at(r, c).imag()});
    }
    rows.push_back(std::move(row));
  }
  return rows;
}

qmath::ComplexMatrix matrix_from_value(const json &rows) {
  if (!rows.is_array() || rows.empty()) {
    throw std::invalid_argument("matrix JSON must be a nonempty array");
  }
  int nr = static_cast<int>(rows.size());
  int nc = static_cast<int>(rows.at(0).size());
  qmath::ComplexMatrix m(nr, nc);
  for (int r = 0; r < nr; r++) {
    const json &row = rows.at(r);
    if (static_cast<int>(row.size()) != nc) {
      throw std::invalid_argument("ragged matrix JSON");
    }
    for (int c = 0; c < nc; c++) {
      const json &pair = row.at(c);
      if (!pair.is_array() || pair.size() != 2) {
        throw std::invalid_argument("matrix entry must be a [re, im] pair");
      }
      m.at(r, c) = qmath::Complex{pair.at(0).get<double>(),
                                  pair.at(1).get<double>()};
    }
  }
  m.check_finite();
  return m;
}

json label_to_value(schemes::OutcomeLabel label) {
  return json::array({label.i, label.j_prime});
}

schemes::OutcomeLabel label_from_value(const json &v) {
  if (!v.is_array() || v.size() != 2) {
    throw std::invalid_argument("label must be [i, j']");
  }
  return {v.at(0).get<int>(), v.at(1).get<int>()};
}

std::string emit(const json &j, int indent) { return j.dump(indent); }

}  // namespace

std::string matrix_to_json(const qmath::ComplexMatrix &m, int indent) {
  return emit(matrix_to_value(m), indent);
}

qmath::ComplexMatrix matrix_from_json(const std::string &text) {
  return matrix_from_value(json::parse(text));
}

std::string povm_to_json(const schemes::Povm &povm, int indent) {
  json effects = json::array();
  for (const auto &[label, effect] : povm.effects()) {
    effects.push_back({{"label", label_to_value(label)},
                       {"matrix", matrix_to_value(effect.matrix())}});
  }
  return emit({{"dim", povm.dim()}, {"effects", std::move(effects)}}, indent);
}

schemes::Povm povm_from_json(const std::string &text) {
  json j = json::parse(text);
  std::vector<schemes::Povm::Effect> effects;
  for (const json &e : j.at("effects")) {
    effects.emplace_back(
        label_from_value(e.at("label")),
        qmath::HermitianOperator(matrix_from_value(e.at("matrix"))));
  }
  return schemes::Povm(std::move(effects));
}

std::string table_to_json(const schemes::TransitionTable &table, int indent) {
  json entries = json::array();
  for (const auto &[label, p] : table.entries()) {
    json e = {{"label", label_to_value(label)}, {"p", p}};
    if (table.has_std_errors()) e["std_error"] = table.std_error(label);
    entries.push_back(std::move(e));
  }
  return emit({{"entries", std::move(entries)}}, indent);
}

std::string distribution_to_json(const schemes::WorkDistribution &dist,
                                 int indent) {
  json atoms = json::array();
  for (const schemes::WorkAtom &a : dist.atoms()) {
    atoms.push_back({{"w", a.w}, {"p", a.p}});
  }
  return emit({{"atoms", std::move(atoms)}}, indent);
}

std::string counts_to_json(const mc::CountTable &counts, int indent) {
  json entries = json::array();
  for (const auto &[label, n] : counts.counts) {
    entries.push_back({{"label", label_to_value(label)}, {"n", n}});
  }
  return emit({{"total", counts.total}, {"counts", std::move(entries)}},
              indent);
}

std::string counts_to_csv(const mc::CountTable &counts) {
  std::ostringstream out;
  out << "label_i,label_jprime,count\n";
  for (const auto &[label, n] : counts.counts) {
    out << label.i << "," << label.j_prime << "," << n << "\n";
  }
  return out.str();
}

std::string circuit_to_json(const optics::OpticalCircuit &circuit,
                            int indent) {
  json elements = json::array();
  for (const optics::OpticalElement &el : circuit.elements) {
    if (const auto *hwp = std::get_if<optics::HwpElement>(&el)) {
      elements.push_back({{"kind", "hwp"},
                          {"angle_deg", hwp->angle_deg},
                          {"on", hwp->acting_paths}});
    } else if (const auto *bd = std::get_if<optics::BdElement>(&el)) {
      json map = json::array();
      for (const auto &[src, dst] : bd->displacement) {
        map.push_back({{"from", src}, {"to", dst}});
      }
      elements.push_back({{"kind", "bd"}, {"map", std::move(map)}});
    } else if (const auto *rl = std::get_if<optics::RelabelElement>(&el)) {
      json map = json::array();
      for (const auto &[src, dst] : rl->relabel) {
        map.push_back({{"from", src}, {"to", dst}});
      }
      elements.push_back({{"kind", "relabel"}, {"map", std::move(map)}});
    }
  }
  json detectors = json::array();
  for (const optics::Detector &d : circuit.detectors) {
    detectors.push_back(
        {{"path", d.mode.path},
         {"pol", d.mode.pol == optics::Pol::H ? "H" : "V"},
         {"label", label_to_value(d.label)}});
  }
  json encoding = json::array();
  for (size_t k = 0; k < circuit.encoding.size(); k++) {
    encoding.push_back(
        {{"basis", k},
         {"path", circuit.encoding[k].path},
         {"pol", circuit.encoding[k].pol == optics::Pol::H ? "H" : "V"}});
  }
  return emit({{"paths", circuit.space.paths()},
               {"elements", std::move(elements)},
               {"detectors", std::move(detectors)},
               {"encoding", std::move(encoding)}},
              indent);
}

}  // namespace backaction::serialize
