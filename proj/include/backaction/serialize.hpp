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

#ifndef BACKACTION_SERIALIZE_HPP
#define BACKACTION_SERIALIZE_HPP

#include <string>

#include "backaction/montecarlo.hpp"
#include "backaction/optics.hpp"
#include "backaction/schemes.hpp"

// JSON wire formats (see docs/formats.md):
//   matrix:  array of rows, each entry a [re, im] pair
//   povm:    {"dim": d, "effects": [{"label": [i, j'], "matrix": ...}]}
//   table:   {"entries": [{"label": [i, j'], "p": x, "std_error": e?}]}
//   counts:  {"total": n, "counts": [{"label": [i, j'], "n": k}]}
//   circuit: {"paths": [...], "elements": [...], "detectors": [...],
//             "encoding": [...]}
namespace backaction::serialize {

std::string matrix_to_json(const qmath::ComplexMatrix &m, int indent = -1);
qmath::ComplexMatrix matrix_from_json(const std::string &text);

std::string povm_to_json(const schemes::Povm &povm, int indent = -1);
schemes::Povm povm_from_json(const std::string &text);

std::string table_to_json(const schemes::TransitionTable &table,
                          int indent = -1);
std::string distribution_to_json(const schemes::WorkDistribution &dist,
                                 int indent = -1);

std::string counts_to_json(const mc::CountTable &counts, int indent = -1);
std::string counts_to_csv(const mc::CountTable &counts);

std::string circuit_to_json(const optics::OpticalCircuit &circuit,
                            int indent = -1);

}  // namespace backaction::serialize

#endif
