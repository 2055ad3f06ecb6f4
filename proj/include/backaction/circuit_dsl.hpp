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

#ifndef BACKACTION_CIRCUIT_DSL_HPP
#define BACKACTION_CIRCUIT_DSL_HPP

#include <map>
#include <stdexcept>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "backaction/optics.hpp"

// Line-oriented text format for optical circuits (.qc). The normative
// grammar ships in docs/grammar.ebnf; fixtures live under fixtures/circuits.
namespace backaction::dsl {

struct SourceSpan {
  int line = 1;
  int col_start = 1;
  int col_end = 1;
  bool operator==(const SourceSpan &) const = default;
};

struct Diagnostic {
  SourceSpan span;
  std::string message;
  std::string hint;  // optional "expected ..." detail
};

class ParseError : public std::runtime_error {
 public:
  explicit ParseError(Diagnostic diag)
      : std::runtime_error(diag.message), diag_(std::move(diag)) {}
  const Diagnostic &diagnostic() const { return diag_; }

 private:
  Diagnostic diag_;
};

enum class TokenKind { kKeyword, kIdent, kNumber, kParamRef, kPunct, kEof };

struct Token {
  TokenKind kind = TokenKind::kEof;
  std::string text;       // keyword/ident/param name or punctuation
  double number = 0;      // for kNumber
  bool has_deg = false;   // number carried a `deg` suffix
  SourceSpan span;
};

std::vector<Token> tokenize(std::string_view text);

// --- AST -------------------------------------------------------------------

struct PathsStmt {
  std::vector<std::string> names;
  SourceSpan span;
  bool operator==(const PathsStmt &) const = default;
};
struct ParamStmt {
  std::string name;
  double value_deg = 0;
  SourceSpan span;
  bool operator==(const ParamStmt &) const = default;
};
struct HwpStmt {
  double angle_deg = 0;
  std::string param;  // nonempty when the angle came from $param
  std::vector<std::string> paths;
  SourceSpan span;
  bool operator==(const HwpStmt &) const = default;
};
struct BdStmt {
  std::vector<std::pair<std::string, std::string>> mappings;
  SourceSpan span;
  bool operator==(const BdStmt &) const = default;
};
struct DetectStmt {
  std::string path;
  optics::Pol pol = optics::Pol::H;
  int i = 0;
  int j_prime = 0;
  SourceSpan span;
  bool operator==(const DetectStmt &) const = default;
};
struct EncodeStmt {
  int basis = 0;
  std::string path;
  optics::Pol pol = optics::Pol::H;
  SourceSpan span;
  bool operator==(const EncodeStmt &) const = default;
};

using Statement =
    std::variant<PathsStmt, ParamStmt, HwpStmt, BdStmt, DetectStmt, EncodeStmt>;

struct CircuitAst {
  std::vector<Statement> statements;
  bool operator==(const CircuitAst &) const = default;
};

/// Single-pass recursive-descent parse; parameter references resolve against
/// earlier `param` statements (or the supplied overrides). First error wins.
CircuitAst parse(const std::vector<Token> &tokens,
                 const std::map<std::string, double> &param_overrides = {});
CircuitAst parse_text(std::string_view text,
                      const std::map<std::string, double> &param_overrides = {});
CircuitAst parse_file(const std::string &path,
                      const std::map<std::string, double> &param_overrides = {});

/// Semantic checks plus construction of the optical circuit: paths must be
/// declared (or created by an earlier displacer), detector modes are unique,
/// encodings unique, and every reachable terminal mode must be detected when
/// the circuit declares detectors.
optics::OpticalCircuit lower(const CircuitAst &ast);

/// Canonical .qc text for a circuit; parse_text(serialize(c)) lowers back to
/// an identical circuit. Throws std::invalid_argument for circuits holding
/// relabel elements, which the grammar cannot express.
std::string serialize(const optics::OpticalCircuit &circuit);

/// Deterministic one-line-per-statement rendering of an AST (stable across
/// runs; used for parse-determinism checks).
std::string dump(const CircuitAst &ast);

}  // namespace backaction::dsl

#endif
