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

#include "backaction/circuit_dsl.hpp"

#include <cctype>
#include <cstdio>
#include <fstream>
#include <set>
#include <sstream>

namespace backaction::dsl {

namespace {

const std::set<std::string> kKeywords = {"paths",  "param", "hwp", "bd",
                                         "detect", "encode", "on",  "as"};

[[noreturn]] void fail(SourceSpan span, std::string message,
                       std::string hint = "") {
  throw ParseError(Diagnostic{span, std::move(message), std::move(hint)});
}

bool ident_start(char c) { return std::isalpha(static_cast<unsigned char>(c)) || c == '_'; }
bool ident_char(char c) { return std::isalnum(static_cast<unsigned char>(c)) || c == '_'; }
bool digit(char c) { return std::isdigit(static_cast<unsigned char>(c)); }

}  // namespace

std::vector<Token> tokenize(std::string_view text) {
  std::vector<Token> tokens;
  int line = 1, col = 1;
  size_t i = 0;
  auto span_from = [&](int l, int c0) {
    return SourceSpan{l, c0, col > c0 ? col - 1 : c0};
  };
  while (i < text.size()) {
    char c = text[i];
    if (c == '\n') {
      line++;
      col = 1;
      i++;
      continue;
    }
    if (c == ' ' || c == '\t' || c == '\r') {
      i++;
      col++;
      continue;
    }
    if (c == '#') {
      while (i < text.size() && text[i] != '\n') i++;
      continue;
    }
    int start_col = col;
    if (ident_start(c)) {
      size_t j = i;
      while (j < text.size() && ident_char(text[j])) j++;
      std::string word(text.substr(i, j - i));
      col += static_cast<int>(j - i);
      i = j;
      Token t;
      t.kind = kKeywords.contains(word) ? TokenKind::kKeyword : TokenKind::kIdent;
      t.text = std::move(word);
      t.span = span_from(line, start_col);
      tokens.push_back(std::move(t));
      continue;
    }
    if (digit(c) || (c == '-' && i + 1 < text.size() && digit(text[i + 1]))) {
      size_t j = i;
      if (text[j] == '-') j++;
      while (j < text.size() && digit(text[j])) j++;
      if (j < text.size() && text[j] == '.') {
        j++;
        if (j >= text.size() || !digit(text[j])) {
          col += static_cast<int>(j - i);
          fail(span_from(line, start_col), "malformed number",
               "expected digits after the decimal point");
        }
        while (j < text.size() && digit(text[j])) j++;
      }
      std::string num(text.substr(i, j - i));
      bool deg = false;
      if (text.substr(j).starts_with("deg")) {
        deg = true;
        j += 3;
      }
      col += static_cast<int>(j - i);
      i = j;
      Token t;
      t.kind = TokenKind::kNumber;
      t.number = std::stod(num);
      t.has_deg = deg;
      t.text = num;
      t.span = span_from(line, start_col);
      tokens.push_back(std::move(t));
      continue;
    }
    if (c == '$') {
      size_t j = i + 1;
      if (j >= text.size() || !ident_start(text[j])) {
        col++;
        fail(span_from(line, start_col), "expected parameter name after '$'");
      }
      while (j < text.size() && ident_char(text[j])) j++;
      std::string name(text.substr(i + 1, j - i - 1));
      col += static_cast<int>(j - i);
      i = j;
      Token t;
      t.kind = TokenKind::kParamRef;
      t.text = std::move(name);
      t.span = span_from(line, start_col);
      tokens.push_back(std::move(t));
      continue;
    }
    if (c == '-' && i + 1 < text.size() && text[i + 1] == '>') {
      col += 2;
      i += 2;
      tokens.push_back(Token{TokenKind::kPunct, "->", 0, false,
                             span_from(line, start_col)});
      continue;
    }
    if (c == ',' || c == '=' || c == ':' || c == '(' || c == ')') {
      col++;
      i++;
      tokens.push_back(Token{TokenKind::kPunct, std::string(1, c), 0, false,
                             span_from(line, start_col)});
      continue;
    }
    col++;
    fail(SourceSpan{line, start_col, start_col},
         std::string("illegal character '") + c + "'");
  }
  tokens.push_back(Token{TokenKind::kEof, "", 0, false,
                         SourceSpan{line, col, col}});
  return tokens;
}

namespace {

class Parser {
 public:
  Parser(const std::vector<Token> &tokens,
         const std::map<std::string, double> &overrides)
      : tokens_(tokens), overrides_(overrides) {}

  CircuitAst parse_file() {
    CircuitAst ast;
    while (peek().kind != TokenKind::kEof) {
      ast.statements.push_back(parse_stmt());
    }
    for (const auto &[name, value] : overrides_) {
      if (!params_.contains(name)) {
        throw std::invalid_argument("override for undefined parameter: " +
                                    name);
      }
      (void)value;
    }
    return ast;
  }

 private:
  const Token &peek() const { return tokens_[pos_]; }
  const Token &advance() { return tokens_[pos_++]; }

  const Token &expect_keyword(const std::string &kw) {
    const Token &t = peek();
    if (t.kind != TokenKind::kKeyword || t.text != kw) {
      fail(t.span, "unexpected token '" + describe(t) + "'",
           "expected '" + kw + "'");
    }
    return advance();
  }

  const Token &expect_punct(const std::string &p) {
    const Token &t = peek();
    if (t.kind != TokenKind::kPunct || t.text != p) {
      fail(t.span, "unexpected token '" + describe(t) + "'",
           "expected '" + p + "'");
    }
    return advance();
  }

  std::string expect_ident(const std::string &what) {
    const Token &t = peek();
    if (t.kind != TokenKind::kIdent) {
      fail(t.span, "unexpected token '" + describe(t) + "'",
           "expected " + what);
    }
    return advance().text;
  }

  int expect_int(const std::string &what) {
    const Token &t = peek();
    if (t.kind != TokenKind::kNumber || t.has_deg ||
        t.number != static_cast<int>(t.number)) {
      fail(t.span, "unexpected token '" + describe(t) + "'",
           "expected " + what);
    }
    return static_cast<int>(advance().number);
  }

  static std::string describe(const Token &t) {
    switch (t.kind) {
      case TokenKind::kEof:
        return "end of file";
      case TokenKind::kNumber:
        return t.text + (t.has_deg ? "deg" : "");
      case TokenKind::kParamRef:
        return "$" + t.text;
      default:
        return t.text;
    }
  }

  Statement parse_stmt() {
    const Token &t = peek();
    if (t.kind != TokenKind::kKeyword) {
      fail(t.span, "unexpected token '" + describe(t) + "'",
           "expected a statement (paths, param, hwp, bd, detect, encode)");
    }
    if (t.text == "paths") return parse_paths();
    if (t.text == "param") return parse_param();
    if (t.text == "hwp") return parse_hwp();
    if (t.text == "bd") return parse_bd();
    if (t.text == "detect") return parse_detect();
    if (t.text == "encode") return parse_encode();
    fail(t.span, "unexpected keyword '" + t.text + "'",
         "expected a statement (paths, param, hwp, bd, detect, encode)");
  }

  PathsStmt parse_paths() {
    PathsStmt s;
    s.span = expect_keyword("paths").span;
    s.names.push_back(expect_ident("a path name"));
    expect_punct(",");
    s.names.push_back(expect_ident("a path name"));
    while (peek().kind == TokenKind::kPunct && peek().text == ",") {
      advance();
      s.names.push_back(expect_ident("a path name"));
    }
    return s;
  }

  ParamStmt parse_param() {
    ParamStmt s;
    s.span = expect_keyword("param").span;
    s.name = expect_ident("a parameter name");
    if (params_.contains(s.name)) {
      fail(s.span, "parameter '" + s.name + "' defined twice");
    }
    expect_punct("=");
    const Token &num = peek();
    if (num.kind != TokenKind::kNumber) {
      fail(num.span, "unexpected token '" + describe(num) + "'",
           "expected a numeric value");
    }
    if (!num.has_deg) {
      fail(num.span, "angle must carry the 'deg' suffix",
           "write e.g. " + num.text + "deg");
    }
    advance();
    s.value_deg = num.number;
    auto it = overrides_.find(s.name);
    if (it != overrides_.end()) s.value_deg = it->second;
    params_[s.name] = s.value_deg;
    return s;
  }

  HwpStmt parse_hwp() {
    HwpStmt s;
    s.span = expect_keyword("hwp").span;
    const Token &t = peek();
    if (t.kind == TokenKind::kNumber) {
      if (!t.has_deg) {
        fail(t.span, "angle must carry the 'deg' suffix",
             "write e.g. " + t.text + "deg");
      }
      s.angle_deg = advance().number;
    } else if (t.kind == TokenKind::kParamRef) {
      auto it = params_.find(t.text);
      if (it == params_.end()) {
        fail(t.span, "undefined parameter '$" + t.text + "'",
             "declare it first: param " + t.text + " = ...deg");
      }
      s.param = t.text;
      s.angle_deg = it->second;
      advance();
    } else {
      fail(t.span, "unexpected token '" + describe(t) + "'",
           "expected an angle (e.g. 22.5deg or $name)");
    }
    expect_keyword("on");
    s.paths.push_back(expect_ident("a path name"));
    while (peek().kind == TokenKind::kPunct && peek().text == ",") {
      advance();
      s.paths.push_back(expect_ident("a path name"));
    }
    return s;
  }

  BdStmt parse_bd() {
    BdStmt s;
    s.span = expect_keyword("bd").span;
    auto mapping = [&] {
      SourceSpan at = peek().span;
      std::string src = expect_ident("a source path");
      expect_punct("->");
      std::string dst = expect_ident("a target path");
      if (src == dst) {
        fail(at, "displacement must change path",
             "map '" + src + "' to a different path");
      }
      s.mappings.emplace_back(std::move(src), std::move(dst));
    };
    mapping();
    while (peek().kind == TokenKind::kPunct && peek().text == ",") {
      advance();
      mapping();
    }
    return s;
  }

  optics::Pol expect_pol() {
    const Token &t = peek();
    if (t.kind == TokenKind::kIdent && (t.text == "H" || t.text == "V")) {
      return advance().text == "H" ? optics::Pol::H : optics::Pol::V;
    }
    fail(t.span, "unexpected token '" + describe(t) + "'",
         "expected polarization H or V");
  }

  DetectStmt parse_detect() {
    DetectStmt s;
    s.span = expect_keyword("detect").span;
    s.path = expect_ident("a path name");
    expect_punct(":");
    s.pol = expect_pol();
    expect_keyword("as");
    expect_punct("(");
    s.i = expect_int("an initial-state index");
    expect_punct(",");
    s.j_prime = expect_int("a final-state index");
    expect_punct(")");
    return s;
  }

  EncodeStmt parse_encode() {
    EncodeStmt s;
    s.span = expect_keyword("encode").span;
    s.basis = expect_int("a basis index");
    expect_punct("=");
    s.path = expect_ident("a path name");
    expect_punct(":");
    s.pol = expect_pol();
    return s;
  }

  const std::vector<Token> &tokens_;
  const std::map<std::string, double> &overrides_;
  std::map<std::string, double> params_;
  size_t pos_ = 0;
};

}  // namespace

CircuitAst parse(const std::vector<Token> &tokens,
                 const std::map<std::string, double> &param_overrides) {
  return Parser(tokens, param_overrides).parse_file();
}

CircuitAst parse_text(std::string_view text,
                      const std::map<std::string, double> &param_overrides) {
  return parse(tokenize(text), param_overrides);
}

CircuitAst parse_file(const std::string &path,
                      const std::map<std::string, double> &param_overrides) {
  std::ifstream in(path);
  if (!in) throw std::invalid_argument("cannot open circuit file: " + path);
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_text(ss.str(), param_overrides);
}

optics::OpticalCircuit lower(const CircuitAst &ast) {
  optics::OpticalCircuit circuit;
  std::set<int> encoded_bases;
  std::set<optics::Mode> detected_modes;
  SourceSpan first_detect_span{};

  auto require_path = [&](const std::string &name, SourceSpan span) {
    if (!circuit.space.has_path(name)) {
      fail(span, "undefined path '" + name + "'",
           "declare it in a paths statement");
    }
  };

  for (const Statement &stmt : ast.statements) {
    if (const auto *paths = std::get_if<PathsStmt>(&stmt)) {
      for (const std::string &name : paths->names) {
        if (circuit.space.has_path(name)) {
          fail(paths->span, "duplicate path '" + name + "'");
        }
        circuit.space.add_path(name);
      }
    } else if (std::get_if<ParamStmt>(&stmt)) {
      // Params resolve during parsing; nothing to lower.
    } else if (const auto *hwp = std::get_if<HwpStmt>(&stmt)) {
      for (const std::string &p : hwp->paths) require_path(p, hwp->span);
      circuit.elements.push_back(
          optics::HwpElement{hwp->angle_deg, hwp->paths});
    } else if (const auto *bd = std::get_if<BdStmt>(&stmt)) {
      std::set<std::string> sources, targets;
      for (const auto &[src, dst] : bd->mappings) {
        require_path(src, bd->span);
        if (!sources.insert(src).second) {
          fail(bd->span, "path '" + src + "' displaced twice");
        }
        if (!targets.insert(dst).second) {
          fail(bd->span, "two displacements target path '" + dst + "'");
        }
        if (!circuit.space.has_path(dst)) circuit.space.add_path(dst);
      }
      circuit.elements.push_back(optics::BdElement{bd->mappings});
    } else if (const auto *det = std::get_if<DetectStmt>(&stmt)) {
      require_path(det->path, det->span);
      if (det->i < 0 || det->j_prime < 0) {
        fail(det->span, "outcome label indices must be >= 0");
      }
      if (circuit.detectors.empty()) first_detect_span = det->span;
      optics::Mode mode{det->path, det->pol};
      if (!detected_modes.insert(mode).second) {
        fail(det->span, "mode " + det->path +
                            (det->pol == optics::Pol::H ? ":H" : ":V") +
                            " already assigned to a detector");
      }
      circuit.detectors.push_back(
          {mode, schemes::OutcomeLabel{det->i, det->j_prime}});
    } else if (const auto *enc = std::get_if<EncodeStmt>(&stmt)) {
      require_path(enc->path, enc->span);
      if (enc->basis < 0) fail(enc->span, "basis index must be >= 0");
      if (!encoded_bases.insert(enc->basis).second) {
        fail(enc->span,
             "basis state " + std::to_string(enc->basis) + " encoded twice");
      }
      if (static_cast<size_t>(enc->basis) != circuit.encoding.size()) {
        fail(enc->span, "basis states must be encoded in order 0, 1, ...");
      }
      optics::Mode mode{enc->path, enc->pol};
      for (const optics::Mode &m : circuit.encoding) {
        if (m == mode) {
          fail(enc->span, "mode already encodes another basis state");
        }
      }
      circuit.encoding.push_back(mode);
    }
  }

  // Reachability: with detectors declared and an encoding available, every
  // terminal mode that can carry amplitude must be detected. Propagation runs
  // on a detector-less copy so that the coverage failure surfaces here as a
  // spanned diagnostic rather than inside propagate().
  if (!circuit.detectors.empty() && !circuit.encoding.empty()) {
    optics::OpticalCircuit probe = circuit;
    probe.detectors.clear();
    qmath::ComplexMatrix v = optics::transfer_matrix(probe, circuit.encoding);
    for (int r = 0; r < circuit.space.dim(); r++) {
      optics::Mode m = circuit.space.mode_at(r);
      if (detected_modes.contains(m)) continue;
      for (int k = 0; k < v.cols(); k++) {
        if (std::abs(v.at(r, k)) > 1e-9) {
          fail(first_detect_span, "uncovered terminal mode " + m.path +
                                      (m.pol == optics::Pol::H ? ":H" : ":V"),
               "add a detect statement for it");
        }
      }
    }
  }
  return circuit;
}

namespace {

std::string format_angle(double deg) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.17g", deg);
  std::string s(buf);
  if (s.find('e') != std::string::npos || s.find('E') != std::string::npos) {
    std::snprintf(buf, sizeof buf, "%.17f", deg);
    s = buf;
  }
  return s;
}

}  // namespace

std::string serialize(const optics::OpticalCircuit &circuit) {
  std::ostringstream out;
  out << "paths";
  for (size_t i = 0; i < circuit.space.paths().size(); i++) {
    out << (i ? ", " : " ") << circuit.space.paths()[i];
  }
  out << "\n";
  for (const optics::OpticalElement &el : circuit.elements) {
    if (const auto *hwp = std::get_if<optics::HwpElement>(&el)) {
      out << "hwp " << format_angle(hwp->angle_deg) << "deg on";
      for (size_t i = 0; i < hwp->acting_paths.size(); i++) {
        out << (i ? ", " : " ") << hwp->acting_paths[i];
      }
      out << "\n";
    } else if (const auto *bd = std::get_if<optics::BdElement>(&el)) {
      out << "bd";
      for (size_t i = 0; i < bd->displacement.size(); i++) {
        out << (i ? ", " : " ") << bd->displacement[i].first << " -> "
            << bd->displacement[i].second;
      }
      out << "\n";
    } else {
      throw std::invalid_argument(
          "relabel elements are not representable in the .qc format");
    }
  }
  for (const optics::Detector &d : circuit.detectors) {
    out << "detect " << d.mode.path << ":"
        << (d.mode.pol == optics::Pol::H ? "H" : "V") << " as (" << d.label.i
        << ", " << d.label.j_prime << ")\n";
  }
  for (size_t k = 0; k < circuit.encoding.size(); k++) {
    const optics::Mode &m = circuit.encoding[k];
    out << "encode " << k << " = " << m.path << ":"
        << (m.pol == optics::Pol::H ? "H" : "V") << "\n";
  }
  return out.str();
}

std::string dump(const CircuitAst &ast) {
  std::ostringstream out;
  auto span = [](SourceSpan s) {
    std::ostringstream o;
    o << "@" << s.line << ":" << s.col_start << "-" << s.col_end;
    return o.str();
  };
  for (const Statement &stmt : ast.statements) {
    std::visit(
        [&](const auto &s) {
          using T = std::decay_t<decltype(s)>;
          if constexpr (std::is_same_v<T, PathsStmt>) {
            out << "paths(";
            for (size_t i = 0; i < s.names.size(); i++) {
              out << (i ? "," : "") << s.names[i];
            }
            out << ")" << span(s.span);
          } else if constexpr (std::is_same_v<T, ParamStmt>) {
            out << "param(" << s.name << "=" << format_angle(s.value_deg)
                << ")" << span(s.span);
          } else if constexpr (std::is_same_v<T, HwpStmt>) {
            out << "hwp(" << format_angle(s.angle_deg);
            if (!s.param.empty()) out << "<$" << s.param << ">";
            out << ";";
            for (size_t i = 0; i < s.paths.size(); i++) {
              out << (i ? "," : "") << s.paths[i];
            }
            out << ")" << span(s.span);
          } else if constexpr (std::is_same_v<T, BdStmt>) {
            out << "bd(";
            for (size_t i = 0; i < s.mappings.size(); i++) {
              out << (i ? "," : "") << s.mappings[i].first << "->"
                  << s.mappings[i].second;
            }
            out << ")" << span(s.span);
          } else if constexpr (std::is_same_v<T, DetectStmt>) {
            out << "detect(" << s.path << ":"
                << (s.pol == optics::Pol::H ? "H" : "V") << "=(" << s.i << ","
                << s.j_prime << "))" << span(s.span);
          } else {
            out << "encode(" << s.basis << "=" << s.path << ":"
                << (s.pol == optics::Pol::H ? "H" : "V") << ")" << span(s.span);
          }
          out << "\n";
        },
        stmt);
  }
  return out.str();
}

}  // namespace backaction::dsl
