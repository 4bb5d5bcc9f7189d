// Copyright 2026 The PET Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "pet/qasm.hpp"

#include <cctype>
#include <map>
#include <optional>
#include <sstream>
#include <vector>

namespace pet {

QasmSyntaxError::QasmSyntaxError(int line, int column, const std::string &message)
    : Error("line " + std::to_string(line) + ", column " + std::to_string(column) + ": " + message),
      line_(line),
      column_(column),
      detail_(message) {}

namespace {

struct Register {
  int offset = 0;
  int size = 0;
};

class Parser {
 public:
  explicit Parser(std::string_view text) : text_(text) {}

  Circuit run() {
    skip();
    if (at_word("OPENQASM")) {
      word();
      skip();
      const std::size_t start = pos_;
      while (pos_ < text_.size() && text_[pos_] != ';' && text_[pos_] != '\n') ++pos_;
      if (start == pos_) fail(start, "expected a version after OPENQASM");
      expect(';');
    }
    for (skip(); pos_ < text_.size(); skip()) statement();
    if (qubits_ == 0) fail(pos_, "no qreg declared");
    return Circuit(qubits_, std::move(gates_));
  }

 private:
  [[noreturn]] void fail(std::size_t at, const std::string &message) const {
    int line = 1, column = 1;
    for (std::size_t k = 0; k < at && k < text_.size(); ++k) {
      if (text_[k] == '\n') {
        ++line;
        column = 1;
      } else {
        ++column;
      }
    }
    throw QasmSyntaxError(line, column, message);
  }

  void skip() {
    for (;;) {
      while (pos_ < text_.size() && std::isspace(static_cast<unsigned char>(text_[pos_]))) ++pos_;
      if (text_.substr(pos_, 2) != "//") return;
      while (pos_ < text_.size() && text_[pos_] != '\n') ++pos_;
    }
  }

  static bool ident_char(char c) {
    return std::isalnum(static_cast<unsigned char>(c)) || c == '_';
  }

  bool at_word(std::string_view w) const {
    return text_.substr(pos_, w.size()) == w &&
           (pos_ + w.size() == text_.size() || !ident_char(text_[pos_ + w.size()]));
  }

  std::string word() {
    const std::size_t start = pos_;
    if (pos_ >= text_.size() || !(std::isalpha(static_cast<unsigned char>(text_[pos_])) ||
                                  text_[pos_] == '_')) {
      fail(pos_, "expected an identifier");
    }
    while (pos_ < text_.size() && ident_char(text_[pos_])) ++pos_;
    return std::string(text_.substr(start, pos_ - start));
  }

  void expect(char c) {
    skip();
    if (pos_ >= text_.size() || text_[pos_] != c) {
      fail(pos_, std::string("expected '") + c + "'");
    }
    ++pos_;
  }

  bool accept(char c) {
    skip();
    if (pos_ < text_.size() && text_[pos_] == c) {
      ++pos_;
      return true;
    }
    return false;
  }

  int integer() {
    skip();
    const std::size_t start = pos_;
    long v = 0;
    while (pos_ < text_.size() && std::isdigit(static_cast<unsigned char>(text_[pos_]))) {
      v = v * 10 + (text_[pos_] - '0');
      if (v > 1 << 20) fail(start, "index too large");
      ++pos_;
    }
    if (start == pos_) fail(start, "expected an integer");
    return static_cast<int>(v);
  }

  void statement() {
    const std::size_t start = pos_;
    if (at_word("include")) {
      word();
      skip();
      if (!accept('"')) fail(pos_, "expected a quoted file name");
      while (pos_ < text_.size() && text_[pos_] != '"' && text_[pos_] != '\n') ++pos_;
      if (pos_ >= text_.size() || text_[pos_] != '"') fail(pos_, "unterminated string");
      ++pos_;
      expect(';');
      return;
    }
    const std::string name = word();
    if (name == "qreg" || name == "creg") {
      declare(name == "qreg" ? qregs_ : cregs_, name == "qreg" ? qubits_ : clbits_);
      return;
    }
    if (name == "measure") {
      const int q = qubit_arg();
      skip();
      if (text_.substr(pos_, 2) == "->") {
        pos_ += 2;
        skip();
        const std::size_t at = pos_;
        const std::string reg = word();
        const auto it = cregs_.find(reg);
        if (it == cregs_.end()) fail(at, "unknown classical register '" + reg + "'");
        expect('[');
        const std::size_t idx_at = pos_;
        const int idx = integer();
        if (idx >= it->second.size) fail(idx_at, "classical index out of range");
        expect(']');
      }
      expect(';');
      gates_.push_back(Gate::measure(q));
      return;
    }
    GateKind kind{};
    try {
      kind = gate_kind(name);
    } catch (const Error &) {
      fail(start, "unknown gate '" + name + "'");
    }
    if (kind == GateKind::kMeasure) fail(start, "unknown gate '" + name + "'");
    std::vector<ParamExpr> params;
    if (accept('(')) {
      do {
        skip();
        const std::size_t at = pos_;
        try {
          params.push_back(ParamExpr::parse_prefix(text_, pos_));
        } catch (const ExprSyntaxError &e) {
          fail(e.offset(), e.what());
        } catch (const Error &e) {
          fail(at, e.what());
        }
      } while (accept(','));
      expect(')');
    }
    if (static_cast<int>(params.size()) != gate_param_count(kind)) {
      fail(start, "gate '" + name + "' takes " + std::to_string(gate_param_count(kind)) +
                      " parameter(s), got " + std::to_string(params.size()));
    }
    std::vector<int> qubits;
    std::vector<std::size_t> where;
    do {
      skip();
      where.push_back(pos_);
      qubits.push_back(qubit_arg());
    } while (accept(','));
    expect(';');
    if (static_cast<int>(qubits.size()) != gate_arity(kind)) {
      fail(start, "gate '" + name + "' acts on " + std::to_string(gate_arity(kind)) +
                      " qubit(s), got " + std::to_string(qubits.size()));
    }
    if (qubits.size() == 2 && qubits[0] == qubits[1]) fail(where[1], "repeated qubit argument");
    gates_.emplace_back(kind, std::move(qubits), std::move(params));
  }

  void declare(std::map<std::string, Register> &regs, int &total) {
    skip();
    const std::size_t at = pos_;
    const std::string reg = word();
    if (qregs_.contains(reg) || cregs_.contains(reg)) fail(at, "register '" + reg + "' redeclared");
    expect('[');
    skip();
    const std::size_t size_at = pos_;
    const int size = integer();
    if (size == 0) fail(size_at, "register size must be positive");
    expect(']');
    expect(';');
    regs[reg] = {total, size};
    total += size;
  }

  int qubit_arg() {
    skip();
    const std::size_t at = pos_;
    const std::string reg = word();
    const auto it = qregs_.find(reg);
    if (it == qregs_.end()) fail(at, "unknown quantum register '" + reg + "'");
    expect('[');
    skip();
    const std::size_t idx_at = pos_;
    const int idx = integer();
    if (idx >= it->second.size) fail(idx_at, "qubit index out of range");
    expect(']');
    return it->second.offset + idx;
  }

  std::string_view text_;
  std::size_t pos_ = 0;
  std::map<std::string, Register> qregs_, cregs_;
  int qubits_ = 0;
  int clbits_ = 0;
  std::vector<Gate> gates_;
};

}  // namespace

Circuit parse_qasm_subset(std::string_view text) { return Parser(text).run(); }

std::string to_qasm_subset(const Circuit &c) {
  std::ostringstream out;
  out << "OPENQASM 2.0;\n";
  out << "qreg q[" << c.num_qubits() << "];\n";
  if (c.count(GateKind::kMeasure) > 0) out << "creg c[" << c.num_qubits() << "];\n";
  for (const auto &g : c.gates()) {
    if (g.kind == GateKind::kMeasure) {
      out << "measure q[" << g.qubits[0] << "] -> c[" << g.qubits[0] << "];\n";
      continue;
    }
    out << g.name();
    if (!g.params.empty()) {
      out << "(";
      for (std::size_t k = 0; k < g.params.size(); ++k) {
        out << (k ? ", " : "") << g.params[k].to_string();
      }
      out << ")";
    }
    for (std::size_t k = 0; k < g.qubits.size(); ++k) {
      out << (k ? ", " : " ") << "q[" << g.qubits[k] << "]";
    }
    out << ";\n";
  }
  return out.str();
}

}  // namespace pet
