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

#include "pet/qcore.hpp"

#include <algorithm>
#include <array>
#include <cctype>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <numbers>

namespace pet {

// ---------------------------------------------------------------------------
// ParamExpr

namespace {

std::string format_double(double v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  // %.17g is lossless but noisy; prefer the shortest exact form.
  for (int prec = 1; prec < 17; ++prec) {
    char shorter[32];
    std::snprintf(shorter, sizeof(shorter), "%.*g", prec, v);
    if (std::strtod(shorter, nullptr) == v) return shorter;
  }
  return buf;
}

class ExprParser {
 public:
  ExprParser(std::string_view text, std::size_t pos) : text_(text), pos_(pos) {}

  ParamExpr parse_expr() {
    ParamExpr acc = parse_term();
    for (;;) {
      skip_ws();
      if (peek() == '+') {
        ++pos_;
        acc = acc + parse_term();
      } else if (peek() == '-') {
        ++pos_;
        acc = acc - parse_term();
      } else {
        return acc;
      }
    }
  }

  std::size_t pos() const { return pos_; }

  void skip_ws() {
    while (pos_ < text_.size() && std::isspace(static_cast<unsigned char>(text_[pos_]))) ++pos_;
  }

  char peek() const { return pos_ < text_.size() ? text_[pos_] : '\0'; }

 private:
  ParamExpr parse_term() {
    ParamExpr acc = parse_factor();
    for (;;) {
      skip_ws();
      const char c = peek();
      if (c != '*' && c != '/') return acc;
      const std::size_t op_pos = pos_++;
      ParamExpr rhs = parse_factor();
      if (c == '*') {
        if (acc.is_literal()) {
          acc = rhs * acc.constant();
        } else if (rhs.is_literal()) {
          acc = acc * rhs.constant();
        } else {
          throw ExprSyntaxError(op_pos, "product of two parameters is not linear");
        }
      } else {
        if (!rhs.is_literal()) {
          throw ExprSyntaxError(op_pos, "division by a parameter is not linear");
        }
        if (rhs.constant() == 0.0) throw ExprSyntaxError(op_pos, "division by zero");
        acc = acc * (1.0 / rhs.constant());
      }
    }
  }

  ParamExpr parse_factor() {
    skip_ws();
    const char c = peek();
    if (c == '-') {
      ++pos_;
      return -parse_factor();
    }
    if (c == '+') {
      ++pos_;
      return parse_factor();
    }
    if (c == '(') {
      ++pos_;
      ParamExpr inner = parse_expr();
      skip_ws();
      if (peek() != ')') throw ExprSyntaxError(pos_, "expected ')'");
      ++pos_;
      return inner;
    }
    if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') {
      const char *begin = text_.data() + pos_;
      // strtod needs a terminated buffer; copy the numeric prefix.
      std::size_t end = pos_;
      while (end < text_.size() &&
             (std::isdigit(static_cast<unsigned char>(text_[end])) || text_[end] == '.' ||
              text_[end] == 'e' || text_[end] == 'E' ||
              ((text_[end] == '+' || text_[end] == '-') && end > pos_ &&
               (text_[end - 1] == 'e' || text_[end - 1] == 'E')))) {
        ++end;
      }
      std::string number(begin, end - pos_);
      char *stop = nullptr;
      const double v = std::strtod(number.c_str(), &stop);
      if (stop == number.c_str()) throw ExprSyntaxError(pos_, "malformed number");
      pos_ += static_cast<std::size_t>(stop - number.c_str());
      return ParamExpr(v);
    }
    if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
      const std::size_t start = pos_;
      while (pos_ < text_.size() &&
             (std::isalnum(static_cast<unsigned char>(text_[pos_])) || text_[pos_] == '_')) {
        ++pos_;
      }
      std::string name(text_.substr(start, pos_ - start));
      if (name == "pi") return ParamExpr(std::numbers::pi);
      return ParamExpr::parameter(name);
    }
    if (c == '\0') throw ExprSyntaxError(pos_, "unexpected end of expression");
    throw ExprSyntaxError(pos_, std::string("unexpected character '") + c + "'");
  }

  std::string_view text_;
  std::size_t pos_;
};

}  // namespace

ParamExpr ParamExpr::parameter(const std::string &name, double coefficient) {
  if (name == "pi") throw Error("'pi' is reserved and cannot name a parameter");
  ParamExpr e;
  if (coefficient != 0.0) e.terms_[name] = coefficient;
  return e;
}

ParamExpr ParamExpr::parse(std::string_view text) {
  std::size_t pos = 0;
  ParamExpr e = parse_prefix(text, pos);
  while (pos < text.size() && std::isspace(static_cast<unsigned char>(text[pos]))) ++pos;
  if (pos != text.size()) throw ExprSyntaxError(pos, "trailing characters in expression");
  return e;
}

ParamExpr ParamExpr::parse_prefix(std::string_view text, std::size_t &pos) {
  ExprParser parser(text, pos);
  ParamExpr e = parser.parse_expr();
  pos = parser.pos();
  return e;
}

std::set<std::string> ParamExpr::names() const {
  std::set<std::string> out;
  for (const auto &[name, coeff] : terms_) out.insert(name);
  return out;
}

double ParamExpr::evaluate(const Binding &binding) const {
  double v = constant_;
  for (const auto &[name, coeff] : terms_) {
    auto it = binding.find(name);
    if (it == binding.end()) throw Error("unbound parameter '" + name + "'");
    v += coeff * it->second;
  }
  return v;
}

std::string ParamExpr::to_string() const {
  std::string out;
  auto emit = [&out](double coeff, const std::string &body) {
    const bool negative = std::signbit(coeff);
    const double mag = std::abs(coeff);
    std::string piece;
    if (body.empty()) {
      piece = format_double(mag);
    } else if (mag == 1.0) {
      piece = body;
    } else {
      piece = format_double(mag) + "*" + body;
    }
    if (out.empty()) {
      out = negative ? "-" + piece : piece;
    } else {
      out += negative ? " - " : " + ";
      out += piece;
    }
  };
  for (const auto &[name, coeff] : terms_) emit(coeff, name);
  if (constant_ != 0.0 || terms_.empty()) emit(constant_ == 0.0 ? 0.0 : constant_, "");
  return out;
}

ParamExpr ParamExpr::operator-() const { return *this * -1.0; }

ParamExpr ParamExpr::operator+(const ParamExpr &other) const {
  ParamExpr out = *this;
  out.constant_ += other.constant_;
  for (const auto &[name, coeff] : other.terms_) {
    const double c = (out.terms_[name] += coeff);
    if (c == 0.0) out.terms_.erase(name);
  }
  return out;
}

ParamExpr ParamExpr::operator-(const ParamExpr &other) const { return *this + (-other); }

ParamExpr ParamExpr::operator*(double factor) const {
  ParamExpr out;
  out.constant_ = constant_ * factor;
  if (out.constant_ == 0.0) out.constant_ = 0.0;  // no negative zero
  if (factor == 0.0) return out;
  for (const auto &[name, coeff] : terms_) out.terms_[name] = coeff * factor;
  return out;
}

// ---------------------------------------------------------------------------
// Gates

namespace {

struct GateSpec {
  GateKind kind;
  std::string_view name;
  int arity;
  int params;
};

constexpr std::array<GateSpec, 11> kGateSpecs = {{
    {GateKind::kRz, "rz", 1, 1},
    {GateKind::kSx, "sx", 1, 0},
    {GateKind::kX, "x", 1, 0},
    {GateKind::kH, "h", 1, 0},
    {GateKind::kRx, "rx", 1, 1},
    {GateKind::kCx, "cx", 2, 0},
    {GateKind::kRzx, "rzx", 2, 1},
    {GateKind::kRzz, "rzz", 2, 1},
    {GateKind::kSwap, "swap", 2, 0},
    {GateKind::kPhaseSwap, "phase_swap", 2, 1},
    {GateKind::kMeasure, "measure", 1, 0},
}};

const GateSpec &spec_of(GateKind kind) {
  return kGateSpecs[static_cast<std::size_t>(kind)];
}

}  // namespace

std::string_view gate_name(GateKind kind) { return spec_of(kind).name; }

GateKind gate_kind(std::string_view name) {
  for (const auto &s : kGateSpecs) {
    if (s.name == name) return s.kind;
  }
  throw Error("unknown gate '" + std::string(name) + "'");
}

int gate_arity(GateKind kind) { return spec_of(kind).arity; }
int gate_param_count(GateKind kind) { return spec_of(kind).params; }
bool is_two_qubit(GateKind kind) { return spec_of(kind).arity == 2; }

Gate::Gate(GateKind kind_, std::vector<int> qubits_, std::vector<ParamExpr> params_)
    : kind(kind_), qubits(std::move(qubits_)), params(std::move(params_)) {
  const GateSpec &s = spec_of(kind);
  if (static_cast<int>(qubits.size()) != s.arity) {
    throw Error("gate '" + std::string(s.name) + "' acts on " + std::to_string(s.arity) +
                " qubit(s), got " + std::to_string(qubits.size()));
  }
  if (static_cast<int>(params.size()) != s.params) {
    throw Error("gate '" + std::string(s.name) + "' takes " + std::to_string(s.params) +
                " parameter(s), got " + std::to_string(params.size()));
  }
  for (int q : qubits) {
    if (q < 0) throw Error("negative qubit index");
  }
  if (s.arity == 2 && qubits[0] == qubits[1]) {
    throw Error("gate '" + std::string(s.name) + "' needs distinct qubits");
  }
}

bool Gate::has_literal_params() const {
  return std::all_of(params.begin(), params.end(),
                     [](const ParamExpr &p) { return p.is_literal(); });
}

std::vector<Gate> inverse(const Gate &g) {
  const double pi = std::numbers::pi;
  switch (g.kind) {
    case GateKind::kRz:
    case GateKind::kRx:
    case GateKind::kRzx:
    case GateKind::kRzz:
    case GateKind::kPhaseSwap:
      return {Gate(g.kind, g.qubits, {-g.params[0]})};
    case GateKind::kSx:
      // Z sx Z = sx^dagger up to phase.
      return {Gate::rz(g.qubits[0], pi), Gate::sx(g.qubits[0]), Gate::rz(g.qubits[0], pi)};
    case GateKind::kX:
    case GateKind::kH:
    case GateKind::kCx:
    case GateKind::kSwap:
      return {g};
    case GateKind::kMeasure:
      break;
  }
  throw Error("measurement has no inverse");
}

Gate bind(const Gate &g, const Binding &binding) {
  Gate out = g;
  for (auto &p : out.params) p = ParamExpr(p.evaluate(binding));
  return out;
}

// ---------------------------------------------------------------------------
// DAG view

CircuitDag::CircuitDag(int num_qubits, const std::vector<Gate> &gates)
    : wires_(static_cast<std::size_t>(num_qubits)), position_(gates.size()), gates_(&gates) {
  for (std::size_t i = 0; i < gates.size(); ++i) {
    for (int q : gates[i].qubits) {
      position_[i].push_back(wires_[q].size());
      wires_[q].push_back(i);
    }
  }
}

namespace {
std::size_t slot_of(const Gate &g, int qubit) {
  for (std::size_t k = 0; k < g.qubits.size(); ++k) {
    if (g.qubits[k] == qubit) return k;
  }
  throw Error("gate does not act on qubit " + std::to_string(qubit));
}
}  // namespace

std::optional<std::size_t> CircuitDag::successor(std::size_t index, int qubit) const {
  const std::size_t pos = position_[index][slot_of((*gates_)[index], qubit)];
  const auto &w = wires_[qubit];
  if (pos + 1 < w.size()) return w[pos + 1];
  return std::nullopt;
}

std::optional<std::size_t> CircuitDag::predecessor(std::size_t index, int qubit) const {
  const std::size_t pos = position_[index][slot_of((*gates_)[index], qubit)];
  if (pos == 0) return std::nullopt;
  return wires_[qubit][pos - 1];
}

std::optional<std::size_t> CircuitDag::front(int qubit) const {
  if (wires_[qubit].empty()) return std::nullopt;
  return wires_[qubit].front();
}

// ---------------------------------------------------------------------------
// Circuit

Circuit::Circuit(int num_qubits) : num_qubits_(num_qubits) {
  if (num_qubits <= 0) throw Error("circuit needs at least one qubit");
}

Circuit::Circuit(int num_qubits, std::vector<Gate> gates) : Circuit(num_qubits) {
  gates_.reserve(gates.size());
  for (auto &g : gates) append(std::move(g));
}

Circuit &Circuit::append(Gate g) {
  for (int q : g.qubits) {
    if (q >= num_qubits_) {
      throw Error("qubit index " + std::to_string(q) + " out of range for " +
                  std::to_string(num_qubits_) + "-qubit circuit");
    }
  }
  gates_.push_back(std::move(g));
  return *this;
}

Circuit &Circuit::append(const Circuit &other) {
  for (const auto &g : other.gates()) append(g);
  return *this;
}

std::size_t Circuit::count(GateKind kind) const {
  return static_cast<std::size_t>(
      std::count_if(gates_.begin(), gates_.end(), [kind](const Gate &g) { return g.kind == kind; }));
}

std::set<std::string> Circuit::parameter_names() const {
  std::set<std::string> out;
  for (const auto &g : gates_) {
    for (const auto &p : g.params) out.merge(p.names());
  }
  return out;
}

Circuit inverse(const Circuit &c) {
  Circuit out(c.num_qubits());
  for (auto it = c.gates().rbegin(); it != c.gates().rend(); ++it) {
    for (auto &g : inverse(*it)) out.append(std::move(g));
  }
  return out;
}

Circuit bind(const Circuit &c, const Binding &binding) {
  Circuit out(c.num_qubits());
  for (const auto &g : c.gates()) out.append(bind(g, binding));
  return out;
}

MeasuredCircuit strip_measurements(const Circuit &c) {
  MeasuredCircuit out{Circuit(c.num_qubits()), {}};
  std::vector<bool> measured(static_cast<std::size_t>(c.num_qubits()), false);
  for (const auto &g : c.gates()) {
    if (g.kind == GateKind::kMeasure) {
      measured[g.qubits[0]] = true;
      out.measured.push_back(g.qubits[0]);
      continue;
    }
    for (int q : g.qubits) {
      if (measured[q]) throw Error("mid-circuit measurement is not supported");
    }
    out.body.append(g);
  }
  return out;
}

}  // namespace pet
