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

#pragma once

#include <cstddef>
#include <map>
#include <optional>
#include <set>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace pet {

/// Base class for every domain error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Syntax error inside a parameter expression; `offset` is a byte offset
/// into the parsed text.
class ExprSyntaxError : public Error {
 public:
  ExprSyntaxError(std::size_t offset, const std::string &message)
      : Error(message), offset_(offset) {}
  std::size_t offset() const { return offset_; }

 private:
  std::size_t offset_;
};

using Binding = std::map<std::string, double>;

/**
 * Linear parameter expression `sum_i a_i * p_i + b`.
 *
 * Products of two parameters are rejected at construction time, which keeps
 * template matching a linear least-squares problem.
 */
class ParamExpr {
 public:
  ParamExpr() = default;
  ParamExpr(double constant) : constant_(constant) {}  // NOLINT: literal

  static ParamExpr parameter(const std::string &name, double coefficient = 1.0);

  /// Parses text such as "2*gamma + 0.5" or "-pi/2". `pi` is reserved.
  static ParamExpr parse(std::string_view text);
  /// Parses a prefix of `text` starting at `pos`; stops before the first
  /// character that cannot continue the expression (e.g. ',' or ')').
  static ParamExpr parse_prefix(std::string_view text, std::size_t &pos);

  bool is_literal() const { return terms_.empty(); }
  double constant() const { return constant_; }
  const std::map<std::string, double> &terms() const { return terms_; }
  std::set<std::string> names() const;

  /// Throws Error when a parameter is missing from the binding.
  double evaluate(const Binding &binding = {}) const;

  /// Lossless textual form; `parse(to_string())` reproduces the expression.
  std::string to_string() const;

  ParamExpr operator-() const;
  ParamExpr operator+(const ParamExpr &other) const;
  ParamExpr operator-(const ParamExpr &other) const;
  ParamExpr operator*(double factor) const;

  bool operator==(const ParamExpr &other) const = default;

 private:
  std::map<std::string, double> terms_;
  double constant_ = 0.0;
};

enum class GateKind {
  kRz,
  kSx,
  kX,
  kH,
  kRx,
  kCx,
  kRzx,
  kRzz,
  kSwap,
  kPhaseSwap,
  kMeasure,
};

std::string_view gate_name(GateKind kind);
/// Throws Error for names outside the gate alphabet.
GateKind gate_kind(std::string_view name);
int gate_arity(GateKind kind);
int gate_param_count(GateKind kind);
bool is_two_qubit(GateKind kind);

struct Gate {
  GateKind kind;
  std::vector<int> qubits;
  std::vector<ParamExpr> params;

  /// Validates arity, parameter count and qubit distinctness.
  Gate(GateKind kind, std::vector<int> qubits, std::vector<ParamExpr> params = {});

  std::string_view name() const { return gate_name(kind); }
  bool has_literal_params() const;
  bool operator==(const Gate &other) const = default;

  static Gate rz(int q, ParamExpr theta) { return {GateKind::kRz, {q}, {std::move(theta)}}; }
  static Gate rx(int q, ParamExpr theta) { return {GateKind::kRx, {q}, {std::move(theta)}}; }
  static Gate sx(int q) { return {GateKind::kSx, {q}}; }
  static Gate x(int q) { return {GateKind::kX, {q}}; }
  static Gate h(int q) { return {GateKind::kH, {q}}; }
  static Gate cx(int c, int t) { return {GateKind::kCx, {c, t}}; }
  static Gate rzx(int c, int t, ParamExpr theta) {
    return {GateKind::kRzx, {c, t}, {std::move(theta)}};
  }
  static Gate rzz(int a, int b, ParamExpr theta) {
    return {GateKind::kRzz, {a, b}, {std::move(theta)}};
  }
  static Gate swap(int a, int b) { return {GateKind::kSwap, {a, b}}; }
  static Gate phase_swap(int a, int b, ParamExpr theta) {
    return {GateKind::kPhaseSwap, {a, b}, {std::move(theta)}};
  }
  static Gate measure(int q) { return {GateKind::kMeasure, {q}}; }
};

/// Gate sequence whose product is the inverse of `g` (up to global phase).
/// Throws Error for measurements.
std::vector<Gate> inverse(const Gate &g);

/// Gate with every parameter evaluated under `binding`.
Gate bind(const Gate &g, const Binding &binding);

/// Per-wire view of a circuit: for every qubit the indices of the gates that
/// touch it, in list order.
class CircuitDag {
 public:
  CircuitDag(int num_qubits, const std::vector<Gate> &gates);

  const std::vector<std::size_t> &wire(int qubit) const { return wires_[qubit]; }
  /// Next gate on `qubit`'s wire after gate `index`, if any.
  std::optional<std::size_t> successor(std::size_t index, int qubit) const;
  std::optional<std::size_t> predecessor(std::size_t index, int qubit) const;
  /// First gate on the wire, if any.
  std::optional<std::size_t> front(int qubit) const;

 private:
  std::vector<std::vector<std::size_t>> wires_;
  // position_[gate][k] = position of gate on the wire of its k-th qubit
  std::vector<std::vector<std::size_t>> position_;
  const std::vector<Gate> *gates_;
};

class Circuit {
 public:
  explicit Circuit(int num_qubits);
  Circuit(int num_qubits, std::vector<Gate> gates);

  int num_qubits() const { return num_qubits_; }
  const std::vector<Gate> &gates() const { return gates_; }
  std::size_t size() const { return gates_.size(); }
  bool empty() const { return gates_.empty(); }

  /// Throws Error when a qubit index is out of range.
  Circuit &append(Gate g);
  Circuit &append(const Circuit &other);

  CircuitDag dag() const { return CircuitDag(num_qubits_, gates_); }

  std::size_t count(GateKind kind) const;
  std::set<std::string> parameter_names() const;
  bool operator==(const Circuit &other) const = default;

 private:
  int num_qubits_;
  std::vector<Gate> gates_;
};

/// Gate-wise inverse in reverse order.
Circuit inverse(const Circuit &c);
Circuit bind(const Circuit &c, const Binding &binding);

/// Splits trailing measurements off a circuit.  Throws Error if a
/// measurement is followed by another gate on the same qubit.
struct MeasuredCircuit {
  Circuit body;
  std::vector<int> measured;
};
MeasuredCircuit strip_measurements(const Circuit &c);

}  // namespace pet
