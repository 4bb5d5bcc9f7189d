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

#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "pet/pulse.hpp"
#include "pet/qcore.hpp"

namespace pet {

/// Integer gate weights; names without an entry cost `unknown_weight`.
struct CostModel {
  std::map<std::string, int> weights;
  int unknown_weight = 1000;

  /// {sx:1, x:1, rz:0, cx:2, rzz:0, swap:6, phase_swap:0}
  static CostModel standard();
  int cost(const Gate &g) const;
  int cost(const std::vector<Gate> &gates) const;
};

/// A gate sequence that multiplies to the identity (up to phase) for every
/// binding of its parameters.
class Template {
 public:
  /// Checks the identity on 5 seeded random bindings (tolerance 1e-9) and
  /// throws Error if it fails.
  Template(std::string name, Circuit circuit);

  const std::string &name() const { return name_; }
  const Circuit &circuit() const { return circuit_; }
  std::size_t size() const { return circuit_.size(); }

 private:
  std::string name_;
  Circuit circuit_;
};

/// cx(0,1), rz(theta) on 1, cx(0,1), rzz(-theta).
const Template &rzz_template();
/// cx(0,1), rz(theta) on 1, cx(0,1), swap(0,1), phase_swap(-theta).
const Template &phase_swap_template();
/// Looks up "rzz" or "phase_swap"; throws Error for other names.
const Template &template_by_name(const std::string &name);

struct MatchCandidate {
  const Template *tmpl = nullptr;
  /// (template gate index, circuit gate index), template indices contiguous
  /// and increasing.
  std::vector<std::pair<std::size_t, std::size_t>> pairs;
  /// template qubit -> circuit qubit
  std::map<int, int> qubits;
};

/// One equation per matched parameterised gate; nullopt when the system is
/// rank deficient or its least-squares residual exceeds 1e-9.
std::optional<Binding> solve_bindings(const MatchCandidate &m, const Circuit &c);

/// Same solver on explicit equations expr == value.
std::optional<Binding> solve_linear(const std::vector<std::pair<ParamExpr, double>> &equations);

Circuit template_substitute(const Circuit &c, const Template &t, const CostModel &cm);
/// Longest valid match over all templates at each anchor, left to right.
Circuit template_substitute(const Circuit &c, const std::vector<const Template *> &templates,
                            const CostModel &cm);

/// Rewrites rzz and phase_swap into echoed rzx blocks with Clifford
/// dressing and a plain swap, or a zero-angle phase_swap, into three cx;
/// other gates pass through.
Circuit expand_markers(const Circuit &c);

/// Splits rzx(phi) with |phi| > pi/4 into an echoed pair after wrapping phi
/// into [-pi/2, pi/2].  Throws Error when |phi| >= 2 pi.
Circuit legalize_rzx(const Circuit &c);

/// Collapses maximal 1q runs into the canonical Euler form.  Runs already
/// in canonical form are kept verbatim, which makes the pass idempotent.
Circuit simplify_1q(const Circuit &c);

/// Lowers rzz, phase_swap, rzx, h and rx to {cx, rz, sx, x}; swap is kept
/// when `keep_swap`.
Circuit lower_to_cx(const Circuit &c, bool keep_swap);

/// Removes pairs of identical cx gates with nothing between them on either
/// wire, until none remain.
Circuit cancel_cx_pairs(const Circuit &c);

struct PipelineOptions {
  std::vector<const Template *> templates = {&rzz_template(), &phase_swap_template()};
  CostModel cost = CostModel::standard();
};

/// template_substitute, expand_markers and legalize_rzx, then
/// cancel_cx_pairs and simplify_1q repeated until the circuit is stable.
Circuit pulse_efficient_transpile(const Circuit &c, const PipelineOptions &opt = {});
/// lower_to_cx, then cancel_cx_pairs and simplify_1q repeated until the
/// circuit is stable.
Circuit cnot_transpile(const Circuit &c);

/// Transpiles then schedules; trailing measurements are dropped.  Throws
/// Error for 2q gates on uncoupled pairs.
ScheduledCircuit pulse_efficient_pipeline(const Circuit &c, const BackendModel &b,
                                          const PipelineOptions &opt = {});
ScheduledCircuit cnot_pipeline(const Circuit &c, const BackendModel &b);

}  // namespace pet
