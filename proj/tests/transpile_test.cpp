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

#include "pet/transpile.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "pet/io.hpp"
#include "pet/kak.hpp"
#include "pet/pulse.hpp"
#include "pet/unitary.hpp"
#include "test_util.hpp"

namespace pet {
namespace {

constexpr double kPi = std::numbers::pi;

double distance(const Circuit &a, const Circuit &b) {
  return phase_distance(circuit_unitary(a), circuit_unitary(b));
}

Circuit qaoa_line3() {
  return circuit_from_json(read_json_file(fixture_dir() + "/circuits/qaoa_line3.json"));
}

// Parametric controlled-phase style template used for the equation-system
// checks.
Template cz_template() {
  const auto t = ParamExpr::parameter("theta");
  Circuit c(2);
  c.append(Gate::rz(0, -t));
  c.append(Gate::rz(1, -t));
  c.append(Gate::rzz(0, 1, t));
  c.append(Gate::rzz(0, 1, -t));
  c.append(Gate::rz(1, t));
  c.append(Gate::rz(0, t));
  return Template("cz", c);
}

// Random circuit with cx-rz-cx motifs, swaps and 1q gates.
// With `line` every 2q block acts on neighbouring qubits.
Circuit random_motif_circuit(int n, int blocks, std::mt19937_64 &rng, int kinds = 6,
                             bool line = false) {
  std::uniform_int_distribution<int> pick(0, kinds - 1);
  std::uniform_int_distribution<int> qubit(0, n - 1);
  std::uniform_real_distribution<double> angle(-3.0, 3.0);
  Circuit c(n);
  for (int i = 0; i < blocks; ++i) {
    const int a = qubit(rng);
    int b = qubit(rng);
    while (b == a || (line && std::abs(a - b) != 1)) b = qubit(rng);
    switch (pick(rng)) {
      case 0:
        c.append(Gate::cx(a, b));
        c.append(Gate::rz(b, angle(rng)));
        c.append(Gate::cx(a, b));
        break;
      case 1:
        c.append(Gate::cx(a, b));
        c.append(Gate::rz(b, angle(rng)));
        c.append(Gate::cx(a, b));
        c.append(Gate::swap(a, b));
        break;
      case 2:
        c.append(Gate::cx(a, b));
        break;
      case 3:
        c.append(Gate::sx(a));
        c.append(Gate::rz(a, angle(rng)));
        break;
      case 4:
        c.append(Gate::h(b));
        c.append(Gate::x(a));
        break;
      default:
        c.append(Gate::rzx(a, b, angle(rng)));
        break;
    }
  }
  return c;
}

TEST(CostModel, StandardDictionary) {
  const CostModel cm = CostModel::standard();
  const std::map<std::string, int> expected{{"sx", 1}, {"x", 1},    {"rz", 0},        {"cx", 2},
                                            {"rzz", 0}, {"swap", 6}, {"phase_swap", 0}};
  EXPECT_EQ(cm.weights, expected);
  EXPECT_EQ(cm.cost(Gate::h(0)), cm.unknown_weight);
  EXPECT_EQ(cm.cost({Gate::cx(0, 1), Gate::rz(1, 0.3), Gate::cx(0, 1)}), 4);
}

TEST(Template, RegistrationRejectsNonIdentity) {
  Circuit c(2);
  c.append(Gate::cx(0, 1));
  c.append(Gate::rz(1, ParamExpr::parameter("t")));
  EXPECT_THROW(Template("bad", c), Error);
  EXPECT_NO_THROW(cz_template());
  EXPECT_EQ(rzz_template().size(), 4u);
  EXPECT_EQ(phase_swap_template().size(), 5u);
  EXPECT_EQ(&template_by_name("rzz"), &rzz_template());
  EXPECT_THROW(template_by_name("ccx"), Error);
}

TEST(SolveLinear, AcceptedSystem) {
  const auto t = ParamExpr::parameter("theta");
  const auto b = solve_linear({{-t, -2.0}, {-t, -2.0}, {t, 2.0}});
  ASSERT_TRUE(b.has_value());
  EXPECT_NEAR(b->at("theta"), 2.0, 1e-12);
}

TEST(SolveLinear, InconsistentSystem) {
  const auto t = ParamExpr::parameter("theta");
  EXPECT_FALSE(solve_linear({{-t, 3.0}, {-t, 3.0}, {t, 3.0}}).has_value());
}

TEST(SolveLinear, ParameterFree) {
  const auto b = solve_linear({{ParamExpr(1.0), 1.0}});
  ASSERT_TRUE(b.has_value());
  EXPECT_TRUE(b->empty());
  EXPECT_FALSE(solve_linear({{ParamExpr(1.0), 2.0}}).has_value());
  EXPECT_TRUE(solve_linear({}).has_value());
}

TEST(SolveLinear, Underdetermined) {
  const auto s = ParamExpr::parameter("s");
  const auto t = ParamExpr::parameter("t");
  EXPECT_FALSE(solve_linear({{s + t, 1.0}}).has_value());
  const auto b = solve_linear({{s + t, 1.0}, {s - t, 0.5}});
  ASSERT_TRUE(b.has_value());
  EXPECT_NEAR(b->at("s"), 0.75, 1e-12);
  EXPECT_NEAR(b->at("t"), 0.25, 1e-12);
}

TEST(SolveBindings, TentativeMatches) {
  const Template t = cz_template();
  Circuit c(2);
  c.append(Gate::rz(0, -2.0));
  c.append(Gate::rz(1, -2.0));
  c.append(Gate::rzz(0, 1, 2.0));
  c.append(Gate::rz(0, 3.0));
  c.append(Gate::rz(1, 3.0));
  c.append(Gate::rzz(0, 1, 3.0));
  MatchCandidate first{&t, {{0, 0}, {1, 1}, {2, 2}}, {{0, 0}, {1, 1}}};
  const auto b = solve_bindings(first, c);
  ASSERT_TRUE(b.has_value());
  EXPECT_NEAR(b->at("theta"), 2.0, 1e-12);
  MatchCandidate second{&t, {{0, 3}, {1, 4}, {2, 5}}, {{0, 0}, {1, 1}}};
  EXPECT_FALSE(solve_bindings(second, c).has_value());
}

TEST(TemplateSubstitute, CxRzCxBecomesRzz) {
  Circuit c(2);
  c.append(Gate::cx(0, 1));
  c.append(Gate::rz(1, 0.8));
  c.append(Gate::cx(0, 1));
  const Circuit out = template_substitute(c, rzz_template(), CostModel::standard());
  ASSERT_EQ(out.size(), 1u);
  EXPECT_EQ(out.gates()[0].kind, GateKind::kRzz);
  EXPECT_NEAR(out.gates()[0].params[0].constant(), 0.8, 1e-12);
  EXPECT_LT(distance(c, out), 1e-9);
}

TEST(TemplateSubstitute, NoCxUnchanged) {
  Circuit c(2);
  c.append(Gate::rz(1, 0.8));
  c.append(Gate::sx(0));
  c.append(Gate::rzz(0, 1, 0.3));
  const Circuit out =
      template_substitute(c, {&rzz_template(), &phase_swap_template()}, CostModel::standard());
  EXPECT_EQ(out, c);
}

TEST(TemplateSubstitute, CostTieKeepsCircuit) {
  CostModel cm = CostModel::standard();
  cm.weights["cx"] = 0;
  Circuit c(2);
  c.append(Gate::cx(0, 1));
  c.append(Gate::rz(1, 0.8));
  c.append(Gate::cx(0, 1));
  EXPECT_EQ(template_substitute(c, rzz_template(), cm), c);
}

TEST(TemplateSubstitute, ReversedTargetAndInterleavedGate) {
  Circuit c(3);
  c.append(Gate::cx(2, 0));
  c.append(Gate::sx(1));
  c.append(Gate::rz(0, -1.1));
  c.append(Gate::cx(2, 0));
  c.append(Gate::x(1));
  const Circuit out = template_substitute(c, rzz_template(), CostModel::standard());
  EXPECT_EQ(out.count(GateKind::kCx), 0u);
  EXPECT_EQ(out.count(GateKind::kRzz), 1u);
  EXPECT_LT(distance(c, out), 1e-9);
}

TEST(TemplateSubstitute, NonConvexMatchRejected) {
  // the cx on (1, 2) sits between the two cx of the motif on wire 1
  Circuit c(3);
  c.append(Gate::cx(0, 1));
  c.append(Gate::cx(1, 2));
  c.append(Gate::rz(1, 0.4));
  c.append(Gate::cx(0, 1));
  const Circuit out = template_substitute(c, rzz_template(), CostModel::standard());
  EXPECT_LT(distance(c, out), 1e-9);
  EXPECT_EQ(out.count(GateKind::kRzz), 0u);
}

TEST(TemplateSubstitute, WorkedExample) {
  const Circuit c = qaoa_line3();
  const Circuit out =
      template_substitute(c, {&rzz_template(), &phase_swap_template()}, CostModel::standard());
  EXPECT_EQ(out.count(GateKind::kCx), 0u);
  EXPECT_EQ(out.count(GateKind::kSwap), 0u);
  EXPECT_EQ(out.count(GateKind::kRzz), 1u);
  EXPECT_EQ(out.count(GateKind::kPhaseSwap), 1u);
  for (const auto &g : out.gates()) {
    if (g.kind == GateKind::kPhaseSwap) EXPECT_NEAR(g.params[0].constant(), 1.4, 1e-12);
    if (g.kind == GateKind::kRzz) EXPECT_NEAR(g.params[0].constant(), -0.7, 1e-12);
  }
  EXPECT_LT(distance(c, out), 1e-9);
}

TEST(TemplateSubstitute, PropertyRandomCircuits) {
  std::mt19937_64 rng(11);
  const CostModel cm = CostModel::standard();
  const std::vector<const Template *> ts{&rzz_template(), &phase_swap_template()};
  for (int trial = 0; trial < 60; ++trial) {
    const int n = 2 + trial % 4;
    Circuit c = random_motif_circuit(n, 8, rng);
    // drop rzx / h so the cost is finite and comparable
    Circuit lowered = cancel_cx_pairs(lower_to_cx(c, true));
    const Circuit out = template_substitute(lowered, ts, cm);
    EXPECT_LT(distance(lowered, out), 1e-9) << "trial " << trial;
    EXPECT_LE(cm.cost(out.gates()), cm.cost(lowered.gates()));
  }
}

TEST(ExpandMarkers, RzzEchoedForm) {
  Circuit c(2);
  c.append(Gate::rzz(0, 1, 0.9));
  const Circuit out = expand_markers(c);
  const std::vector<GateKind> expected{GateKind::kRz,  GateKind::kSx, GateKind::kRz,
                                       GateKind::kRzx, GateKind::kX,  GateKind::kRzx,
                                       GateKind::kX,   GateKind::kRz, GateKind::kSx,
                                       GateKind::kRz};
  ASSERT_EQ(out.size(), expected.size());
  for (std::size_t i = 0; i < expected.size(); ++i) EXPECT_EQ(out.gates()[i].kind, expected[i]);
  EXPECT_NEAR(out.gates()[3].params[0].constant(), 0.45, 1e-12);
  EXPECT_NEAR(out.gates()[5].params[0].constant(), -0.45, 1e-12);
  EXPECT_LT(distance(c, out), 1e-9);
}

TEST(ExpandMarkers, UnitaryGrid) {
  for (double theta = -6.0; theta <= 6.0; theta += 0.37) {
    for (GateKind kind : {GateKind::kRzz, GateKind::kPhaseSwap}) {
      Circuit c(3);
      c.append(Gate(kind, {2, 0}, {ParamExpr(theta)}));
      const Circuit out = expand_markers(c);
      EXPECT_LT(distance(c, out), 1e-9) << theta;
      EXPECT_EQ(out.count(kind), 0u);
      for (const auto &g : out.gates()) {
        if (g.kind == GateKind::kRzx) EXPECT_LE(std::abs(g.params[0].constant()), kPi / 4 + 1e-12);
      }
    }
  }
}

TEST(ExpandMarkers, SwapAndPassThrough) {
  Circuit c(2);
  c.append(Gate::swap(1, 0));
  c.append(Gate::rzx(0, 1, 0.2));
  const Circuit out = expand_markers(c);
  EXPECT_EQ(out.count(GateKind::kSwap), 0u);
  EXPECT_EQ(out.count(GateKind::kCx), 3u);
  EXPECT_EQ(out.count(GateKind::kRzx), 1u);
  EXPECT_LT(distance(c, out), 1e-9);

  Circuit sym(2);
  sym.append(Gate::rzz(0, 1, ParamExpr::parameter("g")));
  EXPECT_THROW(expand_markers(sym), Error);
}

TEST(LegalizeRzx, AnglesWithinQuarterTurn) {
  for (double phi = -6.2; phi <= 6.2; phi += 0.1) {
    Circuit c(2);
    c.append(Gate::rzx(1, 0, phi));
    const Circuit out = legalize_rzx(c);
    EXPECT_LT(distance(c, out), 1e-9) << phi;
    for (const auto &g : out.gates()) {
      if (g.kind == GateKind::kRzx) EXPECT_LE(std::abs(g.params[0].constant()), kPi / 4 + 1e-12);
    }
  }
  Circuit bad(2);
  bad.append(Gate::rzx(0, 1, 2 * kPi));
  EXPECT_THROW(legalize_rzx(bad), Error);
}

TEST(Simplify1q, Examples) {
  Circuit xx(1);
  xx.append(Gate::x(0));
  xx.append(Gate::x(0));
  EXPECT_TRUE(simplify_1q(xx).empty());

  Circuit u11(1);
  u11.append(Gate::rz(0, kPi / 2));
  u11.append(Gate::sx(0));
  u11.append(Gate::rz(0, kPi / 2));
  EXPECT_EQ(simplify_1q(u11), u11);
}

TEST(Simplify1q, RandomRuns) {
  std::mt19937_64 rng(5);
  std::uniform_int_distribution<int> pick(0, 4);
  std::uniform_real_distribution<double> angle(-kPi, kPi);
  for (int trial = 0; trial < 200; ++trial) {
    Circuit c(1);
    for (int i = 0; i < 6; ++i) {
      switch (pick(rng)) {
        case 0: c.append(Gate::rz(0, angle(rng))); break;
        case 1: c.append(Gate::sx(0)); break;
        case 2: c.append(Gate::x(0)); break;
        case 3: c.append(Gate::h(0)); break;
        default: c.append(Gate::rx(0, angle(rng))); break;
      }
    }
    const Circuit out = simplify_1q(c);
    EXPECT_LE(out.size(), 5u);
    EXPECT_LT(distance(c, out), 1e-9);
    EXPECT_EQ(simplify_1q(out), out);
  }
}

TEST(Simplify1q, IdempotentOnCircuits) {
  std::mt19937_64 rng(17);
  for (int trial = 0; trial < 40; ++trial) {
    const Circuit c = random_motif_circuit(3, 10, rng);
    const Circuit once = simplify_1q(c);
    EXPECT_LT(distance(c, once), 1e-9);
    EXPECT_EQ(simplify_1q(once), once);
  }
}

TEST(LowerToCx, Equivalence) {
  std::mt19937_64 rng(23);
  for (int trial = 0; trial < 30; ++trial) {
    const Circuit c = random_motif_circuit(3, 8, rng);
    for (bool keep : {false, true}) {
      const Circuit out = lower_to_cx(c, keep);
      EXPECT_LT(distance(c, out), 1e-9);
      EXPECT_EQ(out.count(GateKind::kRzx), 0u);
      EXPECT_EQ(out.count(GateKind::kRzz), 0u);
      if (!keep) EXPECT_EQ(out.count(GateKind::kSwap), 0u);
    }
    const Circuit cnot = cnot_transpile(c);
    EXPECT_LT(distance(c, cnot), 1e-9);
    for (const auto &g : cnot.gates()) {
      EXPECT_TRUE(g.kind == GateKind::kCx || g.kind == GateKind::kRz || g.kind == GateKind::kSx ||
                  g.kind == GateKind::kX);
    }
  }
}

TEST(CancelCxPairs, AdjacentPairsOnly) {
  Circuit c(3);
  c.append(Gate::cx(0, 1));
  c.append(Gate::cx(0, 1));
  c.append(Gate::cx(1, 2));
  c.append(Gate::rz(2, 0.1));
  c.append(Gate::cx(1, 2));
  c.append(Gate::cx(2, 1));
  c.append(Gate::cx(2, 1));
  const Circuit out = cancel_cx_pairs(c);
  EXPECT_EQ(out.size(), 3u);
  EXPECT_LT(distance(c, out), 1e-9);
}

// Between two 2q pulses on a wire at most one non-virtual 1q gate.
void expect_one_pulse_between_cr(const Circuit &c) {
  std::vector<int> since(c.num_qubits(), -1);  // -1: no cr seen yet
  for (const auto &g : c.gates()) {
    if (g.qubits.size() == 2) {
      for (int q : g.qubits) {
        EXPECT_LE(since[q], 1);
        since[q] = 0;
      }
    } else if (g.qubits.size() == 1 && g.kind != GateKind::kRz && since[g.qubits[0]] >= 0) {
      ++since[g.qubits[0]];
    }
  }
}

TEST(Pipeline, WorkedExampleSchedule) {
  const BackendModel b = load_fixture_backend("line10");
  const ScheduledCircuit s = pulse_efficient_pipeline(qaoa_line3(), b);
  EXPECT_EQ(s.circuit.count(GateKind::kRzx), 8u);
  std::size_t cr = 0;
  for (const auto &e : s.schedule.entries()) cr += e.kind == EntryKind::kCr;
  EXPECT_EQ(cr, 8u);
  EXPECT_LT(distance(qaoa_line3(), s.circuit), 1e-9);
  expect_one_pulse_between_cr(s.circuit);
}

TEST(Pipeline, SingleCxUnchanged) {
  const BackendModel b = load_fixture_backend("mumbai_q1_q2");
  Circuit c(2);
  c.append(Gate::cx(0, 1));
  const ScheduledCircuit s = pulse_efficient_pipeline(c, b);
  EXPECT_EQ(s.circuit, c);
  EXPECT_EQ(s.total_duration(), b.cnot_samples(*b.edge(0, 1)));
}

TEST(Pipeline, ScaledRzzShorterThanDoubleCnot) {
  const BackendModel b = load_fixture_backend("mumbai_q1_q2");
  Circuit c(2);
  c.append(Gate::cx(0, 1));
  c.append(Gate::rz(1, kPi / 2));
  c.append(Gate::cx(0, 1));
  const ScheduledCircuit pe = pulse_efficient_pipeline(c, b);
  const ScheduledCircuit cn = cnot_pipeline(c, b);
  EXPECT_EQ(cn.circuit.count(GateKind::kCx), 2u);
  EXPECT_LT(pe.total_duration(), cn.total_duration());
  EXPECT_LT(distance(c, pe.circuit), 1e-9);
  EXPECT_LT(distance(c, cn.circuit), 1e-9);
}

TEST(Pipeline, Errors) {
  const BackendModel b = load_fixture_backend("line10");
  Circuit c(3);
  c.append(Gate::cx(0, 2));
  EXPECT_THROW(pulse_efficient_pipeline(c, b), Error);
  EXPECT_THROW(cnot_pipeline(c, b), Error);
}

TEST(Pipeline, RandomEquivalence) {
  const BackendModel b = load_fixture_backend("line10");
  std::mt19937_64 rng(29);
  for (int trial = 0; trial < 50; ++trial) {
    const int n = 3 + trial % 3;
    // motif-only circuits carry no user 1q gates between the 2q blocks
    const bool motifs_only = trial % 2 == 0;
    Circuit c(n);
    if (motifs_only) {
      for (int q = 0; q < n; ++q) c.append(Gate::h(q));
    }
    const Circuit raw = random_motif_circuit(n, 10, rng, motifs_only ? 2 : 6, true);
    for (const auto &g : raw.gates()) c.append(g);
    const ScheduledCircuit s = pulse_efficient_pipeline(c, b);
    EXPECT_LT(distance(c, s.circuit), 1e-9) << "trial " << trial;
    if (motifs_only) expect_one_pulse_between_cr(s.circuit);
  }
}

}  // namespace
}  // namespace pet
