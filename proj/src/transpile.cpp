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

#include <Eigen/QR>
#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>
#include <set>

#include "pet/kak.hpp"
#include "pet/unitary.hpp"

namespace pet {

namespace {

constexpr double kPi = std::numbers::pi;
constexpr double kResidualTol = 1e-9;

bool is_1q_unitary(const Gate &g) { return g.qubits.size() == 1 && g.kind != GateKind::kMeasure; }

void require_literal(const Gate &g) {
  if (!g.has_literal_params()) {
    throw Error("unbound parameter on " + std::string(g.name()) + "; bind the circuit first");
  }
}

Gate remap(const Gate &g, int a, int b) {
  Gate out = g;
  for (int &q : out.qubits) q = q == 0 ? a : b;
  return out;
}

void append_mapped(std::vector<Gate> &out, const Circuit &c, int a, int b) {
  for (const auto &g : c.gates()) out.push_back(remap(g, a, b));
}

}  // namespace

// ---------------------------------------------------------------------------
// Costs and templates

CostModel CostModel::standard() {
  return {{{"sx", 1}, {"x", 1}, {"rz", 0}, {"cx", 2}, {"rzz", 0}, {"swap", 6}, {"phase_swap", 0}},
          1000};
}

int CostModel::cost(const Gate &g) const {
  const auto it = weights.find(std::string(g.name()));
  return it == weights.end() ? unknown_weight : it->second;
}

int CostModel::cost(const std::vector<Gate> &gates) const {
  int total = 0;
  for (const auto &g : gates) total += cost(g);
  return total;
}

Template::Template(std::string name, Circuit circuit)
    : name_(std::move(name)), circuit_(std::move(circuit)) {
  const auto names = circuit_.parameter_names();
  std::mt19937_64 rng(0x7e3a11);
  std::uniform_real_distribution<double> angle(-kPi, kPi);
  for (int trial = 0; trial < 5; ++trial) {
    Binding b;
    for (const auto &n : names) b[n] = angle(rng);
    const Matrix u = circuit_unitary(circuit_, b);
    const Matrix id = Matrix::Identity(u.rows(), u.cols());
    if (phase_distance(u, id) > 1e-9) {
      throw Error("template " + name_ + " does not compose to the identity");
    }
  }
}

const Template &rzz_template() {
  static const Template t("rzz", [] {
    const auto theta = ParamExpr::parameter("theta");
    Circuit c(2);
    c.append(Gate::cx(0, 1));
    c.append(Gate::rz(1, theta));
    c.append(Gate::cx(0, 1));
    c.append(Gate::rzz(0, 1, -theta));
    return c;
  }());
  return t;
}

const Template &phase_swap_template() {
  static const Template t("phase_swap", [] {
    const auto theta = ParamExpr::parameter("theta");
    Circuit c(2);
    c.append(Gate::cx(0, 1));
    c.append(Gate::rz(1, theta));
    c.append(Gate::cx(0, 1));
    c.append(Gate::swap(0, 1));
    c.append(Gate::phase_swap(0, 1, -theta));
    return c;
  }());
  return t;
}

const Template &template_by_name(const std::string &name) {
  if (name == "rzz") return rzz_template();
  if (name == "phase_swap") return phase_swap_template();
  throw Error("unknown template " + name);
}

// ---------------------------------------------------------------------------
// Bindings

std::optional<Binding> solve_linear(const std::vector<std::pair<ParamExpr, double>> &equations) {
  std::vector<std::string> names;
  for (const auto &[expr, value] : equations) {
    for (const auto &[n, coeff] : expr.terms()) {
      if (std::find(names.begin(), names.end(), n) == names.end()) names.push_back(n);
    }
  }
  std::sort(names.begin(), names.end());
  const auto rows = static_cast<Eigen::Index>(equations.size());
  const auto cols = static_cast<Eigen::Index>(names.size());
  if (cols == 0) {
    for (const auto &[expr, value] : equations) {
      if (std::abs(expr.constant() - value) > kResidualTol) return std::nullopt;
    }
    return Binding{};
  }
  Eigen::MatrixXd a = Eigen::MatrixXd::Zero(rows, cols);
  Eigen::VectorXd rhs(rows);
  for (Eigen::Index r = 0; r < rows; ++r) {
    const auto &[expr, value] = equations[static_cast<std::size_t>(r)];
    for (Eigen::Index k = 0; k < cols; ++k) {
      const auto it = expr.terms().find(names[static_cast<std::size_t>(k)]);
      if (it != expr.terms().end()) a(r, k) = it->second;
    }
    rhs(r) = value - expr.constant();
  }
  Eigen::ColPivHouseholderQR<Eigen::MatrixXd> qr(a);
  if (qr.rank() < cols) return std::nullopt;
  const Eigen::VectorXd x = qr.solve(rhs);
  if ((a * x - rhs).cwiseAbs().maxCoeff() > kResidualTol) return std::nullopt;
  Binding out;
  for (Eigen::Index k = 0; k < cols; ++k) out[names[static_cast<std::size_t>(k)]] = x(k);
  return out;
}

std::optional<Binding> solve_bindings(const MatchCandidate &m, const Circuit &c) {
  std::vector<std::pair<ParamExpr, double>> eqs;
  for (const auto &[ti, ci] : m.pairs) {
    const Gate &tg = m.tmpl->circuit().gates()[ti];
    const Gate &cg = c.gates()[ci];
    for (std::size_t k = 0; k < tg.params.size(); ++k) {
      if (!cg.params[k].is_literal()) return std::nullopt;
      eqs.emplace_back(tg.params[k], cg.params[k].constant());
    }
  }
  return solve_linear(eqs);
}

// ---------------------------------------------------------------------------
// Matching

namespace {

struct Substitution {
  MatchCandidate match;
  std::vector<Gate> replacement;
};

// Extends template gates a, a+1, ... from circuit gate `anchor`, one wire
// successor at a time.  Returns the matched prefix (possibly just the
// anchor).
MatchCandidate extend(const Template &t, std::size_t a, const Circuit &c, const CircuitDag &dag,
                      std::size_t anchor) {
  const auto &tg = t.circuit().gates();
  const auto &cg = c.gates();
  MatchCandidate m;
  m.tmpl = &t;
  std::map<int, std::size_t> last;  // template qubit -> last matched circuit gate
  std::set<int> used;
  auto try_bind = [&](const Gate &tgate, const Gate &cgate) {
    if (tgate.kind != cgate.kind || !cgate.has_literal_params()) return false;
    std::map<int, int> q = m.qubits;
    std::set<int> u = used;
    for (std::size_t k = 0; k < tgate.qubits.size(); ++k) {
      const int tq = tgate.qubits[k];
      const int cq = cgate.qubits[k];
      const auto it = q.find(tq);
      if (it != q.end()) {
        if (it->second != cq) return false;
      } else {
        if (u.count(cq)) return false;
        q[tq] = cq;
        u.insert(cq);
      }
    }
    m.qubits = std::move(q);
    used = std::move(u);
    return true;
  };
  if (!try_bind(tg[a], cg[anchor])) return m;
  m.pairs.emplace_back(a, anchor);
  for (int tq : tg[a].qubits) last[tq] = anchor;
  for (std::size_t j = a + 1; j < tg.size(); ++j) {
    std::optional<std::size_t> cand;
    bool ok = true;
    for (int tq : tg[j].qubits) {
      const auto it = last.find(tq);
      if (it == last.end()) continue;
      const auto s = dag.successor(it->second, m.qubits.at(tq));
      if (!s || (cand && *cand != *s)) {
        ok = false;
        break;
      }
      cand = s;
    }
    if (!ok || !cand) break;
    if (!try_bind(tg[j], cg[*cand])) break;
    m.pairs.emplace_back(j, *cand);
    for (int tq : tg[j].qubits) last[tq] = *cand;
  }
  return m;
}

// Convexity of the matched set; fills the unmatched gates of the span that
// depend on the match.
bool convex(const Circuit &c, const std::set<std::size_t> &matched,
            std::set<std::size_t> &influenced) {
  const auto first = *matched.begin();
  const auto last = *matched.rbegin();
  std::vector<char> touched(c.num_qubits(), 0);
  std::vector<char> dirty(c.num_qubits(), 0);
  for (std::size_t i = first; i <= last; ++i) {
    const Gate &g = c.gates()[i];
    if (matched.count(i)) {
      for (int q : g.qubits) {
        if (dirty[q]) return false;
        touched[q] = 1;
      }
      continue;
    }
    bool dep = false;
    for (int q : g.qubits) dep = dep || touched[q] || dirty[q];
    if (dep) {
      influenced.insert(i);
      for (int q : g.qubits) dirty[q] = 1;
    }
  }
  return true;
}

// Validates the prefix of `m` with `len` pairs and builds the replacement.
std::optional<Substitution> evaluate(const MatchCandidate &full, std::size_t len,
                                     const Circuit &c, const CostModel &cm) {
  MatchCandidate m = full;
  m.pairs.resize(len);
  // qubit map restricted to the prefix
  m.qubits.clear();
  const auto &tg = m.tmpl->circuit().gates();
  for (const auto &[ti, ci] : m.pairs) {
    for (std::size_t k = 0; k < tg[ti].qubits.size(); ++k) {
      m.qubits[tg[ti].qubits[k]] = c.gates()[ci].qubits[k];
    }
  }
  const auto binding = solve_bindings(m, c);
  if (!binding) return std::nullopt;
  const std::size_t a = m.pairs.front().first;
  const std::size_t b = m.pairs.back().first;
  std::vector<std::size_t> rest;
  for (std::size_t j = a; j-- > 0;) rest.push_back(j);
  for (std::size_t j = tg.size(); j-- > b + 1;) rest.push_back(j);
  std::vector<Gate> replacement;
  for (std::size_t j : rest) {
    for (const auto &q : tg[j].qubits) {
      if (!m.qubits.count(q)) return std::nullopt;
    }
    for (const auto &p : tg[j].params) {
      for (const auto &n : p.names()) {
        if (!binding->count(n)) return std::nullopt;
      }
    }
    for (Gate inv : inverse(bind(tg[j], *binding))) {
      for (int &q : inv.qubits) q = m.qubits.at(q);
      replacement.push_back(std::move(inv));
    }
  }
  std::vector<Gate> matched;
  for (const auto &[ti, ci] : m.pairs) matched.push_back(c.gates()[ci]);
  if (cm.cost(matched) <= cm.cost(replacement)) return std::nullopt;
  return Substitution{std::move(m), std::move(replacement)};
}

Circuit apply(const Circuit &c, const Substitution &s) {
  std::set<std::size_t> matched;
  for (const auto &[ti, ci] : s.match.pairs) matched.insert(ci);
  std::set<std::size_t> influenced;
  convex(c, matched, influenced);
  const auto first = *matched.begin();
  const auto last = *matched.rbegin();
  Circuit out(c.num_qubits());
  for (std::size_t i = 0; i < first; ++i) out.append(c.gates()[i]);
  for (std::size_t i = first; i <= last; ++i) {
    if (!matched.count(i) && !influenced.count(i)) out.append(c.gates()[i]);
  }
  for (const auto &g : s.replacement) out.append(g);
  for (std::size_t i : influenced) out.append(c.gates()[i]);
  for (std::size_t i = last + 1; i < c.size(); ++i) out.append(c.gates()[i]);
  return out;
}

// Best substitution anchored at circuit gate `anchor`.
std::optional<Substitution> best_at(const Circuit &c, const CircuitDag &dag, std::size_t anchor,
                                    const std::vector<const Template *> &templates,
                                    const CostModel &cm) {
  std::optional<Substitution> best;
  for (const Template *t : templates) {
    for (std::size_t a = 0; a < t->size(); ++a) {
      if (t->circuit().gates()[a].kind != c.gates()[anchor].kind) continue;
      const MatchCandidate full = extend(*t, a, c, dag, anchor);
      for (std::size_t len = full.pairs.size(); len >= 1; --len) {
        if (best && best->match.pairs.size() >= len) break;
        std::set<std::size_t> matched, influenced;
        for (std::size_t k = 0; k < len; ++k) matched.insert(full.pairs[k].second);
        if (!convex(c, matched, influenced)) continue;
        if (auto s = evaluate(full, len, c, cm)) {
          best = std::move(s);
          break;
        }
      }
    }
  }
  return best;
}

}  // namespace

Circuit template_substitute(const Circuit &c, const std::vector<const Template *> &templates,
                            const CostModel &cm) {
  Circuit cur = c;
  std::size_t anchor = 0;
  while (anchor < cur.size()) {
    const CircuitDag dag = cur.dag();
    if (auto s = best_at(cur, dag, anchor, templates, cm)) {
      // strictly decreasing integer cost bounds the number of rewrites
      cur = apply(cur, *s);
      continue;
    }
    ++anchor;
  }
  return cur;
}

Circuit template_substitute(const Circuit &c, const Template &t, const CostModel &cm) {
  return template_substitute(c, std::vector<const Template *>{&t}, cm);
}

// ---------------------------------------------------------------------------
// Marker expansion

namespace {

void append_u11(std::vector<Gate> &out, int q) {
  out.push_back(Gate::rz(q, kPi / 2));
  out.push_back(Gate::sx(q));
  out.push_back(Gate::rz(q, kPi / 2));
}

void expand_rzz(std::vector<Gate> &out, int a, int b, double theta) {
  // rzz(theta) = rzz(theta - m pi) (Z x Z)^m up to phase
  const double m = std::round(theta / kPi);
  double t = theta - m * kPi;
  if (t <= -kPi / 2) t += kPi;  // keep (-pi/2, pi/2]
  const long shifts = std::lround((theta - t) / kPi);
  if (shifts % 2 != 0) {
    out.push_back(Gate::rz(a, kPi));
    out.push_back(Gate::rz(b, kPi));
  }
  if (std::abs(t) < kZeroAngle) return;
  append_u11(out, b);
  out.push_back(Gate::rzx(a, b, t / 2));
  out.push_back(Gate::x(a));
  out.push_back(Gate::rzx(a, b, -t / 2));
  out.push_back(Gate::x(a));
  append_u11(out, b);
}

void append_swap(std::vector<Gate> &out, int a, int b) {
  out.push_back(Gate::cx(a, b));
  out.push_back(Gate::cx(b, a));
  out.push_back(Gate::cx(a, b));
}

void expand_phase_swap(std::vector<Gate> &out, int a, int b, double theta) {
  if (std::abs(wrap_angle(theta)) < kZeroAngle) {
    append_swap(out, a, b);
    return;
  }
  const Circuit block = synth_three_rzx(phase_swap_kak(wrap_angle(theta)), true);
  append_mapped(out, block, a, b);
}

}  // namespace

Circuit expand_markers(const Circuit &c) {
  std::vector<Gate> out;
  for (const auto &g : c.gates()) {
    switch (g.kind) {
      case GateKind::kRzz:
        require_literal(g);
        expand_rzz(out, g.qubits[0], g.qubits[1], g.params[0].constant());
        break;
      case GateKind::kSwap:
        append_swap(out, g.qubits[0], g.qubits[1]);
        break;
      case GateKind::kPhaseSwap:
        require_literal(g);
        expand_phase_swap(out, g.qubits[0], g.qubits[1], g.params[0].constant());
        break;
      default:
        out.push_back(g);
    }
  }
  return Circuit(c.num_qubits(), std::move(out));
}

Circuit legalize_rzx(const Circuit &c) {
  std::vector<Gate> out;
  for (const auto &g : c.gates()) {
    if (g.kind != GateKind::kRzx) {
      out.push_back(g);
      continue;
    }
    require_literal(g);
    const int a = g.qubits[0], b = g.qubits[1];
    double phi = g.params[0].constant();
    if (std::abs(phi) >= 2 * kPi) throw Error("rzx angle outside (-2 pi, 2 pi)");
    if (std::abs(phi) <= kPi / 4 + 1e-12) {
      out.push_back(g);
      continue;
    }
    phi = wrap_angle(phi);  // rzx has period 2 pi up to sign
    if (std::abs(phi) > kPi / 2) {
      // rzx(pi) = -i Z x X
      phi -= phi > 0 ? kPi : -kPi;
      out.push_back(Gate::rz(a, kPi));
      out.push_back(Gate::x(b));
    }
    if (std::abs(phi) < kZeroAngle) continue;
    if (std::abs(phi) <= kPi / 4 + 1e-12) {
      out.push_back(Gate::rzx(a, b, phi));
      continue;
    }
    out.push_back(Gate::rzx(a, b, phi / 2));
    out.push_back(Gate::x(a));
    out.push_back(Gate::rzx(a, b, -phi / 2));
    out.push_back(Gate::x(a));
  }
  return Circuit(c.num_qubits(), std::move(out));
}

// ---------------------------------------------------------------------------
// Single-qubit simplification

namespace {

bool same_run(const std::vector<Gate> &a, const std::vector<Gate> &b) {
  if (a.size() != b.size()) return false;
  for (std::size_t i = 0; i < a.size(); ++i) {
    if (a[i].kind != b[i].kind) return false;
    if (a[i].kind == GateKind::kRz &&
        std::abs(a[i].params[0].constant() - b[i].params[0].constant()) > 1e-12) {
      return false;
    }
  }
  return true;
}

std::vector<Gate> collapse(const std::vector<Gate> &run, int q) {
  Matrix2 m = Matrix2::Identity();
  for (const auto &g : run) m = Matrix2(gate_unitary(g)) * m;
  std::vector<Gate> canon = decompose_1q(m, q);
  return same_run(run, canon) ? run : canon;
}

}  // namespace

Circuit simplify_1q(const Circuit &c) {
  std::vector<std::vector<Gate>> runs(c.num_qubits());
  std::vector<Gate> out;
  auto flush = [&](int q) {
    if (runs[q].empty()) return;
    for (auto &g : collapse(runs[q], q)) out.push_back(std::move(g));
    runs[q].clear();
  };
  for (const auto &g : c.gates()) {
    if (is_1q_unitary(g)) {
      require_literal(g);
      runs[g.qubits[0]].push_back(g);
      continue;
    }
    for (int q : g.qubits) flush(q);
    out.push_back(g);
  }
  for (int q = 0; q < c.num_qubits(); ++q) flush(q);
  return Circuit(c.num_qubits(), std::move(out));
}

// ---------------------------------------------------------------------------
// CNOT basis

Circuit lower_to_cx(const Circuit &c, bool keep_swap) {
  std::vector<Gate> out;
  auto rzz = [&](int a, int b, const ParamExpr &t) {
    out.push_back(Gate::cx(a, b));
    out.push_back(Gate::rz(b, t));
    out.push_back(Gate::cx(a, b));
  };
  auto swap = [&](int a, int b) {
    if (keep_swap) {
      out.push_back(Gate::swap(a, b));
      return;
    }
    out.push_back(Gate::cx(a, b));
    out.push_back(Gate::cx(b, a));
    out.push_back(Gate::cx(a, b));
  };
  for (const auto &g : c.gates()) {
    const int a = g.qubits[0];
    switch (g.kind) {
      case GateKind::kRzz:
        rzz(a, g.qubits[1], g.params[0]);
        break;
      case GateKind::kPhaseSwap:
        rzz(a, g.qubits[1], g.params[0]);
        swap(a, g.qubits[1]);
        break;
      case GateKind::kSwap:
        swap(a, g.qubits[1]);
        break;
      case GateKind::kRzx:
        out.push_back(Gate::h(g.qubits[1]));
        rzz(a, g.qubits[1], g.params[0]);
        out.push_back(Gate::h(g.qubits[1]));
        break;
      default:
        out.push_back(g);
    }
  }
  return Circuit(c.num_qubits(), std::move(out));
}

Circuit cancel_cx_pairs(const Circuit &c) {
  std::vector<Gate> gates = c.gates();
  bool changed = true;
  while (changed) {
    changed = false;
    // last[q] = index into `kept` of the most recent gate on wire q
    std::vector<Gate> kept;
    std::vector<long> last(c.num_qubits(), -1);
    std::vector<char> alive;
    for (const auto &g : gates) {
      if (g.kind == GateKind::kCx) {
        const long p = last[g.qubits[0]];
        if (p >= 0 && p == last[g.qubits[1]] && alive[p] && kept[p] == g) {
          alive[p] = 0;
          changed = true;
          // wire history before the cancelled pair is not tracked; treat
          // the wires as fresh
          last[g.qubits[0]] = last[g.qubits[1]] = -1;
          continue;
        }
      }
      kept.push_back(g);
      alive.push_back(1);
      for (int q : g.qubits) last[q] = static_cast<long>(kept.size()) - 1;
    }
    gates.clear();
    for (std::size_t i = 0; i < kept.size(); ++i) {
      if (alive[i]) gates.push_back(kept[i]);
    }
  }
  return Circuit(c.num_qubits(), std::move(gates));
}

// ---------------------------------------------------------------------------
// Pipelines

namespace {

// Alternates cx pair cancellation and 1q resynthesis until neither changes
// the circuit.
Circuit cleanup(Circuit c) {
  c = cancel_cx_pairs(c);
  for (int round = 0; round < 16; ++round) {
    Circuit next = cancel_cx_pairs(simplify_1q(c));
    if (next == c) break;
    c = std::move(next);
  }
  return c;
}

}  // namespace

Circuit pulse_efficient_transpile(const Circuit &c, const PipelineOptions &opt) {
  Circuit out = template_substitute(c, opt.templates, opt.cost);
  return cleanup(legalize_rzx(expand_markers(out)));
}

Circuit cnot_transpile(const Circuit &c) { return cleanup(lower_to_cx(c, false)); }

namespace {

void check_coupling(const Circuit &c, const BackendModel &b) {
  for (const auto &g : c.gates()) {
    if (g.qubits.size() == 2 && !b.coupled(g.qubits[0], g.qubits[1])) {
      throw Error("2q gate on uncoupled pair " + std::to_string(g.qubits[0]) + "," +
                  std::to_string(g.qubits[1]));
    }
  }
}

}  // namespace

ScheduledCircuit pulse_efficient_pipeline(const Circuit &c, const BackendModel &b,
                                          const PipelineOptions &opt) {
  const MeasuredCircuit m = strip_measurements(c);
  check_coupling(m.body, b);
  return schedule_circuit(pulse_efficient_transpile(m.body, opt), b);
}

ScheduledCircuit cnot_pipeline(const Circuit &c, const BackendModel &b) {
  const MeasuredCircuit m = strip_measurements(c);
  check_coupling(m.body, b);
  return schedule_circuit(cnot_transpile(m.body), b);
}

}  // namespace pet
