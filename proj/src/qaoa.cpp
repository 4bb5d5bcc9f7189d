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

#include "pet/qaoa.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <exception>
#include <random>
#include <thread>

#include "pet/sim.hpp"
#include "pet/transpile.hpp"

namespace pet {

WeightedGraph::WeightedGraph(int num_nodes, std::vector<WeightedEdge> edges) : n_(num_nodes) {
  if (num_nodes <= 0) throw Error("graph: node count must be positive");
  std::set<std::pair<int, int>> seen;
  for (auto &e : edges) {
    if (e.i == e.j) throw Error("graph: self-loop on node " + std::to_string(e.i));
    if (e.i > e.j) std::swap(e.i, e.j);
    if (e.i < 0 || e.j >= num_nodes) throw Error("graph: node out of range");
    if (!seen.insert({e.i, e.j}).second) {
      throw Error("graph: duplicate edge " + std::to_string(e.i) + "-" + std::to_string(e.j));
    }
  }
  edges_ = std::move(edges);
}

double WeightedGraph::cut(std::uint64_t x) const {
  double total = 0.0;
  for (const auto &e : edges_) {
    if (((x >> e.i) ^ (x >> e.j)) & 1U) total += e.weight;
  }
  return total;
}

WeightedGraph graph_from_json(const Json &j) {
  try {
    std::vector<WeightedEdge> edges;
    for (const auto &e : j.at("edges")) {
      if (e.size() != 3) throw Error("graph JSON: edges are [i, j, w]");
      edges.push_back({e[0].get<int>(), e[1].get<int>(), e[2].get<double>()});
    }
    return WeightedGraph(j.at("n").get<int>(), std::move(edges));
  } catch (const Json::exception &e) {
    throw Error(std::string("graph JSON: ") + e.what());
  }
}

Json graph_to_json(const WeightedGraph &g) {
  Json edges = Json::array();
  for (const auto &e : g.edges()) edges.push_back(Json::array({e.i, e.j, e.weight}));
  return {{"n", g.num_nodes()}, {"edges", edges}};
}

WeightedGraph load_fixture_graph(const std::string &name) {
  return graph_from_json(read_json_file(fixture_dir() + "/graphs/" + name + ".json"));
}

WeightedGraph random_graph(int n, double density, int max_weight, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> coin(0.0, 1.0);
  std::uniform_int_distribution<int> weight(1, max_weight);
  std::vector<WeightedEdge> edges;
  for (int i = 0; i < n; ++i) {
    for (int j = i + 1; j < n; ++j) {
      if (coin(rng) < density) edges.push_back({i, j, static_cast<double>(weight(rng))});
    }
  }
  return WeightedGraph(n, std::move(edges));
}

Coupling coupling_of(const BackendModel &b) {
  Coupling out;
  for (const auto &e : b.edges) out.insert({std::min(e.control, e.target), std::max(e.control, e.target)});
  return out;
}

// ---------------------------------------------------------------------------

namespace {

std::vector<int> shortest_path(int from, int to, const std::map<int, std::vector<int>> &adj) {
  std::map<int, int> parent{{from, from}};
  std::deque<int> queue{from};
  while (!queue.empty()) {
    const int q = queue.front();
    queue.pop_front();
    if (q == to) break;
    const auto it = adj.find(q);
    if (it == adj.end()) continue;
    for (int n : it->second) {
      if (parent.emplace(n, q).second) queue.push_back(n);
    }
  }
  if (!parent.count(to)) {
    throw Error("routing: qubits " + std::to_string(from) + " and " + std::to_string(to) +
                " are not connected");
  }
  std::vector<int> path{to};
  while (path.back() != from) path.push_back(parent.at(path.back()));
  std::reverse(path.begin(), path.end());
  return path;
}

// A swap absorbs an earlier rzz on the same pair when only rzz gates (all
// diagonal, so mutually commuting) touch that pair in between.
void fuse_rzz_swaps(std::vector<Gate> &gates) {
  for (std::size_t s = 0; s < gates.size(); ++s) {
    if (gates[s].kind != GateKind::kSwap) continue;
    const int a = gates[s].qubits[0], b = gates[s].qubits[1];
    for (std::size_t k = s; k-- > 0;) {
      const Gate &g = gates[k];
      const bool touches = std::find(g.qubits.begin(), g.qubits.end(), a) != g.qubits.end() ||
                           std::find(g.qubits.begin(), g.qubits.end(), b) != g.qubits.end();
      if (!touches) continue;
      if (g.kind != GateKind::kRzz) break;
      const bool same = (g.qubits[0] == a && g.qubits[1] == b) || (g.qubits[0] == b && g.qubits[1] == a);
      if (!same) continue;
      gates[s] = Gate::phase_swap(a, b, g.params[0]);
      gates.erase(gates.begin() + static_cast<std::ptrdiff_t>(k));
      --s;
      break;
    }
  }
}

}  // namespace

QaoaCircuit build_cost_layer(const WeightedGraph &g, double gamma, std::vector<int> &layout,
                             const Coupling &coupling) {
  if (static_cast<int>(layout.size()) != g.num_nodes()) {
    throw Error("layout must place every variable");
  }
  std::map<int, std::vector<int>> adj;  // sorted neighbour lists for the tie-break
  for (const auto &[a, b] : coupling) {
    adj[a].push_back(b);
    adj[b].push_back(a);
  }
  for (auto &[q, ns] : adj) std::sort(ns.begin(), ns.end());
  std::map<int, int> occupant;
  for (int v = 0; v < g.num_nodes(); ++v) {
    if (!occupant.emplace(layout[v], v).second) throw Error("layout is not injective");
  }
  auto coupled = [&](int a, int b) { return coupling.count({std::min(a, b), std::max(a, b)}) > 0; };

  std::vector<Gate> gates;
  int swaps = 0;
  std::vector<WeightedEdge> pending = g.edges();
  auto angle = [&](const WeightedEdge &e) { return 2.0 * gamma * e.weight; };
  auto find_pending = [&](int u, int v) {
    return std::find_if(pending.begin(), pending.end(), [&](const WeightedEdge &e) {
      return (e.i == u && e.j == v) || (e.i == v && e.j == u);
    });
  };
  while (!pending.empty()) {
    bool progressed = false;
    for (auto it = pending.begin(); it != pending.end();) {
      const int a = layout[it->i], b = layout[it->j];
      if (coupled(a, b)) {
        gates.push_back(Gate::rzz(a, b, angle(*it)));
        it = pending.erase(it);
        progressed = true;
      } else {
        ++it;
      }
    }
    if (pending.empty()) break;
    if (progressed) continue;
    // route the closest pending edge; ties keep edge order
    std::vector<int> path;
    for (const auto &e : pending) {
      auto candidate = shortest_path(layout[e.i], layout[e.j], adj);
      if (path.empty() || candidate.size() < path.size()) path = std::move(candidate);
    }
    const int a = path[0], b = path[1];
    const auto ua = occupant.find(a), ub = occupant.find(b);
    auto fused = pending.end();
    if (ua != occupant.end() && ub != occupant.end()) fused = find_pending(ua->second, ub->second);
    if (fused != pending.end()) {
      gates.push_back(Gate::phase_swap(a, b, angle(*fused)));
      pending.erase(fused);
    } else {
      gates.push_back(Gate::swap(a, b));
    }
    ++swaps;
    const std::optional<int> va = ua != occupant.end() ? std::optional(ua->second) : std::nullopt;
    const std::optional<int> vb = ub != occupant.end() ? std::optional(ub->second) : std::nullopt;
    occupant.erase(a);
    occupant.erase(b);
    if (va) {
      occupant[b] = *va;
      layout[*va] = b;
    }
    if (vb) {
      occupant[a] = *vb;
      layout[*vb] = a;
    }
  }
  fuse_rzz_swaps(gates);
  int width = 0;
  for (int q : layout) width = std::max(width, q + 1);
  for (const auto &gate : gates) {
    for (int q : gate.qubits) width = std::max(width, q + 1);
  }
  return {Circuit(width, std::move(gates)), layout, swaps};
}

QaoaCircuit build_qaoa_circuit(const WeightedGraph &g, const QaoaConfig &cfg) {
  if (cfg.layers() < 1 || cfg.gamma.size() != cfg.beta.size()) {
    throw Error("qaoa: need p >= 1 and matching beta/gamma lengths");
  }
  std::vector<int> layout = cfg.layout;
  std::vector<Gate> gates;
  int swaps = 0;
  for (int v = 0; v < g.num_nodes(); ++v) gates.push_back(Gate::h(layout[v]));
  for (int k = 0; k < cfg.layers(); ++k) {
    const QaoaCircuit cost = build_cost_layer(g, cfg.gamma[k], layout, cfg.coupling);
    gates.insert(gates.end(), cost.circuit.gates().begin(), cost.circuit.gates().end());
    swaps += cost.swaps;
    for (int v = 0; v < g.num_nodes(); ++v) gates.push_back(Gate::rx(layout[v], 2.0 * cfg.beta[k]));
  }
  for (int v = 0; v < g.num_nodes(); ++v) gates.push_back(Gate::measure(layout[v]));
  int width = 0;
  for (const auto &gate : gates) {
    for (int q : gate.qubits) width = std::max(width, q + 1);
  }
  return {Circuit(width, std::move(gates)), layout, swaps};
}

double average_cut(const std::vector<double> &probs, const WeightedGraph &g) {
  if (probs.size() != (std::size_t{1} << g.num_nodes())) {
    throw Error("average_cut: expected 2^n probabilities");
  }
  double total = 0.0;
  for (std::size_t x = 0; x < probs.size(); ++x) total += probs[x] * g.cut(x);
  return total;
}

double average_cut(const std::map<std::string, std::uint64_t> &counts, const WeightedGraph &g) {
  double total = 0.0;
  std::uint64_t shots = 0;
  for (const auto &[key, n] : counts) {
    if (static_cast<int>(key.size()) != g.num_nodes()) {
      throw Error("average_cut: key '" + key + "' does not have " +
                  std::to_string(g.num_nodes()) + " bits");
    }
    std::uint64_t x = 0;
    for (std::size_t k = 0; k < key.size(); ++k) {
      if (key[k] == '1') {
        x |= std::uint64_t{1} << k;
      } else if (key[k] != '0') {
        throw Error("average_cut: key '" + key + "' is not a bitstring");
      }
    }
    total += static_cast<double>(n) * g.cut(x);
    shots += n;
  }
  if (shots == 0) throw Error("average_cut: no counts");
  return total / static_cast<double>(shots);
}

MaxCut max_cut_brute(const WeightedGraph &g) {
  if (g.num_nodes() > 24) throw Error("max_cut_brute: more than 24 nodes");
  MaxCut best;
  for (std::uint64_t x = 0; x < (std::uint64_t{1} << g.num_nodes()); ++x) {
    const double c = g.cut(x);
    if (c > best.value) best = {c, x};
  }
  return best;
}

ScanPipeline scan_pipeline_from_string(const std::string &s) {
  if (s == "ideal") return ScanPipeline::kIdeal;
  if (s == "cnot") return ScanPipeline::kCnot;
  if (s == "pulse-efficient" || s == "pulse_efficient") return ScanPipeline::kPulseEfficient;
  throw Error("unknown pipeline '" + s + "' (ideal|cnot|pulse-efficient)");
}

ScheduledCircuit transpile_for_scan(const QaoaCircuit &qc, ScanPipeline p, const BackendModel &b) {
  switch (p) {
    case ScanPipeline::kIdeal:
      return {strip_measurements(qc.circuit).body, {}, {}, b.dt_ns};
    case ScanPipeline::kCnot:
      return cnot_pipeline(qc.circuit, b);
    case ScanPipeline::kPulseEfficient:
      // start from the CNOT form, as a user circuit would arrive
      return pulse_efficient_pipeline(lower_to_cx(strip_measurements(qc.circuit).body, true), b);
  }
  throw Error("unknown pipeline");
}

std::vector<double> linspace(double lo, double hi, int n) {
  if (n < 1) throw Error("linspace: need at least one point");
  std::vector<double> out(static_cast<std::size_t>(n));
  for (int k = 0; k < n; ++k) out[k] = n == 1 ? lo : lo + (hi - lo) * k / (n - 1);
  return out;
}

LandscapeGrid landscape_scan(const WeightedGraph &g, const std::vector<double> &beta,
                             const std::vector<double> &gamma, const std::vector<int> &layout,
                             const BackendModel &b, const ScanOptions &opt) {
  if (beta.empty() || gamma.empty()) throw Error("landscape_scan: empty grid");
  LandscapeGrid grid{beta, gamma, {}, {}};
  grid.avg_cut.assign(gamma.size(), std::vector<double>(beta.size(), 0.0));
  grid.duration_ns = grid.avg_cut;
  const Coupling coupling = coupling_of(b);
  const std::size_t points = beta.size() * gamma.size();

  auto run_point = [&](std::size_t index) {
    const std::size_t gi = index / beta.size(), bi = index % beta.size();
    const QaoaConfig cfg{{beta[bi]}, {gamma[gi]}, layout, coupling};
    const QaoaCircuit qc = build_qaoa_circuit(g, cfg);
    const ScheduledCircuit s = transpile_for_scan(qc, opt.pipeline, b);
    std::vector<double> probs;
    if (opt.pipeline == ScanPipeline::kIdeal) {
      probs = measure_probs(simulate_ideal(s.circuit), qc.final_layout);
    } else {
      probs = measure_probs(simulate_noisy(s, b), qc.final_layout);
    }
    if (opt.shots) {
      const auto counts = sample(probs, *opt.shots, opt.seed + index);
      for (std::size_t k = 0; k < probs.size(); ++k) {
        probs[k] = static_cast<double>(counts[k]) / static_cast<double>(*opt.shots);
      }
    }
    grid.avg_cut[gi][bi] = average_cut(probs, g);
    grid.duration_ns[gi][bi] = s.total_duration_ns();
  };

  unsigned threads = opt.threads ? opt.threads : std::max(1U, std::thread::hardware_concurrency());
  threads = static_cast<unsigned>(std::min<std::size_t>(threads, points));
  std::vector<std::exception_ptr> errors(threads);
  std::vector<std::thread> pool;
  for (unsigned t = 0; t < threads; ++t) {
    pool.emplace_back([&, t] {
      try {
        for (std::size_t i = t; i < points; i += threads) run_point(i);
      } catch (...) {
        errors[t] = std::current_exception();
      }
    });
  }
  for (auto &th : pool) th.join();
  for (const auto &e : errors) {
    if (e) std::rethrow_exception(e);
  }
  return grid;
}

}  // namespace pet
