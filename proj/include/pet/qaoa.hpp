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

#include <cstdint>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "pet/io.hpp"
#include "pet/pulse.hpp"
#include "pet/qcore.hpp"

namespace pet {

struct WeightedEdge {
  int i = 0;
  int j = 1;
  double weight = 1.0;
};

/// Undirected graph; edges are stored with i < j.
class WeightedGraph {
 public:
  WeightedGraph() = default;
  /// Throws Error on self-loops, duplicate edges or out-of-range nodes.
  WeightedGraph(int num_nodes, std::vector<WeightedEdge> edges);

  int num_nodes() const { return n_; }
  const std::vector<WeightedEdge> &edges() const { return edges_; }
  /// Cut value of an assignment; bit k of `x` is node k.
  double cut(std::uint64_t x) const;

 private:
  int n_ = 0;
  std::vector<WeightedEdge> edges_;
};

/// {"n": .., "edges": [[i, j, w], ...]}
WeightedGraph graph_from_json(const Json &j);
Json graph_to_json(const WeightedGraph &g);
WeightedGraph load_fixture_graph(const std::string &name);

/// n nodes, each pair joined with probability `density`, integer weights
/// in [1, max_weight].
WeightedGraph random_graph(int n, double density, int max_weight, std::uint64_t seed);

using Coupling = std::set<std::pair<int, int>>;
/// Undirected pairs (low, high) of the backend's calibrated edges.
Coupling coupling_of(const BackendModel &b);

struct QaoaConfig {
  std::vector<double> beta;
  std::vector<double> gamma;
  /// layout[v] = physical qubit of variable v.
  std::vector<int> layout;
  Coupling coupling;

  int layers() const { return static_cast<int>(beta.size()); }
};

/// Physical circuit plus where each variable ends up.
struct QaoaCircuit {
  Circuit circuit;
  std::vector<int> final_layout;
  int swaps = 0;
};

/**
 * exp(-i gamma H_C) on the physical qubits, H_C = sum w Z_i Z_j, as
 * rzz(2 gamma w) per edge.  Coupled edges are emitted first; otherwise the
 * pending edge with the shortest path (lowest qubit first on ties) moves its
 * first endpoint one step.  A swap on a pair whose edge is still pending,
 * or that follows an rzz on the same pair with only rzz gates in between,
 * becomes one phase_swap.  `layout` is updated in place.  The
 * circuit is sized to the highest qubit touched.
 */
QaoaCircuit build_cost_layer(const WeightedGraph &g, double gamma, std::vector<int> &layout,
                             const Coupling &coupling);

/// h layer, p cost/mixer layers with rx(2 beta), measurements in variable
/// order.
QaoaCircuit build_qaoa_circuit(const WeightedGraph &g, const QaoaConfig &cfg);

/// sum_x p(x) cut(x); bit k of the outcome index is variable k.
double average_cut(const std::vector<double> &probs, const WeightedGraph &g);
/// Keys are n-character bitstrings, character k is variable k.
double average_cut(const std::map<std::string, std::uint64_t> &counts, const WeightedGraph &g);

struct MaxCut {
  double value = 0.0;
  std::uint64_t partition = 0;
};
MaxCut max_cut_brute(const WeightedGraph &g);

enum class ScanPipeline { kIdeal, kCnot, kPulseEfficient };
ScanPipeline scan_pipeline_from_string(const std::string &s);

/// Physical circuit after the named pipeline; ideal returns it unchanged.
ScheduledCircuit transpile_for_scan(const QaoaCircuit &qc, ScanPipeline p, const BackendModel &b);

struct ScanOptions {
  ScanPipeline pipeline = ScanPipeline::kIdeal;
  std::optional<std::uint64_t> shots;
  std::uint64_t seed = 0;
  /// 0: hardware concurrency.
  unsigned threads = 0;
};

struct LandscapeGrid {
  std::vector<double> beta;
  std::vector<double> gamma;
  /// [gamma index][beta index]
  std::vector<std::vector<double>> avg_cut;
  std::vector<std::vector<double>> duration_ns;
};

/// Depth-one scan; `layout` places the variables on backend qubits.
LandscapeGrid landscape_scan(const WeightedGraph &g, const std::vector<double> &beta,
                             const std::vector<double> &gamma, const std::vector<int> &layout,
                             const BackendModel &b, const ScanOptions &opt);

/// n evenly spaced points on [lo, hi]; n = 1 gives lo.
std::vector<double> linspace(double lo, double hi, int n);

}  // namespace pet
