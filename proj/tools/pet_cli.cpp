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

// pet: command-line front end for the pulse-efficient toolchain.

#include <CLI11.hpp>

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <numbers>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "pet/io.hpp"
#include "pet/kak.hpp"
#include "pet/pulse.hpp"
#include "pet/qaoa.hpp"
#include "pet/qasm.hpp"
#include "pet/sim.hpp"
#include "pet/tomo.hpp"
#include "pet/transpile.hpp"

namespace {

using pet::Json;

constexpr double kPi = std::numbers::pi;

// Bad invocation: missing files, malformed flag values.
class UsageError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct Globals {
  bool json = false;
  std::uint64_t seed = 0;
  std::string backend;
};

std::string fmt(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

void require_file(const std::string &path, const std::string &what) {
  if (path.empty()) throw UsageError(what + " is required");
  if (!std::filesystem::is_regular_file(path)) throw UsageError(what + " not found: " + path);
}

pet::BackendModel load_backend(const std::string &spec) {
  if (spec.empty()) throw UsageError("--backend is required");
  if (std::filesystem::is_regular_file(spec)) return pet::read_backend_file(spec);
  const std::string fixture = pet::fixture_dir() + "/backends/" + spec + ".json";
  if (std::filesystem::is_regular_file(fixture)) return pet::read_backend_file(fixture);
  throw UsageError("backend not found: " + spec);
}

// Circuit JSON, schedule JSON (its "circuit" member) or assembly subset.
pet::Circuit load_circuit(const std::string &path, const std::string &what) {
  require_file(path, what);
  if (std::filesystem::path(path).extension() == ".qasm") {
    return pet::parse_qasm_subset(pet::read_text_file(path));
  }
  const Json j = pet::read_json_file(path);
  if (j.is_object() && j.contains("instructions") && j.contains("circuit")) {
    return pet::circuit_from_json(j.at("circuit"));
  }
  return pet::circuit_from_json(j);
}

std::optional<std::uint64_t> parse_shots(const std::string &s) {
  if (s == "exact") return std::nullopt;
  std::size_t used = 0;
  unsigned long long v = 0;
  try {
    v = std::stoull(s, &used);
  } catch (const std::exception &) {
    used = 0;
  }
  if (used != s.size() || v == 0) throw UsageError("--shots expects a positive integer or 'exact'");
  return v;
}

std::vector<double> parse_range(const std::string &s, const std::string &flag) {
  std::vector<std::string> parts;
  std::stringstream in(s);
  for (std::string p; std::getline(in, p, ':');) parts.push_back(p);
  try {
    if (parts.size() == 3) {
      std::size_t used = 0;
      const int n = std::stoi(parts[2], &used);
      if (used == parts[2].size() && n > 0) {
        return pet::linspace(std::stod(parts[0]), std::stod(parts[1]), n);
      }
    }
  } catch (const std::exception &) {
  }
  throw UsageError(flag + " expects lo:hi:n");
}

std::vector<int> parse_int_list(const std::string &s, const std::string &flag) {
  std::vector<int> out;
  std::stringstream in(s);
  for (std::string p; std::getline(in, p, ',');) {
    try {
      std::size_t used = 0;
      out.push_back(std::stoi(p, &used));
      if (used != p.size()) throw UsageError(flag + ": bad entry '" + p + "'");
    } catch (const std::logic_error &) {
      throw UsageError(flag + ": bad entry '" + p + "'");
    }
  }
  return out;
}

void write_file(const std::string &path, const std::string &text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw UsageError("cannot write " + path);
  out << text;
}

Json coords_json(const pet::WeylCoordinates &k) {
  return {{"alpha", k.alpha}, {"beta", k.beta}, {"gamma", k.gamma}};
}

// ---------------------------------------------------------------------------
// kak

struct KakArgs {
  std::string gate;
  std::string unitary;
};

pet::Matrix named_gate(const std::string &name) {
  using pet::Gate;
  if (name == "cnot" || name == "cx") return pet::gate_unitary(Gate::cx(0, 1));
  if (name == "swap") return pet::gate_unitary(Gate::swap(0, 1));
  if (name == "cz") {
    pet::Circuit c(2, {Gate::h(1), Gate::cx(0, 1), Gate::h(1)});
    return pet::two_qubit_unitary(c);
  }
  if (name == "iswap") {
    pet::Matrix m = pet::Matrix::Zero(4, 4);
    m(0, 0) = m(3, 3) = 1.0;
    m(1, 2) = m(2, 1) = pet::Complex(0.0, 1.0);
    return m;
  }
  throw UsageError("unknown gate '" + name + "' (cnot, cx, cz, swap, iswap)");
}

Json run_kak(const KakArgs &a) {
  if (a.gate.empty() == a.unitary.empty()) throw UsageError("give exactly one of --gate, --unitary");
  pet::Matrix u;
  if (!a.gate.empty()) {
    u = named_gate(a.gate);
  } else {
    require_file(a.unitary, "--unitary");
    u = pet::matrix_from_json(pet::read_json_file(a.unitary));
  }
  const pet::KakDecomposition k = pet::kak_decompose(u);
  return {{"coordinates", coords_json(k.coords)},
          {"global_phase", k.global_phase},
          {"three_cnot", pet::circuit_to_json(pet::synth_three_cnot(k))},
          {"three_rzx", pet::circuit_to_json(pet::synth_three_rzx(k, false))},
          {"three_rzx_echoed", pet::circuit_to_json(pet::synth_three_rzx(k, true))}};
}

// ---------------------------------------------------------------------------
// transpile

struct TranspileArgs {
  std::string input;
  std::string pipeline = "pulse-efficient";
  std::string templates = "rzz,phase_swap";
  std::string cost_model = "default";
  std::string emit = "circuit";
  std::string out;
};

pet::CostModel load_cost_model(const std::string &spec) {
  if (spec == "default") return pet::CostModel::standard();
  require_file(spec, "--cost-model");
  const Json j = pet::read_json_file(spec);
  pet::CostModel cm;
  try {
    const Json &w = j.contains("weights") ? j.at("weights") : j;
    for (const auto &[name, v] : w.items()) cm.weights[name] = v.get<int>();
    if (j.contains("unknown_weight")) cm.unknown_weight = j.at("unknown_weight").get<int>();
  } catch (const Json::exception &e) {
    throw pet::Error(std::string("cost model JSON: ") + e.what());
  }
  return cm;
}

Json run_transpile(const TranspileArgs &a, const Globals &g) {
  const pet::Circuit in = load_circuit(a.input, "--input");
  if (a.emit != "circuit" && a.emit != "schedule") throw UsageError("--emit is circuit or schedule");
  if (a.pipeline != "pulse-efficient" && a.pipeline != "cnot") {
    throw UsageError("--pipeline is pulse-efficient or cnot");
  }
  pet::PipelineOptions opt;
  opt.templates.clear();
  if (!a.templates.empty() && a.templates != "none") {
    std::stringstream names(a.templates);
    for (std::string n; std::getline(names, n, ',');) opt.templates.push_back(&pet::template_by_name(n));
  }
  opt.cost = load_cost_model(a.cost_model);
  const bool pe = a.pipeline == "pulse-efficient";
  Json artifact;
  if (a.emit == "schedule" || !g.backend.empty()) {
    const pet::BackendModel b = load_backend(g.backend);
    const pet::ScheduledCircuit s =
        pe ? pet::pulse_efficient_pipeline(in, b, opt) : pet::cnot_pipeline(in, b);
    pet::Circuit measured = s.circuit;
    for (int q : pet::strip_measurements(in).measured) measured.append(pet::Gate::measure(q));
    artifact = a.emit == "schedule" ? pet::schedule_to_json(s) : pet::circuit_to_json(measured);
  } else {
    artifact = pet::circuit_to_json(pe ? pet::pulse_efficient_transpile(in, opt)
                                       : pet::cnot_transpile(in));
  }
  if (!a.out.empty()) write_file(a.out, artifact.dump(1) + "\n");
  return artifact;
}

// ---------------------------------------------------------------------------
// schedule

struct ScheduleArgs {
  std::string input;
  std::string format = "json";
  std::string out;
};

std::string schedule_csv(const pet::ScheduledCircuit &s) {
  std::string out = "channel,start,duration,kind,label,phase\n";
  const Json j = pet::schedule_to_json(s);
  for (const auto &e : j.at("entries")) {
    out += e.at("channel").get<std::string>() + "," + std::to_string(e.at("start").get<int>()) +
           "," + std::to_string(e.at("duration").get<int>()) + "," +
           e.at("kind").get<std::string>() + "," + e.at("label").get<std::string>() + "," +
           (e.contains("phase") ? fmt(e.at("phase").get<double>()) : "") + "\n";
  }
  return out;
}

Json run_schedule(const ScheduleArgs &a, const Globals &g) {
  if (a.format != "json" && a.format != "csv") throw UsageError("--format is json or csv");
  const pet::Circuit c = pet::strip_measurements(load_circuit(a.input, "--input")).body;
  const pet::ScheduledCircuit s = pet::schedule_circuit(c, load_backend(g.backend));
  Json full = pet::schedule_to_json(s);
  Json channels = Json::object();
  for (const auto &e : full.at("entries")) channels[e.at("channel").get<std::string>()].push_back(e);
  full["channels"] = channels;
  if (!a.out.empty()) write_file(a.out, a.format == "csv" ? schedule_csv(s) : full.dump(1) + "\n");
  return {{"total_duration_samples", s.total_duration()},
          {"total_duration_ns", s.total_duration_ns()},
          {"channels", channels}};
}

// ---------------------------------------------------------------------------
// simulate

struct SimulateArgs {
  std::string input;
  std::string mode;
  std::string shots = "exact";
  bool readout = false;
  std::string out;
};

std::string bitstring(std::size_t k, std::size_t width) {
  std::string s(width, '0');
  for (std::size_t b = 0; b < width; ++b) {
    if ((k >> b) & 1U) s[b] = '1';
  }
  return s;
}

Json run_simulate(const SimulateArgs &a, const Globals &g) {
  const pet::MeasuredCircuit m = pet::strip_measurements(load_circuit(a.input, "--input"));
  std::vector<int> measured = m.measured;
  if (measured.empty()) {
    for (int q = 0; q < m.body.num_qubits(); ++q) measured.push_back(q);
  }
  const std::string mode = a.mode.empty() ? (g.backend.empty() ? "ideal" : "noisy") : a.mode;
  if (mode != "ideal" && mode != "noisy") throw UsageError("--mode is ideal or noisy");
  const auto shots = parse_shots(a.shots);
  std::vector<double> probs;
  std::optional<pet::BackendModel> b;
  if (mode == "noisy" || a.readout) b = load_backend(g.backend);
  if (mode == "noisy") {
    const pet::ScheduledCircuit s = pet::schedule_circuit(m.body, *b);
    probs = pet::measure_probs(pet::simulate_noisy(s, *b), measured);
  } else {
    probs = pet::measure_probs(pet::simulate_ideal(m.body), measured);
  }
  if (a.readout) {
    std::vector<Eigen::Matrix2d> conf;
    for (int q : measured) conf.push_back(b->qubits.at(static_cast<std::size_t>(q)).readout_confusion);
    probs = pet::apply_confusion(probs, conf);
  }
  Json result;
  Json table = Json::object();
  if (shots) {
    const auto counts = pet::sample(probs, *shots, g.seed);
    for (std::size_t k = 0; k < counts.size(); ++k) {
      if (counts[k]) table[bitstring(k, measured.size())] = counts[k];
    }
    result = {{"qubits", measured}, {"shots", *shots}, {"seed", g.seed}, {"counts", table}};
  } else {
    for (std::size_t k = 0; k < probs.size(); ++k) table[bitstring(k, measured.size())] = probs[k];
    result = {{"qubits", measured}, {"probabilities", table}};
  }
  if (!a.out.empty()) write_file(a.out, result.dump(1) + "\n");
  return result;
}

// ---------------------------------------------------------------------------
// tomo

struct TomoArgs {
  std::string target;
  std::string variant = "scaled";
  std::optional<double> theta;
  std::string shots = "exact";
  bool project = false;
  std::string out;
};

pet::Matrix rzz_unitary(double t) {
  return pet::circuit_unitary(pet::Circuit(2, {pet::Gate::rzz(0, 1, t)}));
}

Json run_tomo(const TomoArgs &a, const Globals &g) {
  if (a.variant != "cnot" && a.variant != "scaled") throw UsageError("--variant is cnot or scaled");
  if (a.target.empty() && !a.theta) throw UsageError("give --target or --theta");
  pet::Circuit target(2);
  if (!a.target.empty()) {
    target = pet::strip_measurements(load_circuit(a.target, "--target")).body;
  } else {
    target.append(pet::Gate::rzz(0, 1, *a.theta));
  }
  if (target.num_qubits() != 2) throw pet::Error("tomo: target must act on two qubits");
  const pet::BackendModel b = load_backend(g.backend);
  const pet::ScheduledCircuit s = a.variant == "scaled"
                                      ? pet::pulse_efficient_pipeline(target, b)
                                      : pet::cnot_pipeline(pet::lower_to_cx(target, false), b);
  const pet::Matrix u = pet::circuit_unitary(target);
  const pet::TomographyJob job = pet::build_qpt_circuits(target);
  const auto shots = parse_shots(a.shots);
  // exact mode runs once; shot mode repeats with three seeds
  const int reps = shots ? 3 : 1;
  std::vector<double> fids, deltas;
  for (int r = 0; r < reps; ++r) {
    pet::ExecutionOptions eo{shots, g.seed + static_cast<std::uint64_t>(r) * 1000003ULL};
    const pet::QptData data = pet::run_job(job, pet::noisy_executor(s, b, eo));
    pet::ReconstructionOptions ro;
    ro.project = a.project;
    const pet::Matrix choi = pet::reconstruct_choi(job, data, ro);
    fids.push_back(pet::process_fidelity(choi, u));
    if (a.theta) deltas.push_back(pet::deviation_angle(choi, *a.theta, rzz_unitary));
  }
  auto stats = [](const std::vector<double> &v) {
    double mean = 0.0;
    for (double x : v) mean += x;
    mean /= static_cast<double>(v.size());
    double var = 0.0;
    for (double x : v) var += (x - mean) * (x - mean);
    const double sd = v.size() > 1 ? std::sqrt(var / static_cast<double>(v.size() - 1)) : 0.0;
    return Json{{"mean", mean}, {"std", sd}, {"samples", v}};
  };
  const auto &q = b.qubits;
  const double t = s.total_duration_ns();
  const double limit = pet::coherence_limit_error(t, q.at(0).t1_us, q.at(1).t1_us, q.at(0).t2_us,
                                                  q.at(1).t2_us);
  Json fid = stats(fids);
  Json result = {{"variant", a.variant},
                 {"fidelity", fid},
                 {"average_gate_error", pet::average_gate_error(fid.at("mean").get<double>())},
                 {"durations", {{"schedule_ns", t}, {"schedule_samples", s.total_duration()}}},
                 {"coherence_limit", limit}};
  if (a.theta) {
    result["theta"] = *a.theta;
    result["delta_theta"] = stats(deltas);
  }
  if (!a.out.empty()) write_file(a.out, result.dump(1) + "\n");
  return result;
}

// ---------------------------------------------------------------------------
// qaoa-scan

struct ScanArgs {
  std::string graph;
  std::string pipeline = "pulse-efficient";
  std::string beta_range = "-2:2:21";
  std::string gamma_range = "-1:1:21";
  std::string layout;
  std::string shots = "exact";
  unsigned threads = 0;
  std::string out;
};

Json run_scan(const ScanArgs &a, const Globals &g) {
  require_file(a.graph, "--graph");
  const Json gj = pet::read_json_file(a.graph);
  const pet::WeightedGraph graph = pet::graph_from_json(gj);
  std::vector<int> layout;
  if (!a.layout.empty()) {
    layout = parse_int_list(a.layout, "--layout");
  } else if (gj.contains("layout")) {
    layout = gj.at("layout").get<std::vector<int>>();
  } else {
    for (int v = 0; v < graph.num_nodes(); ++v) layout.push_back(v);
  }
  if (static_cast<int>(layout.size()) != graph.num_nodes()) {
    throw UsageError("--layout needs one qubit per graph node");
  }
  pet::ScanPipeline p{};
  try {
    p = pet::scan_pipeline_from_string(a.pipeline);
  } catch (const pet::Error &e) {
    throw UsageError(e.what());
  }
  const auto beta = parse_range(a.beta_range, "--beta-range");
  const auto gamma = parse_range(a.gamma_range, "--gamma-range");
  pet::ScanOptions opt{p, parse_shots(a.shots), g.seed, a.threads};
  const pet::BackendModel b = load_backend(g.backend);
  const pet::LandscapeGrid grid = pet::landscape_scan(graph, beta, gamma, layout, b, opt);
  std::string csv = "beta,gamma,avg_cut,duration_ns\n";
  double best = -1.0, best_beta = 0.0, best_gamma = 0.0;
  for (std::size_t i = 0; i < gamma.size(); ++i) {
    for (std::size_t j = 0; j < beta.size(); ++j) {
      csv += fmt(beta[j]) + "," + fmt(gamma[i]) + "," + fmt(grid.avg_cut[i][j]) + "," +
             fmt(grid.duration_ns[i][j]) + "\n";
      if (grid.avg_cut[i][j] > best) {
        best = grid.avg_cut[i][j];
        best_beta = beta[j];
        best_gamma = gamma[i];
      }
    }
  }
  if (!a.out.empty()) write_file(a.out, csv);
  return {{"pipeline", a.pipeline},
          {"points", beta.size() * gamma.size()},
          {"max_cut", pet::max_cut_brute(graph).value},
          {"best", {{"avg_cut", best}, {"beta", best_beta}, {"gamma", best_gamma}}}};
}

// ---------------------------------------------------------------------------

void print_result(const Json &j, bool json) {
  if (json) {
    std::cout << j.dump() << "\n";
    return;
  }
  for (const auto &[k, v] : j.items()) {
    std::cout << k << ": " << (v.is_string() ? v.get<std::string>() : v.dump()) << "\n";
  }
}

int fail(const std::string &kind, const std::string &message, int code) {
  const Json err = {{"error", {{"kind", kind}, {"message", message}, {"exit_code", code}}}};
  std::cerr << err.dump() << "\n";
  return code;
}

}  // namespace

int main(int argc, char **argv) {
  CLI::App app{"Pulse-efficient transpilation toolchain"};
  app.require_subcommand(1);
  app.fallthrough();
  Globals g;
  app.add_flag("--json", g.json, "Machine-readable JSON on stdout");
  app.add_option("--seed", g.seed, "Seed for sampling");
  app.add_option("--backend", g.backend, "Backend JSON file or fixture name");

  KakArgs kak;
  auto *k = app.add_subcommand("kak", "Weyl coordinates and synthesized circuits of a 4x4 unitary");
  k->add_option("--gate", kak.gate, "Named gate: cnot, cx, cz, swap, iswap");
  k->add_option("--unitary", kak.unitary, "JSON file with a 4x4 matrix of [re, im] entries");

  TranspileArgs tr;
  auto *t = app.add_subcommand("transpile", "Run the pulse-efficient or CNOT pipeline");
  t->add_option("--input", tr.input, "Circuit JSON or .qasm file");
  t->add_option("--pipeline", tr.pipeline, "pulse-efficient or cnot");
  t->add_option("--templates", tr.templates, "Comma-separated template names, or none");
  t->add_option("--cost-model", tr.cost_model, "default or a JSON file of gate weights");
  t->add_option("--emit", tr.emit, "circuit or schedule");
  t->add_option("--out", tr.out, "Output file");

  ScheduleArgs sc;
  auto *s = app.add_subcommand("schedule", "Pulse schedule of a basis-level circuit");
  s->add_option("--input", sc.input, "Circuit JSON or .qasm file");
  s->add_option("--format", sc.format, "json or csv for --out");
  s->add_option("--out", sc.out, "Output file");

  SimulateArgs sim;
  auto *si = app.add_subcommand("simulate", "Outcome probabilities or sampled counts");
  si->add_option("--input", sim.input, "Circuit JSON, schedule JSON or .qasm file");
  si->add_option("--mode", sim.mode, "ideal or noisy (default: noisy when --backend is set)");
  si->add_option("--shots", sim.shots, "Shot count or exact");
  si->add_flag("--readout", sim.readout, "Apply the backend readout confusion");
  si->add_option("--out", sim.out, "Output file");

  TomoArgs tomo;
  auto *tm = app.add_subcommand("tomo", "Process tomography of a scheduled two-qubit gate");
  tm->add_option("--target", tomo.target, "Two-qubit circuit JSON (default: rzz(theta))");
  tm->add_option("--variant", tomo.variant, "cnot or scaled");
  tm->add_option("--theta", tomo.theta, "rzz angle in radians");
  tm->add_option("--shots", tomo.shots, "Shot count or exact");
  tm->add_flag("--project", tomo.project, "Project the Choi estimate onto PSD matrices");
  tm->add_option("--out", tomo.out, "Output file");

  ScanArgs scan;
  auto *q = app.add_subcommand("qaoa-scan", "Depth-one QAOA landscape over a beta/gamma grid");
  q->add_option("--graph", scan.graph, "Graph JSON {n, edges: [[i, j, w]]}");
  q->add_option("--pipeline", scan.pipeline, "ideal, cnot or pulse-efficient");
  q->add_option("--beta-range", scan.beta_range, "lo:hi:n");
  q->add_option("--gamma-range", scan.gamma_range, "lo:hi:n");
  q->add_option("--layout", scan.layout, "Comma-separated physical qubit per node");
  q->add_option("--shots", scan.shots, "Shot count or exact");
  q->add_option("--threads", scan.threads, "Worker threads, 0 for all cores");
  q->add_option("--out", scan.out, "CSV output file");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp &e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp &e) {
    return app.exit(e);
  } catch (const CLI::ParseError &e) {
    return fail("usage", e.what(), 2);
  }

  try {
    Json result;
    if (*k) result = run_kak(kak);
    if (*t) result = run_transpile(tr, g);
    if (*s) result = run_schedule(sc, g);
    if (*si) result = run_simulate(sim, g);
    if (*tm) result = run_tomo(tomo, g);
    if (*q) result = run_scan(scan, g);
    print_result(result, g.json);
  } catch (const UsageError &e) {
    return fail("usage", e.what(), 2);
  } catch (const pet::Error &e) {
    return fail("domain", e.what(), 1);
  } catch (const std::exception &e) {
    return fail("domain", e.what(), 1);
  }
  return 0;
}
