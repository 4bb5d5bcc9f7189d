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

#include "pet/io.hpp"

#include <fstream>
#include <sstream>

namespace pet {

namespace {

Json pulse_to_json(const FlatTopPulse &p) {
  Json j;
  j["amp"] = {p.amplitude.real(), p.amplitude.imag()};
  j["sigma"] = p.sigma;
  j["width"] = p.width;
  j["n_sigma"] = p.n_sigma;
  return j;
}

FlatTopPulse pulse_from_json(const Json &j) {
  FlatTopPulse p;
  const auto &amp = j.at("amp");
  if (amp.is_array()) {
    p.amplitude = {amp.at(0).get<double>(), amp.at(1).get<double>()};
  } else {
    p.amplitude = amp.get<double>();
  }
  p.sigma = j.at("sigma").get<double>();
  p.width = j.at("width").get<double>();
  p.n_sigma = j.at("n_sigma").get<double>();
  return p;
}

const char *kind_name(EntryKind k) {
  switch (k) {
    case EntryKind::kCr:
      return "cr";
    case EntryKind::kRotary:
      return "rotary";
    case EntryKind::kDrive:
      return "drive";
    case EntryKind::kVirtualZ:
      return "virtual_z";
  }
  return "?";
}

}  // namespace

Json circuit_to_json(const Circuit &c) {
  Json gates = Json::array();
  for (const auto &g : c.gates()) {
    Json params = Json::array();
    for (const auto &p : g.params) {
      if (p.is_literal()) {
        params.push_back(p.constant());
      } else {
        params.push_back(p.to_string());
      }
    }
    gates.push_back({{"name", std::string(g.name())}, {"qubits", g.qubits}, {"params", params}});
  }
  return {{"num_qubits", c.num_qubits()}, {"gates", gates}};
}

Circuit circuit_from_json(const Json &j) {
  try {
    const int n = j.at("num_qubits").get<int>();
    if (n <= 0) throw Error("circuit: num_qubits must be positive");
    Circuit c(n);
    for (const auto &g : j.at("gates")) {
      const GateKind kind = gate_kind(g.at("name").get<std::string>());
      std::vector<ParamExpr> params;
      if (g.contains("params")) {
        for (const auto &p : g.at("params")) {
          params.push_back(p.is_string() ? ParamExpr::parse(p.get<std::string>())
                                         : ParamExpr(p.get<double>()));
        }
      }
      c.append(Gate(kind, g.at("qubits").get<std::vector<int>>(), std::move(params)));
    }
    return c;
  } catch (const Json::exception &e) {
    throw Error(std::string("circuit JSON: ") + e.what());
  }
}

Json backend_to_json(const BackendModel &b) {
  Json qubits = Json::array();
  for (const auto &q : b.qubits) {
    const auto &m = q.readout_confusion;
    qubits.push_back({{"t1_us", q.t1_us},
                      {"t2_us", q.t2_us},
                      {"sq_duration", q.sq_duration},
                      {"readout_confusion", {{m(0, 0), m(0, 1)}, {m(1, 0), m(1, 1)}}}});
  }
  Json edges = Json::array();
  for (const auto &e : b.edges) {
    edges.push_back({{"control", e.control},
                     {"target", e.target},
                     {"cnot_duration_ns", e.cnot_duration_ns},
                     {"cr", pulse_to_json(e.cr)},
                     {"rotary", pulse_to_json(e.rotary)}});
  }
  return {{"name", b.name},
          {"dt_ns", b.dt_ns},
          {"granularity", b.granularity},
          {"qubits", qubits},
          {"edges", edges}};
}

BackendModel backend_from_json(const Json &j) {
  BackendModel b;
  try {
    b.name = j.value("name", std::string());
    b.dt_ns = j.at("dt_ns").get<double>();
    b.granularity = j.at("granularity").get<int>();
    for (const auto &q : j.at("qubits")) {
      QubitProperties p;
      p.t1_us = q.at("t1_us").get<double>();
      p.t2_us = q.at("t2_us").get<double>();
      p.sq_duration = q.at("sq_duration").get<int>();
      if (q.contains("readout_confusion")) {
        const auto &m = q.at("readout_confusion");
        for (int r = 0; r < 2; ++r) {
          for (int c = 0; c < 2; ++c) p.readout_confusion(r, c) = m.at(r).at(c).get<double>();
        }
      }
      b.qubits.push_back(p);
    }
    for (const auto &e : j.at("edges")) {
      EdgeCalibration cal;
      cal.control = e.at("control").get<int>();
      cal.target = e.at("target").get<int>();
      cal.cnot_duration_ns = e.at("cnot_duration_ns").get<double>();
      cal.cr = pulse_from_json(e.at("cr"));
      cal.rotary = pulse_from_json(e.at("rotary"));
      b.edges.push_back(cal);
    }
  } catch (const Json::exception &e) {
    throw Error(std::string("backend JSON: ") + e.what());
  }
  b.validate();
  return b;
}

BackendModel read_backend_file(const std::string &path) {
  return backend_from_json(read_json_file(path));
}

Json schedule_to_json(const ScheduledCircuit &s) {
  Json instructions = Json::array();
  for (const auto &t : s.instructions) {
    Json params = Json::array();
    for (const auto &p : t.gate.params) params.push_back(p.evaluate());
    instructions.push_back({{"name", std::string(t.gate.name())},
                            {"qubits", t.gate.qubits},
                            {"params", params},
                            {"start", t.start},
                            {"duration", t.duration}});
  }
  Json entries = Json::array();
  for (const auto &e : s.schedule.entries()) {
    Json j = {{"channel", e.channel},
              {"start", e.start},
              {"duration", e.duration},
              {"kind", kind_name(e.kind)},
              {"label", e.label}};
    if (e.pulse) j["pulse"] = pulse_to_json(*e.pulse);
    if (e.kind == EntryKind::kVirtualZ) j["phase"] = e.phase;
    entries.push_back(j);
  }
  return {{"total_duration_samples", s.total_duration()},
          {"total_duration_ns", s.total_duration_ns()},
          {"dt_ns", s.dt_ns},
          {"circuit", circuit_to_json(s.circuit)},
          {"instructions", instructions},
          {"entries", entries}};
}

Matrix matrix_from_json(const Json &j) {
  try {
    const auto rows = static_cast<Eigen::Index>(j.size());
    if (rows == 0) throw Error("matrix JSON: empty");
    Matrix m(rows, rows);
    for (Eigen::Index r = 0; r < rows; ++r) {
      const auto &row = j.at(r);
      if (static_cast<Eigen::Index>(row.size()) != rows) throw Error("matrix JSON: not square");
      for (Eigen::Index c = 0; c < rows; ++c) {
        const auto &v = row.at(c);
        m(r, c) = v.is_array() ? Complex(v.at(0).get<double>(), v.at(1).get<double>())
                               : Complex(v.get<double>(), 0.0);
      }
    }
    return m;
  } catch (const Json::exception &e) {
    throw Error(std::string("matrix JSON: ") + e.what());
  }
}

Json matrix_to_json(const Matrix &m) {
  Json out = Json::array();
  for (Eigen::Index r = 0; r < m.rows(); ++r) {
    Json row = Json::array();
    for (Eigen::Index c = 0; c < m.cols(); ++c) row.push_back({m(r, c).real(), m(r, c).imag()});
    out.push_back(row);
  }
  return out;
}

std::string read_text_file(const std::string &path) {
  std::ifstream in(path);
  if (!in) throw Error("cannot open " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

Json read_json_file(const std::string &path) {
  const std::string text = read_text_file(path);
  try {
    return Json::parse(text);
  } catch (const Json::exception &e) {
    throw Error(path + ": " + e.what());
  }
}

}  // namespace pet
