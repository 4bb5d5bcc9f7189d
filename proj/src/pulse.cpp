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

#include "pet/pulse.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <numbers>

#include "pet/io.hpp"

namespace pet {

namespace {

constexpr double kPi = std::numbers::pi;

double flank_factor(const FlatTopPulse &p) {
  return std::sqrt(2.0 * kPi) * p.sigma * std::erf(p.n_sigma);
}

FlatTopPulse scaled(const FlatTopPulse &p, double ratio, double sign) {
  // ratio = target area / calibrated area
  FlatTopPulse out = p;
  const double flank = flank_factor(p);
  const double target = ratio * (p.width + flank);  // in units of |A|
  if (target >= flank) {
    out.width = target - flank;
    out.amplitude = sign * p.amplitude;
  } else {
    out.width = 0.0;
    out.amplitude = sign * p.amplitude * (target / flank);
  }
  return out;
}

std::string drive(int q) { return "d" + std::to_string(q); }
std::string control(int c, int t) { return "u" + std::to_string(c) + "_" + std::to_string(t); }

}  // namespace

int round_up(double samples, int granularity) {
  const double units = std::ceil(samples / granularity - 1e-9);
  return static_cast<int>(std::max(0.0, units)) * granularity;
}

int FlatTopPulse::duration(int granularity) const { return round_up(raw_duration(), granularity); }

double flank_area(const FlatTopPulse &p) { return std::abs(p.amplitude) * flank_factor(p); }

double pulse_area(const FlatTopPulse &p) {
  return std::abs(p.amplitude) * (p.width + flank_factor(p));
}

const EdgeCalibration *BackendModel::edge(int c, int t) const {
  for (const auto &e : edges) {
    if (e.control == c && e.target == t) return &e;
  }
  return nullptr;
}

bool BackendModel::coupled(int a, int b) const { return edge(a, b) || edge(b, a); }

int BackendModel::cnot_samples(const EdgeCalibration &cal) const {
  return round_up(cal.cnot_duration_ns / dt_ns, granularity);
}

void BackendModel::validate() const {
  if (!(dt_ns > 0)) throw Error("backend: dt must be positive");
  if (granularity <= 0) throw Error("backend: granularity must be positive");
  for (std::size_t q = 0; q < qubits.size(); ++q) {
    const auto &p = qubits[q];
    const std::string where = "backend qubit " + std::to_string(q) + ": ";
    if (!(p.t1_us > 0) || !(p.t2_us > 0)) throw Error(where + "T1 and T2 must be positive");
    if (p.t2_us > 2.0 * p.t1_us) throw Error(where + "T2 exceeds 2 T1");
    if (p.sq_duration < 0 || p.sq_duration % granularity != 0) {
      throw Error(where + "sq_duration must be a non-negative multiple of the granularity");
    }
    for (int col = 0; col < 2; ++col) {
      if (p.readout_confusion.col(col).minCoeff() < 0 ||
          std::abs(p.readout_confusion.col(col).sum() - 1.0) > 1e-9) {
        throw Error(where + "readout confusion columns must be distributions");
      }
    }
  }
  for (const auto &e : edges) {
    const std::string where =
        "backend edge " + std::to_string(e.control) + "->" + std::to_string(e.target) + ": ";
    if (e.control < 0 || e.target < 0 || e.control >= num_qubits() || e.target >= num_qubits() ||
        e.control == e.target) {
      throw Error(where + "invalid qubits");
    }
    if (std::abs(e.cr.amplitude) > 1.0 || std::abs(e.rotary.amplitude) > 1.0) {
      throw Error(where + "amplitude exceeds 1");
    }
    if (e.cr.width < 0 || e.rotary.width < 0) throw Error(where + "negative width");
    if (e.cr.duration(granularity) != e.rotary.duration(granularity)) {
      throw Error(where + "cr and rotary durations differ");
    }
    if (cnot_samples(e) < 2 * e.cr.duration(granularity)) {
      throw Error(where + "cnot shorter than two cr pulses");
    }
  }
}

ScaledCr scale_cr(const EdgeCalibration &cal, double theta) {
  if (theta == 0.0) throw Error("scale_cr: zero angle must be elided by the caller");
  if (std::abs(theta) > kPi / 2 + 1e-12) throw Error("scale_cr: |theta| exceeds pi/2");
  const double ratio = 2.0 * std::abs(theta) / kPi;
  const double sign = theta > 0 ? 1.0 : -1.0;
  return {scaled(cal.cr, ratio, sign), scaled(cal.rotary, ratio, sign)};
}

void Schedule::add(ScheduleEntry e) {
  if (e.duration > 0) {
    for (const auto &o : entries_) {
      if (o.channel != e.channel || o.duration == 0) continue;
      if (e.start < o.start + o.duration && o.start < e.start + e.duration) {
        throw Error("schedule: overlapping entries on channel " + e.channel);
      }
    }
  }
  total_ = std::max(total_, e.start + e.duration);
  entries_.push_back(std::move(e));
}

void Schedule::append(const Schedule &other, int offset) {
  for (auto e : other.entries_) {
    e.start += offset;
    add(std::move(e));
  }
}

namespace {

// One scaled CR with its concurrent rotary tone starting at `t`; returns its
// length.
int add_cr(Schedule &s, const EdgeCalibration &cal, double theta, int t, int granularity,
           const std::string &label) {
  ScaledCr p = scale_cr(cal, theta);
  p.cr.channel = control(cal.control, cal.target);
  p.rotary.channel = drive(cal.target);
  const int d = p.cr.duration(granularity);
  s.add({p.cr.channel, t, d, EntryKind::kCr, label, p.cr});
  s.add({p.rotary.channel, t, d, EntryKind::kRotary, label, p.rotary});
  // control qubit is busy for the whole pulse
  s.add({drive(cal.control), t, d, EntryKind::kDrive, "busy", std::nullopt});
  return d;
}

int add_sq(Schedule &s, int q, int t, int sq_duration, const std::string &label) {
  s.add({drive(q), t, sq_duration, EntryKind::kDrive, label, std::nullopt});
  return sq_duration;
}

}  // namespace

Schedule build_rzx_schedule(double theta, const EdgeCalibration &cal, int sq_duration, bool echoed,
                            int granularity) {
  if (theta == 0.0) throw Error("build_rzx_schedule: zero angle");
  Schedule s;
  if (!echoed) {
    add_cr(s, cal, 2.0 * theta, 0, granularity, "cr");
    return s;
  }
  int t = 0;
  t += add_cr(s, cal, theta, t, granularity, "cr_p");
  t += add_sq(s, cal.control, t, sq_duration, "x");
  t += add_cr(s, cal, -theta, t, granularity, "cr_m");
  add_sq(s, cal.control, t, sq_duration, "x");
  return s;
}

namespace {

Schedule cnot_block(const BackendModel &b, const EdgeCalibration &cal) {
  const int sq_c = b.qubits[cal.control].sq_duration;
  const int sq_t = b.qubits[cal.target].sq_duration;
  Schedule s = build_rzx_schedule(kPi / 2, cal, sq_c, true, b.granularity);
  const int total = b.cnot_samples(cal);
  const int tail = total - s.total_duration();
  if (tail >= sq_t) add_sq(s, cal.target, total - sq_t, sq_t, "sx");
  // pad both qubits to the calibrated length
  s.add({drive(cal.control), total, 0, EntryKind::kDrive, "end", std::nullopt});
  return s;
}

}  // namespace

ScheduledCircuit schedule_circuit(const Circuit &c, const BackendModel &b) {
  if (c.num_qubits() > b.num_qubits()) throw Error("schedule: circuit wider than backend");
  ScheduledCircuit out{c, {}, {}, b.dt_ns};
  std::vector<int> ready(c.num_qubits(), 0);
  for (const auto &g : c.gates()) {
    const int q0 = g.qubits[0];
    switch (g.kind) {
      case GateKind::kRz: {
        const double phase = g.params[0].evaluate();
        out.schedule.add({drive(q0), ready[q0], 0, EntryKind::kVirtualZ, "rz", std::nullopt, phase});
        out.instructions.push_back({g, ready[q0], 0});
        break;
      }
      case GateKind::kSx:
      case GateKind::kX: {
        const int d = b.qubits[q0].sq_duration;
        add_sq(out.schedule, q0, ready[q0], d, std::string(g.name()));
        out.instructions.push_back({g, ready[q0], d});
        ready[q0] += d;
        break;
      }
      case GateKind::kCx:
      case GateKind::kRzx: {
        const int q1 = g.qubits[1];
        const EdgeCalibration *cal = b.edge(q0, q1);
        if (!cal) {
          throw Error("schedule: no calibration for " + std::string(g.name()) + " on " +
                      std::to_string(q0) + "->" + std::to_string(q1));
        }
        Schedule block;
        if (g.kind == GateKind::kCx) {
          block = cnot_block(b, *cal);
        } else {
          const double phi = g.params[0].evaluate();
          if (std::abs(phi) > kPi / 4 + 1e-12) {
            throw Error("schedule: rzx angle beyond pi/4 needs an echo split");
          }
          if (std::abs(phi) < 1e-12) break;
          block = build_rzx_schedule(phi, *cal, b.qubits[q0].sq_duration, false, b.granularity);
        }
        const int start = std::max(ready[q0], ready[q1]);
        out.schedule.append(block, start);
        const int d = block.total_duration();
        out.instructions.push_back({g, start, d});
        ready[q0] = ready[q1] = start + d;
        break;
      }
      default:
        throw Error("schedule: unschedulable gate " + std::string(g.name()));
    }
  }
  return out;
}

std::string fixture_dir() {
#ifdef PET_FIXTURE_DIR
  return PET_FIXTURE_DIR;
#else
  return "fixtures";
#endif
}

BackendModel load_fixture_backend(const std::string &name) {
  return read_backend_file(fixture_dir() + "/backends/" + name + ".json");
}

}  // namespace pet
