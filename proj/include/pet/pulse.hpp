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

#include <Eigen/Dense>
#include <complex>
#include <optional>
#include <string>
#include <vector>

#include "pet/qcore.hpp"

namespace pet {

/// Gaussian-square envelope.  `sigma` and `width` are in samples.
struct FlatTopPulse {
  std::complex<double> amplitude{0.0, 0.0};
  double sigma = 64.0;
  double width = 0.0;
  double n_sigma = 2.0;
  std::string channel;

  /// Unrounded length in samples, width + 2 n_sigma sigma.
  double raw_duration() const { return width + 2.0 * n_sigma * sigma; }
  /// Length rounded up to a multiple of `granularity`.
  int duration(int granularity) const;
};

/// |A| (w + sqrt(2 pi) sigma erf(n_sigma)).
double pulse_area(const FlatTopPulse &p);
/// Area of the two flanks alone, |A| sqrt(2 pi) sigma erf(n_sigma).
double flank_area(const FlatTopPulse &p);

/// Smallest multiple of `granularity` not below `samples`.
int round_up(double samples, int granularity);

struct EdgeCalibration {
  int control = 0;
  int target = 1;
  FlatTopPulse cr;
  FlatTopPulse rotary;
  double cnot_duration_ns = 0.0;
};

struct QubitProperties {
  double t1_us = 100.0;
  double t2_us = 100.0;
  int sq_duration = 160;
  /// Column-stochastic: confusion(measured, prepared).
  Eigen::Matrix2d readout_confusion = Eigen::Matrix2d::Identity();
};

struct BackendModel {
  std::string name;
  double dt_ns = 2.0 / 9.0;
  int granularity = 16;
  std::vector<QubitProperties> qubits;
  std::vector<EdgeCalibration> edges;

  int num_qubits() const { return static_cast<int>(qubits.size()); }
  /// Calibration of the directed edge, or nullptr.
  const EdgeCalibration *edge(int control, int target) const;
  bool coupled(int a, int b) const;
  /// Calibrated CNOT length in samples.
  int cnot_samples(const EdgeCalibration &cal) const;
  double to_ns(int samples) const { return samples * dt_ns; }

  /// Throws Error naming the first violated invariant.
  void validate() const;
};

/// CR and rotary pulses for one half of an echoed R_ZX(theta): the area of
/// the calibrated pulse is multiplied by 2|theta|/pi, width first, then
/// amplitude once the flat top is exhausted.  Negative theta flips the
/// amplitude sign.  Requires 0 < |theta| <= pi/2.
struct ScaledCr {
  FlatTopPulse cr;
  FlatTopPulse rotary;
};
ScaledCr scale_cr(const EdgeCalibration &cal, double theta);

enum class EntryKind { kCr, kRotary, kDrive, kVirtualZ };

struct ScheduleEntry {
  std::string channel;
  int start = 0;
  int duration = 0;
  EntryKind kind = EntryKind::kDrive;
  std::string label;
  std::optional<FlatTopPulse> pulse;
  double phase = 0.0;
};

class Schedule {
 public:
  /// Throws Error when the entry overlaps another on its channel.
  void add(ScheduleEntry e);
  /// Appends `other` shifted by `offset` samples.
  void append(const Schedule &other, int offset);

  const std::vector<ScheduleEntry> &entries() const { return entries_; }
  int total_duration() const { return total_; }

 private:
  std::vector<ScheduleEntry> entries_;
  int total_ = 0;
};

/// Echoed: CR(theta), x on the control, CR(-theta), x, each CR scaled for
/// half of R_ZX(theta).  Non-echoed: one pulse carrying the whole rotation,
/// scale_cr(cal, 2 theta).  Throws Error for theta = 0.
Schedule build_rzx_schedule(double theta, const EdgeCalibration &cal, int sq_duration,
                            bool echoed, int granularity);

/// Gate placed on the timeline; `duration` is in samples.
struct TimedInstruction {
  Gate gate;
  int start = 0;
  int duration = 0;
};

struct ScheduledCircuit {
  Circuit circuit;
  std::vector<TimedInstruction> instructions;
  Schedule schedule;
  double dt_ns = 0.0;

  int total_duration() const { return schedule.total_duration(); }
  double total_duration_ns() const { return schedule.total_duration() * dt_ns; }
};

/**
 * As-soon-as-possible placement.  rz is virtual; sx and x take the qubit's
 * sq_duration; cx uses the calibrated CNOT; rzx(phi) becomes one non-echoed
 * pulse and needs |phi| <= pi/4.  Other gates are unschedulable.
 */
ScheduledCircuit schedule_circuit(const Circuit &c, const BackendModel &b);

/// Named fixture backends shipped under fixtures/backends.
BackendModel load_fixture_backend(const std::string &name);
std::string fixture_dir();

}  // namespace pet
