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
#include <cstdint>
#include <functional>
#include <optional>
#include <vector>

#include "pet/pulse.hpp"
#include "pet/qcore.hpp"
#include "pet/sim.hpp"
#include "pet/unitary.hpp"

namespace pet {

/// Preparations |0>, |1>, |+>, |+i> and measurement bases X, Y, Z.
inline constexpr int kNumPreps = 4;
inline constexpr int kNumBases = 3;
enum class Basis { kX = 0, kY = 1, kZ = 2 };

Circuit prep_circuit(int prep, int qubit);
Circuit basis_circuit(Basis basis, int qubit);

struct QptCircuit {
  /// Per-qubit preparation and basis indices; unused for calibration.
  int prep[2] = {0, 0};
  Basis basis[2] = {Basis::kZ, Basis::kZ};
  /// Calibration circuits prepare the basis state `cal_state`.
  bool calibration = false;
  int cal_state = 0;
  Circuit before{2};
  Circuit after{2};
  /// before + target + after + measurements.
  Circuit circuit{2};
};

struct TomographyJob {
  Circuit target{2};
  /// 144 tomography circuits (prep-major) then 4 calibration circuits.
  std::vector<QptCircuit> circuits;

  std::size_t size() const { return circuits.size(); }
};

/// Throws Error unless `target` acts on two qubits.
TomographyJob build_qpt_circuits(const Circuit &target);

/// Outcome distribution over (q0, q1), outcome bit k = qubit k.
using Executor = std::function<std::vector<double>(const QptCircuit &, std::size_t index)>;

struct ExecutionOptions {
  /// nullopt: exact probabilities.
  std::optional<std::uint64_t> shots;
  std::uint64_t seed = 0;
};

/// Noiseless statevector execution.
Executor ideal_executor(const ExecutionOptions &opt = {});

/**
 * Ideal preparation and basis change around the noisy schedule of the
 * target, then readout confusion of backend qubits 0 and 1.  Calibration
 * circuits see only the readout confusion.
 */
Executor noisy_executor(const ScheduledCircuit &target, const BackendModel &b,
                        const ExecutionOptions &opt = {});

struct QptData {
  std::vector<std::vector<double>> probs;
};
QptData run_job(const TomographyJob &job, const Executor &exec);

/// Column-stochastic 4x4 matrix from the calibration circuits.
Eigen::Matrix4d calibration_matrix(const TomographyJob &job, const QptData &data);

/**
 * Solves cal p = raw in the least-squares sense subject to sum p = 1.
 * Entries may be negative.  Throws Error when the condition number of
 * `cal` exceeds 1e6.
 */
std::vector<double> mitigate_readout(const std::vector<double> &raw, const Eigen::Matrix4d &cal);

struct ReconstructionOptions {
  bool mitigate = true;
  /// Replace J by the nearest (Frobenius) positive semidefinite matrix of
  /// trace 4.
  bool project = false;
};

/**
 * Linear-inversion Choi matrix J = sum_ij |i><j| (x) L(|i><j|), input
 * factor first, basis index bit q = qubit q on both factors.
 */
Matrix reconstruct_choi(const TomographyJob &job, const QptData &data,
                        const ReconstructionOptions &opt = {});

/// Choi matrix of rho -> U rho U^dagger in the same convention.
Matrix choi_of_unitary(const Matrix &u);

/// Tr(J_U J) / d^2 with U in the circuit_unitary convention.
double process_fidelity(const Matrix &choi, const Matrix &u);

/**
 * theta - argmax_t process_fidelity(choi, family(t)) by golden-section
 * search on [theta - half_width, theta + half_width] to 1e-5 rad.  Throws
 * Error when the maximum sits on the bracket edge.
 */
double deviation_angle(const Matrix &choi, double theta,
                       const std::function<Matrix(double)> &family, double half_width = 0.25);

/// Average gate error limit 3/4 (1 - u1 - u2) of two qubits relaxing
/// independently for t; times in ns and us.
double coherence_limit_error(double t_ns, double t1a_us, double t1b_us, double t2a_us,
                             double t2b_us);

/// 4 (1 - F_process) / 5 for two qubits.
double average_gate_error(double process_fidelity);

}  // namespace pet
