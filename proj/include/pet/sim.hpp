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
#include <vector>

#include "pet/pulse.hpp"
#include "pet/qcore.hpp"
#include "pet/unitary.hpp"

namespace pet {

inline constexpr int kMaxStatevectorQubits = 24;
inline constexpr int kMaxDensityQubits = 12;

class StateVector {
 public:
  /// |0...0> on n qubits.
  explicit StateVector(int num_qubits);

  int num_qubits() const { return n_; }
  const Eigen::VectorXcd &amplitudes() const { return amps_; }
  Eigen::VectorXcd &amplitudes() { return amps_; }

  void apply(const Gate &g, const Binding &binding = {});
  void apply(const Circuit &c, const Binding &binding = {});
  /// Probabilities of every basis state, index bit q = qubit q.
  std::vector<double> probabilities() const;

 private:
  int n_;
  Eigen::VectorXcd amps_;
};

/// Density matrix; row/column index bit q is qubit q.
class DensityMatrix {
 public:
  explicit DensityMatrix(int num_qubits);
  explicit DensityMatrix(const StateVector &psi);

  int num_qubits() const { return n_; }
  const Matrix &matrix() const { return rho_; }
  Matrix &matrix() { return rho_; }

  void apply(const Gate &g, const Binding &binding = {});
  void apply(const Circuit &c, const Binding &binding = {});
  void apply_unitary_1q(int q, const Matrix2 &u);
  /// Thermal relaxation towards |0> on one qubit.
  void relax(int q, double t_ns, double t1_us, double t2_us);

  double trace() const { return rho_.trace().real(); }
  std::vector<double> probabilities() const;

 private:
  int n_;
  Matrix rho_;
};

/**
 * Amplitude damping with p = 1 - exp(-t/T1) followed by pure dephasing
 * with 1/T_phi = 1/T2 - 1/(2 T1).  T1 may be infinite.  Throws Error when
 * T2 > 2 T1 or a time is not positive.
 */
std::vector<Matrix2> thermal_kraus(double t_ns, double t1_us, double t2_us);

/// Throws Error beyond kMaxStatevectorQubits or for measurements.
StateVector simulate_ideal(const Circuit &c, const Binding &binding = {});

/**
 * Runs the timed instructions of `s` on `rho` in order: each gate is applied
 * ideally and followed by thermal relaxation of its qubits for its duration.
 * Idle gaps relax too, and every qubit is relaxed up to the end of the
 * schedule.  Circuit qubit q uses backend qubit q.
 */
void evolve_noisy(DensityMatrix &rho, const ScheduledCircuit &s, const BackendModel &b);
DensityMatrix simulate_noisy(const ScheduledCircuit &s, const BackendModel &b);

/// Marginal over `qubits`; outcome bit k is qubits[k].
std::vector<double> measure_probs(const StateVector &psi, const std::vector<int> &qubits);
std::vector<double> measure_probs(const DensityMatrix &rho, const std::vector<int> &qubits);
std::vector<double> marginal(const std::vector<double> &full, const std::vector<int> &qubits);

/// Tensor-product readout error; confusions[k] acts on outcome bit k and is
/// column-stochastic, confusion(measured, prepared).
std::vector<double> apply_confusion(const std::vector<double> &probs,
                                    const std::vector<Eigen::Matrix2d> &confusions);

/// Multinomial sample of `shots` outcomes.
std::vector<std::uint64_t> sample(const std::vector<double> &probs, std::uint64_t shots,
                                  std::uint64_t seed);

}  // namespace pet
