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
#include <span>

#include "pet/qcore.hpp"

namespace pet {

using Complex = std::complex<double>;
using Matrix = Eigen::MatrixXcd;
using Matrix2 = Eigen::Matrix2cd;
using Matrix4 = Eigen::Matrix4cd;

inline constexpr int kDefaultUnitaryQubitCap = 10;

// Basis convention: computational basis index bit q is qubit q.  Inside a
// 4x4 two-qubit gate matrix the first listed qubit is the more significant
// tensor factor, so gate_unitary(rzx(c, t)) = exp(-i theta/2 Z (x) X).

Matrix2 pauli_x();
Matrix2 pauli_y();
Matrix2 pauli_z();
Matrix4 kron(const Matrix2 &a, const Matrix2 &b);

/// Exact matrix of a gate; throws Error for measurements and unbound
/// parameters.
Matrix gate_unitary(const Gate &g, const Binding &binding = {});

/// Product of embedded gate unitaries, later gates multiply on the left.
Matrix circuit_unitary(const Circuit &c, const Binding &binding = {},
                       int max_qubits = kDefaultUnitaryQubitCap);

/// Unitary of a two-qubit circuit in gate order: qubit 0 is the more
/// significant factor, as in gate_unitary of a gate on (0, 1).
Matrix4 two_qubit_unitary(const Circuit &c, const Binding &binding = {});

/// sqrt(1 - |Tr(U^dagger V)| / d); zero iff U and V agree up to phase.
double phase_distance(const Matrix &u, const Matrix &v);

/// |Tr(U^dagger V)|^2 / d^2.
double unitary_process_fidelity(const Matrix &u, const Matrix &v);

bool is_unitary(const Matrix &u, double tol = 1e-10);

namespace kernels {

/// Applies a 2x2 operator to qubit `q` of an amplitude vector.
void apply_1q(std::span<Complex> amps, int q, const Matrix2 &m);
/// Applies a 4x4 operator; `q_hi` maps to the more significant factor.
void apply_2q(std::span<Complex> amps, int q_hi, int q_lo, const Matrix4 &m);
/// Applies gate `g` (parameters already literal) to `amps`.
void apply_gate(std::span<Complex> amps, const Gate &g, const Binding &binding = {});

}  // namespace kernels

}  // namespace pet
