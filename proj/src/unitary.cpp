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

#include "pet/unitary.hpp"

#include <cmath>

namespace pet {

namespace {
constexpr Complex kI{0.0, 1.0};
}

Matrix2 pauli_x() {
  Matrix2 m;
  m << 0, 1, 1, 0;
  return m;
}

Matrix2 pauli_y() {
  Matrix2 m;
  m << 0, -kI, kI, 0;
  return m;
}

Matrix2 pauli_z() {
  Matrix2 m;
  m << 1, 0, 0, -1;
  return m;
}

Matrix4 kron(const Matrix2 &a, const Matrix2 &b) {
  Matrix4 out;
  for (int i = 0; i < 2; ++i) {
    for (int j = 0; j < 2; ++j) out.block<2, 2>(2 * i, 2 * j) = a(i, j) * b;
  }
  return out;
}

Matrix gate_unitary(const Gate &g, const Binding &binding) {
  const double theta = g.params.empty() ? 0.0 : g.params[0].evaluate(binding);
  const double c = std::cos(theta / 2.0);
  const double s = std::sin(theta / 2.0);
  switch (g.kind) {
    case GateKind::kRz: {
      Matrix m = Matrix::Zero(2, 2);
      m(0, 0) = std::exp(-kI * theta / 2.0);
      m(1, 1) = std::exp(kI * theta / 2.0);
      return m;
    }
    case GateKind::kRx: {
      Matrix m(2, 2);
      m << c, -kI * s, -kI * s, c;
      return m;
    }
    case GateKind::kSx: {
      Matrix m(2, 2);
      m << Complex(0.5, 0.5), Complex(0.5, -0.5), Complex(0.5, -0.5), Complex(0.5, 0.5);
      return m;
    }
    case GateKind::kX:
      return pauli_x();
    case GateKind::kH: {
      Matrix m(2, 2);
      m << 1, 1, 1, -1;
      return m / std::sqrt(2.0);
    }
    case GateKind::kCx: {
      Matrix m = Matrix::Zero(4, 4);
      m(0, 0) = m(1, 1) = m(2, 3) = m(3, 2) = 1.0;
      return m;
    }
    case GateKind::kRzx: {
      Matrix m = c * Matrix::Identity(4, 4);
      m -= kI * s * kron(pauli_z(), pauli_x());
      return m;
    }
    case GateKind::kRzz: {
      Matrix m = Matrix::Zero(4, 4);
      m(0, 0) = m(3, 3) = std::exp(-kI * theta / 2.0);
      m(1, 1) = m(2, 2) = std::exp(kI * theta / 2.0);
      return m;
    }
    case GateKind::kSwap: {
      Matrix m = Matrix::Zero(4, 4);
      m(0, 0) = m(1, 2) = m(2, 1) = m(3, 3) = 1.0;
      return m;
    }
    case GateKind::kPhaseSwap: {
      Matrix m = Matrix::Zero(4, 4);
      m(0, 0) = m(3, 3) = 1.0;
      m(1, 2) = m(2, 1) = std::exp(kI * theta);
      return m;
    }
    case GateKind::kMeasure:
      break;
  }
  throw Error("measurement has no unitary");
}

Matrix circuit_unitary(const Circuit &c, const Binding &binding, int max_qubits) {
  if (c.num_qubits() > max_qubits) {
    throw Error("dense unitary of " + std::to_string(c.num_qubits()) +
                " qubits exceeds the cap of " + std::to_string(max_qubits));
  }
  for (const auto &g : c.gates()) {
    if (g.kind == GateKind::kMeasure) throw Error("circuit contains a measurement");
  }
  const Eigen::Index dim = Eigen::Index{1} << c.num_qubits();
  Matrix u = Matrix::Identity(dim, dim);
  for (const auto &g : c.gates()) {
    const Matrix m = gate_unitary(g, binding);
    const bool single = g.qubits.size() == 1;
    const Matrix2 m2 = single ? Matrix2(m) : Matrix2::Zero();
    const Matrix4 m4 = single ? Matrix4::Zero() : Matrix4(m);
    for (Eigen::Index col = 0; col < dim; ++col) {
      std::span<Complex> column(u.data() + col * dim, static_cast<std::size_t>(dim));
      if (single) {
        kernels::apply_1q(column, g.qubits[0], m2);
      } else {
        kernels::apply_2q(column, g.qubits[0], g.qubits[1], m4);
      }
    }
  }
  return u;
}

Matrix4 two_qubit_unitary(const Circuit &c, const Binding &binding) {
  if (c.num_qubits() != 2) throw Error("two_qubit_unitary: expected a two-qubit circuit");
  Matrix4 swap = Matrix4::Zero();
  swap(0, 0) = swap(1, 2) = swap(2, 1) = swap(3, 3) = 1.0;
  return swap * Matrix4(circuit_unitary(c, binding)) * swap;
}

double phase_distance(const Matrix &u, const Matrix &v) {
  if (u.rows() != v.rows() || u.cols() != v.cols()) throw Error("dimension mismatch");
  const double d = static_cast<double>(u.rows());
  const Complex overlap = (u.adjoint() * v).trace();
  const double mag = std::abs(overlap);
  if (mag == 0.0) return 1.0;
  // For unitaries ||e^{i phi} U - V||_F^2 / (2d) = 1 - |Tr(U^dagger V)|/d with
  // e^{i phi} aligned to the overlap.  The Frobenius form avoids the
  // cancellation in 1 - |tr|/d near zero.
  const Complex phase = overlap / mag;
  const double frob = (phase * u - v).norm();
  return frob / std::sqrt(2.0 * d);
}

double unitary_process_fidelity(const Matrix &u, const Matrix &v) {
  if (u.rows() != v.rows() || u.cols() != v.cols()) throw Error("dimension mismatch");
  const double d = static_cast<double>(u.rows());
  const double mag = std::abs((u.adjoint() * v).trace());
  return mag * mag / (d * d);
}

bool is_unitary(const Matrix &u, double tol) {
  if (u.rows() != u.cols()) return false;
  const Matrix diff = u.adjoint() * u - Matrix::Identity(u.rows(), u.cols());
  return diff.cwiseAbs().maxCoeff() <= tol;
}

namespace kernels {

void apply_1q(std::span<Complex> amps, int q, const Matrix2 &m) {
  const std::size_t stride = std::size_t{1} << q;
  const Complex m00 = m(0, 0), m01 = m(0, 1), m10 = m(1, 0), m11 = m(1, 1);
  for (std::size_t base = 0; base < amps.size(); base += 2 * stride) {
    for (std::size_t i = base; i < base + stride; ++i) {
      const Complex a0 = amps[i];
      const Complex a1 = amps[i + stride];
      amps[i] = m00 * a0 + m01 * a1;
      amps[i + stride] = m10 * a0 + m11 * a1;
    }
  }
}

void apply_2q(std::span<Complex> amps, int q_hi, int q_lo, const Matrix4 &m) {
  const std::size_t hi = std::size_t{1} << q_hi;
  const std::size_t lo = std::size_t{1} << q_lo;
  const std::size_t mask = hi | lo;
  for (std::size_t i = 0; i < amps.size(); ++i) {
    if (i & mask) continue;
    const std::size_t idx[4] = {i, i | lo, i | hi, i | hi | lo};
    Complex in[4];
    for (int k = 0; k < 4; ++k) in[k] = amps[idx[k]];
    for (int r = 0; r < 4; ++r) {
      amps[idx[r]] = m(r, 0) * in[0] + m(r, 1) * in[1] + m(r, 2) * in[2] + m(r, 3) * in[3];
    }
  }
}

void apply_gate(std::span<Complex> amps, const Gate &g, const Binding &binding) {
  const Matrix m = gate_unitary(g, binding);
  if (g.qubits.size() == 1) {
    apply_1q(amps, g.qubits[0], Matrix2(m));
  } else {
    apply_2q(amps, g.qubits[0], g.qubits[1], Matrix4(m));
  }
}

}  // namespace kernels

}  // namespace pet
