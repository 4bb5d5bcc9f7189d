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

#include <vector>

#include "pet/qcore.hpp"
#include "pet/unitary.hpp"

namespace pet {

/// Angles rejected as "zero" when emitting rotations.
inline constexpr double kZeroAngle = 1e-9;

/**
 * Non-local coordinates of a two-qubit gate, in radians.  The interaction
 * is exp(i (alpha XX + beta YY + gamma ZZ) / 2).  Canonical points satisfy
 * alpha >= beta >= gamma >= 0 and alpha + beta <= pi, which implies
 * alpha <= pi and alpha + beta + gamma <= 3 pi / 2.
 */
struct WeylCoordinates {
  double alpha = 0.0;
  double beta = 0.0;
  double gamma = 0.0;
};

bool in_weyl_chamber(const WeylCoordinates &k, double tol = 1e-12);

/// exp(i (alpha XX + beta YY + gamma ZZ) / 2).
Matrix4 weyl_interaction(const WeylCoordinates &k);

/**
 * U = e^{i global_phase} (k1_left (x) k1_right) A(coords) (k2_left (x) k2_right).
 * The "left" factor acts on the first (more significant) qubit.  All four
 * local factors have unit determinant.
 */
struct KakDecomposition {
  Matrix2 k1_left;
  Matrix2 k1_right;
  Matrix2 k2_left;
  Matrix2 k2_right;
  WeylCoordinates coords;
  double global_phase = 0.0;

  Matrix4 reassemble() const;
};

/// Throws Error when `u` is not a 4x4 unitary.
KakDecomposition kak_decompose(const Matrix &u);

/// A(raw) = left * A(coords) * right exactly, phases included.
struct CanonicalWeyl {
  WeylCoordinates coords;
  Matrix4 left;
  Matrix4 right;
};
CanonicalWeyl weyl_canonicalize(double alpha, double beta, double gamma);

/// Canonical coordinates of the phase-swap gate; requires |theta| <= pi.
WeylCoordinates swap_theta_coords(double theta);

/// Decomposition of e^{i phase} A(raw) with the canonicalizing Clifford
/// corrections as local parts.
KakDecomposition kak_from_coordinates(const WeylCoordinates &raw, double phase = 0.0);

/// Exact decomposition of phase_swap(theta) with Clifford local parts.
KakDecomposition phase_swap_kak(double theta);

/// Circuit over {rz, sx, x, cx} on qubits (0, 1), at most three cx.  Qubit 0
/// is the first tensor factor (see two_qubit_unitary).
Circuit synth_three_cnot(const KakDecomposition &k);

/// Circuit over {rz, sx, x, rzx} on qubits (0, 1) with one rzx term per
/// non-zero coordinate, each wrapped into [-pi/2, pi/2].  With `echoed`
/// every term is emitted as rzx(t/2), x, rzx(-t/2), x on the control.
Circuit synth_three_rzx(const KakDecomposition &k, bool echoed);

/// Splits a 4x4 matrix proportional to a tensor product into unit
/// determinant factors: m = e^{i phase} (left (x) right).
struct LocalFactors {
  Matrix2 left;
  Matrix2 right;
  double phase = 0.0;
};
LocalFactors factor_local(const Matrix4 &m);

/**
 * Canonical single-qubit form rz(b) sx rz(c) sx rz(a) (execution order),
 * shortened to [rz, sx, rz] or [rz, x, rz] when the rotation is a quarter or
 * half turn, to [rz] for pure phases, and elided for identity.  Zero rz
 * angles are dropped.
 */
std::vector<Gate> decompose_1q(const Matrix2 &u, int qubit);

/// Euler ZXZ angles: u = e^{i phase} Rz(a) Rx(theta) Rz(b).
struct EulerZxz {
  double a = 0.0;
  double theta = 0.0;
  double b = 0.0;
  double phase = 0.0;
};
EulerZxz euler_zxz(const Matrix2 &u);

/// Wraps an angle into (-pi, pi].
double wrap_angle(double theta);

}  // namespace pet
