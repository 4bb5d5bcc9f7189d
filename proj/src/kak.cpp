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

#include "pet/kak.hpp"

#include <Eigen/Eigenvalues>
#include <algorithm>
#include <array>
#include <cmath>
#include <numbers>
#include <optional>

namespace pet {

namespace {

constexpr double kPi = std::numbers::pi;
constexpr Complex kI{0.0, 1.0};
constexpr double kSnap = 1e-12;

using Real4 = Eigen::Matrix4d;

Matrix4 magic_basis() {
  const double r = 1.0 / std::sqrt(2.0);
  Matrix4 b;
  b << r, 0, 0, kI * r,  //
      0, kI * r, r, 0,   //
      0, kI * r, -r, 0,  //
      r, 0, 0, -kI * r;
  return b;
}

Matrix2 pauli(int axis) {
  switch (axis) {
    case 0:
      return pauli_x();
    case 1:
      return pauli_y();
    default:
      return pauli_z();
  }
}

Matrix4 sigma(int axis) { return kron(pauli(axis), pauli(axis)); }

Matrix2 hadamard() {
  Matrix2 h;
  h << 1, 1, 1, -1;
  return h / std::sqrt(2.0);
}

Matrix2 phase_s() {
  Matrix2 s;
  s << 1, 0, 0, kI;
  return s;
}

Matrix2 rz_matrix(double t) {
  Matrix2 m = Matrix2::Zero();
  m(0, 0) = std::exp(-kI * t / 2.0);
  m(1, 1) = std::exp(kI * t / 2.0);
  return m;
}

// (i Sigma_j)^m for any integer m.
Matrix4 pauli_shift(int axis, long m) {
  const long r = ((m % 4) + 4) % 4;
  Matrix4 out = Matrix4::Identity();
  for (long i = 0; i < r; ++i) out = (kI * sigma(axis)) * out;
  return out;
}

// Orthogonal P with P^T M P diagonal, M complex symmetric unitary.  Real and
// imaginary parts of M commute, so a generic real combination shares their
// eigenvectors; a fixed sequence of weights keeps the result deterministic.
Real4 simultaneous_diagonalizer(const Matrix4 &m) {
  static constexpr std::array<double, 8> kWeights = {
      0.7071067811865476, 1.8137993642342178, 0.4142135623730950, 3.1415926535897931,
      0.1234567890123456, 2.7182818284590451, 5.4321012345678901, 0.0577215664901533};
  const Real4 re = m.real();
  const Real4 im = m.imag();
  Real4 best;
  double best_err = std::numeric_limits<double>::infinity();
  for (double w : kWeights) {
    Eigen::SelfAdjointEigenSolver<Real4> es(re + w * im);
    const Real4 p = es.eigenvectors();
    const Matrix4 d = p.transpose().cast<Complex>() * m * p.cast<Complex>();
    double off = 0.0;
    for (int i = 0; i < 4; ++i) {
      for (int j = 0; j < 4; ++j) {
        if (i != j) off = std::max(off, std::abs(d(i, j)));
      }
    }
    if (off < best_err) {
      best_err = off;
      best = p;
    }
    if (off < 1e-12) break;
  }
  if (best_err > 1e-8) throw Error("KAK: failed to diagonalize the magic-basis square");
  return best;
}

void sign_normalize(Real4 &p, int col) {
  for (int r = 0; r < 4; ++r) {
    if (std::abs(p(r, col)) > 1e-9) {
      if (p(r, col) < 0) p.col(col) = -p.col(col);
      return;
    }
  }
}

// Orders eigenvector columns by eigenphase, breaking ties lexicographically.
void sort_columns(Real4 &p, const Matrix4 &m) {
  for (int c = 0; c < 4; ++c) sign_normalize(p, c);
  std::array<int, 4> order = {0, 1, 2, 3};
  std::array<double, 4> phase{};
  for (int c = 0; c < 4; ++c) {
    const Complex d = (p.col(c).transpose().cast<Complex>() * m * p.col(c).cast<Complex>())(0, 0);
    phase[c] = std::arg(d);
  }
  std::sort(order.begin(), order.end(), [&](int a, int b) {
    if (std::abs(phase[a] - phase[b]) > 1e-9) return phase[a] < phase[b];
    for (int r = 0; r < 4; ++r) {
      if (std::abs(p(r, a) - p(r, b)) > 1e-9) return p(r, a) < p(r, b);
    }
    return a < b;
  });
  Real4 sorted;
  for (int c = 0; c < 4; ++c) sorted.col(c) = p.col(order[c]);
  if (sorted.determinant() < 0) sorted.col(3) = -sorted.col(3);
  p = sorted;
}

struct Canonicalizer {
  std::array<double, 3> k;
  Matrix4 left = Matrix4::Identity();
  Matrix4 right = Matrix4::Identity();

  // A(k) = A(k - m pi e_j) (i Sigma_j)^m
  void shift(int axis, long m) {
    if (m == 0) return;
    k[axis] -= static_cast<double>(m) * kPi;
    right = pauli_shift(axis, m) * right;
  }

  // A(k) = V^dagger A(k') V with k' = k, axes j and l exchanged.
  void exchange(int j, int l) {
    const Matrix2 v = (pauli(j) + pauli(l)) / std::sqrt(2.0);
    const Matrix4 vv = kron(v, v);
    left = left * vv.adjoint();
    right = vv * right;
    std::swap(k[j], k[l]);
  }

  // A(k) = W A(k') W with k' = k, axes j and l negated.
  void negate(int j, int l) {
    const int m = 3 - j - l;
    const Matrix4 w = kron(pauli(m), Matrix2::Identity());
    left = left * w;
    right = w * right;
    k[j] = -k[j];
    k[l] = -k[l];
  }

  void reduce() {
    for (int j = 0; j < 3; ++j) {
      shift(j, static_cast<long>(std::floor(k[j] / kPi)));
      if (k[j] > kPi - kSnap) shift(j, 1);
    }
  }

  void sort() {
    for (int pass = 0; pass < 2; ++pass) {
      for (int j = 0; j < 2; ++j) {
        if (k[j] < k[j + 1]) exchange(j, j + 1);
      }
    }
  }

  void run() {
    reduce();
    sort();
    if (k[0] + k[1] > kPi + kSnap) {
      negate(0, 1);
      shift(0, -1);
      shift(1, -1);
      sort();
    }
    if (std::abs(k[2]) < kSnap && k[0] > kPi / 2 + kSnap) {
      negate(0, 2);
      shift(0, -1);
      sort();
    }
    for (double &x : k) {
      if (std::abs(x) < kSnap) x = 0.0;
    }
  }
};

// Largest entry selects a row/column pair of blocks that carries both
// factors without cancellation.
Matrix2 unit_det(const Matrix2 &m) { return m / std::sqrt(m.determinant()); }

std::vector<Gate> flush_1q(Matrix2 &pending, int qubit) {
  auto gates = decompose_1q(pending, qubit);
  pending = Matrix2::Identity();
  return gates;
}

void append_all(Circuit &c, const std::vector<Gate> &gates) {
  for (const auto &g : gates) c.append(g);
}

}  // namespace

double wrap_angle(double theta) {
  double t = std::remainder(theta, 2.0 * kPi);
  if (t <= -kPi) t += 2.0 * kPi;
  return t;
}

bool in_weyl_chamber(const WeylCoordinates &k, double tol) {
  return k.alpha + tol >= k.beta && k.beta + tol >= k.gamma && k.gamma >= -tol &&
         k.alpha + k.beta <= kPi + tol;
}

Matrix4 weyl_interaction(const WeylCoordinates &k) {
  // XX, YY and ZZ are simultaneously diagonal in the magic basis.
  const Matrix4 b = magic_basis();
  const std::array<double, 3> coeff = {k.alpha, k.beta, k.gamma};
  Matrix4 diag = Matrix4::Zero();
  for (int i = 0; i < 4; ++i) {
    double phase = 0.0;
    for (int j = 0; j < 3; ++j) {
      const Matrix4 s = b.adjoint() * sigma(j) * b;
      phase += coeff[j] * s(i, i).real() / 2.0;
    }
    diag(i, i) = std::exp(kI * phase);
  }
  return b * diag * b.adjoint();
}

Matrix4 KakDecomposition::reassemble() const {
  return std::exp(kI * global_phase) * kron(k1_left, k1_right) * weyl_interaction(coords) *
         kron(k2_left, k2_right);
}

LocalFactors factor_local(const Matrix4 &m) {
  Eigen::Index r = 0, c = 0;
  m.cwiseAbs().maxCoeff(&r, &c);
  const int i = static_cast<int>(r / 2), k = static_cast<int>(r % 2);
  const int j = static_cast<int>(c / 2), l = static_cast<int>(c % 2);
  Matrix2 a, b;
  for (int x = 0; x < 2; ++x) {
    for (int y = 0; y < 2; ++y) {
      a(x, y) = m(2 * x + k, 2 * y + l);
      b(x, y) = m(2 * i + x, 2 * j + y);
    }
  }
  LocalFactors out;
  out.left = unit_det(a);
  out.right = unit_det(b);
  const Complex s = m(r, c) / (out.left(i, j) * out.right(k, l));
  out.phase = std::arg(s);
  return out;
}

CanonicalWeyl weyl_canonicalize(double alpha, double beta, double gamma) {
  Canonicalizer can{{alpha, beta, gamma}};
  can.run();
  return {{can.k[0], can.k[1], can.k[2]}, can.left, can.right};
}

WeylCoordinates swap_theta_coords(double theta) {
  if (std::abs(theta) > kPi + 1e-12) throw Error("swap_theta_coords: |theta| must be <= pi");
  const double eta = theta > 0 ? -1.0 : 1.0;
  return weyl_canonicalize(eta * kPi / 2, eta * kPi / 2, theta + eta * kPi / 2).coords;
}

KakDecomposition kak_from_coordinates(const WeylCoordinates &raw, double phase) {
  const CanonicalWeyl cw = weyl_canonicalize(raw.alpha, raw.beta, raw.gamma);
  const LocalFactors l = factor_local(cw.left);
  const LocalFactors r = factor_local(cw.right);
  KakDecomposition out;
  out.k1_left = l.left;
  out.k1_right = l.right;
  out.k2_left = r.left;
  out.k2_right = r.right;
  out.coords = cw.coords;
  out.global_phase = wrap_angle(phase + l.phase + r.phase);
  return out;
}

KakDecomposition phase_swap_kak(double theta) {
  // phase_swap(theta) = e^{i theta/2} SWAP rzz(theta), SWAP = e^{-i pi/4} A(pi/2, pi/2, pi/2)
  return kak_from_coordinates({kPi / 2, kPi / 2, kPi / 2 - theta}, theta / 2 - kPi / 4);
}

KakDecomposition kak_decompose(const Matrix &u) {
  if (u.rows() != 4 || u.cols() != 4) throw Error("kak_decompose: expected a 4x4 matrix");
  if (!is_unitary(u, 1e-9)) throw Error("kak_decompose: matrix is not unitary");
  const Matrix4 b = magic_basis();
  const Complex det = Matrix4(u).determinant();
  const double phase0 = std::arg(det) / 4.0;
  const Matrix4 us = Matrix4(u) * std::exp(-kI * phase0);
  const Matrix4 up = b.adjoint() * us * b;
  const Matrix4 m2 = up.transpose() * up;

  Real4 p = simultaneous_diagonalizer(m2);
  sort_columns(p, m2);
  const Matrix4 pc = p.cast<Complex>();
  const Matrix4 d = pc.transpose() * m2 * pc;

  std::array<double, 4> phi{};
  for (int j = 0; j < 3; ++j) phi[j] = std::arg(d(j, j)) / 2.0;
  phi[3] = -(phi[0] + phi[1] + phi[2]);
  Matrix4 diag_inv = Matrix4::Zero();
  for (int j = 0; j < 4; ++j) diag_inv(j, j) = std::exp(-kI * phi[j]);
  // up = O1 diag(e^{i phi}) P^T with O1 real orthogonal
  const Matrix4 o1 = (up * pc * diag_inv).real().cast<Complex>();
  const Matrix4 k1 = b * o1 * b.adjoint();
  const Matrix4 k2 = b * pc.transpose() * b.adjoint();

  // b diag(e^{i phi}) b^dagger = A(raw)
  std::array<double, 3> raw{};
  for (int j = 0; j < 3; ++j) {
    const Matrix4 s = b.adjoint() * sigma(j) * b;
    double acc = 0.0;
    for (int i = 0; i < 4; ++i) acc += phi[i] * s(i, i).real();
    raw[j] = acc / 2.0;
  }
  const CanonicalWeyl cw = weyl_canonicalize(raw[0], raw[1], raw[2]);
  const LocalFactors l = factor_local(k1 * cw.left);
  const LocalFactors r = factor_local(cw.right * k2);

  KakDecomposition out;
  out.k1_left = l.left;
  out.k1_right = l.right;
  out.k2_left = r.left;
  out.k2_right = r.right;
  out.coords = cw.coords;
  out.global_phase = wrap_angle(phase0 + l.phase + r.phase);
  return out;
}

EulerZxz euler_zxz(const Matrix2 &u) {
  const Complex det = u.determinant();
  const double phase = std::arg(det) / 2.0;
  const Matrix2 v = u * std::exp(-kI * phase);
  // v = Rz(a) Rx(theta) Rz(b):
  //   v00 = cos(t/2) e^{-i(a+b)/2}, v10 = -i sin(t/2) e^{i(a-b)/2}
  EulerZxz e;
  e.phase = phase;
  e.theta = 2.0 * std::atan2(std::abs(v(1, 0)), std::abs(v(0, 0)));
  double sum = 0.0, diff = 0.0;
  if (std::abs(v(0, 0)) > 1e-14) sum = 2.0 * std::arg(v(1, 1));
  if (std::abs(v(1, 0)) > 1e-14) diff = 2.0 * (std::arg(v(1, 0)) + kPi / 2);
  e.a = (sum + diff) / 2.0;
  e.b = (sum - diff) / 2.0;
  return e;
}

std::vector<Gate> decompose_1q(const Matrix2 &u, int qubit) {
  constexpr double kTol = 1e-10;
  const EulerZxz e = euler_zxz(u);
  std::vector<Gate> out;
  auto emit_rz = [&](double t) {
    t = wrap_angle(t);
    if (std::abs(t) > kTol) out.push_back(Gate::rz(qubit, t));
  };
  if (std::abs(e.theta) < kTol) {
    emit_rz(e.a + e.b);
  } else if (std::abs(e.theta - kPi / 2) < kTol) {
    // Rx(pi/2) = sx up to phase
    emit_rz(e.b);
    out.push_back(Gate::sx(qubit));
    emit_rz(e.a);
  } else if (std::abs(e.theta - kPi) < kTol) {
    // Rz(a) X Rz(b) = X Rz(b - a), fold everything to one side
    emit_rz(e.b - e.a);
    out.push_back(Gate::x(qubit));
  } else {
    // Rx(t) = Rz(pi/2) sx Rz(t + pi) sx Rz(pi/2) up to phase
    emit_rz(e.b + kPi / 2);
    out.push_back(Gate::sx(qubit));
    emit_rz(e.theta + kPi);
    out.push_back(Gate::sx(qubit));
    emit_rz(e.a + kPi / 2);
  }
  return out;
}

Circuit synth_three_rzx(const KakDecomposition &k, bool echoed) {
  Circuit c(2);
  Matrix2 pending0 = k.k2_left;
  Matrix2 pending1 = k.k2_right;
  std::array<double, 3> angles = {k.coords.alpha, k.coords.beta, k.coords.gamma};
  for (int j = 0; j < 3; ++j) {
    const long m = std::lround(angles[j] / kPi);
    if (m == 0) continue;
    angles[j] -= static_cast<double>(m) * kPi;
    if (m % 2 != 0) {
      pending0 = pauli(j) * pending0;
      pending1 = pauli(j) * pending1;
    }
  }
  // V_j with V_j (Z (x) X) V_j^dagger = -Sigma_j, so
  // exp(i t Sigma_j / 2) = V_j rzx(t) V_j^dagger.
  const Matrix2 h = hadamard();
  const Matrix2 s = phase_s();
  const std::array<std::pair<Matrix2, Matrix2>, 3> conj = {{
      {h, pauli_z()},
      {s * h, s.adjoint()},
      {Matrix2::Identity(), pauli_x() * h},
  }};
  for (int j = 2; j >= 0; --j) {
    const double t = angles[j];
    if (std::abs(t) < kZeroAngle) continue;
    pending0 = conj[j].first.adjoint() * pending0;
    pending1 = conj[j].second.adjoint() * pending1;
    append_all(c, flush_1q(pending0, 0));
    append_all(c, flush_1q(pending1, 1));
    if (echoed) {
      c.append(Gate::rzx(0, 1, t / 2));
      c.append(Gate::x(0));
      c.append(Gate::rzx(0, 1, -t / 2));
      pending0 = pauli_x();
    } else {
      c.append(Gate::rzx(0, 1, t));
    }
    pending0 = conj[j].first * pending0;
    pending1 = conj[j].second * pending1;
  }
  pending0 = k.k1_left * pending0;
  pending1 = k.k1_right * pending1;
  append_all(c, flush_1q(pending0, 0));
  append_all(c, flush_1q(pending1, 1));
  return c;
}

namespace {

Matrix2 rx_matrix(double t) {
  Matrix2 m;
  m << std::cos(t / 2), -kI * std::sin(t / 2), -kI * std::sin(t / 2), std::cos(t / 2);
  return m;
}

Matrix2 ry_matrix(double t) {
  Matrix2 m;
  m << std::cos(t / 2), -std::sin(t / 2), std::sin(t / 2), std::cos(t / 2);
  return m;
}

// One step of a cx skeleton: either a cx or a 1q rotation on `qubit`.
struct CoreStep {
  std::optional<Gate> cx;
  int qubit = 0;
  Matrix2 local = Matrix2::Identity();
};

// Skeleton whose canonical coordinates equal `w`, with as few cx as the
// class allows.
std::vector<CoreStep> cnot_core(const WeylCoordinates &w) {
  std::vector<CoreStep> c;
  auto cx = [&](int ctl, int tgt) { c.push_back({Gate::cx(ctl, tgt)}); };
  auto rot = [&](int q, const Matrix2 &m) { c.push_back({std::nullopt, q, m}); };
  if (std::abs(w.alpha) < kZeroAngle) return c;
  if (std::abs(w.beta) < kZeroAngle && std::abs(w.alpha - kPi / 2) < kZeroAngle) {
    cx(0, 1);
    return c;
  }
  if (std::abs(w.gamma) < kZeroAngle) {
    // cx (Rx(s) (x) Rz(t)) cx = exp(-i (s XX + t ZZ) / 2)
    cx(0, 1);
    rot(0, rx_matrix(w.alpha));
    rot(1, rz_matrix(w.beta));
    cx(0, 1);
    return c;
  }
  cx(1, 0);
  rot(0, rz_matrix(w.alpha + kPi / 2));
  rot(1, ry_matrix(w.beta + kPi / 2));
  cx(0, 1);
  rot(1, ry_matrix(w.gamma + kPi / 2));
  cx(1, 0);
  return c;
}

Matrix4 core_unitary(const std::vector<CoreStep> &steps) {
  Matrix4 u = Matrix4::Identity();
  for (const auto &s : steps) {
    if (s.cx) {
      // qubit 0 is the more significant factor here
      Matrix4 g = Matrix4(gate_unitary(*s.cx));
      if (s.cx->qubits[0] == 1) g = Matrix4(gate_unitary(Gate::swap(0, 1))) * g * Matrix4(gate_unitary(Gate::swap(0, 1)));
      u = g * u;
    } else if (s.qubit == 0) {
      u = kron(s.local, Matrix2::Identity()) * u;
    } else {
      u = kron(Matrix2::Identity(), s.local) * u;
    }
  }
  return u;
}

}  // namespace

Circuit synth_three_cnot(const KakDecomposition &k) {
  const auto core = cnot_core(k.coords);
  const KakDecomposition ck = kak_decompose(core_unitary(core));
  const Matrix4 a = weyl_interaction(k.coords);
  const Matrix4 ac = weyl_interaction(ck.coords);
  if ((a - ac).cwiseAbs().maxCoeff() > 1e-8) throw Error("synth_three_cnot: core mismatch");
  // U = K1 A K2 = K1 C1^dagger (C1 A C2) C2^dagger K2
  Matrix2 pending0 = ck.k2_left.adjoint() * k.k2_left;
  Matrix2 pending1 = ck.k2_right.adjoint() * k.k2_right;
  Circuit c(2);
  for (const auto &step : core) {
    if (step.cx) {
      append_all(c, flush_1q(pending0, 0));
      append_all(c, flush_1q(pending1, 1));
      c.append(*step.cx);
    } else {
      Matrix2 &pend = step.qubit == 0 ? pending0 : pending1;
      pend = step.local * pend;
    }
  }
  pending0 = k.k1_left * ck.k1_left.adjoint() * pending0;
  pending1 = k.k1_right * ck.k1_right.adjoint() * pending1;
  append_all(c, flush_1q(pending0, 0));
  append_all(c, flush_1q(pending1, 1));
  return c;
}

}  // namespace pet
