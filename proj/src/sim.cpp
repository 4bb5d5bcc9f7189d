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

#include "pet/sim.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>
#include <span>
#include <tuple>

namespace pet {

constexpr double kPi = std::numbers::pi;

namespace {

std::span<Complex> flat(Matrix &m) {
  return {m.data(), static_cast<std::size_t>(m.size())};
}

void check_gate(const Gate &g) {
  if (g.kind == GateKind::kMeasure) throw Error("simulation: measurements are read from the state");
}

// Amplitude-damping survival and coherence factors; validates the times.
std::pair<double, double> relaxation_factors(double t_ns, double t1_us, double t2_us) {
  if (t_ns < 0.0) throw Error("relaxation: negative duration");
  if (!(t1_us > 0.0) || !(t2_us > 0.0)) throw Error("relaxation: T1 and T2 must be positive");
  if (t2_us > 2.0 * t1_us * (1.0 + 1e-12)) throw Error("relaxation: T2 exceeds 2 T1");
  const double t_us = t_ns * 1e-3;
  return {std::exp(-t_us / t1_us), std::exp(-t_us / t2_us)};
}

}  // namespace

// ---------------------------------------------------------------------------

StateVector::StateVector(int num_qubits) : n_(num_qubits) {
  if (num_qubits < 0 || num_qubits > kMaxStatevectorQubits) {
    throw Error("statevector: " + std::to_string(num_qubits) + " qubits exceeds the cap of " +
                std::to_string(kMaxStatevectorQubits));
  }
  amps_ = Eigen::VectorXcd::Zero(Eigen::Index{1} << num_qubits);
  amps_(0) = 1.0;
}

void StateVector::apply(const Gate &g, const Binding &binding) {
  check_gate(g);
  kernels::apply_gate({amps_.data(), static_cast<std::size_t>(amps_.size())}, g, binding);
}

void StateVector::apply(const Circuit &c, const Binding &binding) {
  if (c.num_qubits() > n_) throw Error("statevector: circuit wider than state");
  for (const auto &g : c.gates()) apply(g, binding);
}

std::vector<double> StateVector::probabilities() const {
  std::vector<double> p(static_cast<std::size_t>(amps_.size()));
  for (Eigen::Index i = 0; i < amps_.size(); ++i) p[static_cast<std::size_t>(i)] = std::norm(amps_(i));
  return p;
}

StateVector simulate_ideal(const Circuit &c, const Binding &binding) {
  StateVector psi(c.num_qubits());
  psi.apply(c, binding);
  return psi;
}

// ---------------------------------------------------------------------------

DensityMatrix::DensityMatrix(int num_qubits) : n_(num_qubits) {
  if (num_qubits < 0 || num_qubits > kMaxDensityQubits) {
    throw Error("density matrix: " + std::to_string(num_qubits) + " qubits exceeds the cap of " +
                std::to_string(kMaxDensityQubits));
  }
  const Eigen::Index d = Eigen::Index{1} << num_qubits;
  rho_ = Matrix::Zero(d, d);
  rho_(0, 0) = 1.0;
}

DensityMatrix::DensityMatrix(const StateVector &psi) : DensityMatrix(psi.num_qubits()) {
  rho_ = psi.amplitudes() * psi.amplitudes().adjoint();
}

void DensityMatrix::apply(const Gate &g, const Binding &binding) {
  check_gate(g);
  const Matrix u = gate_unitary(g, binding);
  const Matrix uc = u.conjugate();
  auto data = flat(rho_);
  if (g.qubits.size() == 1) {
    kernels::apply_1q(data, g.qubits[0], Matrix2(u));
    kernels::apply_1q(data, g.qubits[0] + n_, Matrix2(uc));
  } else {
    kernels::apply_2q(data, g.qubits[0], g.qubits[1], Matrix4(u));
    kernels::apply_2q(data, g.qubits[0] + n_, g.qubits[1] + n_, Matrix4(uc));
  }
}

void DensityMatrix::apply(const Circuit &c, const Binding &binding) {
  if (c.num_qubits() > n_) throw Error("density matrix: circuit wider than state");
  for (const auto &g : c.gates()) apply(g, binding);
}

void DensityMatrix::apply_unitary_1q(int q, const Matrix2 &u) {
  auto data = flat(rho_);
  kernels::apply_1q(data, q, u);
  kernels::apply_1q(data, q + n_, Matrix2(u.conjugate()));
}

void DensityMatrix::relax(int q, double t_ns, double t1_us, double t2_us) {
  const auto [survive, coherence] = relaxation_factors(t_ns, t1_us, t2_us);
  if (t_ns == 0.0) return;
  const double decay = 1.0 - survive;
  const std::size_t row = std::size_t{1} << q;
  const std::size_t col = std::size_t{1} << (q + n_);
  auto data = flat(rho_);
  for (std::size_t i = 0; i < data.size(); ++i) {
    if (i & (row | col)) continue;
    Complex &r00 = data[i];
    Complex &r01 = data[i | col];
    Complex &r10 = data[i | row];
    Complex &r11 = data[i | row | col];
    r00 += decay * r11;
    r11 *= survive;
    r01 *= coherence;
    r10 *= coherence;
  }
}

std::vector<double> DensityMatrix::probabilities() const {
  std::vector<double> p(static_cast<std::size_t>(rho_.rows()));
  for (Eigen::Index i = 0; i < rho_.rows(); ++i) p[static_cast<std::size_t>(i)] = rho_(i, i).real();
  return p;
}

std::vector<Matrix2> thermal_kraus(double t_ns, double t1_us, double t2_us) {
  const auto [survive, coherence] = relaxation_factors(t_ns, t1_us, t2_us);
  // dephasing on top of the sqrt(survive) coherence left by damping
  const double f = coherence / std::sqrt(survive);
  const double a = std::sqrt((1.0 + f) / 2.0);
  const double b = std::sqrt(std::max(0.0, (1.0 - f) / 2.0));
  Matrix2 k0 = Matrix2::Zero();
  k0(0, 0) = 1.0;
  k0(1, 1) = std::sqrt(survive);
  Matrix2 k1 = Matrix2::Zero();
  k1(0, 1) = std::sqrt(1.0 - survive);
  const Matrix2 z = pauli_z();
  return {a * k0, a * k1, b * (z * k0), b * (z * k1)};
}

namespace {

// The calibrated cx block as timed gates: CR(-pi/4) X CR(pi/4) X on the
// control, then rz(pi/2) on the control and sx on the target.
std::vector<std::tuple<Gate, int, int>> cx_steps(const TimedInstruction &ins,
                                                 const BackendModel &b) {
  const int c = ins.gate.qubits[0], t = ins.gate.qubits[1];
  const EdgeCalibration *cal = b.edge(c, t);
  if (!cal) throw Error("noisy simulation: no calibration for cx");
  const int cr = cal->cr.duration(b.granularity);
  const int sq_c = b.qubits[c].sq_duration, sq_t = b.qubits[t].sq_duration;
  const int end = ins.start + ins.duration;
  int at = ins.start;
  std::vector<std::tuple<Gate, int, int>> out;
  out.emplace_back(Gate::rzx(c, t, -kPi / 4), at, cr);
  out.emplace_back(Gate::x(c), at += cr, sq_c);
  out.emplace_back(Gate::rzx(c, t, kPi / 4), at += sq_c, cr);
  out.emplace_back(Gate::x(c), at += cr, sq_c);
  at += sq_c;
  out.emplace_back(Gate::rz(c, kPi / 2), at, 0);
  const int sx_start = std::max(at, end - sq_t);
  out.emplace_back(Gate::sx(t), sx_start, std::max(0, end - sx_start));
  return out;
}

}  // namespace

void evolve_noisy(DensityMatrix &rho, const ScheduledCircuit &s, const BackendModel &b) {
  const int n = s.circuit.num_qubits();
  if (n > rho.num_qubits()) throw Error("noisy simulation: circuit wider than state");
  if (n > b.num_qubits()) throw Error("noisy simulation: circuit wider than backend");
  std::vector<int> done(static_cast<std::size_t>(n), 0);
  auto relax_to = [&](int q, int t) {
    if (t > done[q]) {
      const auto &p = b.qubits[q];
      rho.relax(q, b.to_ns(t - done[q]), p.t1_us, p.t2_us);
      done[q] = t;
    }
  };
  auto step = [&](const Gate &g, int start, int duration) {
    for (int q : g.qubits) relax_to(q, start);
    rho.apply(g);
    for (int q : g.qubits) relax_to(q, start + duration);
  };
  for (const auto &ins : s.instructions) {
    if (ins.gate.kind == GateKind::kCx && ins.duration > 0) {
      for (const auto &[g, start, duration] : cx_steps(ins, b)) step(g, start, duration);
    } else {
      step(ins.gate, ins.start, ins.duration);
    }
  }
  for (int q = 0; q < n; ++q) relax_to(q, s.total_duration());
}

DensityMatrix simulate_noisy(const ScheduledCircuit &s, const BackendModel &b) {
  DensityMatrix rho(s.circuit.num_qubits());
  evolve_noisy(rho, s, b);
  return rho;
}

// ---------------------------------------------------------------------------

std::vector<double> marginal(const std::vector<double> &full, const std::vector<int> &qubits) {
  std::vector<double> out(std::size_t{1} << qubits.size(), 0.0);
  for (std::size_t i = 0; i < full.size(); ++i) {
    std::size_t k = 0;
    for (std::size_t j = 0; j < qubits.size(); ++j) {
      if ((i >> qubits[j]) & 1U) k |= std::size_t{1} << j;
    }
    out[k] += full[i];
  }
  return out;
}

std::vector<double> measure_probs(const StateVector &psi, const std::vector<int> &qubits) {
  return marginal(psi.probabilities(), qubits);
}

std::vector<double> measure_probs(const DensityMatrix &rho, const std::vector<int> &qubits) {
  return marginal(rho.probabilities(), qubits);
}

std::vector<double> apply_confusion(const std::vector<double> &probs,
                                    const std::vector<Eigen::Matrix2d> &confusions) {
  if (probs.size() != (std::size_t{1} << confusions.size())) {
    throw Error("apply_confusion: one confusion matrix per outcome bit expected");
  }
  std::vector<double> p = probs;
  for (std::size_t k = 0; k < confusions.size(); ++k) {
    const std::size_t bit = std::size_t{1} << k;
    const Eigen::Matrix2d &m = confusions[k];
    for (std::size_t i = 0; i < p.size(); ++i) {
      if (i & bit) continue;
      const double p0 = p[i], p1 = p[i | bit];
      p[i] = m(0, 0) * p0 + m(0, 1) * p1;
      p[i | bit] = m(1, 0) * p0 + m(1, 1) * p1;
    }
  }
  return p;
}

std::vector<std::uint64_t> sample(const std::vector<double> &probs, std::uint64_t shots,
                                  std::uint64_t seed) {
  std::vector<double> w(probs.size());
  std::transform(probs.begin(), probs.end(), w.begin(), [](double x) { return std::max(x, 0.0); });
  std::mt19937_64 rng(seed);
  std::discrete_distribution<std::size_t> dist(w.begin(), w.end());
  std::vector<std::uint64_t> counts(probs.size(), 0);
  for (std::uint64_t s = 0; s < shots; ++s) ++counts[dist(rng)];
  return counts;
}

}  // namespace pet
