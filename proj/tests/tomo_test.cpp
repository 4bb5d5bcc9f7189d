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

#include "pet/tomo.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "pet/kak.hpp"
#include "pet/transpile.hpp"
#include "test_util.hpp"

namespace pet {
namespace {

constexpr double kPi = std::numbers::pi;

Circuit rzz_circuit(double theta) {
  Circuit c(2);
  c.append(Gate::rzz(0, 1, theta));
  return c;
}

Matrix rzz_unitary(double theta) { return circuit_unitary(rzz_circuit(theta)); }

Matrix ideal_choi(const Circuit &target, const ExecutionOptions &opt = {}) {
  const TomographyJob job = build_qpt_circuits(target);
  return reconstruct_choi(job, run_job(job, ideal_executor(opt)));
}

Matrix noisy_choi(const Circuit &target, const BackendModel &b, bool scaled,
                  const ExecutionOptions &opt = {}, const ReconstructionOptions &ropt = {}) {
  const TomographyJob job = build_qpt_circuits(target);
  const ScheduledCircuit s = scaled ? pulse_efficient_pipeline(target, b) : cnot_pipeline(target, b);
  return reconstruct_choi(job, run_job(job, noisy_executor(s, b, opt)), ropt);
}

Matrix partial_trace_output(const Matrix &j) {
  Matrix out = Matrix::Zero(4, 4);
  for (int i = 0; i < 4; ++i) {
    for (int k = 0; k < 4; ++k) out(i, k) = j.block(4 * i, 4 * k, 4, 4).trace();
  }
  return out;
}

void expect_valid_choi(const Matrix &j, double tol) {
  EXPECT_LT((j - j.adjoint()).cwiseAbs().maxCoeff(), tol);
  EXPECT_NEAR(j.trace().real(), 4.0, tol);
  EXPECT_LT((partial_trace_output(j) - Matrix::Identity(4, 4)).cwiseAbs().maxCoeff(), tol);
}

TEST(QptJob, SizeAndLayout) {
  const TomographyJob job = build_qpt_circuits(rzz_circuit(0.4));
  EXPECT_EQ(job.size(), 148u);
  std::size_t cal = 0;
  for (const auto &qc : job.circuits) cal += qc.calibration;
  EXPECT_EQ(cal, 4u);
  const QptCircuit &first = job.circuits[0];
  EXPECT_EQ(first.prep[0], 0);
  EXPECT_EQ(first.prep[1], 0);
  EXPECT_EQ(first.basis[0], Basis::kX);
  // prep (0,0) with basis (Z,Z): the target and measurements only
  const QptCircuit &zz = job.circuits[8];
  EXPECT_EQ(zz.basis[0], Basis::kZ);
  EXPECT_EQ(zz.basis[1], Basis::kZ);
  ASSERT_EQ(zz.circuit.size(), 3u);
  EXPECT_EQ(zz.circuit.gates()[0].kind, GateKind::kRzz);
  EXPECT_EQ(zz.circuit.gates()[1].kind, GateKind::kMeasure);
  Circuit three(3);
  EXPECT_THROW(build_qpt_circuits(three), Error);
}

TEST(QptJob, PreparedStates) {
  const double r = 1.0 / std::sqrt(2.0);
  const std::vector<std::pair<Complex, Complex>> expected{
      {1.0, 0.0}, {0.0, 1.0}, {r, r}, {r, Complex(0.0, r)}};
  for (int p = 0; p < kNumPreps; ++p) {
    const Matrix u = circuit_unitary(prep_circuit(p, 0));
    Eigen::VectorXcd v = Eigen::VectorXcd::Zero(4);
    v(0) = expected[static_cast<std::size_t>(p)].first;
    v(1) = expected[static_cast<std::size_t>(p)].second;
    EXPECT_NEAR(std::abs(v.dot(u.col(0))), 1.0, 1e-14) << p;
  }
  EXPECT_THROW(prep_circuit(4, 0), Error);
}

TEST(Mitigation, IdentityAndExactInverse) {
  const std::vector<double> p{0.4, 0.1, 0.3, 0.2};
  const auto same = mitigate_readout(p, Eigen::Matrix4d::Identity());
  for (int k = 0; k < 4; ++k) EXPECT_NEAR(same[k], p[k], 1e-12);
  Eigen::Matrix2d a, b;
  a << 0.97, 0.04, 0.03, 0.96;
  b << 0.95, 0.05, 0.05, 0.95;
  const auto raw = apply_confusion(p, {a, b});
  Eigen::Matrix4d cal;
  for (int s = 0; s < 4; ++s) {
    std::vector<double> e(4, 0.0);
    e[s] = 1.0;
    const auto col = apply_confusion(e, {a, b});
    for (int k = 0; k < 4; ++k) cal(k, s) = col[k];
  }
  const auto back = mitigate_readout(raw, cal);
  for (int k = 0; k < 4; ++k) EXPECT_NEAR(back[k], p[k], 1e-9);
  Eigen::Matrix4d singular = Eigen::Matrix4d::Constant(0.25);
  EXPECT_THROW(mitigate_readout(raw, singular), Error);
}

TEST(Mitigation, FiniteShotsWithinBounds) {
  const std::vector<double> p{0.4, 0.1, 0.3, 0.2};
  Eigen::Matrix2d a;
  a << 0.96, 0.05, 0.04, 0.95;
  const auto exact = apply_confusion(p, {a, a});
  Eigen::Matrix4d cal;
  for (int s = 0; s < 4; ++s) {
    std::vector<double> e(4, 0.0);
    e[s] = 1.0;
    const auto col = apply_confusion(e, {a, a});
    for (int k = 0; k < 4; ++k) cal(k, s) = col[k];
  }
  const std::uint64_t shots = 50000;
  const auto counts = sample(exact, shots, 3);
  std::vector<double> raw(4);
  for (int k = 0; k < 4; ++k) raw[k] = static_cast<double>(counts[k]) / shots;
  const auto back = mitigate_readout(raw, cal);
  double total = 0.0;
  for (int k = 0; k < 4; ++k) {
    total += back[k];
    // the inverse amplifies the multinomial spread by at most 1/(1 - 2 * 0.05)^2
    const double sigma = std::sqrt(exact[k] * (1 - exact[k]) / shots) / 0.81;
    EXPECT_LT(std::abs(back[k] - p[k]), 3 * sigma) << k;
  }
  EXPECT_NEAR(total, 1.0, 1e-12);
}

TEST(Reconstruct, IdentityChoi) {
  const Matrix j = ideal_choi(Circuit(2));
  EXPECT_LT((j - choi_of_unitary(Matrix::Identity(4, 4))).cwiseAbs().maxCoeff(), 1e-6);
  expect_valid_choi(j, 1e-9);
}

TEST(Reconstruct, NoiselessTargets) {
  EXPECT_NEAR(process_fidelity(ideal_choi(rzz_circuit(kPi / 2)), rzz_unitary(kPi / 2)), 1.0, 1e-6);
  std::mt19937_64 rng(41);
  for (int trial = 0; trial < 10; ++trial) {
    const Matrix4 u = testing::haar_unitary(4, rng);
    const Circuit c = synth_three_cnot(kak_decompose(u));
    const Matrix j = ideal_choi(c);
    expect_valid_choi(j, 1e-9);
    EXPECT_GT(process_fidelity(j, circuit_unitary(c)), 1.0 - 1e-5);
  }
}

TEST(Reconstruct, NoisyRzz) {
  const BackendModel b = load_fixture_backend("mumbai_q1_q2");
  const Matrix j = noisy_choi(rzz_circuit(kPi / 2), b, true);
  expect_valid_choi(j, 1e-9);
  const double f = process_fidelity(j, rzz_unitary(kPi / 2));
  EXPECT_LT(f, 1.0);
  EXPECT_GT(f, 0.8);
}

TEST(Reconstruct, FiniteShotsProjected) {
  const BackendModel b = load_fixture_backend("mumbai_q1_q2");
  ExecutionOptions opt;
  opt.shots = 4000;
  opt.seed = 7;
  const Matrix j = noisy_choi(rzz_circuit(1.0), b, true, opt, {true, true});
  Eigen::SelfAdjointEigenSolver<Matrix> es(j);
  EXPECT_GT(es.eigenvalues().minCoeff(), -1e-12);
  EXPECT_NEAR(j.trace().real(), 4.0, 1e-9);
  const double f = process_fidelity(j, rzz_unitary(1.0));
  EXPECT_GT(f, 0.9);
  const Matrix again = noisy_choi(rzz_circuit(1.0), b, true, opt, {true, true});
  EXPECT_EQ(j, again);
}

TEST(Reconstruct, ProjectedFidelityConvergesWithShots) {
  const BackendModel b = load_fixture_backend("mumbai_q1_q2");
  const double exact =
      process_fidelity(noisy_choi(rzz_circuit(1.0), b, true, {}, {true, false}), rzz_unitary(1.0));
  ExecutionOptions opt;
  opt.seed = 3;
  double last_gap = 1.0;
  for (std::uint64_t shots : {1000ULL, 100000ULL}) {
    opt.shots = shots;
    const double f = process_fidelity(noisy_choi(rzz_circuit(1.0), b, true, opt, {true, true}),
                                      rzz_unitary(1.0));
    const double gap = std::abs(f - exact);
    EXPECT_LT(gap, last_gap);
    last_gap = gap;
  }
  EXPECT_LT(last_gap, 0.005);
}

TEST(Reconstruct, ProjectionKeepsPhysicalChoi) {
  const BackendModel b = load_fixture_backend("mumbai_q1_q2");
  const Matrix plain = noisy_choi(rzz_circuit(0.6), b, true, {}, {true, false});
  const Matrix projected = noisy_choi(rzz_circuit(0.6), b, true, {}, {true, true});
  EXPECT_LT((plain - projected).cwiseAbs().maxCoeff(), 1e-9);
}

TEST(ProcessFidelity, ClosedForms) {
  std::mt19937_64 rng(2);
  const Matrix4 u = testing::haar_unitary(4, rng);
  EXPECT_NEAR(process_fidelity(choi_of_unitary(u), u), 1.0, 1e-12);
  Matrix swap = Matrix::Zero(4, 4);
  swap(0, 0) = swap(1, 2) = swap(2, 1) = swap(3, 3) = 1.0;
  EXPECT_NEAR(process_fidelity(choi_of_unitary(Matrix::Identity(4, 4)), swap), 0.25, 1e-12);
}

TEST(ProcessFidelity, MonotoneInIdleNoise) {
  const BackendModel b = load_fixture_backend("mumbai_q1_q2");
  const Circuit target(2);
  const TomographyJob job = build_qpt_circuits(target);
  double last = 1.0 + 1e-12;
  for (int gap = 0; gap <= 8000; gap += 1600) {
    ScheduledCircuit s = schedule_circuit(target, b);
    if (gap > 0) s.schedule.add({"d0", 0, gap, EntryKind::kDrive, "idle", std::nullopt, 0.0});
    const Matrix j = reconstruct_choi(job, run_job(job, noisy_executor(s, b)));
    const double f = process_fidelity(j, Matrix::Identity(4, 4));
    EXPECT_LE(f, last);
    last = f;
  }
  EXPECT_LT(last, 0.99);
}

TEST(DeviationAngle, Cases) {
  auto family = [](double t) { return rzz_unitary(t); };
  for (double theta : {0.3, kPi / 4, 1.2}) {
    EXPECT_NEAR(deviation_angle(ideal_choi(rzz_circuit(theta)), theta, family), 0.0, 1e-4);
    const Matrix shifted = choi_of_unitary(rzz_unitary(theta + 0.02));
    EXPECT_NEAR(deviation_angle(shifted, theta, family), -0.02, 1e-4);
  }
  const BackendModel b = load_fixture_backend("mumbai_q1_q2");
  const Matrix noisy = noisy_choi(rzz_circuit(kPi / 3), b, true);
  EXPECT_NEAR(deviation_angle(noisy, kPi / 3, family), 0.0, 1e-3);
  const Matrix far = choi_of_unitary(rzz_unitary(1.0));
  EXPECT_THROW(deviation_angle(far, 0.2, family), Error);
}

TEST(CoherenceLimit, Limits) {
  EXPECT_EQ(coherence_limit_error(0.0, 102, 157, 34, 228), 0.0);
  EXPECT_EQ(coherence_limit_error(1e12, 102, 157, 34, 228), 0.75);
  // independent 50-digit evaluation of the closed form
  EXPECT_NEAR(coherence_limit_error(1478.0, 102, 157, 34, 228), 0.02424055506302412631, 1e-12);
  double last = 0.0;
  for (double t = 100.0; t < 1e6; t *= 1.5) {
    const double e = coherence_limit_error(t, 84, 141, 105, 132);
    EXPECT_GT(e, last);
    last = e;
  }
  EXPECT_THROW(coherence_limit_error(-1.0, 1, 1, 1, 1), Error);
  EXPECT_THROW(coherence_limit_error(1.0, 0, 1, 1, 1), Error);
  EXPECT_THROW(coherence_limit_error(1.0, 10, 10, 21, 1), Error);
}

TEST(CoherenceLimit, EchoedRzxMatchesSimulation) {
  const BackendModel b = load_fixture_backend("mumbai_q1_q2");
  Circuit c(2);
  c.append(Gate::rzx(0, 1, kPi / 2));
  const ScheduledCircuit s = pulse_efficient_pipeline(c, b);
  EXPECT_EQ(s.circuit.count(GateKind::kRzx), 2u);
  const TomographyJob job = build_qpt_circuits(c);
  const Matrix j = reconstruct_choi(job, run_job(job, noisy_executor(s, b)));
  const double err = average_gate_error(process_fidelity(j, circuit_unitary(c)));
  const auto &q = b.qubits;
  const double limit =
      coherence_limit_error(s.total_duration_ns(), q[0].t1_us, q[1].t1_us, q[0].t2_us, q[1].t2_us);
  EXPECT_NEAR(err / limit, 1.0, 0.05);
}

}  // namespace
}  // namespace pet
