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

#include <array>
#include <cmath>
#include <numbers>
#include <unsupported/Eigen/KroneckerProduct>

namespace pet {

namespace {

constexpr double kPi = std::numbers::pi;
constexpr int kTomoCircuits = kNumPreps * kNumPreps * kNumBases * kNumBases;

Matrix2 pauli(int k) {
  switch (k) {
    case 0: return Matrix2::Identity();
    case 1: return pauli_x();
    case 2: return pauli_y();
    default: return pauli_z();
  }
}

// Two-qubit Pauli with index bit q = qubit q: a acts on qubit 0.
Matrix4 pauli2(int a, int b) { return kron(pauli(b), pauli(a)); }

Matrix4 state_of(const Circuit &prep) {
  const Matrix u = circuit_unitary(prep);
  return u.col(0) * u.col(0).adjoint();
}

// Projectors of the four outcomes after the basis change `after`.
std::array<Matrix4, 4> projectors(const Circuit &after) {
  const Matrix v = circuit_unitary(after);
  std::array<Matrix4, 4> out;
  for (int k = 0; k < 4; ++k) {
    const Eigen::Vector4cd row = v.row(k).adjoint();
    out[k] = row * row.adjoint();
  }
  return out;
}

std::vector<double> finish(std::vector<double> probs, const ExecutionOptions &opt,
                           std::size_t index) {
  if (!opt.shots) return probs;
  const auto counts = sample(probs, *opt.shots, opt.seed + index);
  for (std::size_t k = 0; k < probs.size(); ++k) {
    probs[k] = static_cast<double>(counts[k]) / static_cast<double>(*opt.shots);
  }
  return probs;
}

// Least-squares map from the 576 tomography probabilities to the Pauli
// coefficients of J.
const Eigen::MatrixXd &inversion_matrix(const TomographyJob &job) {
  static const Eigen::MatrixXd pinv = [&job] {
    Eigen::MatrixXd a(kTomoCircuits * 4, 256);
    for (int c = 0; c < kTomoCircuits; ++c) {
      const QptCircuit &qc = job.circuits[static_cast<std::size_t>(c)];
      const Matrix4 rho_t = state_of(qc.before).transpose();
      const auto proj = projectors(qc.after);
      for (int in = 0; in < 16; ++in) {
        const double tin = (rho_t * pauli2(in % 4, in / 4)).trace().real();
        for (int out = 0; out < 16; ++out) {
          const Matrix4 p = pauli2(out % 4, out / 4);
          for (int k = 0; k < 4; ++k) {
            a(4 * c + k, 16 * in + out) = tin * (proj[k] * p).trace().real();
          }
        }
      }
    }
    return Eigen::MatrixXd(a.completeOrthogonalDecomposition().pseudoInverse());
  }();
  return pinv;
}

}  // namespace

Circuit prep_circuit(int prep, int qubit) {
  Circuit c(2);
  switch (prep) {
    case 0: break;
    case 1: c.append(Gate::x(qubit)); break;
    case 2: c.append(Gate::h(qubit)); break;
    case 3:
      c.append(Gate::h(qubit));
      c.append(Gate::rz(qubit, kPi / 2));
      break;
    default: throw Error("prep index out of range");
  }
  return c;
}

Circuit basis_circuit(Basis basis, int qubit) {
  Circuit c(2);
  switch (basis) {
    case Basis::kX: c.append(Gate::h(qubit)); break;
    case Basis::kY:
      c.append(Gate::rz(qubit, -kPi / 2));
      c.append(Gate::h(qubit));
      break;
    case Basis::kZ: break;
  }
  return c;
}

TomographyJob build_qpt_circuits(const Circuit &target) {
  if (target.num_qubits() != 2) throw Error("process tomography needs a two-qubit target");
  TomographyJob job;
  job.target = target;
  auto assemble = [&](QptCircuit &qc, bool with_target) {
    Circuit c(2);
    for (const auto &g : qc.before.gates()) c.append(g);
    if (with_target) {
      for (const auto &g : target.gates()) c.append(g);
    }
    for (const auto &g : qc.after.gates()) c.append(g);
    c.append(Gate::measure(0));
    c.append(Gate::measure(1));
    qc.circuit = std::move(c);
  };
  for (int p0 = 0; p0 < kNumPreps; ++p0) {
    for (int p1 = 0; p1 < kNumPreps; ++p1) {
      for (int b0 = 0; b0 < kNumBases; ++b0) {
        for (int b1 = 0; b1 < kNumBases; ++b1) {
          QptCircuit qc;
          qc.prep[0] = p0;
          qc.prep[1] = p1;
          qc.basis[0] = static_cast<Basis>(b0);
          qc.basis[1] = static_cast<Basis>(b1);
          qc.before = prep_circuit(p0, 0);
          const Circuit prep1 = prep_circuit(p1, 1);
          for (const auto &g : prep1.gates()) qc.before.append(g);
          qc.after = basis_circuit(qc.basis[0], 0);
          const Circuit basis1 = basis_circuit(qc.basis[1], 1);
          for (const auto &g : basis1.gates()) qc.after.append(g);
          assemble(qc, true);
          job.circuits.push_back(std::move(qc));
        }
      }
    }
  }
  for (int s = 0; s < 4; ++s) {
    QptCircuit qc;
    qc.calibration = true;
    qc.cal_state = s;
    for (int q = 0; q < 2; ++q) {
      if ((s >> q) & 1) qc.before.append(Gate::x(q));
    }
    assemble(qc, false);
    job.circuits.push_back(std::move(qc));
  }
  return job;
}

Executor ideal_executor(const ExecutionOptions &opt) {
  return [opt](const QptCircuit &qc, std::size_t index) {
    const StateVector psi = simulate_ideal(strip_measurements(qc.circuit).body);
    return finish(measure_probs(psi, {0, 1}), opt, index);
  };
}

Executor noisy_executor(const ScheduledCircuit &target, const BackendModel &b,
                        const ExecutionOptions &opt) {
  if (target.circuit.num_qubits() != 2) throw Error("noisy executor needs a two-qubit schedule");
  if (b.num_qubits() < 2) throw Error("noisy executor needs two backend qubits");
  const std::vector<Eigen::Matrix2d> confusion{b.qubits[0].readout_confusion,
                                               b.qubits[1].readout_confusion};
  return [target, b, opt, confusion](const QptCircuit &qc, std::size_t index) {
    DensityMatrix rho(2);
    rho.apply(qc.before);
    if (!qc.calibration) {
      evolve_noisy(rho, target, b);
      rho.apply(qc.after);
    }
    return finish(apply_confusion(measure_probs(rho, {0, 1}), confusion), opt, index);
  };
}

QptData run_job(const TomographyJob &job, const Executor &exec) {
  QptData data;
  data.probs.reserve(job.size());
  for (std::size_t i = 0; i < job.size(); ++i) data.probs.push_back(exec(job.circuits[i], i));
  return data;
}

Eigen::Matrix4d calibration_matrix(const TomographyJob &job, const QptData &data) {
  if (data.probs.size() != job.size()) throw Error("calibration: missing results");
  Eigen::Matrix4d cal = Eigen::Matrix4d::Zero();
  int found = 0;
  for (std::size_t i = 0; i < job.size(); ++i) {
    const QptCircuit &qc = job.circuits[i];
    if (!qc.calibration) continue;
    for (int k = 0; k < 4; ++k) cal(k, qc.cal_state) = data.probs[i][static_cast<std::size_t>(k)];
    ++found;
  }
  if (found != 4) throw Error("calibration: expected four calibration circuits");
  return cal;
}

std::vector<double> mitigate_readout(const std::vector<double> &raw, const Eigen::Matrix4d &cal) {
  if (raw.size() != 4) throw Error("mitigate_readout: expected four outcomes");
  Eigen::JacobiSVD<Eigen::Matrix4d> svd(cal);
  const auto &s = svd.singularValues();
  if (s(3) <= 0.0 || s(0) / s(3) > 1e6) throw Error("mitigate_readout: singular calibration");
  // KKT system of min |cal p - raw|^2 subject to sum p = 1
  Eigen::Matrix<double, 5, 5> kkt = Eigen::Matrix<double, 5, 5>::Zero();
  kkt.topLeftCorner<4, 4>() = 2.0 * cal.transpose() * cal;
  kkt.block<4, 1>(0, 4).setOnes();
  kkt.block<1, 4>(4, 0).setOnes();
  Eigen::Matrix<double, 5, 1> rhs;
  const Eigen::Vector4d r(raw[0], raw[1], raw[2], raw[3]);
  rhs.head<4>() = 2.0 * cal.transpose() * r;
  rhs(4) = 1.0;
  const Eigen::Matrix<double, 5, 1> x = kkt.fullPivLu().solve(rhs);
  return {x(0), x(1), x(2), x(3)};
}

Matrix reconstruct_choi(const TomographyJob &job, const QptData &data,
                        const ReconstructionOptions &opt) {
  if (job.size() != static_cast<std::size_t>(kTomoCircuits + 4) ||
      data.probs.size() != job.size()) {
    throw Error("reconstruct_choi: missing results");
  }
  Eigen::Matrix4d cal = Eigen::Matrix4d::Identity();
  if (opt.mitigate) cal = calibration_matrix(job, data);
  Eigen::VectorXd b(kTomoCircuits * 4);
  for (int c = 0; c < kTomoCircuits; ++c) {
    const auto &raw = data.probs[static_cast<std::size_t>(c)];
    if (raw.size() != 4) throw Error("reconstruct_choi: expected four outcomes per circuit");
    const auto p = opt.mitigate ? mitigate_readout(raw, cal) : raw;
    for (int k = 0; k < 4; ++k) b(4 * c + k) = p[static_cast<std::size_t>(k)];
  }
  const Eigen::VectorXd coeff = inversion_matrix(job) * b;
  Matrix j = Matrix::Zero(16, 16);
  for (int in = 0; in < 16; ++in) {
    const Matrix4 pin = pauli2(in % 4, in / 4);
    for (int out = 0; out < 16; ++out) {
      j += coeff(16 * in + out) * Matrix(Eigen::kroneckerProduct(pin, pauli2(out % 4, out / 4)));
    }
  }
  if (opt.project) {
    // nearest PSD matrix of trace 4: zero the most negative eigenvalues and
    // spread their weight over the rest (ascending order from the solver)
    Eigen::SelfAdjointEigenSolver<Matrix> es(j);
    Eigen::VectorXd ev = es.eigenvalues();
    const auto n = ev.size();
    ev.array() += (4.0 - ev.sum()) / static_cast<double>(n);
    double carry = 0.0;
    for (Eigen::Index i = 0; i < n; ++i) {
      const double share = carry / static_cast<double>(n - i);
      if (ev(i) + share < 0.0) {
        carry += ev(i);
        ev(i) = 0.0;
      } else {
        ev.tail(n - i).array() += share;
        break;
      }
    }
    j = es.eigenvectors() * ev.asDiagonal() * es.eigenvectors().adjoint();
  }
  return j;
}

Matrix choi_of_unitary(const Matrix &u) {
  const Eigen::Index d = u.rows();
  Matrix j(d * d, d * d);
  for (Eigen::Index i = 0; i < d; ++i) {
    for (Eigen::Index k = 0; k < d; ++k) {
      j.block(i * d, k * d, d, d) = u.col(i) * u.col(k).adjoint();
    }
  }
  return j;
}

double process_fidelity(const Matrix &choi, const Matrix &u) {
  const double d = static_cast<double>(u.rows());
  return (choi_of_unitary(u) * choi).trace().real() / (d * d);
}

double deviation_angle(const Matrix &choi, double theta,
                       const std::function<Matrix(double)> &family, double half_width) {
  const double invphi = (std::sqrt(5.0) - 1.0) / 2.0;
  const double lo0 = theta - half_width, hi0 = theta + half_width;
  double lo = lo0, hi = hi0;
  auto f = [&](double t) { return process_fidelity(choi, family(t)); };
  double x1 = hi - invphi * (hi - lo), x2 = lo + invphi * (hi - lo);
  double f1 = f(x1), f2 = f(x2);
  while (hi - lo > 1e-6) {
    if (f1 < f2) {
      lo = x1;
      x1 = x2;
      f1 = f2;
      x2 = lo + invphi * (hi - lo);
      f2 = f(x2);
    } else {
      hi = x2;
      x2 = x1;
      f2 = f1;
      x1 = hi - invphi * (hi - lo);
      f1 = f(x1);
    }
  }
  const double best = 0.5 * (lo + hi);
  if (best - lo0 < 1e-4 || hi0 - best < 1e-4) {
    throw Error("deviation_angle: no interior maximum in the bracket");
  }
  return theta - best;
}

double coherence_limit_error(double t_ns, double t1a_us, double t1b_us, double t2a_us,
                             double t2b_us) {
  if (!(t_ns >= 0.0)) throw Error("coherence limit: duration must be non-negative");
  for (double t : {t1a_us, t1b_us, t2a_us, t2b_us}) {
    if (!(t > 0.0)) throw Error("coherence limit: T1 and T2 must be positive");
  }
  if (t2a_us > 2.0 * t1a_us || t2b_us > 2.0 * t1b_us) {
    throw Error("coherence limit: T2 exceeds 2 T1");
  }
  const double t = t_ns * 1e-3;
  const double e1a = std::exp(-t / t1a_us), e1b = std::exp(-t / t1b_us);
  const double e2a = std::exp(-t / t2a_us), e2b = std::exp(-t / t2b_us);
  const double u1 = (e1a + e1b + e1a * e1b) / 15.0;
  const double u2 = 2.0 / 15.0 * (e2b + e2b * e1a + e2a + e2a * e1b + 2.0 * e2a * e2b);
  return 0.75 * (1.0 - u1 - u2);
}

double average_gate_error(double process_fidelity) { return 0.8 * (1.0 - process_fidelity); }

}  // namespace pet
