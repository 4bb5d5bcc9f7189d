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

#include <gtest/gtest.h>

#include <numbers>
#include <random>

#include "test_util.hpp"

namespace pet {
namespace {

constexpr double kPi = std::numbers::pi;

Matrix unitary_of(const Gate &g) { return gate_unitary(g); }

void expect_coords(const WeylCoordinates &k, double a, double b, double c, double tol = 1e-9) {
  EXPECT_NEAR(k.alpha, a, tol);
  EXPECT_NEAR(k.beta, b, tol);
  EXPECT_NEAR(k.gamma, c, tol);
}

TEST(Kak, CnotIsQuarterTurnOnFirstAxis) {
  const auto k = kak_decompose(unitary_of(Gate::cx(0, 1)));
  expect_coords(k.coords, kPi / 2, 0, 0);
}

TEST(Kak, SwapIsCorner) {
  const auto k = kak_decompose(unitary_of(Gate::swap(0, 1)));
  expect_coords(k.coords, kPi / 2, kPi / 2, kPi / 2);
}

TEST(Kak, IdentityIsOrigin) {
  const auto k = kak_decompose(Matrix::Identity(4, 4));
  expect_coords(k.coords, 0, 0, 0);
}

TEST(Kak, LocalProductIsOrigin) {
  std::mt19937_64 rng(7);
  const Matrix u = kron(testing::haar_2(rng), testing::haar_2(rng));
  const auto k = kak_decompose(u);
  expect_coords(k.coords, 0, 0, 0);
  EXPECT_LT(phase_distance(k.reassemble(), u), 1e-9);
}

TEST(Kak, RzzAndRzxShareCoordinates) {
  for (double t : {0.1, 0.7, -0.4, 1.5, 2.5, -3.0}) {
    const auto a = kak_decompose(unitary_of(Gate::rzz(0, 1, t))).coords;
    const auto b = kak_decompose(unitary_of(Gate::rzx(0, 1, t))).coords;
    const double expect = std::abs(t) <= kPi / 2 ? std::abs(t) : kPi - std::abs(t);
    expect_coords(a, expect, 0, 0);
    expect_coords(b, expect, 0, 0);
  }
}

TEST(Kak, RejectsNonUnitary) {
  Matrix m = Matrix::Identity(4, 4);
  m(0, 0) = 2.0;
  EXPECT_THROW(kak_decompose(m), Error);
  EXPECT_THROW(kak_decompose(Matrix::Identity(2, 2)), Error);
}

TEST(Kak, HaarRoundTrip) {
  std::mt19937_64 rng(20260101);
  for (int trial = 0; trial < 1000; ++trial) {
    const Matrix u = testing::haar_unitary(4, rng);
    const auto k = kak_decompose(u);
    ASSERT_LT(phase_distance(k.reassemble(), u), 1e-9) << "trial " << trial;
    ASSERT_TRUE(in_weyl_chamber(k.coords)) << "trial " << trial;
    for (const Matrix2 *m : {&k.k1_left, &k.k1_right, &k.k2_left, &k.k2_right}) {
      ASSERT_NEAR(std::abs(m->determinant() - Complex(1.0)), 0.0, 1e-9);
    }
  }
}

TEST(Kak, CoordinatesAreLocalInvariants) {
  std::mt19937_64 rng(99);
  for (int trial = 0; trial < 200; ++trial) {
    const Matrix u = testing::haar_unitary(4, rng);
    const Matrix v = kron(testing::haar_2(rng), testing::haar_2(rng)) * u *
                     kron(testing::haar_2(rng), testing::haar_2(rng));
    const auto a = kak_decompose(u).coords;
    const auto b = kak_decompose(v).coords;
    expect_coords(b, a.alpha, a.beta, a.gamma, 1e-8);
  }
}

TEST(Kak, DeterministicOutput) {
  std::mt19937_64 rng(3);
  const Matrix u = testing::haar_unitary(4, rng);
  const auto a = kak_decompose(u);
  const auto b = kak_decompose(u);
  EXPECT_EQ(a.k1_left, b.k1_left);
  EXPECT_EQ(a.k2_right, b.k2_right);
  EXPECT_EQ(a.global_phase, b.global_phase);
}

TEST(Weyl, CanonicalizeIsExact) {
  std::mt19937_64 rng(11);
  std::uniform_real_distribution<double> d(-7.0, 7.0);
  for (int trial = 0; trial < 2000; ++trial) {
    const WeylCoordinates raw{d(rng), d(rng), d(rng)};
    const auto cw = weyl_canonicalize(raw.alpha, raw.beta, raw.gamma);
    ASSERT_TRUE(in_weyl_chamber(cw.coords));
    ASSERT_LE(cw.coords.alpha, kPi + 1e-12);
    ASSERT_LE(cw.coords.alpha + cw.coords.beta + cw.coords.gamma, 1.5 * kPi + 1e-12);
    const Matrix4 lhs = weyl_interaction(raw);
    const Matrix4 rhs = cw.left * weyl_interaction(cw.coords) * cw.right;
    ASSERT_LT((lhs - rhs).cwiseAbs().maxCoeff(), 1e-10);
  }
}

TEST(Weyl, CanonicalizeIdempotent) {
  std::mt19937_64 rng(12);
  std::uniform_real_distribution<double> d(-7.0, 7.0);
  for (int trial = 0; trial < 500; ++trial) {
    const auto once = weyl_canonicalize(d(rng), d(rng), d(rng)).coords;
    const auto twice = weyl_canonicalize(once.alpha, once.beta, once.gamma).coords;
    expect_coords(twice, once.alpha, once.beta, once.gamma, 1e-12);
  }
}

TEST(Weyl, BoundaryVertices) {
  expect_coords(weyl_canonicalize(kPi, 0, 0).coords, 0, 0, 0);
  expect_coords(weyl_canonicalize(0, 0, -kPi / 2).coords, kPi / 2, 0, 0);
  expect_coords(weyl_canonicalize(-kPi / 2, -kPi / 2, -kPi / 2).coords, kPi / 2, kPi / 2, kPi / 2);
}

TEST(Weyl, SwapThetaMatchesPhaseSwapGate) {
  for (double t = -kPi; t <= kPi + 1e-12; t += kPi / 16) {
    const auto expect = kak_decompose(unitary_of(Gate::phase_swap(0, 1, t))).coords;
    const auto got = swap_theta_coords(t);
    expect_coords(got, expect.alpha, expect.beta, expect.gamma, 1e-9);
    expect_coords(got, kPi / 2, kPi / 2, std::abs(kPi / 2 - std::abs(t)), 1e-9);
  }
  EXPECT_THROW(swap_theta_coords(4.0), Error);
}

TEST(Weyl, PhaseSwapKakReassembles) {
  for (double t : {-3.0, -1.0, 0.0, 0.3, kPi / 2, 2.0, kPi}) {
    const auto k = phase_swap_kak(t);
    EXPECT_LT(phase_distance(k.reassemble(), unitary_of(Gate::phase_swap(0, 1, t))), 1e-12);
    EXPECT_LT((k.reassemble() - Matrix4(unitary_of(Gate::phase_swap(0, 1, t))))
                  .cwiseAbs()
                  .maxCoeff(),
              1e-12);
  }
}

TEST(Euler, RoundTripsHaar) {
  std::mt19937_64 rng(5);
  for (int trial = 0; trial < 500; ++trial) {
    const Matrix2 u = testing::haar_2(rng);
    const Circuit c(1, decompose_1q(u, 0));
    ASSERT_LT(phase_distance(circuit_unitary(c), u), 1e-10);
    ASSERT_LE(c.count(GateKind::kSx), 2u);
  }
}

TEST(Euler, SpecialCases) {
  EXPECT_TRUE(decompose_1q(Matrix2::Identity(), 0).empty());
  const auto z = decompose_1q(Matrix2(gate_unitary(Gate::rz(0, 0.3))), 0);
  ASSERT_EQ(z.size(), 1u);
  EXPECT_NEAR(z[0].params[0].constant(), 0.3, 1e-12);
  const auto sx = decompose_1q(Matrix2(gate_unitary(Gate::sx(0))), 0);
  EXPECT_EQ(Circuit(1, sx).count(GateKind::kSx), 1u);
  EXPECT_EQ(sx.size(), 1u);
  const auto x = decompose_1q(pauli_x(), 0);
  ASSERT_EQ(x.size(), 1u);
  EXPECT_EQ(x[0].kind, GateKind::kX);
  const auto h = decompose_1q(Matrix2(gate_unitary(Gate::h(0))), 0);
  EXPECT_EQ(Circuit(1, h).count(GateKind::kSx), 1u);
  EXPECT_LT(phase_distance(circuit_unitary(Circuit(1, h)), gate_unitary(Gate::h(0))), 1e-12);
}

TEST(Synthesis, ThreeCnotHaar) {
  std::mt19937_64 rng(42);
  for (int trial = 0; trial < 300; ++trial) {
    const Matrix u = testing::haar_unitary(4, rng);
    const Circuit c = synth_three_cnot(kak_decompose(u));
    ASSERT_LT(phase_distance(two_qubit_unitary(c), u), 1e-9) << "trial " << trial;
    ASSERT_EQ(c.count(GateKind::kCx), 3u);
  }
}

TEST(Synthesis, ThreeCnotDegenerateClasses) {
  const Circuit one = synth_three_cnot(kak_decompose(unitary_of(Gate::cx(1, 0))));
  EXPECT_EQ(one.count(GateKind::kCx), 1u);
  EXPECT_LT(phase_distance(two_qubit_unitary(one), unitary_of(Gate::cx(1, 0))), 1e-9);
  std::mt19937_64 rng(1);
  const Matrix local = kron(testing::haar_2(rng), testing::haar_2(rng));
  const Circuit none = synth_three_cnot(kak_decompose(local));
  EXPECT_EQ(none.count(GateKind::kCx), 0u);
  EXPECT_LT(phase_distance(two_qubit_unitary(none), local), 1e-9);
  const Matrix zz = unitary_of(Gate::rzz(0, 1, 0.8));
  const Circuit two = synth_three_cnot(kak_decompose(zz));
  EXPECT_EQ(two.count(GateKind::kCx), 2u);
  EXPECT_LT(phase_distance(two_qubit_unitary(two), zz), 1e-9);
}

TEST(Synthesis, ThreeRzxHaar) {
  std::mt19937_64 rng(43);
  for (bool echoed : {false, true}) {
    for (int trial = 0; trial < 300; ++trial) {
      const Matrix u = testing::haar_unitary(4, rng);
      const Circuit c = synth_three_rzx(kak_decompose(u), echoed);
      ASSERT_LT(phase_distance(two_qubit_unitary(c), u), 1e-9) << "trial " << trial;
      ASSERT_EQ(c.count(GateKind::kRzx), echoed ? 6u : 3u);
      for (const auto &g : c.gates()) {
        if (g.kind == GateKind::kRzx) {
          ASSERT_LE(std::abs(g.params[0].constant()), (echoed ? kPi / 4 : kPi / 2) + 1e-12);
        }
      }
    }
  }
}

TEST(Synthesis, ThreeRzxElidesZeroTerms) {
  const Circuit cx = synth_three_rzx(kak_decompose(unitary_of(Gate::cx(0, 1))), false);
  EXPECT_EQ(cx.count(GateKind::kRzx), 1u);
  EXPECT_LT(phase_distance(two_qubit_unitary(cx), unitary_of(Gate::cx(0, 1))), 1e-9);
  const Circuit sw = synth_three_rzx(phase_swap_kak(kPi / 2), true);
  EXPECT_EQ(sw.count(GateKind::kRzx), 4u);
  EXPECT_LT(phase_distance(two_qubit_unitary(sw), unitary_of(Gate::phase_swap(0, 1, kPi / 2))), 1e-9);
}

}  // namespace
}  // namespace pet
