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

#include <Eigen/QR>
#include <cmath>
#include <random>

#include "pet/unitary.hpp"

namespace pet::testing {

// Haar-distributed unitary: QR of a complex Ginibre matrix with the phases of
// R's diagonal pushed into Q.
inline Matrix haar_unitary(int dim, std::mt19937_64 &rng) {
  std::normal_distribution<double> n(0.0, 1.0);
  Matrix z(dim, dim);
  for (int i = 0; i < dim; ++i) {
    for (int j = 0; j < dim; ++j) z(i, j) = Complex(n(rng), n(rng));
  }
  Eigen::HouseholderQR<Matrix> qr(z);
  Matrix q = qr.householderQ();
  const Matrix r = qr.matrixQR().triangularView<Eigen::Upper>();
  for (int i = 0; i < dim; ++i) q.col(i) *= r(i, i) / std::abs(r(i, i));
  return q;
}

inline Matrix2 haar_2(std::mt19937_64 &rng) { return Matrix2(haar_unitary(2, rng)); }

}  // namespace pet::testing
