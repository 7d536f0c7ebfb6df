// Copyright 2026 The csqpt Authors
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

#include <random>
#include <vector>

#include <Eigen/QR>

#include "csqpt/operator_algebra.hpp"

namespace csqpt::testing {

inline ComplexMatrix gaussian_matrix(Eigen::Index rows, Eigen::Index cols,
                                     std::mt19937_64& rng) {
  std::normal_distribution<double> g(0.0, 1.0);
  ComplexMatrix m(rows, cols);
  for (Eigen::Index i = 0; i < rows; ++i) {
    for (Eigen::Index j = 0; j < cols; ++j) m(i, j) = Complex(g(rng), g(rng));
  }
  return m;
}

// Haar-ish unitary from the QR of a Ginibre matrix.
inline ComplexMatrix random_unitary(Eigen::Index d, std::mt19937_64& rng) {
  Eigen::HouseholderQR<ComplexMatrix> qr(gaussian_matrix(d, d, rng));
  return qr.householderQ() * ComplexMatrix::Identity(d, d);
}

inline ComplexMatrix random_density(Eigen::Index d, std::mt19937_64& rng) {
  const ComplexMatrix g = gaussian_matrix(d, d, rng);
  ComplexMatrix rho = g * g.adjoint();
  return rho / rho.trace().real();
}

inline ComplexMatrix random_pure_state(Eigen::Index d, std::mt19937_64& rng) {
  ComplexVector v = gaussian_matrix(d, 1, rng).col(0).normalized();
  return v * v.adjoint();
}

// Kraus operators of a random TP channel: blocks of a random isometry.
inline std::vector<ComplexMatrix> random_kraus(Eigen::Index d, Eigen::Index k,
                                               std::mt19937_64& rng) {
  Eigen::HouseholderQR<ComplexMatrix> qr(gaussian_matrix(k * d, d, rng));
  const ComplexMatrix v =
      qr.householderQ() * ComplexMatrix::Identity(k * d, d);
  std::vector<ComplexMatrix> kraus;
  for (Eigen::Index i = 0; i < k; ++i) kraus.push_back(v.middleRows(i * d, d));
  return kraus;
}

inline double max_abs(const ComplexMatrix& m) { return m.cwiseAbs().maxCoeff(); }

}  // namespace csqpt::testing
