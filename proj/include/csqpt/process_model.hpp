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

#include <memory>
#include <span>

#include "csqpt/operator_algebra.hpp"

namespace csqpt {

using BasisPtr = std::shared_ptr<const OperatorBasis>;

inline BasisPtr share(OperatorBasis basis) {
  return std::make_shared<const OperatorBasis>(std::move(basis));
}

inline constexpr double kHermiticityTolerance = 1e-9;
inline constexpr double kPsdTolerance = 1e-8;
inline constexpr double kTpTolerance = 1e-6;
inline constexpr double kSparsityTolerance = 1e-8;

/// Process matrix chi in a fixed operator basis:
///   Lambda(rho) = sum_{mn} chi_mn E_m rho E_n^dagger.
class ProcessMatrix {
 public:
  ProcessMatrix(BasisPtr basis, ComplexMatrix chi);

  const OperatorBasis& basis() const { return *basis_; }
  const BasisPtr& basis_ptr() const { return basis_; }
  const ComplexMatrix& chi() const { return chi_; }
  std::size_t dim() const { return basis_->dim(); }

 private:
  BasisPtr basis_;
  ComplexMatrix chi_;
};

/// Column-stacked chi: entry (m, n) lives at index n * d^2 + m.
using ChiVector = ComplexVector;

inline std::size_t chi_index(std::size_t m, std::size_t n, std::size_t d2) {
  return n * d2 + m;
}

ChiVector vectorize(const ProcessMatrix& chi);
/// Throws LengthMismatch when |v| != d^4.
ProcessMatrix devectorize(const ChiVector& v, BasisPtr basis);

/// Rank-one chi = c c^dagger with c_k = Tr(E_k^dagger U) / d.
ProcessMatrix chi_from_unitary(const ComplexMatrix& u, BasisPtr basis);

/// chi_mn = sum_i a_im conj(a_in) for Kraus operators A_i = sum_k a_ik E_k.
ProcessMatrix chi_from_kraus(std::span<const ComplexMatrix> kraus,
                             BasisPtr basis);

/// Same process re-expressed in another basis of equal dimension.
ProcessMatrix change_basis(const ProcessMatrix& chi, BasisPtr target);

ComplexMatrix apply_map(const ProcessMatrix& chi, const ComplexMatrix& rho);

/// |Tr(chi_a chi_b^dagger)| / sqrt(Tr(chi_a^dagger chi_a) Tr(chi_b^dagger chi_b)).
/// Throws ZeroMatrix for vanishing norms, DimensionMismatch for incompatible
/// inputs.
double fidelity(const ProcessMatrix& a, const ProcessMatrix& b);
double fidelity(const ComplexMatrix& a, const ComplexMatrix& b);

std::size_t sparsity(const ProcessMatrix& chi, double tol = kSparsityTolerance);

/// ||sum_mn chi_mn E_n^dagger E_m - I||_F, the trace-preservation residual
/// for the map convention above.
double tp_residual(const ProcessMatrix& chi);
/// ||sum_mn chi_mn E_m^dagger E_n - I||_F. Vanishes for unital maps in the
/// Pauli basis; reported alongside tp_residual.
double transposed_tp_residual(const ProcessMatrix& chi);

struct ValidityReport {
  double hermiticity_residual = 0.0;  // ||chi - chi^dagger||_F
  double min_eigenvalue = 0.0;        // of the Hermitian part
  double tp_residual = 0.0;
  double transposed_tp_residual = 0.0;

  bool ok(double psd_tol = kPsdTolerance, double tp_tol = kTpTolerance,
          double herm_tol = kHermiticityTolerance) const {
    return hermiticity_residual <= herm_tol && min_eigenvalue >= -psd_tol &&
           tp_residual <= tp_tol;
  }
};

ValidityReport is_valid_process(const ProcessMatrix& chi);

}  // namespace csqpt
