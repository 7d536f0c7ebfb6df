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

#include "csqpt/process_model.hpp"

#include <cmath>

#include <Eigen/Eigenvalues>

#include "csqpt/error.hpp"

namespace csqpt {

namespace {

constexpr double kZeroNorm = 1e-14;

void require_basis_dim(const OperatorBasis& basis, Eigen::Index d,
                       const char* what) {
  if (static_cast<Eigen::Index>(basis.dim()) != d) {
    throw Error(ErrorCode::DimensionMismatch, what);
  }
}

}  // namespace

ProcessMatrix::ProcessMatrix(BasisPtr basis, ComplexMatrix chi)
    : basis_(std::move(basis)), chi_(std::move(chi)) {
  if (!basis_) throw Error(ErrorCode::DimensionMismatch, "null basis");
  const auto n = static_cast<Eigen::Index>(basis_->size());
  if (chi_.rows() != n || chi_.cols() != n) {
    throw Error(ErrorCode::DimensionMismatch,
                "chi must be d^2 x d^2 for its basis");
  }
}

ChiVector vectorize(const ProcessMatrix& chi) {
  return chi.chi().reshaped();  // Eigen storage is column-major
}

ProcessMatrix devectorize(const ChiVector& v, BasisPtr basis) {
  const auto n = static_cast<Eigen::Index>(basis->size());
  if (v.size() != n * n) {
    throw Error(ErrorCode::LengthMismatch,
                "expected " + std::to_string(n * n) + " entries, got " +
                    std::to_string(v.size()));
  }
  return ProcessMatrix(std::move(basis), v.reshaped(n, n));
}

namespace {

ComplexVector expansion_coefficients(const ComplexMatrix& op,
                                     const OperatorBasis& basis) {
  const double d = static_cast<double>(basis.dim());
  ComplexVector c(basis.size());
  for (std::size_t k = 0; k < basis.size(); ++k) {
    c(k) = (basis.element(k).adjoint() * op).trace() / d;
  }
  return c;
}

}  // namespace

ProcessMatrix chi_from_unitary(const ComplexMatrix& u, BasisPtr basis) {
  require_basis_dim(*basis, u.rows(), "unitary does not match basis");
  if (!is_unitary(u)) {
    throw Error(ErrorCode::NonUnitary,
                "defect " + std::to_string(unitarity_defect(u)));
  }
  const ComplexVector c = expansion_coefficients(u, *basis);
  return ProcessMatrix(std::move(basis), c * c.adjoint());
}

ProcessMatrix chi_from_kraus(std::span<const ComplexMatrix> kraus,
                             BasisPtr basis) {
  const auto n = static_cast<Eigen::Index>(basis->size());
  ComplexMatrix chi = ComplexMatrix::Zero(n, n);
  for (const auto& a : kraus) {
    require_basis_dim(*basis, a.rows(), "Kraus operator does not match basis");
    const ComplexVector c = expansion_coefficients(a, *basis);
    chi += c * c.adjoint();
  }
  return ProcessMatrix(std::move(basis), std::move(chi));
}

ProcessMatrix change_basis(const ProcessMatrix& chi, BasisPtr target) {
  const auto& source = chi.basis();
  if (target->size() != source.size()) {
    throw Error(ErrorCode::DimensionMismatch, "bases differ in dimension");
  }
  const double d = static_cast<double>(source.dim());
  const auto n = static_cast<Eigen::Index>(source.size());
  // E_m = sum_k s_mk F_k.
  ComplexMatrix s(n, n);
  for (Eigen::Index m = 0; m < n; ++m) {
    for (Eigen::Index k = 0; k < n; ++k) {
      s(m, k) = (target->element(k).adjoint() * source.element(m)).trace() / d;
    }
  }
  return ProcessMatrix(std::move(target),
                       s.transpose() * chi.chi() * s.conjugate());
}

ComplexMatrix apply_map(const ProcessMatrix& chi, const ComplexMatrix& rho) {
  const auto& basis = chi.basis();
  const auto d = static_cast<Eigen::Index>(basis.dim());
  if (rho.rows() != d || rho.cols() != d) {
    throw Error(ErrorCode::DimensionMismatch, "rho does not match process");
  }
  const auto n = static_cast<Eigen::Index>(basis.size());
  // sum_n chi_mn (E_n rho^dagger)^dagger = sum_n chi_mn rho E_n^dagger.
  std::vector<ComplexMatrix> right(n);
  for (Eigen::Index k = 0; k < n; ++k) {
    right[k] = rho * basis.element(k).adjoint();
  }
  ComplexMatrix out = ComplexMatrix::Zero(d, d);
  for (Eigen::Index m = 0; m < n; ++m) {
    ComplexMatrix inner = ComplexMatrix::Zero(d, d);
    for (Eigen::Index k = 0; k < n; ++k) {
      if (chi.chi()(m, k) != Complex(0.0)) inner += chi.chi()(m, k) * right[k];
    }
    out += basis.element(m) * inner;
  }
  return out;
}

double fidelity(const ComplexMatrix& a, const ComplexMatrix& b) {
  if (a.rows() != b.rows() || a.cols() != b.cols()) {
    throw Error(ErrorCode::DimensionMismatch, "fidelity operands");
  }
  const double na = a.squaredNorm();
  const double nb = b.squaredNorm();
  if (std::sqrt(na) < kZeroNorm || std::sqrt(nb) < kZeroNorm) {
    throw Error(ErrorCode::ZeroMatrix, "fidelity of a vanishing chi");
  }
  const Complex overlap = (a * b.adjoint()).trace();
  return std::min(1.0, std::abs(overlap) / std::sqrt(na * nb));
}

double fidelity(const ProcessMatrix& a, const ProcessMatrix& b) {
  if (a.basis().size() != b.basis().size()) {
    throw Error(ErrorCode::DimensionMismatch, "fidelity across dimensions");
  }
  if (a.basis_ptr() != b.basis_ptr() &&
      (a.basis().kind() != b.basis().kind() ||
       (a.basis().unitary() && b.basis().unitary() &&
        !approx_equal(*a.basis().unitary(), *b.basis().unitary(),
                      kBasisTolerance)))) {
    throw Error(ErrorCode::DimensionMismatch,
                "fidelity needs both chi in the same basis");
  }
  return fidelity(a.chi(), b.chi());
}

std::size_t sparsity(const ProcessMatrix& chi, double tol) {
  return static_cast<std::size_t>(
      (chi.chi().array().abs() > tol).count());
}

namespace {

double tp_residual_impl(const ProcessMatrix& chi, bool transposed) {
  const auto& basis = chi.basis();
  const auto d = static_cast<Eigen::Index>(basis.dim());
  const auto n = static_cast<Eigen::Index>(basis.size());
  ComplexMatrix acc = ComplexMatrix::Zero(d, d);
  for (Eigen::Index m = 0; m < n; ++m) {
    for (Eigen::Index k = 0; k < n; ++k) {
      const Complex c = chi.chi()(m, k);
      if (c == Complex(0.0)) continue;
      acc += transposed
                 ? (c * basis.element(m).adjoint() * basis.element(k)).eval()
                 : (c * basis.element(k).adjoint() * basis.element(m)).eval();
    }
  }
  return (acc - ComplexMatrix::Identity(d, d)).norm();
}

}  // namespace

double tp_residual(const ProcessMatrix& chi) {
  return tp_residual_impl(chi, false);
}

double transposed_tp_residual(const ProcessMatrix& chi) {
  return tp_residual_impl(chi, true);
}

ValidityReport is_valid_process(const ProcessMatrix& chi) {
  ValidityReport report;
  const ComplexMatrix& c = chi.chi();
  report.hermiticity_residual = (c - c.adjoint()).norm();
  const ComplexMatrix herm = 0.5 * (c + c.adjoint());
  Eigen::SelfAdjointEigenSolver<ComplexMatrix> eig(herm,
                                                   Eigen::EigenvaluesOnly);
  report.min_eigenvalue = eig.eigenvalues().minCoeff();
  report.tp_residual = tp_residual(chi);
  report.transposed_tp_residual = transposed_tp_residual(chi);
  return report;
}

}  // namespace csqpt
