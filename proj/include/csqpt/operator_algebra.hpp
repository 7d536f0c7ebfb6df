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

#include <complex>
#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include <Eigen/Dense>

namespace csqpt {

using Complex = std::complex<double>;
using ComplexMatrix = Eigen::MatrixXcd;
using ComplexVector = Eigen::VectorXcd;

inline constexpr double kBasisTolerance = 1e-10;
inline constexpr double kUnitaryTolerance = 1e-10;

/// Entrywise comparison with an absolute tolerance. Shapes must agree.
bool approx_equal(const ComplexMatrix& a, const ComplexMatrix& b, double tol);

/// ||U^dagger U - I||_F.
double unitarity_defect(const ComplexMatrix& u);
bool is_unitary(const ComplexMatrix& u, double tol = kUnitaryTolerance);

/// Equality up to a global phase: |Tr(A^dagger B)| / d == 1 within tol.
/// Only meaningful for unitaries.
bool equal_up_to_phase(const ComplexMatrix& a, const ComplexMatrix& b,
                       double tol);

ComplexMatrix kron(const ComplexMatrix& a, const ComplexMatrix& b);
ComplexMatrix kron_all(std::span<const ComplexMatrix> factors);

/// Lifts `op`, acting on the listed qubits (first entry is the most
/// significant index of `op`), to the full n-qubit space with identity
/// elsewhere. Qubit 0 is the most significant bit of the full index.
ComplexMatrix embed_operator(const ComplexMatrix& op,
                             std::span<const std::size_t> qubits,
                             std::size_t n_qubits);

/// Traces out the listed qubits of an n-qubit operator.
ComplexMatrix partial_trace(const ComplexMatrix& rho,
                            std::span<const std::size_t> traced,
                            std::size_t n_qubits);

namespace pauli {
ComplexMatrix identity();
ComplexMatrix x();
ComplexMatrix y();
ComplexMatrix z();
/// Spin-1/2 z operator, diag(1/2, -1/2).
ComplexMatrix iz();
}  // namespace pauli

enum class BasisKind { Pauli, PauliError };

std::string to_string(BasisKind kind);
BasisKind basis_kind_from_string(const std::string& name);

/// Ordered set of d^2 operators with Tr(E_a^dagger E_b) = d delta_ab.
class OperatorBasis {
 public:
  std::size_t n_qubits() const { return n_qubits_; }
  std::size_t dim() const { return std::size_t{1} << n_qubits_; }
  std::size_t size() const { return elements_.size(); }
  BasisKind kind() const { return kind_; }
  const ComplexMatrix& element(std::size_t i) const { return elements_.at(i); }
  const std::vector<ComplexMatrix>& elements() const { return elements_; }
  /// Target unitary for PauliError bases.
  const std::optional<ComplexMatrix>& unitary() const { return unitary_; }
  /// Pauli label of element i ("IX", "ZZ", ...) in the shared ordering.
  std::string label(std::size_t i) const;

  /// max_{a,b} |Tr(E_a^dagger E_b) - d delta_ab|.
  double orthogonality_defect() const;

 private:
  friend OperatorBasis pauli_basis(std::size_t n_qubits);
  friend OperatorBasis pauli_error_basis(const ComplexMatrix& u,
                                         std::size_t n_qubits);

  std::size_t n_qubits_ = 0;
  BasisKind kind_ = BasisKind::Pauli;
  std::vector<ComplexMatrix> elements_;
  std::optional<ComplexMatrix> unitary_;
};

/// {I, X, Y, Z}^{(x)n}, lexicographic with qubit 0 most significant.
OperatorBasis pauli_basis(std::size_t n_qubits);

/// {U P_i} in the same order as pauli_basis. Throws NonUnitary.
OperatorBasis pauli_error_basis(const ComplexMatrix& u, std::size_t n_qubits);

// Gate library. Qubit 0 is the control in every controlled gate.

ComplexMatrix gate_cnot();
ComplexMatrix gate_controlled_rx(double theta);
/// CNOT(0->2) * CNOT(0->1) on three qubits.
ComplexMatrix gate_cnn();
/// exp(-i theta sigma / 2) for a single qubit.
ComplexMatrix rotation_x(double theta);
ComplexMatrix rotation_y(double theta);

/// exp(-i 2 pi J Iz_i Iz_j t) on n qubits; i, j are 0-based.
ComplexMatrix gate_jcoupling(std::size_t i, std::size_t j, double coupling_hz,
                             double t, std::size_t n_qubits);

/// Rotating-frame NMR Hamiltonian -sum nu_i Iz_i + sum_{i<j} J_ij Iz_i Iz_j.
/// All terms are diagonal in the computational basis.
class InternalHamiltonian {
 public:
  explicit InternalHamiltonian(std::size_t n_qubits);

  std::size_t n_qubits() const { return shifts_.size(); }
  double chemical_shift(std::size_t i) const { return shifts_.at(i); }
  double coupling(std::size_t i, std::size_t j) const;

  InternalHamiltonian& set_chemical_shift(std::size_t i, double hz);
  /// Symmetric; i == j is rejected.
  InternalHamiltonian& set_coupling(std::size_t i, std::size_t j, double hz);

  /// Diagonal of the Hamiltonian in Hz.
  Eigen::VectorXd diagonal() const;

 private:
  std::vector<double> shifts_;
  std::vector<double> couplings_;  // row-major n x n, symmetric, zero diag
};

/// Representative three-spin couplings (Hz) used by the gate registry.
InternalHamiltonian default_three_spin_hamiltonian();

/// exp(-i 2 pi H t).
ComplexMatrix evolve_internal(const InternalHamiltonian& h, double t);

/// U_int(t/2) Rx_k(pi) U_int(t/2) Rx_k(-pi) on three qubits. Leaves only the
/// (i, j) coupling active when chemical shifts are zero.
ComplexMatrix gate_refocused_evolution(std::size_t i, std::size_t j,
                                       std::size_t k,
                                       const InternalHamiltonian& h, double t);

}  // namespace csqpt
