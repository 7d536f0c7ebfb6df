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

#include "csqpt/operator_algebra.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "csqpt/error.hpp"

namespace csqpt {

std::string_view to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::NonUnitary: return "NonUnitary";
    case ErrorCode::DimensionMismatch: return "DimensionMismatch";
    case ErrorCode::IndexOutOfRange: return "IndexOutOfRange";
    case ErrorCode::ZeroMatrix: return "ZeroMatrix";
    case ErrorCode::LengthMismatch: return "LengthMismatch";
    case ErrorCode::UnsupportedSize: return "UnsupportedSize";
    case ErrorCode::InvalidPair: return "InvalidPair";
    case ErrorCode::OutOfRange: return "OutOfRange";
    case ErrorCode::Infeasible: return "Infeasible";
    case ErrorCode::FactorizationFailure: return "FactorizationFailure";
    case ErrorCode::EmptyInput: return "EmptyInput";
    case ErrorCode::IoError: return "IoError";
    case ErrorCode::ParseError: return "ParseError";
    case ErrorCode::UnknownGate: return "UnknownGate";
  }
  return "Unknown";
}

bool approx_equal(const ComplexMatrix& a, const ComplexMatrix& b, double tol) {
  if (a.rows() != b.rows() || a.cols() != b.cols()) return false;
  return (a - b).cwiseAbs().maxCoeff() <= tol;
}

double unitarity_defect(const ComplexMatrix& u) {
  if (u.rows() != u.cols()) return std::numeric_limits<double>::infinity();
  return (u.adjoint() * u - ComplexMatrix::Identity(u.rows(), u.cols())).norm();
}

bool is_unitary(const ComplexMatrix& u, double tol) {
  return unitarity_defect(u) <= tol;
}

bool equal_up_to_phase(const ComplexMatrix& a, const ComplexMatrix& b,
                       double tol) {
  if (a.rows() != b.rows() || a.cols() != b.cols()) return false;
  const double d = static_cast<double>(a.rows());
  return std::abs(std::abs((a.adjoint() * b).trace()) / d - 1.0) <= tol;
}

ComplexMatrix kron(const ComplexMatrix& a, const ComplexMatrix& b) {
  ComplexMatrix out(a.rows() * b.rows(), a.cols() * b.cols());
  for (Eigen::Index i = 0; i < a.rows(); ++i) {
    for (Eigen::Index j = 0; j < a.cols(); ++j) {
      out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
    }
  }
  return out;
}

ComplexMatrix kron_all(std::span<const ComplexMatrix> factors) {
  ComplexMatrix out = ComplexMatrix::Identity(1, 1);
  for (const auto& f : factors) out = kron(out, f);
  return out;
}

namespace {

void check_qubits(std::span<const std::size_t> qubits, std::size_t n_qubits) {
  for (std::size_t a = 0; a < qubits.size(); ++a) {
    if (qubits[a] >= n_qubits) {
      throw Error(ErrorCode::IndexOutOfRange,
                  "qubit " + std::to_string(qubits[a]) + " >= " +
                      std::to_string(n_qubits));
    }
    for (std::size_t b = a + 1; b < qubits.size(); ++b) {
      if (qubits[a] == qubits[b]) {
        throw Error(ErrorCode::IndexOutOfRange, "repeated qubit index");
      }
    }
  }
}

// Bits of `full` at the given qubit positions, packed with the first listed
// qubit most significant.
std::size_t gather_bits(std::size_t full, std::span<const std::size_t> qubits,
                        std::size_t n_qubits) {
  std::size_t out = 0;
  for (auto q : qubits) out = (out << 1) | ((full >> (n_qubits - 1 - q)) & 1U);
  return out;
}

std::size_t mask_of(std::span<const std::size_t> qubits, std::size_t n_qubits) {
  std::size_t mask = 0;
  for (auto q : qubits) mask |= std::size_t{1} << (n_qubits - 1 - q);
  return mask;
}

}  // namespace

ComplexMatrix embed_operator(const ComplexMatrix& op,
                             std::span<const std::size_t> qubits,
                             std::size_t n_qubits) {
  check_qubits(qubits, n_qubits);
  const auto k = static_cast<Eigen::Index>(std::size_t{1} << qubits.size());
  if (op.rows() != k || op.cols() != k) {
    throw Error(ErrorCode::DimensionMismatch,
                "operator does not match qubit count");
  }
  const std::size_t dim = std::size_t{1} << n_qubits;
  const std::size_t mask = mask_of(qubits, n_qubits);
  ComplexMatrix out = ComplexMatrix::Zero(dim, dim);
  for (std::size_t r = 0; r < dim; ++r) {
    const auto sr = gather_bits(r, qubits, n_qubits);
    for (std::size_t c = 0; c < dim; ++c) {
      if ((r & ~mask) != (c & ~mask)) continue;
      out(r, c) = op(sr, gather_bits(c, qubits, n_qubits));
    }
  }
  return out;
}

ComplexMatrix partial_trace(const ComplexMatrix& rho,
                            std::span<const std::size_t> traced,
                            std::size_t n_qubits) {
  check_qubits(traced, n_qubits);
  const std::size_t dim = std::size_t{1} << n_qubits;
  if (static_cast<std::size_t>(rho.rows()) != dim ||
      static_cast<std::size_t>(rho.cols()) != dim) {
    throw Error(ErrorCode::DimensionMismatch, "partial_trace operand size");
  }
  std::vector<std::size_t> kept;
  for (std::size_t q = 0; q < n_qubits; ++q) {
    if (std::find(traced.begin(), traced.end(), q) == traced.end()) {
      kept.push_back(q);
    }
  }
  const std::size_t kept_dim = std::size_t{1} << kept.size();
  const std::size_t traced_mask = mask_of(traced, n_qubits);
  ComplexMatrix out = ComplexMatrix::Zero(kept_dim, kept_dim);
  for (std::size_t r = 0; r < dim; ++r) {
    for (std::size_t c = 0; c < dim; ++c) {
      if ((r & traced_mask) != (c & traced_mask)) continue;
      out(gather_bits(r, kept, n_qubits), gather_bits(c, kept, n_qubits)) +=
          rho(r, c);
    }
  }
  return out;
}

namespace pauli {

ComplexMatrix identity() { return ComplexMatrix::Identity(2, 2); }

ComplexMatrix x() {
  ComplexMatrix m(2, 2);
  m << 0.0, 1.0, 1.0, 0.0;
  return m;
}

ComplexMatrix y() {
  ComplexMatrix m(2, 2);
  m << 0.0, Complex(0.0, -1.0), Complex(0.0, 1.0), 0.0;
  return m;
}

ComplexMatrix z() {
  ComplexMatrix m(2, 2);
  m << 1.0, 0.0, 0.0, -1.0;
  return m;
}

ComplexMatrix iz() { return 0.5 * z(); }

}  // namespace pauli

std::string to_string(BasisKind kind) {
  return kind == BasisKind::Pauli ? "PB" : "PEB";
}

BasisKind basis_kind_from_string(const std::string& name) {
  if (name == "PB" || name == "pb" || name == "pauli") return BasisKind::Pauli;
  if (name == "PEB" || name == "peb" || name == "pauli-error") {
    return BasisKind::PauliError;
  }
  throw Error(ErrorCode::ParseError, "unknown basis '" + name + "'");
}

std::string OperatorBasis::label(std::size_t i) const {
  static constexpr char kLetters[] = {'I', 'X', 'Y', 'Z'};
  std::string out(n_qubits_, 'I');
  for (std::size_t q = 0; q < n_qubits_; ++q) {
    out[n_qubits_ - 1 - q] = kLetters[(i >> (2 * q)) & 3U];
  }
  return out;
}

double OperatorBasis::orthogonality_defect() const {
  const double d = static_cast<double>(dim());
  double worst = 0.0;
  for (std::size_t a = 0; a < size(); ++a) {
    for (std::size_t b = 0; b < size(); ++b) {
      const Complex g = (elements_[a].adjoint() * elements_[b]).trace();
      const double expect = a == b ? d : 0.0;
      worst = std::max(worst, std::abs(g - expect));
    }
  }
  return worst;
}

OperatorBasis pauli_basis(std::size_t n_qubits) {
  if (n_qubits == 0 || n_qubits > 6) {
    throw Error(ErrorCode::UnsupportedSize,
                "pauli_basis supports 1..6 qubits");
  }
  const ComplexMatrix singles[4] = {pauli::identity(), pauli::x(), pauli::y(),
                                    pauli::z()};
  OperatorBasis basis;
  basis.n_qubits_ = n_qubits;
  basis.kind_ = BasisKind::Pauli;
  const std::size_t count = std::size_t{1} << (2 * n_qubits);
  basis.elements_.reserve(count);
  std::vector<ComplexMatrix> factors(n_qubits);
  for (std::size_t i = 0; i < count; ++i) {
    for (std::size_t q = 0; q < n_qubits; ++q) {
      factors[n_qubits - 1 - q] = singles[(i >> (2 * q)) & 3U];
    }
    basis.elements_.push_back(kron_all(factors));
  }
  return basis;
}

OperatorBasis pauli_error_basis(const ComplexMatrix& u, std::size_t n_qubits) {
  const auto dim = static_cast<Eigen::Index>(std::size_t{1} << n_qubits);
  if (u.rows() != dim || u.cols() != dim) {
    throw Error(ErrorCode::DimensionMismatch,
                "target unitary does not match qubit count");
  }
  if (!is_unitary(u)) {
    throw Error(ErrorCode::NonUnitary,
                "defect " + std::to_string(unitarity_defect(u)));
  }
  OperatorBasis basis = pauli_basis(n_qubits);
  basis.kind_ = BasisKind::PauliError;
  basis.unitary_ = u;
  for (auto& e : basis.elements_) e = u * e;
  return basis;
}

ComplexMatrix rotation_x(double theta) {
  return std::cos(theta / 2) * pauli::identity() -
         Complex(0.0, std::sin(theta / 2)) * pauli::x();
}

ComplexMatrix rotation_y(double theta) {
  return std::cos(theta / 2) * pauli::identity() -
         Complex(0.0, std::sin(theta / 2)) * pauli::y();
}

ComplexMatrix gate_cnot() {
  ComplexMatrix u = ComplexMatrix::Zero(4, 4);
  u(0, 0) = u(1, 1) = 1.0;
  u(2, 3) = u(3, 2) = 1.0;
  return u;
}

ComplexMatrix gate_controlled_rx(double theta) {
  ComplexMatrix u = ComplexMatrix::Identity(4, 4);
  u.bottomRightCorner(2, 2) = rotation_x(theta);
  return u;
}

ComplexMatrix gate_cnn() {
  const std::size_t c_t1[] = {0, 1};
  const std::size_t c_t2[] = {0, 2};
  return embed_operator(gate_cnot(), c_t2, 3) *
         embed_operator(gate_cnot(), c_t1, 3);
}

ComplexMatrix gate_jcoupling(std::size_t i, std::size_t j, double coupling_hz,
                             double t, std::size_t n_qubits) {
  if (i == j || i >= n_qubits || j >= n_qubits) {
    throw Error(ErrorCode::IndexOutOfRange,
                "gate_jcoupling needs distinct qubits < n_qubits");
  }
  const std::size_t dim = std::size_t{1} << n_qubits;
  ComplexMatrix u = ComplexMatrix::Zero(dim, dim);
  for (std::size_t s = 0; s < dim; ++s) {
    const double zi = ((s >> (n_qubits - 1 - i)) & 1U) ? -0.5 : 0.5;
    const double zj = ((s >> (n_qubits - 1 - j)) & 1U) ? -0.5 : 0.5;
    const double phase = -2.0 * std::numbers::pi * coupling_hz * zi * zj * t;
    u(s, s) = std::polar(1.0, phase);
  }
  return u;
}

InternalHamiltonian::InternalHamiltonian(std::size_t n_qubits)
    : shifts_(n_qubits, 0.0), couplings_(n_qubits * n_qubits, 0.0) {
  if (n_qubits == 0) {
    throw Error(ErrorCode::UnsupportedSize, "empty Hamiltonian");
  }
}

double InternalHamiltonian::coupling(std::size_t i, std::size_t j) const {
  const auto n = n_qubits();
  if (i >= n || j >= n) throw Error(ErrorCode::IndexOutOfRange, "coupling");
  return couplings_[i * n + j];
}

InternalHamiltonian& InternalHamiltonian::set_chemical_shift(std::size_t i,
                                                             double hz) {
  shifts_.at(i) = hz;
  return *this;
}

InternalHamiltonian& InternalHamiltonian::set_coupling(std::size_t i,
                                                       std::size_t j,
                                                       double hz) {
  const auto n = n_qubits();
  if (i == j || i >= n || j >= n) {
    throw Error(ErrorCode::IndexOutOfRange, "coupling needs distinct qubits");
  }
  couplings_[i * n + j] = hz;
  couplings_[j * n + i] = hz;
  return *this;
}

Eigen::VectorXd InternalHamiltonian::diagonal() const {
  const auto n = n_qubits();
  const std::size_t dim = std::size_t{1} << n;
  Eigen::VectorXd diag = Eigen::VectorXd::Zero(dim);
  for (std::size_t s = 0; s < dim; ++s) {
    auto iz = [&](std::size_t q) {
      return ((s >> (n - 1 - q)) & 1U) ? -0.5 : 0.5;
    };
    double e = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      e -= shifts_[i] * iz(i);
      for (std::size_t j = i + 1; j < n; ++j) {
        e += couplings_[i * n + j] * iz(i) * iz(j);
      }
    }
    diag(s) = e;
  }
  return diag;
}

InternalHamiltonian default_three_spin_hamiltonian() {
  // 1H, 19F, 13C spins of a diethyl fluoromalonate-like molecule.
  InternalHamiltonian h(3);
  h.set_coupling(0, 1, 47.5);
  h.set_coupling(0, 2, 161.6);
  h.set_coupling(1, 2, -191.5);
  return h;
}

ComplexMatrix evolve_internal(const InternalHamiltonian& h, double t) {
  const Eigen::VectorXd diag = h.diagonal();
  ComplexMatrix u = ComplexMatrix::Zero(diag.size(), diag.size());
  for (Eigen::Index s = 0; s < diag.size(); ++s) {
    u(s, s) = std::polar(1.0, -2.0 * std::numbers::pi * diag(s) * t);
  }
  return u;
}

ComplexMatrix gate_refocused_evolution(std::size_t i, std::size_t j,
                                       std::size_t k,
                                       const InternalHamiltonian& h,
                                       double t) {
  if (h.n_qubits() != 3) {
    throw Error(ErrorCode::UnsupportedSize, "refocusing needs three qubits");
  }
  if (i >= 3 || j >= 3 || k >= 3 || i == j || i == k || j == k) {
    throw Error(ErrorCode::IndexOutOfRange,
                "refocusing needs three distinct qubit indices");
  }
  const std::size_t spectator[] = {k};
  const ComplexMatrix half = evolve_internal(h, t / 2);
  const ComplexMatrix flip =
      embed_operator(rotation_x(std::numbers::pi), spectator, 3);
  const ComplexMatrix unflip =
      embed_operator(rotation_x(-std::numbers::pi), spectator, 3);
  return half * flip * half * unflip;
}

}  // namespace csqpt
