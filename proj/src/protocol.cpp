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

#include "csqpt/protocol.hpp"

#include <cmath>
#include <numbers>

#include "csqpt/error.hpp"

namespace csqpt {

namespace {

void require_supported(std::size_t n_qubits) {
  if (n_qubits != 2 && n_qubits != 3) {
    throw Error(ErrorCode::UnsupportedSize,
                "tomography protocol defined for 2 or 3 qubits, got " +
                    std::to_string(n_qubits));
  }
}

ComplexMatrix single_qubit_input(std::size_t which) {
  const double s = 1.0 / std::numbers::sqrt2;
  ComplexVector psi(2);
  switch (which) {
    case 0: psi << 1.0, 0.0; break;
    case 1: psi << 0.0, 1.0; break;
    case 2: psi << s, s; break;
    default: psi << s, Complex(0.0, s); break;
  }
  return psi * psi.adjoint();
}

constexpr const char* kInputLetters[] = {"0", "1", "+", "-"};

}  // namespace

Configuration TomographySpec::configuration(std::size_t row) const {
  if (row >= data_points()) {
    throw Error(ErrorCode::IndexOutOfRange, "row " + std::to_string(row));
  }
  const std::size_t per_state = rotations.size() * readout.size();
  return Configuration{row / per_state, (row % per_state) / readout.size(),
                       row % readout.size()};
}

std::size_t TomographySpec::row_of(const Configuration& c) const {
  if (c.state >= input_states.size() || c.rotation >= rotations.size() ||
      c.element >= readout.size()) {
    throw Error(ErrorCode::IndexOutOfRange, "configuration out of range");
  }
  return (c.state * rotations.size() + c.rotation) * readout.size() +
         c.element;
}

void TomographySpec::validate() const {
  const auto d = static_cast<Eigen::Index>(dim());
  for (const auto& rho : input_states) {
    if (rho.rows() != d || rho.cols() != d) {
      throw Error(ErrorCode::DimensionMismatch, "input state size");
    }
  }
  for (const auto& r : rotations) {
    if (r.rows() != d || r.cols() != d) {
      throw Error(ErrorCode::DimensionMismatch, "rotation size");
    }
  }
  for (const auto& e : readout) {
    if (e.row >= dim() || e.col >= dim()) {
      throw Error(ErrorCode::IndexOutOfRange, "readout element");
    }
  }
}

std::vector<ComplexMatrix> input_states(std::size_t n_qubits) {
  require_supported(n_qubits);
  const std::size_t count = std::size_t{1} << (2 * n_qubits);
  std::vector<ComplexMatrix> states;
  states.reserve(count);
  std::vector<ComplexMatrix> factors(n_qubits);
  for (std::size_t i = 0; i < count; ++i) {
    for (std::size_t q = 0; q < n_qubits; ++q) {
      factors[n_qubits - 1 - q] = single_qubit_input((i >> (2 * q)) & 3U);
    }
    states.push_back(kron_all(factors));
  }
  return states;
}

std::vector<std::string> input_state_labels(std::size_t n_qubits) {
  require_supported(n_qubits);
  const std::size_t count = std::size_t{1} << (2 * n_qubits);
  std::vector<std::string> labels;
  for (std::size_t i = 0; i < count; ++i) {
    std::string label;
    for (std::size_t q = 0; q < n_qubits; ++q) {
      label += kInputLetters[(i >> (2 * (n_qubits - 1 - q))) & 3U];
    }
    labels.push_back(label);
  }
  return labels;
}

std::vector<std::string> tomographic_rotation_labels(std::size_t n_qubits) {
  require_supported(n_qubits);
  if (n_qubits == 2) return {"II", "IX", "IY", "XX"};
  return {"III", "IIY", "IYY", "YII", "XYX", "XXY", "XXX"};
}

ComplexMatrix rotation_from_label(const std::string& label) {
  std::vector<ComplexMatrix> factors;
  for (char c : label) {
    switch (c) {
      case 'I': factors.push_back(pauli::identity()); break;
      case 'X': factors.push_back(rotation_x(std::numbers::pi / 2)); break;
      case 'Y': factors.push_back(rotation_y(std::numbers::pi / 2)); break;
      default:
        throw Error(ErrorCode::ParseError,
                    "rotation label '" + label + "' must use I, X, Y");
    }
  }
  if (factors.empty()) throw Error(ErrorCode::ParseError, "empty rotation");
  return kron_all(factors);
}

std::vector<ComplexMatrix> tomographic_rotations(std::size_t n_qubits) {
  std::vector<ComplexMatrix> out;
  for (const auto& label : tomographic_rotation_labels(n_qubits)) {
    out.push_back(rotation_from_label(label));
  }
  return out;
}

std::vector<std::vector<std::array<std::size_t, 2>>> readout_elements(
    std::size_t n_qubits) {
  require_supported(n_qubits);
  if (n_qubits == 2) {
    return {{{2, 4}, {1, 3}}, {{3, 4}, {1, 2}}};
  }
  return {{{4, 8}, {2, 6}, {3, 7}, {1, 5}},
          {{5, 7}, {1, 3}, {6, 8}, {2, 4}},
          {{5, 6}, {1, 2}, {7, 8}, {3, 4}}};
}

TomographySpec standard_spec(std::size_t n_qubits) {
  TomographySpec spec;
  spec.n_qubits = n_qubits;
  spec.input_states = input_states(n_qubits);
  spec.state_labels = input_state_labels(n_qubits);
  spec.rotations = tomographic_rotations(n_qubits);
  spec.rotation_labels = tomographic_rotation_labels(n_qubits);
  for (const auto& per_qubit : readout_elements(n_qubits)) {
    for (const auto& [k, l] : per_qubit) {
      spec.readout.push_back(ReadoutElement{k - 1, l - 1});
    }
  }
  return spec;
}

ComplexMatrix measurement_operator(const ComplexMatrix& rotation,
                                   const ReadoutElement& element) {
  const auto d = static_cast<std::size_t>(rotation.rows());
  if (element.row >= d || element.col >= d) {
    throw Error(ErrorCode::IndexOutOfRange, "readout element outside state");
  }
  // R^dagger |l><k| R
  return rotation.adjoint().col(element.col) * rotation.row(element.row);
}

CoefficientMatrix CoefficientMatrix::select(
    std::span<const std::size_t> row_indices) const {
  CoefficientMatrix out;
  out.basis = basis;
  out.phi.resize(static_cast<Eigen::Index>(row_indices.size()), phi.cols());
  out.rows.reserve(row_indices.size());
  for (std::size_t i = 0; i < row_indices.size(); ++i) {
    const auto r = row_indices[i];
    if (r >= rows.size()) {
      throw Error(ErrorCode::IndexOutOfRange, "row selection");
    }
    out.phi.row(static_cast<Eigen::Index>(i)) = phi.row(r);
    out.rows.push_back(rows[r]);
  }
  return out;
}

CoefficientMatrix build_phi(const TomographySpec& spec, BasisPtr basis) {
  spec.validate();
  if (basis->dim() != spec.dim()) {
    throw Error(ErrorCode::DimensionMismatch, "basis does not match spec");
  }
  const auto d = static_cast<Eigen::Index>(spec.dim());
  const auto n = static_cast<Eigen::Index>(basis->size());

  CoefficientMatrix out;
  out.basis = basis;
  out.phi.resize(static_cast<Eigen::Index>(spec.data_points()), n * n);
  out.rows.reserve(spec.data_points());

  // M = u v^dagger is rank one, so Tr(M E_m rho E_n^dagger)
  //   = (v^dagger E_m rho) (E_n^dagger u).
  ComplexMatrix left(n, d);   // row m: v^dagger E_m rho
  ComplexMatrix right(d, n);  // col n: E_n^dagger u
  std::vector<ComplexMatrix> e_rho(n);
  Eigen::Index row = 0;
  for (std::size_t s = 0; s < spec.input_states.size(); ++s) {
    for (Eigen::Index m = 0; m < n; ++m) {
      e_rho[m] = basis->element(m) * spec.input_states[s];
    }
    for (std::size_t r = 0; r < spec.rotations.size(); ++r) {
      const ComplexMatrix& rot = spec.rotations[r];
      for (std::size_t e = 0; e < spec.readout.size(); ++e) {
        const auto& el = spec.readout[e];
        const ComplexVector u = rot.adjoint().col(el.col);
        const Eigen::RowVectorXcd v_dag = rot.row(el.row);
        for (Eigen::Index m = 0; m < n; ++m) {
          left.row(m) = v_dag * e_rho[m];
          right.col(m) = basis->element(m).adjoint() * u;
        }
        const ComplexMatrix block = left * right;
        out.phi.row(row) = block.reshaped().transpose();
        out.rows.push_back(Configuration{s, r, e});
        ++row;
      }
    }
  }
  return out;
}

Complex simulate_data_point(const ProcessMatrix& chi,
                            const TomographySpec& spec,
                            const Configuration& config) {
  const ComplexMatrix out = apply_map(chi, spec.input_states.at(config.state));
  const ComplexMatrix& rot = spec.rotations.at(config.rotation);
  const auto& el = spec.readout.at(config.element);
  return (rot * out * rot.adjoint())(el.row, el.col);
}

Complex simulate_data_point(const ComplexMatrix& unitary,
                            const TomographySpec& spec,
                            const Configuration& config) {
  const ComplexMatrix& rho = spec.input_states.at(config.state);
  const ComplexMatrix& rot = spec.rotations.at(config.rotation);
  const auto& el = spec.readout.at(config.element);
  const ComplexMatrix full = rot * unitary;
  return (full * rho * full.adjoint())(el.row, el.col);
}

QubitPair parse_pair(const std::string& text) {
  if (text == "12") return {0, 1};
  if (text == "13") return {0, 2};
  if (text == "23") return {1, 2};
  throw Error(ErrorCode::InvalidPair, "pair '" + text + "'");
}

std::vector<SubsystemReadoutRule> subsystem_readout_map(const QubitPair& pair) {
  using R = SubsystemReadoutRule;
  if (pair.first == 0 && pair.second == 1) {
    return {R{{2, 4}, {{{4, 8}, {3, 7}}}}, R{{1, 3}, {{{2, 6}, {1, 5}}}},
            R{{3, 4}, {{{5, 7}, {6, 8}}}}, R{{1, 2}, {{{1, 3}, {2, 4}}}}};
  }
  if (pair.first == 0 && pair.second == 2) {
    return {R{{2, 4}, {{{4, 8}, {2, 6}}}}, R{{1, 3}, {{{3, 7}, {1, 5}}}},
            R{{3, 4}, {{{5, 6}, {7, 8}}}}, R{{1, 2}, {{{1, 2}, {3, 4}}}}};
  }
  if (pair.first == 1 && pair.second == 2) {
    return {R{{2, 4}, {{{6, 8}, {2, 4}}}}, R{{1, 3}, {{{5, 7}, {1, 3}}}},
            R{{3, 4}, {{{7, 8}, {3, 4}}}}, R{{1, 2}, {{{5, 6}, {1, 2}}}}};
  }
  throw Error(ErrorCode::InvalidPair, "qubit pair must be 12, 13 or 23");
}

std::vector<Complex> apply_subsystem_readout(
    const std::vector<SubsystemReadoutRule>& rules, const ComplexMatrix& rho3) {
  if (rho3.rows() != 8 || rho3.cols() != 8) {
    throw Error(ErrorCode::DimensionMismatch, "subsystem readout needs 8x8");
  }
  std::vector<Complex> out;
  out.reserve(rules.size());
  for (const auto& rule : rules) {
    Complex v = 0.0;
    for (const auto& [k, l] : rule.sources) v += rho3(k - 1, l - 1);
    out.push_back(v);
  }
  return out;
}

}  // namespace csqpt
