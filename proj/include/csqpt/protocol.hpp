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

#include <array>
#include <string>
#include <vector>

#include "csqpt/process_model.hpp"

namespace csqpt {

/// Zero-based readout position (row, col) of the rotated output state.
struct ReadoutElement {
  std::size_t row = 0;
  std::size_t col = 0;
  friend bool operator==(const ReadoutElement&, const ReadoutElement&) = default;
};

/// One data point: (input state, tomographic rotation, readout element).
struct Configuration {
  std::size_t state = 0;
  std::size_t rotation = 0;
  std::size_t element = 0;
  friend bool operator==(const Configuration&, const Configuration&) = default;
};

/// Input states, tomographic rotations and readout elements of a tomography
/// experiment. Every rotation shares the same readout elements.
struct TomographySpec {
  std::size_t n_qubits = 0;
  std::vector<ComplexMatrix> input_states;
  std::vector<std::string> state_labels;
  std::vector<ComplexMatrix> rotations;
  std::vector<std::string> rotation_labels;
  std::vector<ReadoutElement> readout;

  std::size_t dim() const { return std::size_t{1} << n_qubits; }
  std::size_t configurations() const {
    return input_states.size() * rotations.size();
  }
  std::size_t data_points() const { return configurations() * readout.size(); }

  /// Row r enumerates states, then rotations, then readout elements.
  Configuration configuration(std::size_t row) const;
  std::size_t row_of(const Configuration& c) const;

  /// Throws DimensionMismatch / IndexOutOfRange on inconsistent content.
  void validate() const;
};

/// All 4^n products of {|0>, |1>, |+>, |->} with |-> = (|0> + i|1>)/sqrt2.
std::vector<ComplexMatrix> input_states(std::size_t n_qubits);
std::vector<std::string> input_state_labels(std::size_t n_qubits);

/// {II, IX, IY, XX} (n = 2) or {III, IIY, IYY, YII, XYX, XXY, XXX} (n = 3);
/// X = exp(-i pi sigma_x / 4), Y = exp(-i pi sigma_y / 4).
std::vector<ComplexMatrix> tomographic_rotations(std::size_t n_qubits);
std::vector<std::string> tomographic_rotation_labels(std::size_t n_qubits);
ComplexMatrix rotation_from_label(const std::string& label);

/// Per-qubit readout positions, 1-based as printed in the NMR literature.
std::vector<std::vector<std::array<std::size_t, 2>>> readout_elements(
    std::size_t n_qubits);

/// Standard two- or three-qubit protocol. Throws UnsupportedSize otherwise.
TomographySpec standard_spec(std::size_t n_qubits);

/// M = R^dagger |l><k| R, so Tr(M rho) = (R rho R^dagger)_{kl}. Indices are
/// zero-based.
ComplexMatrix measurement_operator(const ComplexMatrix& rotation,
                                   const ReadoutElement& element);

/// Rows indexed by configurations, columns by vectorized chi:
///   phi(r, n * d^2 + m) = Tr(M_r E_m rho_r E_n^dagger).
struct CoefficientMatrix {
  ComplexMatrix phi;
  std::vector<Configuration> rows;
  BasisPtr basis;

  std::size_t row_count() const { return rows.size(); }

  /// Restriction to the given rows, in the given order.
  CoefficientMatrix select(std::span<const std::size_t> row_indices) const;
};

CoefficientMatrix build_phi(const TomographySpec& spec, BasisPtr basis);

/// Direct density-matrix evaluation of one data point.
Complex simulate_data_point(const ProcessMatrix& chi,
                            const TomographySpec& spec,
                            const Configuration& config);
Complex simulate_data_point(const ComplexMatrix& unitary,
                            const TomographySpec& spec,
                            const Configuration& config);

/// Pair of qubits of a three-qubit register (0-based, first < second).
struct QubitPair {
  std::size_t first = 0;
  std::size_t second = 1;
  std::size_t spectator() const { return 3 - first - second; }
};

/// Parses "12", "13", "23" (1-based). Throws InvalidPair.
QubitPair parse_pair(const std::string& text);

/// rho'_{target} = rho_{sources[0]} + rho_{sources[1]}, 1-based indices.
struct SubsystemReadoutRule {
  std::array<std::size_t, 2> target;
  std::array<std::array<std::size_t, 2>, 2> sources;
};

/// The four two-qubit readout positions (2,4), (1,3), (3,4), (1,2) expressed
/// through three-qubit coherences. Throws InvalidPair.
std::vector<SubsystemReadoutRule> subsystem_readout_map(const QubitPair& pair);

/// Applies the rules to an 8x8 state; returns values in rule order.
std::vector<Complex> apply_subsystem_readout(
    const std::vector<SubsystemReadoutRule>& rules, const ComplexMatrix& rho3);

}  // namespace csqpt
