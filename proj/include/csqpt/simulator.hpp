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

#include <cstdint>
#include <random>
#include <utility>

#include "csqpt/protocol.hpp"

namespace csqpt {

/// Per-stream generator derived from (master seed, stream ids).
std::mt19937_64 make_rng(std::uint64_t master_seed,
                         std::initializer_list<std::uint64_t> stream);

struct NoiseModel {
  enum class Kind { None, AdditiveGaussian };
  Kind kind = Kind::None;
  double sigma = 0.0;  // per real component
  std::uint64_t seed = 0;

  static NoiseModel none() { return {}; }
  static NoiseModel gaussian(double sigma, std::uint64_t seed);
};

/// Observed data B = Phi chi_0 + z together with the bound ||z||_2.
struct DataVector {
  ComplexVector values;
  std::vector<Configuration> labels;
  double epsilon = 0.0;
  std::uint64_t seed = 0;
  /// Injected noise per row when known (simulation); empty for imported data.
  ComplexVector noise;

  std::size_t size() const { return labels.size(); }
};

DataVector simulate_dataset(const ProcessMatrix& chi_true,
                            const TomographySpec& spec,
                            const NoiseModel& noise);

/// Same data for a unitary process, evaluated as U rho U^dagger.
DataVector simulate_dataset(const ComplexMatrix& unitary,
                            const TomographySpec& spec,
                            const NoiseModel& noise);

/// (1 - eta)/d I + eta |0..0><0..0|. Throws OutOfRange unless 0 <= eta <= 1.
ComplexMatrix pps_state(std::size_t n_qubits, double eta);

/// Spec whose input states are prepared from the pseudo-pure state by the
/// unitary that maps |0..0> to each pure input.
TomographySpec pps_spec(std::size_t n_qubits, double eta);

/// Uniform sample of m distinct row indices out of `rows`.
std::vector<std::size_t> sample_rows(std::size_t rows, std::size_t m,
                                     std::uint64_t seed);

/// Uniform sample of whole configurations; returns every readout row of
/// ceil(m / elements) configurations, truncated to m rows.
std::vector<std::size_t> sample_configuration_rows(const TomographySpec& spec,
                                                   std::size_t m,
                                                   std::uint64_t seed);

/// Restricts data and Phi to the same rows. When per-row noise is known the
/// bound is recomputed for the kept rows; otherwise it is carried over.
std::pair<DataVector, CoefficientMatrix> subsample(
    const DataVector& data, const CoefficientMatrix& phi_full,
    std::span<const std::size_t> rows);

/// Seeded uniform subsample of m rows. Throws OutOfRange unless
/// 1 <= m <= rows.
std::pair<DataVector, CoefficientMatrix> subsample(
    const DataVector& data, const CoefficientMatrix& phi_full, std::size_t m,
    std::uint64_t seed);

/// Two-qubit data from a three-qubit evolution: inputs sit on `pair` with the
/// spectator in |0>, the rotation acts on the pair, and readout follows the
/// subsystem map. Output uses the layout of `spec2`.
DataVector simulate_subsystem_dataset(const ComplexMatrix& u3,
                                      const QubitPair& pair,
                                      const TomographySpec& spec2,
                                      const NoiseModel& noise);

}  // namespace csqpt
