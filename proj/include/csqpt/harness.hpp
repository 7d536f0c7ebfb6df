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

// Seeded Monte Carlo sweeps of reconstruction fidelity against the number of
// data points, and the gate registry they draw from.
//
// Seeding is paired: the noise draw of trial t depends only on (seed, t) and
// the row subset only on (seed, t, m), so every method/basis combination run
// with the same master seed sees identical data.

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "csqpt/solver.hpp"

namespace csqpt {

struct GateSpec {
  std::string key;
  std::string description;
  /// Qubits of the reconstructed process.
  std::size_t n_qubits = 0;
  /// Target unitary the fidelity is measured against.
  ComplexMatrix ideal;
  /// Three-qubit evolution when the data come from the subsystem pipeline.
  std::optional<ComplexMatrix> evolution;
  std::optional<QubitPair> pair;
};

/// Keys: cnot, crx(theta), cnn, uj12, uj13, uj23, refocused(i,j,k).
/// theta accepts a number or pi, pi/2, -pi/4 style fractions; qubit indices
/// are 1-based. Throws UnknownGate.
GateSpec resolve_gate(const std::string& key);

/// One representative key per registry entry.
std::vector<std::string> registry_keys();

/// Full data set for the gate under the standard protocol of its size.
DataVector gate_dataset(const GateSpec& gate, const TomographySpec& spec,
                        const NoiseModel& noise);

/// Noise bound handed to CS for a subsampled data set.
struct EpsilonPolicy {
  enum class Kind {
    NoiseNorm,  // value * ||z|| over the kept rows (oracle; simulation only)
    Fixed,      // value
  };
  Kind kind = Kind::NoiseNorm;
  double value = 1.0;

  double resolve(const DataVector& kept) const;
};

struct SweepPlan {
  std::string gate = "cnot";
  Method method = Method::CompressedSensing;
  BasisKind basis = BasisKind::PauliError;
  /// Empty means default_m_grid for the gate size.
  std::vector<std::size_t> m_grid;
  std::size_t trials = 50;
  double noise_sigma = 0.0;
  std::uint64_t seed = 1;
  EpsilonPolicy epsilon;
  /// Sample whole configurations instead of single data points.
  bool sample_configurations = false;
  SolverOptions solver;
  /// 0 uses the hardware concurrency.
  std::size_t workers = 0;

  /// Throws OutOfRange on trials < 2, m outside [1, full], sigma < 0.
  void validate() const;
};

struct SweepRecord {
  std::string gate;
  Method method = Method::CompressedSensing;
  BasisKind basis = BasisKind::PauliError;
  std::size_t m_data = 0;
  double mean_fidelity = 0.0;
  double sigma = 0.0;  // sample standard deviation, N - 1 denominator
  std::size_t trials = 0;
  /// Trials whose solve threw or did not converge. Thrown trials score 0.
  std::size_t failures = 0;
  std::uint64_t seed = 0;
  std::vector<double> fidelities;
  double wall_time_s = 0.0;

  friend bool operator==(const SweepRecord&, const SweepRecord&) = default;
};

/// Steps of 8 (two qubits) or 16 (three qubits) up to the full data size,
/// with the full size always included.
std::vector<std::size_t> default_m_grid(std::size_t n_qubits);

std::vector<SweepRecord> run_sweep(const SweepPlan& plan);

/// Smallest m whose mean fidelity exceeds `level`. Records must be sorted
/// by m. Throws EmptyInput on an empty list.
std::optional<std::size_t> threshold_m(const std::vector<SweepRecord>& records,
                                       double level = 0.9);

struct MethodVariant {
  Method method;
  BasisKind basis;
};

/// CS-PEB, CS-PB, LS-PEB, LS-PB.
inline constexpr MethodVariant kComparedMethods[] = {
    {Method::CompressedSensing, BasisKind::PauliError},
    {Method::CompressedSensing, BasisKind::Pauli},
    {Method::LeastSquares, BasisKind::PauliError},
    {Method::LeastSquares, BasisKind::Pauli},
};

/// The four sweeps of `base` (method and basis overridden), concatenated in
/// kComparedMethods order. Trials are paired across methods.
std::vector<SweepRecord> compare_methods(const SweepPlan& base);

/// Records of one method/basis pair, in input order.
std::vector<SweepRecord> select_records(const std::vector<SweepRecord>& records,
                                        Method method, BasisKind basis);

struct NoiseCalibration {
  double sigma = 0.0;
  double fidelity = 0.0;  // mean full-data LS-PB fidelity at sigma
  std::size_t rounds = 0;
};

/// Picks the Gaussian noise level at which full-data LS-PB reconstruction
/// reaches `target` mean fidelity. Infidelity grows roughly like sigma^2,
/// which drives the update.
NoiseCalibration calibrate_noise(const std::string& gate, double target,
                                 std::uint64_t seed, std::size_t trials = 2,
                                 const SolverOptions& opts = {},
                                 double tolerance = 0.003,
                                 std::size_t max_rounds = 6);

enum class ExportFormat { Csv, Json };

ExportFormat export_format_from_string(const std::string& name);

/// Header plus one row per record; wall time is not part of the CSV.
std::string records_to_csv(const std::vector<SweepRecord>& records);

/// Throws IoError when the file cannot be written.
void export_results(const std::vector<SweepRecord>& records,
                    const std::string& path, ExportFormat format);

}  // namespace csqpt
