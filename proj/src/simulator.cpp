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

#include "csqpt/simulator.hpp"

#include <algorithm>
#include <numbers>
#include <numeric>

#include "csqpt/error.hpp"

namespace csqpt {

std::mt19937_64 make_rng(std::uint64_t master_seed,
                         std::initializer_list<std::uint64_t> stream) {
  std::vector<std::uint32_t> words;
  auto push = [&](std::uint64_t v) {
    words.push_back(static_cast<std::uint32_t>(v));
    words.push_back(static_cast<std::uint32_t>(v >> 32));
  };
  push(master_seed);
  for (auto s : stream) push(s);
  std::seed_seq seq(words.begin(), words.end());
  return std::mt19937_64(seq);
}

NoiseModel NoiseModel::gaussian(double sigma, std::uint64_t seed) {
  if (!(sigma >= 0.0)) throw Error(ErrorCode::OutOfRange, "noise sigma < 0");
  return NoiseModel{Kind::AdditiveGaussian, sigma, seed};
}

namespace {

void add_noise(DataVector& data, const NoiseModel& noise) {
  data.seed = noise.seed;
  data.noise = ComplexVector::Zero(data.values.size());
  if (noise.kind == NoiseModel::Kind::AdditiveGaussian && noise.sigma > 0.0) {
    auto rng = make_rng(noise.seed, {0x6e6f697365ULL});
    std::normal_distribution<double> gauss(0.0, noise.sigma);
    for (Eigen::Index r = 0; r < data.values.size(); ++r) {
      const double re = gauss(rng);
      const double im = gauss(rng);
      data.noise(r) = Complex(re, im);
    }
    data.values += data.noise;
  }
  data.epsilon = data.noise.norm();
}

template <typename Fn>
DataVector simulate_rows(const TomographySpec& spec, const NoiseModel& noise,
                         Fn&& output_state) {
  spec.validate();
  DataVector data;
  data.values.resize(static_cast<Eigen::Index>(spec.data_points()));
  data.labels.reserve(spec.data_points());
  Eigen::Index row = 0;
  for (std::size_t s = 0; s < spec.input_states.size(); ++s) {
    const ComplexMatrix out = output_state(spec.input_states[s]);
    for (std::size_t r = 0; r < spec.rotations.size(); ++r) {
      const ComplexMatrix& rot = spec.rotations[r];
      const ComplexMatrix rotated = rot * out * rot.adjoint();
      for (std::size_t e = 0; e < spec.readout.size(); ++e) {
        data.values(row++) = rotated(spec.readout[e].row, spec.readout[e].col);
        data.labels.push_back(Configuration{s, r, e});
      }
    }
  }
  add_noise(data, noise);
  return data;
}

}  // namespace

DataVector simulate_dataset(const ProcessMatrix& chi_true,
                            const TomographySpec& spec,
                            const NoiseModel& noise) {
  if (chi_true.dim() != spec.dim()) {
    throw Error(ErrorCode::DimensionMismatch, "process does not match spec");
  }
  return simulate_rows(spec, noise, [&](const ComplexMatrix& rho) {
    return apply_map(chi_true, rho);
  });
}

DataVector simulate_dataset(const ComplexMatrix& unitary,
                            const TomographySpec& spec,
                            const NoiseModel& noise) {
  if (static_cast<std::size_t>(unitary.rows()) != spec.dim()) {
    throw Error(ErrorCode::DimensionMismatch, "unitary does not match spec");
  }
  return simulate_rows(spec, noise, [&](const ComplexMatrix& rho) {
    return ComplexMatrix(unitary * rho * unitary.adjoint());
  });
}

ComplexMatrix pps_state(std::size_t n_qubits, double eta) {
  if (!(eta >= 0.0 && eta <= 1.0)) {
    throw Error(ErrorCode::OutOfRange, "purity must lie in [0, 1]");
  }
  const auto d = static_cast<Eigen::Index>(std::size_t{1} << n_qubits);
  ComplexMatrix rho = ComplexMatrix::Identity(d, d) * ((1.0 - eta) / d);
  rho(0, 0) += eta;
  return rho;
}

TomographySpec pps_spec(std::size_t n_qubits, double eta) {
  TomographySpec spec = standard_spec(n_qubits);
  const ComplexMatrix prep[4] = {pauli::identity(), pauli::x(),
                                 rotation_y(std::numbers::pi / 2),
                                 rotation_x(-std::numbers::pi / 2)};
  const ComplexMatrix rho0 = pps_state(n_qubits, eta);
  std::vector<ComplexMatrix> factors(n_qubits);
  for (std::size_t i = 0; i < spec.input_states.size(); ++i) {
    for (std::size_t q = 0; q < n_qubits; ++q) {
      factors[n_qubits - 1 - q] = prep[(i >> (2 * q)) & 3U];
    }
    const ComplexMatrix v = kron_all(factors);
    spec.input_states[i] = v * rho0 * v.adjoint();
  }
  return spec;
}

std::vector<std::size_t> sample_rows(std::size_t rows, std::size_t m,
                                     std::uint64_t seed) {
  if (m < 1 || m > rows) {
    throw Error(ErrorCode::OutOfRange, "sample size " + std::to_string(m) +
                                           " outside [1, " +
                                           std::to_string(rows) + "]");
  }
  std::vector<std::size_t> idx(rows);
  std::iota(idx.begin(), idx.end(), std::size_t{0});
  auto rng = make_rng(seed, {0x726f7773ULL});
  // Partial Fisher-Yates: the first m slots are a uniform m-subset.
  for (std::size_t i = 0; i < m; ++i) {
    std::uniform_int_distribution<std::size_t> pick(i, rows - 1);
    std::swap(idx[i], idx[pick(rng)]);
  }
  idx.resize(m);
  std::sort(idx.begin(), idx.end());
  return idx;
}

std::vector<std::size_t> sample_configuration_rows(const TomographySpec& spec,
                                                   std::size_t m,
                                                   std::uint64_t seed) {
  const std::size_t per = spec.readout.size();
  if (m < 1 || m > spec.data_points()) {
    throw Error(ErrorCode::OutOfRange, "sample size outside data set");
  }
  const std::size_t configs = (m + per - 1) / per;
  std::vector<std::size_t> rows;
  for (auto c : sample_rows(spec.configurations(), configs, seed)) {
    for (std::size_t e = 0; e < per && rows.size() < m; ++e) {
      rows.push_back(c * per + e);
    }
  }
  return rows;
}

std::pair<DataVector, CoefficientMatrix> subsample(
    const DataVector& data, const CoefficientMatrix& phi_full,
    std::span<const std::size_t> rows) {
  if (data.size() != phi_full.row_count() ||
      static_cast<std::size_t>(data.values.size()) != data.size()) {
    throw Error(ErrorCode::DimensionMismatch, "data and Phi row counts differ");
  }
  DataVector out;
  out.seed = data.seed;
  out.values.resize(static_cast<Eigen::Index>(rows.size()));
  const bool has_noise = data.noise.size() == data.values.size();
  if (has_noise) out.noise.resize(out.values.size());
  for (std::size_t i = 0; i < rows.size(); ++i) {
    if (rows[i] >= data.size()) {
      throw Error(ErrorCode::OutOfRange, "row index outside data set");
    }
    out.values(i) = data.values(rows[i]);
    out.labels.push_back(data.labels[rows[i]]);
    if (has_noise) out.noise(i) = data.noise(rows[i]);
  }
  out.epsilon = has_noise ? out.noise.norm() : data.epsilon;
  return {std::move(out), phi_full.select(rows)};
}

std::pair<DataVector, CoefficientMatrix> subsample(
    const DataVector& data, const CoefficientMatrix& phi_full, std::size_t m,
    std::uint64_t seed) {
  const auto rows = sample_rows(data.size(), m, seed);
  return subsample(data, phi_full, rows);
}

DataVector simulate_subsystem_dataset(const ComplexMatrix& u3,
                                      const QubitPair& pair,
                                      const TomographySpec& spec2,
                                      const NoiseModel& noise) {
  if (u3.rows() != 8 || u3.cols() != 8) {
    throw Error(ErrorCode::DimensionMismatch, "subsystem evolution must be 8x8");
  }
  if (spec2.n_qubits != 2) {
    throw Error(ErrorCode::DimensionMismatch, "subsystem spec must be 2-qubit");
  }
  spec2.validate();
  const auto rules = subsystem_readout_map(pair);
  std::vector<std::size_t> rule_of(spec2.readout.size());
  for (std::size_t e = 0; e < spec2.readout.size(); ++e) {
    const auto& el = spec2.readout[e];
    auto it = std::find_if(rules.begin(), rules.end(), [&](const auto& rule) {
      return rule.target[0] == el.row + 1 && rule.target[1] == el.col + 1;
    });
    if (it == rules.end()) {
      throw Error(ErrorCode::IndexOutOfRange,
                  "readout element has no subsystem mapping");
    }
    rule_of[e] = static_cast<std::size_t>(it - rules.begin());
  }

  const std::size_t pair_qubits[] = {pair.first, pair.second};
  const std::size_t spectator[] = {pair.spectator()};
  ComplexMatrix ground = ComplexMatrix::Zero(2, 2);
  ground(0, 0) = 1.0;
  const ComplexMatrix spectator_ground = embed_operator(ground, spectator, 3);

  DataVector data;
  data.values.resize(static_cast<Eigen::Index>(spec2.data_points()));
  Eigen::Index row = 0;
  for (std::size_t s = 0; s < spec2.input_states.size(); ++s) {
    const ComplexMatrix rho3 =
        embed_operator(spec2.input_states[s], pair_qubits, 3) *
        spectator_ground;
    const ComplexMatrix out = u3 * rho3 * u3.adjoint();
    for (std::size_t r = 0; r < spec2.rotations.size(); ++r) {
      const ComplexMatrix rot3 =
          embed_operator(spec2.rotations[r], pair_qubits, 3);
      const auto values =
          apply_subsystem_readout(rules, rot3 * out * rot3.adjoint());
      for (std::size_t e = 0; e < spec2.readout.size(); ++e) {
        data.values(row++) = values[rule_of[e]];
        data.labels.push_back(Configuration{s, r, e});
      }
    }
  }
  add_noise(data, noise);
  return data;
}

}  // namespace csqpt
