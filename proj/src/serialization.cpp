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


#include "csqpt/serialization.hpp"

#include <fstream>

#include "csqpt/error.hpp"

namespace csqpt {

namespace {

Json complex_to_json(Complex z) { return Json::array({z.real(), z.imag()}); }

Complex complex_from_json(const Json& j) {
  if (!j.is_array() || j.size() != 2) {
    throw Error(ErrorCode::ParseError, "complex number must be [re, im]");
  }
  return {j[0].get<double>(), j[1].get<double>()};
}

// Wraps nlohmann's exceptions so callers only see csqpt::Error.
template <typename Fn>
auto parsing(const char* what, Fn&& fn) -> decltype(fn()) {
  try {
    return fn();
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorCode::ParseError, std::string(what) + ": " + e.what());
  }
}

template <typename T>
void read_optional(const Json& j, const char* key, T& out) {
  if (j.contains(key)) out = j.at(key).get<T>();
}

Json options_to_json(const SolverOptions& o) {
  return {{"max_iterations", o.max_iterations},
          {"rho", o.rho},
          {"adaptive_rho", o.adaptive_rho},
          {"abs_tol", o.abs_tol},
          {"rel_tol", o.rel_tol},
          {"relaxation", o.relaxation},
          {"psd_tol", o.psd_tol},
          {"tp_tol", o.tp_tol},
          {"data_tol", o.data_tol},
          {"check_interval", o.check_interval},
          {"history_stride", o.history_stride}};
}

SolverOptions options_from_json(const Json& j) {
  SolverOptions o;
  read_optional(j, "max_iterations", o.max_iterations);
  read_optional(j, "rho", o.rho);
  read_optional(j, "adaptive_rho", o.adaptive_rho);
  read_optional(j, "abs_tol", o.abs_tol);
  read_optional(j, "rel_tol", o.rel_tol);
  read_optional(j, "relaxation", o.relaxation);
  read_optional(j, "psd_tol", o.psd_tol);
  read_optional(j, "tp_tol", o.tp_tol);
  read_optional(j, "data_tol", o.data_tol);
  read_optional(j, "check_interval", o.check_interval);
  read_optional(j, "history_stride", o.history_stride);
  return o;
}

}  // namespace

Json complex_matrix_to_json(const ComplexMatrix& m) {
  Json rows = Json::array();
  for (Eigen::Index r = 0; r < m.rows(); ++r) {
    Json row = Json::array();
    for (Eigen::Index c = 0; c < m.cols(); ++c) {
      row.push_back(complex_to_json(m(r, c)));
    }
    rows.push_back(std::move(row));
  }
  return rows;
}

ComplexMatrix complex_matrix_from_json(const Json& j) {
  return parsing("matrix", [&] {
    if (!j.is_array()) throw Error(ErrorCode::ParseError, "matrix must be rows");
    const auto rows = static_cast<Eigen::Index>(j.size());
    const auto cols =
        rows == 0 ? Eigen::Index{0} : static_cast<Eigen::Index>(j[0].size());
    ComplexMatrix m(rows, cols);
    for (Eigen::Index r = 0; r < rows; ++r) {
      const Json& row = j[static_cast<std::size_t>(r)];
      if (!row.is_array() || static_cast<Eigen::Index>(row.size()) != cols) {
        throw Error(ErrorCode::ParseError, "ragged matrix rows");
      }
      for (Eigen::Index c = 0; c < cols; ++c) {
        m(r, c) = complex_from_json(row[static_cast<std::size_t>(c)]);
      }
    }
    return m;
  });
}

Json complex_vector_to_json(const ComplexVector& v) {
  Json out = Json::array();
  for (Eigen::Index i = 0; i < v.size(); ++i) out.push_back(complex_to_json(v(i)));
  return out;
}

ComplexVector complex_vector_from_json(const Json& j) {
  return parsing("vector", [&] {
    if (!j.is_array()) throw Error(ErrorCode::ParseError, "vector must be array");
    ComplexVector v(static_cast<Eigen::Index>(j.size()));
    for (std::size_t i = 0; i < j.size(); ++i) {
      v(static_cast<Eigen::Index>(i)) = complex_from_json(j[i]);
    }
    return v;
  });
}

Json process_to_json(const ProcessMatrix& chi) {
  const OperatorBasis& basis = chi.basis();
  Json j = {{"n_qubits", basis.n_qubits()},
            {"basis_kind", to_string(basis.kind())},
            {"chi", complex_matrix_to_json(chi.chi())}};
  if (basis.kind() == BasisKind::PauliError) {
    j["basis_unitary"] = complex_matrix_to_json(*basis.unitary());
  }
  return j;
}

ProcessMatrix process_from_json(const Json& j) {
  return parsing("process matrix", [&] {
    const auto n = j.at("n_qubits").get<std::size_t>();
    const BasisKind kind =
        basis_kind_from_string(j.at("basis_kind").get<std::string>());
    BasisPtr basis =
        kind == BasisKind::Pauli
            ? share(pauli_basis(n))
            : share(pauli_error_basis(
                  complex_matrix_from_json(j.at("basis_unitary")), n));
    return ProcessMatrix(std::move(basis), complex_matrix_from_json(j.at("chi")));
  });
}

Json data_to_json(const DataVector& data) {
  Json labels = Json::array();
  for (const auto& c : data.labels) {
    labels.push_back(Json::array({c.state, c.rotation, c.element}));
  }
  return {{"labels", labels},
          {"values", complex_vector_to_json(data.values)},
          {"epsilon", data.epsilon},
          {"seed", data.seed}};
}

DataVector data_from_json(const Json& j) {
  return parsing("data vector", [&] {
    DataVector data;
    data.values = complex_vector_from_json(j.at("values"));
    for (const auto& l : j.at("labels")) {
      data.labels.push_back(Configuration{l.at(0).get<std::size_t>(),
                                          l.at(1).get<std::size_t>(),
                                          l.at(2).get<std::size_t>()});
    }
    if (data.labels.size() != static_cast<std::size_t>(data.values.size())) {
      throw Error(ErrorCode::LengthMismatch, "labels and values differ in size");
    }
    read_optional(j, "epsilon", data.epsilon);
    read_optional(j, "seed", data.seed);
    return data;
  });
}

Json spec_to_json(const TomographySpec& spec) {
  Json states = Json::array();
  for (std::size_t i = 0; i < spec.input_states.size(); ++i) {
    states.push_back(
        {{"label", i < spec.state_labels.size() ? spec.state_labels[i] : ""},
         {"rho", complex_matrix_to_json(spec.input_states[i])}});
  }
  Json rotations = Json::array();
  for (std::size_t i = 0; i < spec.rotations.size(); ++i) {
    rotations.push_back(
        {{"label",
          i < spec.rotation_labels.size() ? spec.rotation_labels[i] : ""},
         {"unitary", complex_matrix_to_json(spec.rotations[i])}});
  }
  Json readout = Json::array();
  for (const auto& e : spec.readout) {
    readout.push_back(Json::array({e.row + 1, e.col + 1}));
  }
  return {{"n_qubits", spec.n_qubits},
          {"input_states", states},
          {"rotations", rotations},
          {"readout", readout}};
}

TomographySpec spec_from_json(const Json& j) {
  return parsing("tomography spec", [&] {
    TomographySpec spec;
    spec.n_qubits = j.at("n_qubits").get<std::size_t>();
    for (const auto& s : j.at("input_states")) {
      spec.state_labels.push_back(s.value("label", ""));
      spec.input_states.push_back(complex_matrix_from_json(s.at("rho")));
    }
    for (const auto& r : j.at("rotations")) {
      spec.rotation_labels.push_back(r.value("label", ""));
      spec.rotations.push_back(complex_matrix_from_json(r.at("unitary")));
    }
    for (const auto& e : j.at("readout")) {
      const auto k = e.at(0).get<std::size_t>();
      const auto l = e.at(1).get<std::size_t>();
      if (k < 1 || l < 1) {
        throw Error(ErrorCode::IndexOutOfRange, "readout indices are 1-based");
      }
      spec.readout.push_back(ReadoutElement{k - 1, l - 1});
    }
    spec.validate();
    return spec;
  });
}

Json report_to_json(const SolveReport& report) {
  Json history = Json::array();
  for (const auto& h : report.history) {
    history.push_back({{"iteration", h.iteration},
                       {"primal", h.primal},
                       {"dual", h.dual},
                       {"rho", h.rho}});
  }
  const ValidityReport validity = is_valid_process(report.chi);
  return {{"method", to_string(report.method)},
          {"iterations", report.iterations},
          {"converged", report.converged},
          {"underdetermined", report.underdetermined},
          {"data_residual", report.data_residual},
          {"psd_violation", report.psd_violation},
          {"tp_violation", report.tp_violation},
          {"transposed_tp_residual", validity.transposed_tp_residual},
          {"l1_value", report.l1_value},
          {"epsilon", report.epsilon},
          {"wall_time_s", report.wall_time_s},
          {"history", history},
          {"chi", process_to_json(report.chi)}};
}

Json plan_to_json(const SweepPlan& plan) {
  return {{"gate", plan.gate},
          {"method", to_string(plan.method)},
          {"basis", to_string(plan.basis)},
          {"m_grid", plan.m_grid},
          {"trials", plan.trials},
          {"noise_sigma", plan.noise_sigma},
          {"seed", plan.seed},
          {"epsilon",
           {{"kind", plan.epsilon.kind == EpsilonPolicy::Kind::Fixed
                         ? "fixed"
                         : "noise_norm"},
            {"value", plan.epsilon.value}}},
          {"sample_configurations", plan.sample_configurations},
          {"workers", plan.workers},
          {"solver", options_to_json(plan.solver)}};
}

SweepPlan plan_from_json(const Json& j) {
  return parsing("sweep plan", [&] {
    SweepPlan plan;
    read_optional(j, "gate", plan.gate);
    if (j.contains("method")) {
      plan.method = method_from_string(j.at("method").get<std::string>());
    }
    if (j.contains("basis")) {
      plan.basis = basis_kind_from_string(j.at("basis").get<std::string>());
    }
    read_optional(j, "m_grid", plan.m_grid);
    read_optional(j, "trials", plan.trials);
    read_optional(j, "noise_sigma", plan.noise_sigma);
    read_optional(j, "seed", plan.seed);
    if (j.contains("epsilon")) {
      const Json& e = j.at("epsilon");
      if (e.is_number()) {
        plan.epsilon = {EpsilonPolicy::Kind::Fixed, e.get<double>()};
      } else {
        const std::string kind = e.value("kind", "noise_norm");
        if (kind == "fixed") {
          plan.epsilon.kind = EpsilonPolicy::Kind::Fixed;
        } else if (kind == "noise_norm") {
          plan.epsilon.kind = EpsilonPolicy::Kind::NoiseNorm;
        } else {
          throw Error(ErrorCode::ParseError, "epsilon kind '" + kind + "'");
        }
        read_optional(e, "value", plan.epsilon.value);
      }
    }
    read_optional(j, "sample_configurations", plan.sample_configurations);
    read_optional(j, "workers", plan.workers);
    if (j.contains("solver")) plan.solver = options_from_json(j.at("solver"));
    return plan;
  });
}

Json record_to_json(const SweepRecord& r) {
  return {{"gate", r.gate},
          {"method", to_string(r.method)},
          {"basis", to_string(r.basis)},
          {"m_data", r.m_data},
          {"mean_fidelity", r.mean_fidelity},
          {"sigma", r.sigma},
          {"trials", r.trials},
          {"failures", r.failures},
          {"seed", r.seed},
          {"fidelities", r.fidelities},
          {"wall_time_s", r.wall_time_s}};
}

SweepRecord record_from_json(const Json& j) {
  return parsing("sweep record", [&] {
    SweepRecord r;
    r.gate = j.at("gate").get<std::string>();
    r.method = method_from_string(j.at("method").get<std::string>());
    r.basis = basis_kind_from_string(j.at("basis").get<std::string>());
    r.m_data = j.at("m_data").get<std::size_t>();
    r.mean_fidelity = j.at("mean_fidelity").get<double>();
    r.sigma = j.at("sigma").get<double>();
    r.trials = j.at("trials").get<std::size_t>();
    r.failures = j.at("failures").get<std::size_t>();
    r.seed = j.at("seed").get<std::uint64_t>();
    read_optional(j, "fidelities", r.fidelities);
    read_optional(j, "wall_time_s", r.wall_time_s);
    return r;
  });
}

Json records_to_json(const std::vector<SweepRecord>& records) {
  Json out = Json::array();
  for (const auto& r : records) out.push_back(record_to_json(r));
  return out;
}

std::vector<SweepRecord> records_from_json(const Json& j) {
  if (!j.is_array()) throw Error(ErrorCode::ParseError, "records must be array");
  std::vector<SweepRecord> out;
  for (const auto& r : j) out.push_back(record_from_json(r));
  return out;
}

Json read_json_file(const std::string& path) {
  std::ifstream file(path);
  if (!file) throw Error(ErrorCode::IoError, "cannot open '" + path + "'");
  try {
    return Json::parse(file);
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorCode::ParseError, path + ": " + e.what());
  }
}

void write_json_file(const std::string& path, const Json& j) {
  std::ofstream file(path, std::ios::binary);
  if (!file) throw Error(ErrorCode::IoError, "cannot open '" + path + "'");
  file << j.dump(2) << '\n';
  if (!file) throw Error(ErrorCode::IoError, "failed writing '" + path + "'");
}

}  // namespace csqpt
