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

#include "csqpt/harness.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdio>
#include <exception>
#include <fstream>
#include <mutex>
#include <numbers>
#include <numeric>
#include <regex>
#include <thread>

#include "csqpt/error.hpp"
#include "csqpt/serialization.hpp"

namespace csqpt {

namespace {

std::uint64_t derive_seed(std::uint64_t master,
                          std::initializer_list<std::uint64_t> stream) {
  return make_rng(master, stream)();
}

constexpr std::uint64_t kNoiseStream = 0x6e6f6973ULL;
constexpr std::uint64_t kRowStream = 0x726f7773ULL;
constexpr std::uint64_t kCalibrationStream = 0x63616c62ULL;

double parse_angle(const std::string& text) {
  static const std::regex pi_form(
      R"(^\s*([+-]?)\s*(\d*\.?\d*)\s*\*?\s*pi\s*(?:/\s*(\d+\.?\d*))?\s*$)");
  std::smatch match;
  if (std::regex_match(text, match, pi_form)) {
    double value = std::numbers::pi;
    if (match[2].length() > 0) value *= std::stod(match[2]);
    if (match[3].length() > 0) value /= std::stod(match[3]);
    return match[1] == "-" ? -value : value;
  }
  std::size_t used = 0;
  double value = 0.0;
  try {
    value = std::stod(text, &used);
  } catch (const std::exception&) {
    used = 0;
  }
  if (used == 0 || text.find_first_not_of(" \t", used) != std::string::npos) {
    throw Error(ErrorCode::UnknownGate, "cannot parse angle '" + text + "'");
  }
  return value;
}

GateSpec refocused_gate(std::size_t i, std::size_t j, std::size_t k,
                        std::string key) {
  // 1-based indices in, 0-based below.
  if (i < 1 || j < 1 || k < 1 || i > 3 || j > 3 || k > 3 || i == j ||
      i == k || j == k) {
    throw Error(ErrorCode::UnknownGate,
                "refocused(i,j,k) needs three distinct qubits in 1..3");
  }
  const InternalHamiltonian h = default_three_spin_hamiltonian();
  const std::size_t a = std::min(i, j) - 1;
  const std::size_t b = std::max(i, j) - 1;
  const double coupling = h.coupling(a, b);
  const double t = 1.0 / (2.0 * std::abs(coupling));
  GateSpec gate;
  gate.key = std::move(key);
  gate.description = "J-coupling evolution of qubits " + std::to_string(a + 1) +
                     "," + std::to_string(b + 1) + " with qubit " +
                     std::to_string(k) + " refocused, t = 1/(2|J|)";
  gate.n_qubits = 2;
  gate.ideal = gate_jcoupling(0, 1, coupling, t, 2);
  gate.evolution = gate_refocused_evolution(a, b, k - 1, h, t);
  gate.pair = QubitPair{a, b};
  return gate;
}

std::string trim(const std::string& s) {
  const auto first = s.find_first_not_of(" \t");
  if (first == std::string::npos) return {};
  const auto last = s.find_last_not_of(" \t");
  return s.substr(first, last - first + 1);
}

template <typename Fn>
void parallel_for(std::size_t count, std::size_t workers, Fn&& fn) {
  if (workers == 0) {
    workers = std::max(1U, std::thread::hardware_concurrency());
  }
  workers = std::min(workers, count);
  if (workers <= 1) {
    for (std::size_t i = 0; i < count; ++i) fn(i);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::exception_ptr failure;
  std::mutex failure_mutex;
  std::vector<std::thread> pool;
  for (std::size_t w = 0; w < workers; ++w) {
    pool.emplace_back([&] {
      for (std::size_t i = next++; i < count; i = next++) {
        try {
          fn(i);
        } catch (...) {
          std::lock_guard<std::mutex> lock(failure_mutex);
          if (!failure) failure = std::current_exception();
        }
      }
    });
  }
  for (auto& t : pool) t.join();
  if (failure) std::rethrow_exception(failure);
}

struct TrialOutcome {
  double fidelity = 0.0;
  bool failed = false;
  double seconds = 0.0;
};

BasisPtr basis_for(const GateSpec& gate, BasisKind kind) {
  if (kind == BasisKind::Pauli) return share(pauli_basis(gate.n_qubits));
  return share(pauli_error_basis(gate.ideal, gate.n_qubits));
}

}  // namespace

GateSpec resolve_gate(const std::string& raw_key) {
  std::string key = trim(raw_key);
  std::transform(key.begin(), key.end(), key.begin(),
                 [](unsigned char c) { return std::tolower(c); });
  GateSpec gate;
  gate.key = key;
  if (key == "cnot") {
    gate.description = "controlled-NOT, qubit 1 controls qubit 2";
    gate.n_qubits = 2;
    gate.ideal = gate_cnot();
    return gate;
  }
  if (key == "cnn") {
    gate.description = "CNOT(1->3) CNOT(1->2)";
    gate.n_qubits = 3;
    gate.ideal = gate_cnn();
    return gate;
  }
  if (key == "uj12") return refocused_gate(1, 2, 3, key);
  if (key == "uj13") return refocused_gate(1, 3, 2, key);
  if (key == "uj23") return refocused_gate(2, 3, 1, key);

  static const std::regex crx(R"(^crx\((.+)\)$)");
  static const std::regex refocused(R"(^refocused\((\d),(\d),(\d)\)$)");
  std::string compact;
  for (char c : key) {
    if (c != ' ') compact += c;
  }
  std::smatch match;
  if (std::regex_match(compact, match, crx)) {
    const double theta = parse_angle(match[1]);
    gate.key = compact;
    gate.description = "controlled Rx(" + std::string(match[1]) +
                       "), qubit 1 controls qubit 2";
    gate.n_qubits = 2;
    gate.ideal = gate_controlled_rx(theta);
    return gate;
  }
  if (std::regex_match(compact, match, refocused)) {
    return refocused_gate(std::stoul(match[1]), std::stoul(match[2]),
                          std::stoul(match[3]), compact);
  }
  throw Error(ErrorCode::UnknownGate, "unknown gate '" + raw_key + "'");
}

std::vector<std::string> registry_keys() {
  return {"cnot", "crx(pi)", "cnn", "uj12", "uj13", "uj23", "refocused(1,2,3)"};
}

DataVector gate_dataset(const GateSpec& gate, const TomographySpec& spec,
                        const NoiseModel& noise) {
  if (gate.evolution) {
    return simulate_subsystem_dataset(*gate.evolution, *gate.pair, spec, noise);
  }
  return simulate_dataset(gate.ideal, spec, noise);
}

double EpsilonPolicy::resolve(const DataVector& kept) const {
  if (kind == Kind::Fixed) return value;
  if (kept.noise.size() == 0 || kept.noise.size() != kept.values.size()) {
    return value * kept.epsilon;
  }
  return value * kept.noise.norm();
}

void SweepPlan::validate() const {
  if (trials < 2) {
    throw Error(ErrorCode::OutOfRange, "a sweep needs at least 2 trials");
  }
  if (!(noise_sigma >= 0.0)) {
    throw Error(ErrorCode::OutOfRange, "noise sigma must be non-negative");
  }
  if (!(epsilon.value >= 0.0)) {
    throw Error(ErrorCode::OutOfRange, "epsilon must be non-negative");
  }
  const GateSpec g = resolve_gate(gate);
  const std::size_t full = standard_spec(g.n_qubits).data_points();
  for (auto m : m_grid) {
    if (m < 1 || m > full) {
      throw Error(ErrorCode::OutOfRange,
                  "m = " + std::to_string(m) + " outside [1, " +
                      std::to_string(full) + "]");
    }
  }
}

std::vector<std::size_t> default_m_grid(std::size_t n_qubits) {
  const std::size_t full = standard_spec(n_qubits).data_points();
  const std::size_t step = n_qubits == 2 ? 8 : 16;
  std::vector<std::size_t> grid;
  for (std::size_t m = step; m < full; m += step) grid.push_back(m);
  grid.push_back(full);
  return grid;
}

std::vector<SweepRecord> run_sweep(const SweepPlan& plan) {
  plan.validate();
  const GateSpec gate = resolve_gate(plan.gate);
  const TomographySpec spec = standard_spec(gate.n_qubits);
  const std::size_t full = spec.data_points();
  const std::vector<std::size_t> grid =
      plan.m_grid.empty() ? default_m_grid(gate.n_qubits) : plan.m_grid;

  const BasisPtr basis = basis_for(gate, plan.basis);
  const CoefficientMatrix phi = build_phi(spec, basis);
  const ProcessMatrix target = chi_from_unitary(gate.ideal, basis);

  // outcomes[k][t]: grid point k, trial t.
  std::vector<std::vector<TrialOutcome>> outcomes(
      grid.size(), std::vector<TrialOutcome>(plan.trials));

  parallel_for(plan.trials, plan.workers, [&](std::size_t t) {
    const NoiseModel noise =
        plan.noise_sigma > 0.0
            ? NoiseModel::gaussian(plan.noise_sigma,
                                   derive_seed(plan.seed, {kNoiseStream, t}))
            : NoiseModel::none();
    const DataVector data = gate_dataset(gate, spec, noise);
    for (std::size_t k = 0; k < grid.size(); ++k) {
      const std::size_t m = grid[k];
      std::vector<std::size_t> rows;
      if (m == full) {
        rows.resize(full);
        std::iota(rows.begin(), rows.end(), std::size_t{0});
      } else {
        const auto row_seed = derive_seed(plan.seed, {kRowStream, t, m});
        rows = plan.sample_configurations
                   ? sample_configuration_rows(spec, m, row_seed)
                   : sample_rows(full, m, row_seed);
      }
      auto [kept, sub_phi] = subsample(data, phi, rows);
      TrialOutcome& out = outcomes[k][t];
      try {
        const SolveReport report =
            plan.method == Method::CompressedSensing
                ? cs_qpt(kept, sub_phi, plan.epsilon.resolve(kept), plan.solver)
                : ls_qpt(kept, sub_phi, plan.solver);
        out.fidelity = fidelity(report.chi, target);
        out.failed = !report.converged;
        out.seconds = report.wall_time_s;
      } catch (const Error& e) {
        if (e.code() != ErrorCode::Infeasible &&
            e.code() != ErrorCode::FactorizationFailure) {
          throw;
        }
        out.fidelity = 0.0;
        out.failed = true;
      }
    }
  });

  std::vector<SweepRecord> records;
  for (std::size_t k = 0; k < grid.size(); ++k) {
    SweepRecord rec;
    rec.gate = gate.key;
    rec.method = plan.method;
    rec.basis = plan.basis;
    rec.m_data = grid[k];
    rec.trials = plan.trials;
    rec.seed = plan.seed;
    double sum = 0.0;
    for (const auto& o : outcomes[k]) {
      rec.fidelities.push_back(o.fidelity);
      sum += o.fidelity;
      rec.failures += o.failed ? 1 : 0;
      rec.wall_time_s += o.seconds;
    }
    const auto n = static_cast<double>(plan.trials);
    rec.mean_fidelity = sum / n;
    double sq = 0.0;
    for (double f : rec.fidelities) {
      sq += (f - rec.mean_fidelity) * (f - rec.mean_fidelity);
    }
    rec.sigma = std::sqrt(sq / (n - 1.0));
    records.push_back(std::move(rec));
  }
  return records;
}

std::optional<std::size_t> threshold_m(const std::vector<SweepRecord>& records,
                                       double level) {
  if (records.empty()) throw Error(ErrorCode::EmptyInput, "no sweep records");
  for (const auto& r : records) {
    if (r.mean_fidelity > level) return r.m_data;
  }
  return std::nullopt;
}

std::vector<SweepRecord> compare_methods(const SweepPlan& base) {
  std::vector<SweepRecord> all;
  for (const auto& variant : kComparedMethods) {
    SweepPlan plan = base;
    plan.method = variant.method;
    plan.basis = variant.basis;
    auto records = run_sweep(plan);
    all.insert(all.end(), records.begin(), records.end());
  }
  return all;
}

std::vector<SweepRecord> select_records(const std::vector<SweepRecord>& records,
                                        Method method, BasisKind basis) {
  std::vector<SweepRecord> out;
  for (const auto& r : records) {
    if (r.method == method && r.basis == basis) out.push_back(r);
  }
  return out;
}

NoiseCalibration calibrate_noise(const std::string& gate_key, double target,
                                 std::uint64_t seed, std::size_t trials,
                                 const SolverOptions& opts, double tolerance,
                                 std::size_t max_rounds) {
  if (!(target > 0.0 && target < 1.0)) {
    throw Error(ErrorCode::OutOfRange, "target fidelity must lie in (0, 1)");
  }
  if (trials < 1 || max_rounds < 1) {
    throw Error(ErrorCode::OutOfRange, "calibration needs trials and rounds");
  }
  const GateSpec gate = resolve_gate(gate_key);
  const TomographySpec spec = standard_spec(gate.n_qubits);
  const BasisPtr basis = share(pauli_basis(gate.n_qubits));
  const CoefficientMatrix phi = build_phi(spec, basis);
  const ProcessMatrix ideal = chi_from_unitary(gate.ideal, basis);

  auto mean_fidelity = [&](double sigma) {
    double sum = 0.0;
    for (std::size_t t = 0; t < trials; ++t) {
      const auto noise = NoiseModel::gaussian(
          sigma, derive_seed(seed, {kCalibrationStream, t}));
      const DataVector data = gate_dataset(gate, spec, noise);
      sum += fidelity(ls_qpt(data, phi, opts).chi, ideal);
    }
    return sum / static_cast<double>(trials);
  };

  NoiseCalibration cal;
  // Data entries are O(1/d); start from a few percent of that.
  double sigma = 0.05 / static_cast<double>(spec.dim());
  for (cal.rounds = 1; cal.rounds <= max_rounds; ++cal.rounds) {
    const double f = mean_fidelity(sigma);
    cal.sigma = sigma;
    cal.fidelity = f;
    if (std::abs(f - target) <= tolerance) break;
    const double ratio = (1.0 - target) / std::max(1.0 - f, 1e-12);
    sigma *= std::clamp(std::sqrt(ratio), 0.1, 10.0);
  }
  cal.rounds = std::min(cal.rounds, max_rounds);
  return cal;
}

ExportFormat export_format_from_string(const std::string& name) {
  if (name == "csv" || name == "CSV") return ExportFormat::Csv;
  if (name == "json" || name == "JSON") return ExportFormat::Json;
  throw Error(ErrorCode::ParseError, "unknown format '" + name + "'");
}

std::string records_to_csv(const std::vector<SweepRecord>& records) {
  std::string out =
      "gate,method,basis,m_data,mean_fidelity,sigma,trials,failures,seed\n";
  char buf[160];
  for (const auto& r : records) {
    std::string gate = r.gate;
    if (gate.find_first_of(",\"") != std::string::npos) {
      std::string quoted = "\"";
      for (char c : gate) {
        if (c == '"') quoted += '"';
        quoted += c;
      }
      gate = quoted + "\"";
    }
    std::snprintf(buf, sizeof buf, ",%s,%s,%zu,%.10f,%.10f,%zu,%zu,%llu\n",
                  to_string(r.method).c_str(), to_string(r.basis).c_str(),
                  r.m_data, r.mean_fidelity, r.sigma, r.trials, r.failures,
                  static_cast<unsigned long long>(r.seed));
    out += gate;
    out += buf;
  }
  return out;
}

void export_results(const std::vector<SweepRecord>& records,
                    const std::string& path, ExportFormat format) {
  std::ofstream file(path, std::ios::binary);
  if (!file) throw Error(ErrorCode::IoError, "cannot open '" + path + "'");
  if (format == ExportFormat::Csv) {
    file << records_to_csv(records);
  } else {
    file << records_to_json(records).dump(2) << '\n';
  }
  if (!file) throw Error(ErrorCode::IoError, "failed writing '" + path + "'");
}

}  // namespace csqpt
