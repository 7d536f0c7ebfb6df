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


// Command-line front end: simulate data, reconstruct chi, run sweeps.
//
// Exit codes: 0 success, 1 solver failure (majority of trials for sweeps),
// 2 usage error.

#include <cstdio>
#include <fstream>
#include <iostream>
#include <numeric>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "csqpt/error.hpp"
#include "csqpt/harness.hpp"
#include "csqpt/serialization.hpp"

namespace {

using namespace csqpt;

constexpr int kExitOk = 0;
constexpr int kExitSolver = 1;
constexpr int kExitUsage = 2;

// "8,16,24" or "start:stop:step" (inclusive).
std::vector<std::size_t> parse_grid(const std::string& text) {
  std::vector<std::size_t> grid;
  if (text.find(':') != std::string::npos) {
    std::size_t start = 0, stop = 0, step = 0;
    char c1 = 0, c2 = 0;
    std::istringstream in(text);
    if (!(in >> start >> c1 >> stop >> c2 >> step) || c1 != ':' || c2 != ':' ||
        step == 0 || start == 0 || stop < start) {
      throw Error(ErrorCode::ParseError, "bad m grid '" + text + "'");
    }
    for (std::size_t m = start; m <= stop; m += step) grid.push_back(m);
    return grid;
  }
  std::istringstream in(text);
  std::string item;
  while (std::getline(in, item, ',')) {
    std::size_t used = 0;
    unsigned long v = 0;
    try {
      v = std::stoul(item, &used);
    } catch (const std::exception&) {
      used = 0;
    }
    if (used == 0 || used != item.size()) {
      throw Error(ErrorCode::ParseError, "bad m grid entry '" + item + "'");
    }
    grid.push_back(v);
  }
  if (grid.empty()) throw Error(ErrorCode::ParseError, "empty m grid");
  return grid;
}

void emit(const std::string& text, const std::string& path) {
  if (path.empty() || path == "-") {
    std::cout << text;
    return;
  }
  std::ofstream file(path, std::ios::binary);
  if (!file) throw Error(ErrorCode::IoError, "cannot open '" + path + "'");
  file << text;
}

BasisPtr make_basis(const GateSpec& gate, BasisKind kind) {
  if (kind == BasisKind::Pauli) return share(pauli_basis(gate.n_qubits));
  return share(pauli_error_basis(gate.ideal, gate.n_qubits));
}

struct SimulateArgs {
  std::string gate = "cnot";
  double sigma = 0.0;
  std::uint64_t seed = 1;
  std::size_t m = 0;
  std::string out;
  std::string spec_out;
};

int run_simulate(const SimulateArgs& a) {
  const GateSpec gate = resolve_gate(a.gate);
  const TomographySpec spec = standard_spec(gate.n_qubits);
  const NoiseModel noise = a.sigma > 0.0 ? NoiseModel::gaussian(a.sigma, a.seed)
                                         : NoiseModel::none();
  DataVector data = gate_dataset(gate, spec, noise);
  if (a.m > 0 && a.m < data.size()) {
    const auto rows = sample_rows(data.size(), a.m, a.seed);
    // Phi is not needed here; subsample the vector directly.
    DataVector kept;
    kept.seed = data.seed;
    kept.values.resize(static_cast<Eigen::Index>(rows.size()));
    kept.noise.resize(kept.values.size());
    for (std::size_t i = 0; i < rows.size(); ++i) {
      kept.values(static_cast<Eigen::Index>(i)) = data.values(rows[i]);
      kept.noise(static_cast<Eigen::Index>(i)) = data.noise(rows[i]);
      kept.labels.push_back(data.labels[rows[i]]);
    }
    kept.epsilon = kept.noise.norm();
    data = std::move(kept);
  }
  emit(data_to_json(data).dump(2) + "\n", a.out);
  if (!a.spec_out.empty()) write_json_file(a.spec_out, spec_to_json(spec));
  return kExitOk;
}

struct ReconstructArgs {
  std::string data_path;
  std::string spec_path;
  std::string gate = "cnot";
  std::string method = "CS";
  std::string basis = "PEB";
  std::string epsilon;  // empty: take it from the data file
  std::size_t history = 0;
  std::string out;
};

int run_reconstruct(const ReconstructArgs& a) {
  const GateSpec gate = resolve_gate(a.gate);
  const DataVector data = data_from_json(read_json_file(a.data_path));
  const TomographySpec spec = a.spec_path.empty()
                                  ? standard_spec(gate.n_qubits)
                                  : spec_from_json(read_json_file(a.spec_path));
  if (spec.n_qubits != gate.n_qubits) {
    throw Error(ErrorCode::DimensionMismatch, "spec and gate sizes differ");
  }
  const BasisPtr basis = make_basis(gate, basis_kind_from_string(a.basis));
  const CoefficientMatrix full = build_phi(spec, basis);
  std::vector<std::size_t> rows;
  for (const auto& label : data.labels) rows.push_back(spec.row_of(label));
  const CoefficientMatrix phi = full.select(rows);

  SolverOptions opts;
  opts.history_stride = a.history;
  const Method method = method_from_string(a.method);
  double eps = data.epsilon;
  if (!a.epsilon.empty()) eps = std::stod(a.epsilon);
  const SolveReport report = method == Method::CompressedSensing
                                 ? cs_qpt(data, phi, eps, opts)
                                 : ls_qpt(data, phi, opts);
  Json j = report_to_json(report);
  j["gate"] = gate.key;
  j["fidelity"] = fidelity(report.chi, chi_from_unitary(gate.ideal, basis));
  emit(j.dump(2) + "\n", a.out);
  return report.converged ? kExitOk : kExitSolver;
}

struct SweepArgs {
  std::string config;
  std::string gate;
  std::string method;
  std::string basis;
  std::string grid;
  std::size_t trials = 0;
  double sigma = -1.0;
  std::string epsilon;
  std::uint64_t seed = 0;
  bool seed_set = false;
  std::size_t workers = 0;
  bool compare = false;
  double calibrate = 0.0;
  std::string out;
  std::string format = "csv";
};

int run_sweep_command(const SweepArgs& a, const CLI::App& sub) {
  SweepPlan plan;
  if (!a.config.empty()) plan = plan_from_json(read_json_file(a.config));
  if (sub.count("--gate")) plan.gate = a.gate;
  if (sub.count("--method")) plan.method = method_from_string(a.method);
  if (sub.count("--basis")) plan.basis = basis_kind_from_string(a.basis);
  if (sub.count("--m-grid")) plan.m_grid = parse_grid(a.grid);
  if (sub.count("--trials")) plan.trials = a.trials;
  if (sub.count("--noise-sigma")) plan.noise_sigma = a.sigma;
  if (sub.count("--seed")) plan.seed = a.seed;
  if (sub.count("--workers")) plan.workers = a.workers;
  if (sub.count("--epsilon")) {
    if (a.epsilon == "oracle") {
      plan.epsilon = {EpsilonPolicy::Kind::NoiseNorm, 1.0};
    } else {
      plan.epsilon = {EpsilonPolicy::Kind::Fixed, std::stod(a.epsilon)};
    }
  }
  if (sub.count("--calibrate")) {
    const NoiseCalibration cal =
        calibrate_noise(plan.gate, a.calibrate, plan.seed, 2, plan.solver);
    plan.noise_sigma = cal.sigma;
    std::fprintf(stderr, "calibrated noise sigma %.6g (LS-PB fidelity %.4f)\n",
                 cal.sigma, cal.fidelity);
  }
  plan.validate();

  const auto records = a.compare ? compare_methods(plan) : run_sweep(plan);
  const ExportFormat format = export_format_from_string(a.format);
  if (a.out.empty() || a.out == "-") {
    std::cout << (format == ExportFormat::Csv
                      ? records_to_csv(records)
                      : records_to_json(records).dump(2) + "\n");
  } else {
    export_results(records, a.out, format);
  }

  std::size_t failures = 0, total = 0;
  for (const auto& r : records) {
    failures += r.failures;
    total += r.trials;
  }
  return 2 * failures > total ? kExitSolver : kExitOk;
}

struct DiagnoseArgs {
  std::string gate = "cnot";
  std::string basis = "PEB";
  std::size_t m = 0;
  std::size_t sparsity = 1;
  std::size_t trials = 200;
  std::uint64_t seed = 1;
  bool normalize = false;
  double c0 = 1.0;
};

int run_diagnose(const DiagnoseArgs& a) {
  const GateSpec gate = resolve_gate(a.gate);
  const TomographySpec spec = standard_spec(gate.n_qubits);
  const BasisPtr basis = make_basis(gate, basis_kind_from_string(a.basis));
  CoefficientMatrix phi = build_phi(spec, basis);
  if (a.m > 0 && a.m < phi.row_count()) {
    phi = phi.select(sample_rows(phi.row_count(), a.m, a.seed));
  }
  const RipEstimate rip =
      rip_estimate(phi.phi, a.sparsity, a.trials, a.seed, a.normalize);
  const ProcessMatrix ideal = chi_from_unitary(gate.ideal, basis);
  const Json j = {
      {"gate", gate.key},
      {"basis", a.basis},
      {"rows", phi.row_count()},
      {"sparsity", a.sparsity},
      {"ideal_sparsity", sparsity(ideal)},
      {"rip_delta", rip.delta},
      {"rip_min_ratio", rip.min_ratio},
      {"rip_max_ratio", rip.max_ratio},
      {"rip_samples", rip.samples},
      {"rip_below_threshold", rip.below_threshold},
      {"sample_size_bound", sample_size_bound(a.sparsity, spec.dim(), a.c0)}};
  std::cout << j.dump(2) << "\n";
  return kExitOk;
}

int run_gates() {
  for (const auto& key : registry_keys()) {
    const GateSpec g = resolve_gate(key);
    std::printf("%-18s %zu qubits  %s\n", key.c_str(), g.n_qubits,
                g.description.c_str());
  }
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Compressed-sensing and least-squares quantum process tomography"};
  app.require_subcommand(1);

  SimulateArgs sim;
  auto* simulate = app.add_subcommand("simulate", "Emit a simulated data vector");
  simulate->add_option("--gate", sim.gate, "Registry key");
  simulate->add_option("--noise-sigma", sim.sigma, "Gaussian noise per component")
      ->check(CLI::NonNegativeNumber);
  simulate->add_option("--seed", sim.seed, "Noise and subsample seed");
  simulate->add_option("--m", sim.m, "Keep a random subset of m rows");
  simulate->add_option("--out", sim.out, "Output file (default stdout)");
  simulate->add_option("--spec-out", sim.spec_out, "Also write the protocol JSON");

  ReconstructArgs rec;
  auto* reconstruct =
      app.add_subcommand("reconstruct", "Solve for chi from a data vector");
  reconstruct->add_option("--data", rec.data_path, "Data vector JSON")->required();
  reconstruct->add_option("--spec", rec.spec_path, "Protocol JSON (default: standard)");
  reconstruct->add_option("--gate", rec.gate, "Target gate (PEB basis, fidelity)");
  reconstruct->add_option("--method", rec.method, "LS or CS");
  reconstruct->add_option("--basis", rec.basis, "PB or PEB");
  reconstruct->add_option("--epsilon", rec.epsilon, "Noise bound for CS");
  reconstruct->add_option("--history", rec.history, "Record residuals every k iterations");
  reconstruct->add_option("--out", rec.out, "Output file (default stdout)");

  SweepArgs sw;
  auto* sweep = app.add_subcommand("sweep", "Fidelity against number of data points");
  sweep->add_option("--config", sw.config, "Sweep plan JSON");
  sweep->add_option("--gate", sw.gate, "Registry key");
  sweep->add_option("--method", sw.method, "LS or CS");
  sweep->add_option("--basis", sw.basis, "PB or PEB");
  sweep->add_option("--m-grid", sw.grid, "8,16,24 or start:stop:step");
  sweep->add_option("--trials", sw.trials, "Trials per grid point");
  sweep->add_option("--noise-sigma", sw.sigma, "Gaussian noise per component");
  sweep->add_option("--epsilon", sw.epsilon, "CS bound: a number, or 'oracle'");
  sweep->add_option("--seed", sw.seed, "Master seed");
  sweep->add_option("--workers", sw.workers, "Worker threads (0: all cores)");
  sweep->add_flag("--compare", sw.compare, "Run CS-PEB, CS-PB, LS-PEB, LS-PB");
  sweep->add_option("--calibrate", sw.calibrate,
                    "Choose the noise so full-data LS-PB reaches this fidelity");
  sweep->add_option("--out", sw.out, "Output file (default stdout)");
  sweep->add_option("--format", sw.format, "csv or json");

  DiagnoseArgs diag;
  auto* diagnose = app.add_subcommand("diagnose", "Sampled RIP constant and sample bound");
  diagnose->add_option("--gate", diag.gate, "Registry key");
  diagnose->add_option("--basis", diag.basis, "PB or PEB");
  diagnose->add_option("--m", diag.m, "Random subset of m rows (default: all)");
  diagnose->add_option("--sparsity", diag.sparsity, "s");
  diagnose->add_option("--trials", diag.trials, "Sampled vector pairs");
  diagnose->add_option("--seed", diag.seed, "Seed");
  diagnose->add_flag("--normalize", diag.normalize, "Unit-norm Phi columns first");
  diagnose->add_option("--c0", diag.c0, "Constant of the sample-size bound");

  auto* gates = app.add_subcommand("gates", "List the gate registry");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitUsage;
  }

  try {
    if (simulate->parsed()) return run_simulate(sim);
    if (reconstruct->parsed()) return run_reconstruct(rec);
    if (sweep->parsed()) return run_sweep_command(sw, *sweep);
    if (diagnose->parsed()) return run_diagnose(diag);
    if (gates->parsed()) return run_gates();
  } catch (const Error& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    switch (e.code()) {
      case ErrorCode::Infeasible:
      case ErrorCode::FactorizationFailure:
        return kExitSolver;
      default:
        return kExitUsage;
    }
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return kExitUsage;
  }
  return kExitUsage;
}
