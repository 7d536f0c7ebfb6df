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


#include <cmath>
#include <filesystem>
#include <fstream>
#include <numbers>
#include <sstream>

#include <catch_amalgamated.hpp>

#include "csqpt/error.hpp"
#include "csqpt/harness.hpp"
#include "csqpt/serialization.hpp"

using namespace csqpt;
using Catch::Matchers::WithinAbs;

namespace {

SweepRecord record_at(std::size_t m, double mean) {
  SweepRecord r;
  r.gate = "cnot";
  r.m_data = m;
  r.mean_fidelity = mean;
  r.trials = 2;
  r.fidelities = {mean, mean};
  return r;
}

std::string slurp(const std::filesystem::path& p) {
  std::ifstream in(p);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

SweepPlan noiseless_plan(std::vector<std::size_t> grid, std::size_t trials) {
  SweepPlan plan;
  plan.gate = "cnot";
  plan.m_grid = std::move(grid);
  plan.trials = trials;
  plan.epsilon = EpsilonPolicy{EpsilonPolicy::Kind::Fixed, 1e-8};
  plan.seed = 42;
  return plan;
}

}  // namespace

TEST_CASE("threshold_m") {
  CHECK(threshold_m({record_at(10, 0.5), record_at(20, 0.95)}) == 20u);
  CHECK_FALSE(threshold_m({record_at(10, 0.5), record_at(20, 0.85)}).has_value());
  CHECK(threshold_m({record_at(10, 0.91)}, 0.9) == 10u);
  // Strictly greater than the level.
  CHECK_FALSE(threshold_m({record_at(10, 0.9)}, 0.9).has_value());
  CHECK_THROWS_AS(threshold_m({}), Error);
}

TEST_CASE("gate registry") {
  const GateSpec cnot = resolve_gate("cnot");
  CHECK(cnot.n_qubits == 2);
  CHECK(approx_equal(cnot.ideal, gate_cnot(), 0.0));
  CHECK_FALSE(cnot.evolution.has_value());

  CHECK(approx_equal(resolve_gate("crx(pi)").ideal,
                     gate_controlled_rx(std::numbers::pi), 1e-15));
  CHECK(approx_equal(resolve_gate("crx(-pi/4)").ideal,
                     gate_controlled_rx(-std::numbers::pi / 4), 1e-15));
  CHECK(approx_equal(resolve_gate("crx(0.3)").ideal, gate_controlled_rx(0.3),
                     1e-15));
  CHECK(resolve_gate("cnn").n_qubits == 3);

  const GateSpec uj23 = resolve_gate("uj23");
  REQUIRE(uj23.evolution.has_value());
  REQUIRE(uj23.pair.has_value());
  CHECK(uj23.pair->first == 1);
  CHECK(uj23.pair->second == 2);
  CHECK(uj23.n_qubits == 2);
  CHECK(approx_equal(*uj23.evolution, *resolve_gate("refocused(2,3,1)").evolution,
                     0.0));
  const double j = default_three_spin_hamiltonian().coupling(1, 2);
  CHECK(approx_equal(uj23.ideal, gate_jcoupling(0, 1, j, 1.0 / (2 * std::abs(j)), 2),
                     1e-14));

  for (const auto& key : registry_keys()) CHECK_NOTHROW(resolve_gate(key));
  for (const char* bad : {"toffoli", "crx()", "crx(pi", "refocused(1,1,2)",
                          "refocused(1,2,4)", "uj21"}) {
    try {
      (void)resolve_gate(bad);
      FAIL("accepted " << bad);
    } catch (const Error& e) {
      CHECK(e.code() == ErrorCode::UnknownGate);
    }
  }
}

TEST_CASE("PEB sparsity for every registry gate") {
  for (const auto& key : registry_keys()) {
    const GateSpec g = resolve_gate(key);
    const ProcessMatrix chi =
        chi_from_unitary(g.ideal, share(pauli_error_basis(g.ideal, g.n_qubits)));
    CHECK(sparsity(chi) == 1);
  }
}

TEST_CASE("plan validation") {
  SweepPlan plan = noiseless_plan({44}, 5);
  CHECK_NOTHROW(plan.validate());
  plan.trials = 1;
  CHECK_THROWS_AS(plan.validate(), Error);
  plan.trials = 5;
  plan.m_grid = {257};
  CHECK_THROWS_AS(plan.validate(), Error);
  plan.m_grid = {0};
  CHECK_THROWS_AS(plan.validate(), Error);
  plan.m_grid = {44};
  plan.noise_sigma = -1.0;
  CHECK_THROWS_AS(plan.validate(), Error);
}

TEST_CASE("default m grids") {
  const auto two = default_m_grid(2);
  CHECK(two.front() == 8);
  CHECK(two[1] == 16);
  CHECK(two.back() == 256);
  const auto three = default_m_grid(3);
  CHECK(three.front() == 16);
  CHECK(three[1] == 32);
  CHECK(three.back() == 5376);
}

TEST_CASE("epsilon policy") {
  DataVector d;
  d.epsilon = 0.25;
  CHECK(EpsilonPolicy{}.resolve(d) == 0.25);
  CHECK(EpsilonPolicy{EpsilonPolicy::Kind::NoiseNorm, 1.5}.resolve(d) == 0.375);
  CHECK(EpsilonPolicy{EpsilonPolicy::Kind::Fixed, 0.01}.resolve(d) == 0.01);
}

TEST_CASE("CSV export") {
  SweepRecord r = record_at(44, 0.98);
  r.sigma = 0.0125;
  r.seed = 7;
  r.failures = 1;
  const std::string csv = records_to_csv({r});
  CHECK(csv ==
        "gate,method,basis,m_data,mean_fidelity,sigma,trials,failures,seed\n"
        "cnot,CS,PEB,44,0.9800000000,0.0125000000,2,1,7\n");

  r.gate = "refocused(1,2,3)";
  CHECK(records_to_csv({r}).find("\"refocused(1,2,3)\",CS") != std::string::npos);

  const auto dir = std::filesystem::temp_directory_path() / "csqpt_harness_test";
  std::filesystem::create_directories(dir);
  export_results({r}, (dir / "out.csv").string(), ExportFormat::Csv);
  CHECK(slurp(dir / "out.csv") == records_to_csv({r}));
  CHECK_THROWS_AS(export_results({r}, (dir / "missing" / "x.csv").string(),
                                 ExportFormat::Csv),
                  Error);
  CHECK(export_format_from_string("json") == ExportFormat::Json);
  CHECK_THROWS_AS(export_format_from_string("xml"), Error);
}

TEST_CASE("JSON round trip") {
  SweepRecord a = record_at(44, 0.97);
  a.method = Method::LeastSquares;
  a.basis = BasisKind::Pauli;
  a.fidelities = {0.96, 0.98};
  a.sigma = std::sqrt(2.0) * 0.01;
  a.wall_time_s = 1.25;
  SweepRecord b = record_at(256, 0.999);
  b.failures = 1;
  const std::vector<SweepRecord> records = {a, b};

  const auto dir = std::filesystem::temp_directory_path() / "csqpt_harness_test";
  std::filesystem::create_directories(dir);
  const std::string path = (dir / "out.json").string();
  export_results(records, path, ExportFormat::Json);
  CHECK(records_from_json(read_json_file(path)) == records);

  SweepPlan plan = noiseless_plan({8, 16}, 3);
  plan.noise_sigma = 0.01;
  plan.basis = BasisKind::Pauli;
  plan.solver.max_iterations = 123;
  const SweepPlan back = plan_from_json(plan_to_json(plan));
  CHECK(back.gate == plan.gate);
  CHECK(back.m_grid == plan.m_grid);
  CHECK(back.trials == 3);
  CHECK(back.noise_sigma == 0.01);
  CHECK(back.basis == BasisKind::Pauli);
  CHECK(back.epsilon.kind == EpsilonPolicy::Kind::Fixed);
  CHECK(back.solver.max_iterations == 123);
  CHECK_THROWS_AS(plan_from_json(Json::parse(R"({"trials": "many"})")), Error);
}

TEST_CASE("sweeps are deterministic and report N - 1 sigma") {
  SweepPlan plan = noiseless_plan({24, 64}, 4);
  plan.noise_sigma = 0.02;
  plan.epsilon = EpsilonPolicy{};
  plan.workers = 2;
  const auto a = run_sweep(plan);
  plan.workers = 1;
  const auto b = run_sweep(plan);
  CHECK(records_to_csv(a) == records_to_csv(b));
  REQUIRE(a.size() == 2);
  for (std::size_t i = 0; i < a.size(); ++i) {
    CHECK(a[i].fidelities == b[i].fidelities);
    REQUIRE(a[i].fidelities.size() == 4);
    CHECK(a[i].trials == 4);
    double mean = 0.0;
    for (double f : a[i].fidelities) mean += f / 4.0;
    double sq = 0.0;
    for (double f : a[i].fidelities) sq += (f - mean) * (f - mean);
    CHECK_THAT(a[i].mean_fidelity, WithinAbs(mean, 1e-15));
    CHECK_THAT(a[i].sigma, WithinAbs(std::sqrt(sq / 3.0), 1e-15));
    CHECK(a[i].sigma > 0.0);
  }
  plan.seed = 43;
  CHECK(records_to_csv(run_sweep(plan)) != records_to_csv(a));
}

TEST_CASE("sigma vanishes when every trial agrees") {
  // Full data, no noise: every trial sees the same rows.
  SweepPlan plan = noiseless_plan({256}, 3);
  plan.method = Method::LeastSquares;
  const auto recs = run_sweep(plan);
  REQUIRE(recs.size() == 1);
  CHECK(recs[0].sigma == 0.0);
  CHECK(recs[0].mean_fidelity >= 0.999);
}

TEST_CASE("compared methods share trials") {
  SweepPlan plan = noiseless_plan({64, 256}, 3);
  plan.noise_sigma = 0.03;
  plan.epsilon = EpsilonPolicy{};
  const auto all = compare_methods(plan);
  REQUIRE(all.size() == 8);
  const auto ls_peb = select_records(all, Method::LeastSquares, BasisKind::PauliError);
  const auto ls_pb = select_records(all, Method::LeastSquares, BasisKind::Pauli);
  REQUIRE(ls_peb.size() == 2);
  // LS does not depend on the basis, so identical data give identical
  // fidelities trial by trial.
  for (std::size_t i = 0; i < 2; ++i) {
    for (std::size_t t = 0; t < 3; ++t) {
      CHECK_THAT(ls_peb[i].fidelities[t], WithinAbs(ls_pb[i].fidelities[t], 1e-4));
    }
  }
  CHECK(all[0].method == Method::CompressedSensing);
  CHECK(all[0].basis == BasisKind::PauliError);
  CHECK(all[7].method == Method::LeastSquares);
  CHECK(all[7].basis == BasisKind::Pauli);
}

TEST_CASE("noiseless CNOT sweeps") {
  SweepPlan plan = noiseless_plan({44, 256}, 10);
  const auto cs = run_sweep(plan);
  REQUIRE(cs.size() == 2);
  CHECK(cs[1].mean_fidelity >= cs[0].mean_fidelity - 0.02);
  CHECK(cs[1].mean_fidelity >= 0.999);

  SweepPlan grid = noiseless_plan({8, 16, 24, 32, 40, 48}, 10);
  const auto th = threshold_m(run_sweep(grid));
  REQUIRE(th.has_value());
  CHECK(*th <= 44);
}

TEST_CASE("noiseless trend is monotone and LS ignores the basis") {
  SweepPlan plan = noiseless_plan({32, 64, 128, 256}, 10);
  const auto all = compare_methods(plan);
  for (const auto& v : kComparedMethods) {
    const auto recs = select_records(all, v.method, v.basis);
    REQUIRE(recs.size() == 4);
    for (std::size_t i = 1; i < recs.size(); ++i) {
      CHECK(recs[i].mean_fidelity >= recs[i - 1].mean_fidelity - 0.02);
    }
    CHECK(recs.back().mean_fidelity >= 0.999);
  }
  const auto a = select_records(all, Method::LeastSquares, BasisKind::PauliError);
  const auto b = select_records(all, Method::LeastSquares, BasisKind::Pauli);
  for (std::size_t i = 0; i < a.size(); ++i) {
    CHECK_THAT(a[i].mean_fidelity, WithinAbs(b[i].mean_fidelity, 0.02));
  }
}

TEST_CASE("noise calibration lands near the target") {
  const NoiseCalibration cal = calibrate_noise("cnot", 0.98, 3);
  CHECK(cal.sigma > 0.0);
  CHECK_THAT(cal.fidelity, WithinAbs(0.98, 0.003));
  CHECK(cal.rounds >= 1);
}
