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
#include <numbers>

#include <Eigen/Eigenvalues>
#include <catch_amalgamated.hpp>

#include "csqpt/error.hpp"
#include "csqpt/solver.hpp"
#include "test_util.hpp"

using namespace csqpt;
using Catch::Matchers::WithinAbs;
using Catch::Matchers::WithinRel;

namespace {

// Frozen optima from tests/oracles/one_qubit_programs.py (cvxpy; SCS and
// CLARABEL agree to ~1e-9).
constexpr double kOracleEpsilon = 0.037148874003;
constexpr double kOracleLsResidual = 0.033393577212;
constexpr double kOracleCsL1 = 1.491691071893;

struct Problem {
  DataVector data;
  CoefficientMatrix phi;
};

// Same setup as the oracle script: four inputs, three rotations, two readout
// elements, amplitude damping then Rx(0.2), every row with i % 3 != 1 kept.
Problem one_qubit_problem() {
  const double s = 1.0 / std::sqrt(2.0);
  ComplexVector kets[4] = {ComplexVector(2), ComplexVector(2), ComplexVector(2),
                           ComplexVector(2)};
  kets[0] << 1.0, 0.0;
  kets[1] << 0.0, 1.0;
  kets[2] << s, s;
  kets[3] << s, Complex(0.0, s);
  TomographySpec spec;
  spec.n_qubits = 1;
  for (const auto& k : kets) spec.input_states.push_back(k * k.adjoint());
  spec.rotations = {ComplexMatrix::Identity(2, 2), rotation_x(std::numbers::pi / 2),
                    rotation_y(std::numbers::pi / 2)};
  spec.readout = {ReadoutElement{0, 0}, ReadoutElement{0, 1}};

  const double gamma = 0.3;
  ComplexMatrix a0 = ComplexMatrix::Zero(2, 2), a1 = ComplexMatrix::Zero(2, 2);
  a0(0, 0) = 1.0;
  a0(1, 1) = std::sqrt(1.0 - gamma);
  a1(0, 1) = std::sqrt(gamma);
  const ComplexMatrix u = rotation_x(0.2);
  const ComplexMatrix kraus[] = {u * a0, u * a1};

  const BasisPtr pb = share(pauli_basis(1));
  const DataVector full =
      simulate_dataset(chi_from_kraus(kraus, pb), spec, NoiseModel::none());
  const CoefficientMatrix phi = build_phi(spec, pb);

  std::vector<std::size_t> keep;
  for (std::size_t i = 0; i < full.size(); ++i) {
    if (i % 3 != 1) keep.push_back(i);
  }
  auto [data, sub] = subsample(full, phi, keep);
  ComplexVector z(static_cast<Eigen::Index>(keep.size()));
  for (std::size_t j = 0; j < keep.size(); ++j) {
    const double i = static_cast<double>(keep[j]);
    z(j) = 0.01 * Complex(std::cos(i), std::sin(2.0 * i));
  }
  data.values += z;
  data.noise = z;
  data.epsilon = z.norm();
  return {std::move(data), std::move(sub)};
}

double l1(const ProcessMatrix& chi) { return chi.chi().cwiseAbs().sum(); }

void check_feasible(const SolveReport& rep) {
  const ValidityReport v = is_valid_process(rep.chi);
  CHECK(v.min_eigenvalue >= -1e-8);
  CHECK(v.tp_residual <= 1e-6);
  CHECK(v.hermiticity_residual <= 1e-12);
  CHECK(rep.psd_violation <= 1e-8);
  CHECK(rep.tp_violation <= 1e-6);
  if (rep.method == Method::CompressedSensing) {
    CHECK(rep.data_residual <= rep.epsilon + 1e-6);
  }
}

ComplexMatrix random_hermitian(Eigen::Index n, std::mt19937_64& rng) {
  const ComplexMatrix g = testing::gaussian_matrix(n, n, rng);
  return (g + g.adjoint()) / 2.0;
}

}  // namespace

TEST_CASE("complex soft threshold") {
  const double theta = 0.7;
  const Complex z = std::polar(3.0, theta);
  const Complex out = prox::soft_threshold(z, 1.0);
  CHECK_THAT(std::abs(out), WithinAbs(2.0, 1e-15));
  CHECK_THAT(std::arg(out), WithinAbs(theta, 1e-15));
  CHECK(prox::soft_threshold(Complex(0.3, 0.4), 0.5) == Complex(0.0, 0.0));
  CHECK(prox::soft_threshold(Complex(0.0, 0.0), 0.5) == Complex(0.0, 0.0));
}

TEST_CASE("Hermitian coordinates are an isometry") {
  std::mt19937_64 rng(1);
  const HermitianCoordinates coords(6);
  CHECK(coords.size() == 36);
  CHECK(coords.pair_count() == 15);
  for (int i = 0; i < 10; ++i) {
    const ComplexMatrix h = random_hermitian(6, rng);
    const Eigen::VectorXd theta = coords.to_coordinates(h);
    CHECK_THAT(theta.norm(), WithinAbs(h.norm(), 1e-12));
    CHECK(approx_equal(coords.to_matrix(theta), h, 1e-14));
  }
  // real_operator reproduces phi * vec(H) split into real and imaginary parts.
  const ComplexMatrix phi = testing::gaussian_matrix(5, 36, rng);
  const Eigen::MatrixXd re = coords.real_operator(phi);
  REQUIRE(re.rows() == 10);
  const ComplexMatrix h = random_hermitian(6, rng);
  const ComplexVector y = phi * h.reshaped();
  const Eigen::VectorXd yr = re * coords.to_coordinates(h);
  CHECK((yr.head(5) - y.real()).cwiseAbs().maxCoeff() <= 1e-12);
  CHECK((yr.tail(5) - y.imag()).cwiseAbs().maxCoeff() <= 1e-12);
}

TEST_CASE("l1 prox is entrywise soft thresholding of chi") {
  std::mt19937_64 rng(2);
  const HermitianCoordinates coords(4);
  const ComplexMatrix h = random_hermitian(4, rng);
  Eigen::VectorXd theta = coords.to_coordinates(h);
  prox::l1_prox(theta, 0.4, coords);
  ComplexMatrix expected = h;
  for (Eigen::Index i = 0; i < 4; ++i) {
    for (Eigen::Index j = 0; j < 4; ++j) {
      expected(i, j) = prox::soft_threshold(h(i, j), 0.4);
    }
  }
  CHECK(approx_equal(coords.to_matrix(theta), expected, 1e-14));
}

TEST_CASE("PSD projection") {
  ComplexMatrix m = ComplexMatrix::Zero(2, 2);
  m(0, 0) = 1.0;
  m(1, 1) = -1.0;
  ComplexMatrix expected = ComplexMatrix::Zero(2, 2);
  expected(0, 0) = 1.0;
  CHECK(approx_equal(prox::project_psd(m), expected, 1e-15));

  std::mt19937_64 rng(3);
  for (int i = 0; i < 20; ++i) {
    const ComplexMatrix a = random_hermitian(8, rng);
    const ComplexMatrix b = random_hermitian(8, rng);
    const ComplexMatrix pa = prox::project_psd(a);
    const ComplexMatrix pb = prox::project_psd(b);
    CHECK((prox::project_psd(pa) - pa).norm() <= 1e-10);
    CHECK((pa - pb).norm() <= (a - b).norm() + 1e-12);
    CHECK(Eigen::SelfAdjointEigenSolver<ComplexMatrix>(pa).eigenvalues().minCoeff() >=
          -1e-12);
  }
}

TEST_CASE("ball projection") {
  std::mt19937_64 rng(4);
  std::normal_distribution<double> g;
  const auto rand_vec = [&](Eigen::Index n) {
    Eigen::VectorXd v(n);
    for (auto& x : v) x = g(rng);
    return v;
  };
  const Eigen::VectorXd c = rand_vec(6);
  const Eigen::VectorXd inside = c + 0.1 * rand_vec(6).normalized();
  CHECK((prox::project_ball(inside, c, 0.5) - inside).norm() == 0.0);
  for (int i = 0; i < 20; ++i) {
    const Eigen::VectorXd a = c + 3.0 * rand_vec(6);
    const Eigen::VectorXd b = c + 3.0 * rand_vec(6);
    const Eigen::VectorXd pa = prox::project_ball(a, c, 0.7);
    const Eigen::VectorXd pb = prox::project_ball(b, c, 0.7);
    CHECK((pa - c).norm() <= 0.7 + 1e-12);
    CHECK((prox::project_ball(pa, c, 0.7) - pa).norm() <= 1e-10);
    CHECK((pa - pb).norm() <= (a - b).norm() + 1e-12);
  }
  // Zero radius collapses onto the center.
  CHECK((prox::project_ball(c + rand_vec(6), c, 0.0) - c).norm() == 0.0);
}

TEST_CASE("TP projection") {
  const BasisPtr pb = share(pauli_basis(2));
  const prox::TpProjector tp(*pb);
  const ProcessMatrix cnot = chi_from_unitary(gate_cnot(), pb);
  CHECK(approx_equal(tp.project(cnot.chi()), cnot.chi(), 1e-12));

  std::mt19937_64 rng(5);
  for (int i = 0; i < 10; ++i) {
    const ComplexMatrix a = random_hermitian(16, rng);
    const ComplexMatrix b = random_hermitian(16, rng);
    const ComplexMatrix pa = tp.project(a);
    const ComplexMatrix pbm = tp.project(b);
    CHECK(tp_residual(ProcessMatrix(pb, pa)) <= 1e-10);
    CHECK((tp.project(pa) - pa).norm() <= 1e-10);
    CHECK((pa - pbm).norm() <= (a - b).norm() + 1e-12);
    // Orthogonality: the correction is normal to the feasible set.
    CHECK(std::abs(((a - pa).adjoint() * (cnot.chi() - pa)).trace()) <= 1e-9);
  }

  // Non-unital TP process in the error basis is also a fixed point.
  const BasisPtr peb = share(pauli_error_basis(gate_cnot(), 2));
  const prox::TpProjector tp_peb(*peb);
  const auto kraus = testing::random_kraus(4, 3, rng);
  const ProcessMatrix chi = chi_from_kraus(kraus, peb);
  CHECK(approx_equal(tp_peb.project(chi.chi()), chi.chi(), 1e-12));
}

TEST_CASE("one-qubit programs match the convex-solver oracle") {
  const Problem p = one_qubit_problem();
  REQUIRE(p.data.size() == 16);
  CHECK_THAT(p.data.epsilon, WithinRel(kOracleEpsilon, 1e-9));

  const SolveReport ls = ls_qpt(p.data, p.phi);
  CHECK(ls.converged);
  CHECK_THAT(ls.data_residual, WithinRel(kOracleLsResidual, 1e-3));
  check_feasible(ls);

  const SolveReport cs = cs_qpt(p.data, p.phi, p.data.epsilon);
  CHECK(cs.converged);
  CHECK(cs.method == Method::CompressedSensing);
  CHECK_THAT(cs.l1_value, WithinRel(kOracleCsL1, 1e-3));
  CHECK_THAT(l1(cs.chi), WithinRel(kOracleCsL1, 1e-3));
  check_feasible(cs);
  CHECK(cs.l1_value <= l1(ls.chi) + 1e-6);
}

TEST_CASE("LS recovers the completely depolarizing channel") {
  const TomographySpec spec = standard_spec(2);
  const BasisPtr pb = share(pauli_basis(2));
  const ProcessMatrix dep(pb, ComplexMatrix::Identity(16, 16) / 16.0);
  REQUIRE(tp_residual(dep) <= 1e-14);
  const DataVector data = simulate_dataset(dep, spec, NoiseModel::none());
  const SolveReport rep = ls_qpt(data, build_phi(spec, pb));
  CHECK(rep.converged);
  CHECK(testing::max_abs(rep.chi.chi() - dep.chi()) <= 1e-3);
}

TEST_CASE("LS on full noiseless data recovers unitaries and random channels") {
  std::mt19937_64 rng(6);
  const TomographySpec spec = standard_spec(2);
  const BasisPtr pb = share(pauli_basis(2));
  const CoefficientMatrix phi = build_phi(spec, pb);

  const DataVector cnot = simulate_dataset(gate_cnot(), spec, NoiseModel::none());
  const SolveReport rep = ls_qpt(cnot, phi);
  CHECK(rep.converged);
  CHECK(fidelity(rep.chi, chi_from_unitary(gate_cnot(), pb)) >= 0.999);
  check_feasible(rep);

  for (int i = 0; i < 5; ++i) {
    const ProcessMatrix truth =
        chi_from_kraus(testing::random_kraus(4, 1 + i, rng), pb);
    const SolveReport r = ls_qpt(simulate_dataset(truth, spec, NoiseModel::none()), phi);
    CHECK(fidelity(r.chi, truth) >= 0.999);
    check_feasible(r);
  }
}

TEST_CASE("full data in the error basis gives a single dominant entry") {
  const TomographySpec spec = standard_spec(2);
  for (const ComplexMatrix& u :
       {gate_cnot(), gate_controlled_rx(std::numbers::pi),
        gate_jcoupling(0, 1, 47.5, 1.0 / 95.0, 2)}) {
    const BasisPtr peb = share(pauli_error_basis(u, 2));
    const DataVector data = simulate_dataset(u, spec, NoiseModel::none());
    const SolveReport rep = cs_qpt(data, build_phi(spec, peb), 0.0);
    CHECK(sparsity(rep.chi, 1e-4) == 1);
    CHECK(std::abs(rep.chi.chi()(0, 0)) >= 0.999);
    check_feasible(rep);
  }
}

TEST_CASE("CS in the error basis recovers CNOT from 44 data points") {
  const TomographySpec spec = standard_spec(2);
  const BasisPtr peb = share(pauli_error_basis(gate_cnot(), 2));
  const CoefficientMatrix phi = build_phi(spec, peb);
  const ProcessMatrix ideal = chi_from_unitary(gate_cnot(), peb);
  const DataVector data = simulate_dataset(gate_cnot(), spec, NoiseModel::none());
  int good = 0;
  for (std::uint64_t t = 0; t < 50; ++t) {
    const auto [sub, sub_phi] = subsample(data, phi, 44, 1000 + t);
    const SolveReport rep = cs_qpt(sub, sub_phi, 1e-8);
    if (rep.converged) check_feasible(rep);
    if (fidelity(rep.chi, ideal) >= 0.99) ++good;
  }
  CHECK(good >= 45);
}

TEST_CASE("CS objective is no worse than LS on the same feasible data") {
  const TomographySpec spec = standard_spec(2);
  const BasisPtr pb = share(pauli_basis(2));
  const CoefficientMatrix phi = build_phi(spec, pb);
  const DataVector full =
      simulate_dataset(gate_controlled_rx(1.0), spec, NoiseModel::gaussian(0.01, 8));
  const auto [data, sub] = subsample(full, phi, 120, 4);
  const SolveReport ls = ls_qpt(data, sub);
  const SolveReport cs = cs_qpt(data, sub, data.epsilon);
  // The generator is feasible, so the LS optimum is too.
  REQUIRE(ls.data_residual <= data.epsilon + 1e-6);
  CHECK(cs.converged);
  CHECK(cs.l1_value <= ls.l1_value + 1e-6);
  check_feasible(cs);
}

TEST_CASE("degenerate and invalid inputs") {
  const TomographySpec spec = standard_spec(2);
  const BasisPtr pb = share(pauli_basis(2));
  const CoefficientMatrix phi = build_phi(spec, pb);

  DataVector empty;
  empty.values.resize(0);
  const CoefficientMatrix none = phi.select(std::span<const std::size_t>{});
  const SolveReport rep = ls_qpt(empty, none);
  CHECK_FALSE(rep.converged);
  CHECK(rep.underdetermined);
  CHECK(approx_equal(rep.chi.chi(), ComplexMatrix::Identity(16, 16) / 16.0, 1e-15));
  CHECK_FALSE(cs_qpt(empty, none, 0.1).converged);

  const DataVector noisy =
      simulate_dataset(gate_cnot(), spec, NoiseModel::gaussian(0.05, 2));
  try {
    (void)cs_qpt(noisy, phi, 1e-4);
    FAIL("expected Infeasible");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::Infeasible);
  }
  CHECK_THROWS_AS(cs_qpt(noisy, phi, -1.0), Error);

  const auto [small, small_phi] = subsample(noisy, phi, 10, 1);
  CHECK_THROWS_AS(ls_qpt(noisy, small_phi), Error);
  CHECK(ls_qpt(small, small_phi).underdetermined);

  CHECK(method_from_string("cs") == Method::CompressedSensing);
  CHECK(to_string(Method::LeastSquares) == "LS");
  CHECK_THROWS_AS(method_from_string("ml"), Error);
}

TEST_CASE("residual history") {
  const TomographySpec spec = standard_spec(2);
  const BasisPtr peb = share(pauli_error_basis(gate_cnot(), 2));
  const DataVector data = simulate_dataset(gate_cnot(), spec, NoiseModel::none());
  SolverOptions opts;
  opts.history_stride = 20;
  const auto [sub, phi] = subsample(data, build_phi(spec, peb), 60, 3);
  const SolveReport rep = cs_qpt(sub, phi, 1e-8, opts);
  REQUIRE_FALSE(rep.history.empty());
  for (std::size_t i = 1; i < rep.history.size(); ++i) {
    CHECK(rep.history[i].iteration > rep.history[i - 1].iteration);
    CHECK(rep.history[i].rho > 0.0);
  }
  CHECK(rep.history.back().iteration <= rep.iterations);

  opts.history_stride = 0;
  CHECK(cs_qpt(sub, phi, 1e-8, opts).history.empty());
}

TEST_CASE("solves are deterministic") {
  const TomographySpec spec = standard_spec(2);
  const BasisPtr pb = share(pauli_basis(2));
  const DataVector full =
      simulate_dataset(gate_cnot(), spec, NoiseModel::gaussian(0.02, 5));
  const auto [data, phi] = subsample(full, build_phi(spec, pb), 100, 5);
  const SolveReport a = cs_qpt(data, phi, data.epsilon);
  const SolveReport b = cs_qpt(data, phi, data.epsilon);
  CHECK(a.iterations == b.iterations);
  CHECK(approx_equal(a.chi.chi(), b.chi.chi(), 0.0));
}

TEST_CASE("RIP estimates") {
  const ComplexMatrix id = ComplexMatrix::Identity(64, 64);
  for (std::size_t s : {1, 4, 16}) {
    CHECK_THAT(rip_estimate(id, s, 200, 1).delta, WithinAbs(0.0, 1e-12));
  }
  const RipEstimate twice = rip_estimate(2.0 * id, 3, 100, 1);
  CHECK_THAT(twice.delta, WithinAbs(3.0, 1e-12));
  CHECK_THAT(twice.min_ratio, WithinAbs(4.0, 1e-12));
  CHECK_FALSE(twice.below_threshold);

  const CoefficientMatrix phi = build_phi(standard_spec(2), share(pauli_basis(2)));
  const RipEstimate a = rip_estimate(phi.phi, 16, 2000, 9, true);
  const RipEstimate b = rip_estimate(phi.phi, 16, 2000, 9, true);
  CHECK(a.delta == b.delta);
  CHECK(a.samples == 2000);
  CHECK(a.min_ratio <= a.max_ratio);
  CHECK(a.below_threshold == (a.delta < kRipThreshold));

  CHECK_THROWS_AS(rip_estimate(id, 0, 10, 1), Error);
  CHECK_THROWS_AS(rip_estimate(id, 65, 10, 1), Error);
  CHECK_THROWS_AS(rip_estimate(id, 1, 0, 1), Error);
}

TEST_CASE("sample size bound") {
  CHECK(sample_size_bound(1, 4, 1.0) == 6);
  CHECK(sample_size_bound(256, 4, 1.0) == 0);
  CHECK(sample_size_bound(16, 4, 1.0) == 45);
  CHECK(sample_size_bound(1, 8, 2.0) == 17);
  CHECK_THROWS_AS(sample_size_bound(0, 4, 1.0), Error);
  CHECK_THROWS_AS(sample_size_bound(257, 4, 1.0), Error);
  CHECK_THROWS_AS(sample_size_bound(1, 4, 0.0), Error);
}
