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

// Least-squares and compressed-sensing reconstruction of chi.
//
// Both programs are solved by ADMM on a real parametrization of Hermitian
// chi. The splitting keeps one copy per constraint:
//
//   x            affine trace-preservation set (enforced in the x-update)
//   z_psd = x    PSD cone
//   z_l1  = x    l1 objective (compressed sensing only)
//   z_dat = D x  data term: l2 ball of radius eps (CS) or 1/2 ||. - b||^2 (LS)
//
// D is the real form of Phi, rescaled to unit spectral norm and, when it has
// more rows than columns, compressed to a square factor with the same Gram
// matrix.

#include <chrono>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "csqpt/simulator.hpp"

namespace csqpt {

struct SolverOptions {
  std::size_t max_iterations = 10000;
  double rho = 1.0;
  bool adaptive_rho = true;
  double abs_tol = 1e-7;
  double rel_tol = 1e-7;
  double relaxation = 1.6;
  double psd_tol = kPsdTolerance;
  double tp_tol = kTpTolerance;
  /// Extra slack on ||B - Phi chi|| <= eps accepted at convergence.
  double data_tol = 1e-6;
  /// Residuals are evaluated every `check_interval` iterations.
  std::size_t check_interval = 10;
  /// Record residuals every k iterations; 0 disables the history.
  std::size_t history_stride = 0;
};

struct ResidualSample {
  std::size_t iteration = 0;
  double primal = 0.0;
  double dual = 0.0;
  double rho = 0.0;
};

enum class Method { LeastSquares, CompressedSensing };

std::string to_string(Method method);
Method method_from_string(const std::string& name);

struct SolveReport {
  explicit SolveReport(ProcessMatrix estimate) : chi(std::move(estimate)) {}

  ProcessMatrix chi;
  Method method = Method::LeastSquares;
  std::size_t iterations = 0;
  double data_residual = 0.0;  // ||B - Phi vec(chi)||_2
  double psd_violation = 0.0;  // max(0, -lambda_min)
  double tp_violation = 0.0;   // tp_residual(chi)
  double l1_value = 0.0;       // sum |chi_mn|
  double epsilon = 0.0;        // CS only
  bool converged = false;
  /// Fewer independent data constraints than free parameters.
  bool underdetermined = false;
  double wall_time_s = 0.0;
  std::vector<ResidualSample> history;
};

/// min ||B - Phi vec(chi)||_2  s.t. chi >= 0, trace preserving.
/// With no data rows the maximally mixing channel I/d^2 is returned,
/// flagged as not converged.
SolveReport ls_qpt(const DataVector& data, const CoefficientMatrix& phi,
                   const SolverOptions& opts = {});

/// min ||vec(chi)||_1  s.t. ||B - Phi vec(chi)||_2 <= eps, chi >= 0,
/// trace preserving. Throws Infeasible when eps is below the unconstrained
/// least-squares residual.
SolveReport cs_qpt(const DataVector& data, const CoefficientMatrix& phi,
                   double epsilon, const SolverOptions& opts = {});

/// Orthonormal real coordinates of N x N Hermitian matrices:
/// diagonal entries first, then (sqrt2 Re, sqrt2 Im) of each upper entry.
class HermitianCoordinates {
 public:
  explicit HermitianCoordinates(std::size_t n) : n_(n) {}

  std::size_t matrix_size() const { return n_; }
  std::size_t size() const { return n_ * n_; }
  std::size_t pair_count() const { return n_ * (n_ - 1) / 2; }

  /// Coordinates of the Hermitian part of `m`.
  Eigen::VectorXd to_coordinates(const ComplexMatrix& m) const;
  ComplexMatrix to_matrix(const Eigen::VectorXd& theta) const;

  /// Real 2m x N^2 matrix [Re; Im] of phi restricted to Hermitian chi.
  Eigen::MatrixXd real_operator(const ComplexMatrix& phi) const;

 private:
  std::size_t n_;
};

namespace prox {

/// z * max(0, 1 - lambda / |z|).
Complex soft_threshold(Complex z, double lambda);

/// prox of lambda * sum |chi_mn| in Hermitian coordinates.
void l1_prox(Eigen::VectorXd& theta, double lambda,
             const HermitianCoordinates& coords);

/// Nearest PSD matrix in Frobenius norm (Hermitian part, eigenvalues
/// clipped at zero).
ComplexMatrix project_psd(const ComplexMatrix& m);

/// Nearest point of the ball ||z - center|| <= radius.
Eigen::VectorXd project_ball(const Eigen::VectorXd& v,
                             const Eigen::VectorXd& center, double radius);

/// Frobenius projection of Hermitian chi onto
/// { chi : sum_mn chi_mn E_n^dagger E_m = I }.
class TpProjector {
 public:
  explicit TpProjector(const OperatorBasis& basis);

  const HermitianCoordinates& coordinates() const { return coords_; }
  /// Orthonormal rows spanning the constraint normals.
  const Eigen::MatrixXd& rows() const { return rows_; }
  const Eigen::VectorXd& target() const { return target_; }

  Eigen::VectorXd project(const Eigen::VectorXd& theta) const;
  ComplexMatrix project(const ComplexMatrix& chi) const;

 private:
  HermitianCoordinates coords_;
  Eigen::MatrixXd rows_;
  Eigen::VectorXd target_;
};

}  // namespace prox

struct RipEstimate {
  double delta = 0.0;      // max |ratio - 1| observed
  double min_ratio = 0.0;
  double max_ratio = 0.0;
  std::size_t samples = 0;
  /// delta < sqrt(2) - 1. A sampled delta is a lower bound on the true
  /// constant, so `true` here is necessary but not sufficient.
  bool below_threshold = false;
};

inline const double kRipThreshold = 0.41421356237309503;  // sqrt(2) - 1

/// Samples random pairs of s-sparse complex vectors and records
/// ||Phi (x1 - x2)||^2 / ||x1 - x2||^2.
RipEstimate rip_estimate(const ComplexMatrix& phi, std::size_t s,
                         std::size_t trials, std::uint64_t seed,
                         bool normalize_columns = false);

/// ceil(c0 * s * ln(d^4 / s)).
std::size_t sample_size_bound(std::size_t s, std::size_t d, double c0);

}  // namespace csqpt
