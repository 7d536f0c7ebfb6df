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

#include "csqpt/solver.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <numbers>
#include <numeric>
#include <random>

#include <Eigen/Cholesky>
#include <Eigen/Eigenvalues>
#include <Eigen/QR>

#include "csqpt/error.hpp"

namespace csqpt {

std::string to_string(Method method) {
  return method == Method::LeastSquares ? "LS" : "CS";
}

Method method_from_string(const std::string& name) {
  if (name == "LS" || name == "ls") return Method::LeastSquares;
  if (name == "CS" || name == "cs") return Method::CompressedSensing;
  throw Error(ErrorCode::ParseError, "unknown method '" + name + "'");
}

// ---------------------------------------------------------------------------
// Hermitian coordinates

Eigen::VectorXd HermitianCoordinates::to_coordinates(
    const ComplexMatrix& m) const {
  const auto n = static_cast<Eigen::Index>(n_);
  if (m.rows() != n || m.cols() != n) {
    throw Error(ErrorCode::DimensionMismatch, "Hermitian coordinates");
  }
  Eigen::VectorXd theta(static_cast<Eigen::Index>(size()));
  for (Eigen::Index i = 0; i < n; ++i) theta(i) = m(i, i).real();
  Eigen::Index p = n;
  for (Eigen::Index i = 0; i < n; ++i) {
    for (Eigen::Index j = i + 1; j < n; ++j) {
      const Complex h = 0.5 * (m(i, j) + std::conj(m(j, i)));
      theta(p++) = std::numbers::sqrt2 * h.real();
      theta(p++) = std::numbers::sqrt2 * h.imag();
    }
  }
  return theta;
}

ComplexMatrix HermitianCoordinates::to_matrix(
    const Eigen::VectorXd& theta) const {
  const auto n = static_cast<Eigen::Index>(n_);
  if (theta.size() != static_cast<Eigen::Index>(size())) {
    throw Error(ErrorCode::LengthMismatch, "Hermitian coordinates");
  }
  ComplexMatrix m(n, n);
  for (Eigen::Index i = 0; i < n; ++i) m(i, i) = theta(i);
  Eigen::Index p = n;
  const double s = 1.0 / std::numbers::sqrt2;
  for (Eigen::Index i = 0; i < n; ++i) {
    for (Eigen::Index j = i + 1; j < n; ++j) {
      const Complex v(s * theta(p), s * theta(p + 1));
      p += 2;
      m(i, j) = v;
      m(j, i) = std::conj(v);
    }
  }
  return m;
}

Eigen::MatrixXd HermitianCoordinates::real_operator(
    const ComplexMatrix& phi) const {
  const auto n = static_cast<Eigen::Index>(n_);
  if (phi.cols() != n * n) {
    throw Error(ErrorCode::DimensionMismatch, "Phi column count");
  }
  const Eigen::Index rows = phi.rows();
  Eigen::MatrixXd out(2 * rows, n * n);
  auto put = [&](Eigen::Index col, const ComplexVector& v) {
    out.col(col).head(rows) = v.real();
    out.col(col).tail(rows) = v.imag();
  };
  for (Eigen::Index i = 0; i < n; ++i) put(i, phi.col(i * n + i));
  Eigen::Index p = n;
  const double s = 1.0 / std::numbers::sqrt2;
  for (Eigen::Index i = 0; i < n; ++i) {
    for (Eigen::Index j = i + 1; j < n; ++j) {
      // chi_ij sits at column j * n + i, chi_ji at i * n + j.
      const auto upper = phi.col(j * n + i);
      const auto lower = phi.col(i * n + j);
      put(p++, s * (upper + lower));
      put(p++, Complex(0.0, s) * (upper - lower));
    }
  }
  return out;
}

// ---------------------------------------------------------------------------
// Proximal operators

namespace prox {

Complex soft_threshold(Complex z, double lambda) {
  const double mag = std::abs(z);
  if (mag <= lambda) return Complex(0.0);
  return z * (1.0 - lambda / mag);
}

void l1_prox(Eigen::VectorXd& theta, double lambda,
             const HermitianCoordinates& coords) {
  const auto n = static_cast<Eigen::Index>(coords.matrix_size());
  for (Eigen::Index i = 0; i < n; ++i) {
    const double v = theta(i);
    theta(i) = std::copysign(std::max(0.0, std::abs(v) - lambda), v);
  }
  // Each off-diagonal pair carries 2 |chi_ij| = sqrt2 ||(a, b)||.
  const double group = std::numbers::sqrt2 * lambda;
  for (Eigen::Index p = n; p < theta.size(); p += 2) {
    const double mag = std::hypot(theta(p), theta(p + 1));
    const double keep = mag <= group ? 0.0 : 1.0 - group / mag;
    theta(p) *= keep;
    theta(p + 1) *= keep;
  }
}

ComplexMatrix project_psd(const ComplexMatrix& m) {
  const ComplexMatrix herm = 0.5 * (m + m.adjoint());
  Eigen::SelfAdjointEigenSolver<ComplexMatrix> eig(herm);
  const Eigen::VectorXd lambda = eig.eigenvalues().cwiseMax(0.0);
  const ComplexMatrix& v = eig.eigenvectors();
  return v * lambda.asDiagonal() * v.adjoint();
}

Eigen::VectorXd project_ball(const Eigen::VectorXd& v,
                             const Eigen::VectorXd& center, double radius) {
  const Eigen::VectorXd diff = v - center;
  const double dist = diff.norm();
  if (dist <= radius) return v;
  return center + diff * (radius / dist);
}

TpProjector::TpProjector(const OperatorBasis& basis) : coords_(basis.size()) {
  const auto d = static_cast<Eigen::Index>(basis.dim());
  const auto n = static_cast<Eigen::Index>(basis.size());
  // products[m * n + k] = E_k^dagger E_m, the image of chi_mk = 1.
  std::vector<ComplexMatrix> products(static_cast<std::size_t>(n * n));
  for (Eigen::Index m = 0; m < n; ++m) {
    for (Eigen::Index k = 0; k < n; ++k) {
      products[m * n + k] = basis.element(k).adjoint() * basis.element(m);
    }
  }
  const Eigen::Index d2 = d * d;
  Eigen::MatrixXd a(2 * d2, n * n);
  auto put = [&](Eigen::Index col, const ComplexMatrix& image) {
    a.col(col).head(d2) = image.reshaped().real();
    a.col(col).tail(d2) = image.reshaped().imag();
  };
  for (Eigen::Index i = 0; i < n; ++i) put(i, products[i * n + i]);
  Eigen::Index p = n;
  const double s = 1.0 / std::numbers::sqrt2;
  for (Eigen::Index i = 0; i < n; ++i) {
    for (Eigen::Index j = i + 1; j < n; ++j) {
      const ComplexMatrix& ij = products[i * n + j];
      const ComplexMatrix& ji = products[j * n + i];
      put(p++, s * (ij + ji));
      put(p++, Complex(0.0, s) * (ij - ji));
    }
  }
  Eigen::VectorXd c = Eigen::VectorXd::Zero(2 * d2);
  c.head(d2) = Eigen::MatrixXd::Identity(d, d).reshaped();

  // Orthonormalize the constraint rows; the real system has rank d^2.
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(a * a.transpose());
  const Eigen::VectorXd& lambda = eig.eigenvalues();
  const double cutoff = 1e-10 * lambda.maxCoeff();
  std::vector<Eigen::Index> keep;
  for (Eigen::Index i = 0; i < lambda.size(); ++i) {
    if (lambda(i) > cutoff) keep.push_back(i);
  }
  if (keep.empty()) {
    throw Error(ErrorCode::FactorizationFailure, "empty TP constraint");
  }
  rows_.resize(static_cast<Eigen::Index>(keep.size()), n * n);
  target_.resize(static_cast<Eigen::Index>(keep.size()));
  for (std::size_t r = 0; r < keep.size(); ++r) {
    const auto idx = keep[r];
    const double inv = 1.0 / std::sqrt(lambda(idx));
    const auto u = eig.eigenvectors().col(idx);
    rows_.row(static_cast<Eigen::Index>(r)) = inv * (u.transpose() * a);
    target_(static_cast<Eigen::Index>(r)) = inv * u.dot(c);
  }
  // The targets must be consistent with the dropped directions.
  const Eigen::VectorXd lifted = a * (rows_.transpose() * target_);
  if ((lifted - c).norm() > 1e-8 * (1.0 + c.norm())) {
    throw Error(ErrorCode::FactorizationFailure,
                "TP constraint is inconsistent for this basis");
  }
}

Eigen::VectorXd TpProjector::project(const Eigen::VectorXd& theta) const {
  return theta - rows_.transpose() * (rows_ * theta - target_);
}

ComplexMatrix TpProjector::project(const ComplexMatrix& chi) const {
  return coords_.to_matrix(project(coords_.to_coordinates(chi)));
}

}  // namespace prox

// ---------------------------------------------------------------------------
// ADMM

namespace {

// Scaled (and possibly compressed) real data operator.
struct DataBlock {
  Eigen::MatrixXd d;
  Eigen::VectorXd b;
  double scale = 1.0;          // original units = scaled units * scale
  double residual_floor = 0.0; // part of b outside range(D), scaled units
  bool upper = false;          // d is the triangular QR factor

  Eigen::VectorXd apply(const Eigen::VectorXd& x) const {
    if (upper) return d.triangularView<Eigen::Upper>() * x;
    return d * x;
  }
  Eigen::VectorXd apply_t(const Eigen::VectorXd& y) const {
    if (upper) return d.transpose().triangularView<Eigen::Lower>() * y;
    return d.transpose() * y;
  }
};

double spectral_norm_estimate(const Eigen::MatrixXd& d) {
  if (d.rows() == 0) return 0.0;
  Eigen::VectorXd v = Eigen::VectorXd::Ones(d.cols()).normalized();
  double norm = 0.0;
  for (int it = 0; it < 60; ++it) {
    Eigen::VectorXd w = d.transpose() * (d * v);
    const double wn = w.norm();
    if (wn == 0.0) return 0.0;
    const double next = std::sqrt(wn);
    v = w / wn;
    if (std::abs(next - norm) <= 1e-6 * next) {
      norm = next;
      break;
    }
    norm = next;
  }
  return norm;
}

DataBlock make_data_block(Eigen::MatrixXd psi, Eigen::VectorXd b) {
  DataBlock block;
  if (psi.rows() > psi.cols()) {
    // ||Psi x - b||^2 = ||R x - Q1^T b||^2 + ||Q2^T b||^2.
    const Eigen::Index n = psi.cols();
    Eigen::HouseholderQR<Eigen::MatrixXd> qr(std::move(psi));
    const Eigen::VectorXd qtb = qr.householderQ().adjoint() * b;
    block.d = qr.matrixQR().topRows(n).triangularView<Eigen::Upper>();
    block.b = qtb.head(n);
    block.residual_floor = qtb.tail(qtb.size() - n).norm();
    block.upper = true;
  } else {
    block.d = std::move(psi);
    block.b = std::move(b);
  }
  const double norm = spectral_norm_estimate(block.d);
  if (norm > 0.0) {
    block.scale = norm;
    block.d /= norm;
    block.b /= norm;
    block.residual_floor /= norm;
  }
  return block;
}

// Solves  min sum_i ||x - a_i||^2 + ||D x - a_d||^2  s.t.  Q x = c
// given rhs = sum_i a_i + D^T a_d and k identity blocks.
class KktSolver {
 public:
  KktSolver(const Eigen::MatrixXd& d, double k, const Eigen::MatrixXd& q,
            const Eigen::VectorXd& c)
      : d_(d), k_(k), c_(c), q_(q) {
    const Eigen::Index n = d.cols();
    woodbury_ = d.rows() < n;
    if (woodbury_) {
      Eigen::MatrixXd small = d * d.transpose();
      small.diagonal().array() += k;
      small_.compute(small);
      if (small_.info() != Eigen::Success) {
        throw Error(ErrorCode::FactorizationFailure, "data Gram matrix");
      }
    } else {
      Eigen::MatrixXd big = Eigen::MatrixXd::Zero(n, n);
      big.selfadjointView<Eigen::Lower>().rankUpdate(d.transpose());
      big.diagonal().array() += k;
      big_.compute(big);
      if (big_.info() != Eigen::Success) {
        throw Error(ErrorCode::FactorizationFailure, "normal equations");
      }
    }
    y_.resize(n, q.rows());
    for (Eigen::Index j = 0; j < q.rows(); ++j) {
      y_.col(j) = apply_inverse(q.row(j).transpose());
    }
    schur_.compute(q * y_);
    if (schur_.info() != Eigen::Success) {
      throw Error(ErrorCode::FactorizationFailure, "TP Schur complement");
    }
  }

  Eigen::VectorXd solve(const Eigen::VectorXd& rhs) const {
    Eigen::VectorXd w = apply_inverse(rhs);
    w += y_ * schur_.solve(c_ - q_ * w);
    return w;
  }

 private:
  Eigen::VectorXd apply_inverse(const Eigen::VectorXd& r) const {
    if (woodbury_) {
      Eigen::VectorXd t = small_.solve(d_ * r);
      return (r - d_.transpose() * t) / k_;
    }
    return big_.solve(r);
  }

  const Eigen::MatrixXd& d_;
  double k_;
  Eigen::VectorXd c_;
  const Eigen::MatrixXd& q_;
  bool woodbury_ = false;
  Eigen::LLT<Eigen::MatrixXd> small_;
  Eigen::LLT<Eigen::MatrixXd> big_;
  Eigen::MatrixXd y_;
  Eigen::LLT<Eigen::MatrixXd> schur_;
};

double l1_norm(const ComplexMatrix& m) { return m.cwiseAbs().sum(); }

double min_eigenvalue(const ComplexMatrix& m) {
  Eigen::SelfAdjointEigenSolver<ComplexMatrix> eig(0.5 * (m + m.adjoint()),
                                                   Eigen::EigenvaluesOnly);
  return eig.eigenvalues().minCoeff();
}

// x meets the TP constraint exactly. I/N meets it too and has smallest
// eigenvalue 1/N, so moving x toward I/N by just enough to clear its negative
// eigenvalues gives a point that is PSD and TP at once.
ComplexMatrix repair(const ComplexMatrix& x) {
  const auto n = x.rows();
  const double lambda = min_eigenvalue(x);
  if (lambda >= 0.0) return x;
  const double inv_n = 1.0 / static_cast<double>(n);
  const double t = -lambda / (inv_n - lambda);
  return (1.0 - t) * x + (t * inv_n) * ComplexMatrix::Identity(n, n);
}

void fill_diagnostics(SolveReport& report, const DataVector& data,
                      const CoefficientMatrix& phi) {
  const ComplexMatrix& chi = report.chi.chi();
  report.psd_violation = std::max(0.0, -min_eigenvalue(chi));
  report.tp_violation = tp_residual(report.chi);
  report.l1_value = l1_norm(chi);
  if (phi.row_count() > 0) {
    report.data_residual =
        (phi.phi * ComplexVector(chi.reshaped()) - data.values).norm();
  }
}

void check_inputs(const DataVector& data, const CoefficientMatrix& phi) {
  if (!phi.basis) throw Error(ErrorCode::DimensionMismatch, "Phi has no basis");
  const auto n = static_cast<Eigen::Index>(phi.basis->size());
  if (phi.phi.cols() != n * n) {
    throw Error(ErrorCode::DimensionMismatch, "Phi columns != d^4");
  }
  if (data.size() != phi.row_count() ||
      static_cast<std::size_t>(data.values.size()) != data.size() ||
      static_cast<std::size_t>(phi.phi.rows()) != phi.row_count()) {
    throw Error(ErrorCode::DimensionMismatch,
                "data has " + std::to_string(data.values.size()) +
                    " rows, Phi has " + std::to_string(phi.phi.rows()));
  }
}

SolveReport solve_admm(Method method, const DataVector& data,
                       const CoefficientMatrix& phi, double epsilon,
                       const SolverOptions& opts) {
  const auto started = std::chrono::steady_clock::now();
  check_inputs(data, phi);
  const BasisPtr& basis = phi.basis;
  const auto big_n = static_cast<Eigen::Index>(basis->size());
  const bool cs = method == Method::CompressedSensing;

  auto elapsed = [&] {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() -
                                         started)
        .count();
  };

  if (phi.row_count() == 0) {
    SolveReport report(ProcessMatrix(
        basis, ComplexMatrix::Identity(big_n, big_n) / static_cast<double>(big_n)));
    report.method = method;
    report.epsilon = epsilon;
    report.underdetermined = true;
    fill_diagnostics(report, data, phi);
    report.wall_time_s = elapsed();
    return report;
  }

  const prox::TpProjector tp(*basis);
  const HermitianCoordinates& coords = tp.coordinates();
  const auto n = static_cast<Eigen::Index>(coords.size());

  Eigen::VectorXd b_real(2 * data.values.size());
  b_real << data.values.real(), data.values.imag();
  const DataBlock block =
      make_data_block(coords.real_operator(phi.phi), std::move(b_real));
  const Eigen::MatrixXd& d = block.d;
  const Eigen::VectorXd& b = block.b;

  double radius = 0.0;
  if (cs) {
    const double eps_scaled = epsilon / block.scale;
    const double floor = block.residual_floor;
    if (eps_scaled + 1e-12 < floor * (1.0 - 1e-9)) {
      char msg[128];
      std::snprintf(msg, sizeof msg,
                    "epsilon %.6g is below the least-squares residual %.6g",
                    epsilon, floor * block.scale);
      throw Error(ErrorCode::Infeasible, msg);
    }
    radius = std::sqrt(std::max(0.0, eps_scaled * eps_scaled - floor * floor));
  }

  const double identity_blocks = cs ? 2.0 : 1.0;
  const KktSolver kkt(d, identity_blocks, tp.rows(), tp.target());

  auto psd = [&](const Eigen::VectorXd& v) {
    return coords.to_coordinates(prox::project_psd(coords.to_matrix(v)));
  };

  Eigen::VectorXd x = coords.to_coordinates(
      ComplexMatrix::Identity(big_n, big_n) / static_cast<double>(big_n));
  Eigen::VectorXd z_psd = x;
  Eigen::VectorXd z_l1 = x;
  Eigen::VectorXd z_dat = block.apply(x);
  Eigen::VectorXd u_psd = Eigen::VectorXd::Zero(n);
  Eigen::VectorXd u_l1 = Eigen::VectorXd::Zero(n);
  Eigen::VectorXd u_dat = Eigen::VectorXd::Zero(d.rows());

  double rho = opts.rho;
  const double alpha = opts.relaxation;
  const std::size_t interval = std::max<std::size_t>(1, opts.check_interval);
  const double blocks = cs ? 2.0 : 1.0;
  const double sqrt_pri =
      std::sqrt(blocks * static_cast<double>(n) + static_cast<double>(d.rows()));
  const double sqrt_dual = std::sqrt(static_cast<double>(n));

  SolveReport report(ProcessMatrix(basis, coords.to_matrix(z_psd)));
  report.method = method;
  report.epsilon = epsilon;
  report.underdetermined =
      static_cast<Eigen::Index>(2 * phi.row_count()) + tp.rows().rows() < n;

  Eigen::VectorXd z_psd_old, z_l1_old, z_dat_old;
  std::size_t it = 0;
  for (it = 1; it <= opts.max_iterations; ++it) {
    const bool check = it % interval == 0 ||
                       (opts.history_stride > 0 && it % opts.history_stride == 0);

    Eigen::VectorXd rhs = (z_psd - u_psd) + block.apply_t(z_dat - u_dat);
    if (cs) rhs += z_l1 - u_l1;
    x = kkt.solve(rhs);
    const Eigen::VectorXd dx = block.apply(x);

    if (check) {
      z_psd_old = z_psd;
      z_dat_old = z_dat;
      if (cs) z_l1_old = z_l1;
    }

    const Eigen::VectorXd xh_psd = alpha * x + (1.0 - alpha) * z_psd;
    const Eigen::VectorXd dxh = alpha * dx + (1.0 - alpha) * z_dat;

    z_psd = psd(xh_psd + u_psd);
    u_psd += xh_psd - z_psd;

    if (cs) {
      const Eigen::VectorXd xh_l1 = alpha * x + (1.0 - alpha) * z_l1;
      z_l1 = xh_l1 + u_l1;
      prox::l1_prox(z_l1, 1.0 / rho, coords);
      u_l1 += xh_l1 - z_l1;
      z_dat = prox::project_ball(dxh + u_dat, b, radius);
    } else {
      z_dat = (b + rho * (dxh + u_dat)) / (1.0 + rho);
    }
    u_dat += dxh - z_dat;

    if (!check) continue;

    double primal_sq = (x - z_psd).squaredNorm() + (dx - z_dat).squaredNorm();
    double ax_sq = x.squaredNorm() + dx.squaredNorm();
    double z_sq = z_psd.squaredNorm() + z_dat.squaredNorm();
    Eigen::VectorXd dual_vec =
        (z_psd - z_psd_old) + block.apply_t(z_dat - z_dat_old);
    // Multiplier sums cancel at the optimum (up to the TP multiplier), so
    // scale the dual tolerance by the individual blocks instead.
    double dual_scale = std::max(u_psd.norm(), block.apply_t(u_dat).norm());
    if (cs) {
      primal_sq += (x - z_l1).squaredNorm();
      ax_sq += x.squaredNorm();
      z_sq += z_l1.squaredNorm();
      dual_vec += z_l1 - z_l1_old;
      dual_scale = std::max(dual_scale, u_l1.norm());
    }
    // Directions normal to the TP set are absorbed by its multiplier.
    dual_vec -= tp.rows().transpose() * (tp.rows() * dual_vec);
    const double primal = std::sqrt(primal_sq);
    const double dual = rho * dual_vec.norm();
    const double eps_pri = sqrt_pri * opts.abs_tol +
                           opts.rel_tol * std::sqrt(std::max(ax_sq, z_sq));
    const double eps_dual =
        sqrt_dual * opts.abs_tol + opts.rel_tol * rho * dual_scale;

    if (opts.history_stride > 0 && it % opts.history_stride == 0) {
      report.history.push_back(ResidualSample{it, primal, dual, rho});
    }

    if (primal <= eps_pri && dual <= eps_dual) {
      SolveReport candidate(ProcessMatrix(basis, repair(coords.to_matrix(x))));
      fill_diagnostics(candidate, data, phi);
      const bool data_ok = !cs || candidate.data_residual <=
                                      epsilon + opts.data_tol;
      if (candidate.psd_violation <= opts.psd_tol &&
          candidate.tp_violation <= opts.tp_tol && data_ok) {
        report.chi = std::move(candidate.chi);
        report.converged = true;
        break;
      }
    }

    if (opts.adaptive_rho && it % interval == 0) {
      // rho does not enter the x-update (every block shares it), so
      // rebalancing is free. Compare residuals relative to their scales.
      const double rel_primal =
          primal / std::max(1e-300, std::sqrt(std::max(ax_sq, z_sq)));
      const double rel_dual = dual / std::max(1e-300, rho * dual_scale);
      const double factor =
          std::sqrt(rel_primal / std::max(1e-300, rel_dual));
      if (factor > 5.0 || factor < 0.2) {
        const double next = std::clamp(rho * factor, 1e-6, 1e6);
        const double f = next / rho;
        rho = next;
        u_psd /= f;
        u_l1 /= f;
        u_dat /= f;
      }
    }
  }

  if (!report.converged) {
    report.chi = ProcessMatrix(basis, repair(coords.to_matrix(x)));
  }
  report.iterations = std::min(it, opts.max_iterations);
  fill_diagnostics(report, data, phi);
  report.wall_time_s = elapsed();
  return report;
}

}  // namespace

SolveReport ls_qpt(const DataVector& data, const CoefficientMatrix& phi,
                   const SolverOptions& opts) {
  return solve_admm(Method::LeastSquares, data, phi, 0.0, opts);
}

SolveReport cs_qpt(const DataVector& data, const CoefficientMatrix& phi,
                   double epsilon, const SolverOptions& opts) {
  if (!(epsilon >= 0.0)) {
    throw Error(ErrorCode::OutOfRange, "epsilon must be non-negative");
  }
  return solve_admm(Method::CompressedSensing, data, phi, epsilon, opts);
}

// ---------------------------------------------------------------------------
// Diagnostics

RipEstimate rip_estimate(const ComplexMatrix& phi, std::size_t s,
                         std::size_t trials, std::uint64_t seed,
                         bool normalize_columns) {
  const auto cols = static_cast<std::size_t>(phi.cols());
  if (s < 1 || s > cols) {
    throw Error(ErrorCode::OutOfRange, "sparsity outside [1, columns]");
  }
  if (trials < 1) throw Error(ErrorCode::OutOfRange, "need at least one trial");

  ComplexMatrix a = phi;
  if (normalize_columns) {
    for (Eigen::Index c = 0; c < a.cols(); ++c) {
      const double norm = a.col(c).norm();
      if (norm > 0.0) a.col(c) /= norm;
    }
  }

  auto rng = make_rng(seed, {0x726970ULL});
  std::normal_distribution<double> gauss(0.0, 1.0);
  std::vector<std::size_t> idx(cols);
  auto sparse_vector = [&] {
    std::iota(idx.begin(), idx.end(), std::size_t{0});
    ComplexVector v = ComplexVector::Zero(static_cast<Eigen::Index>(cols));
    for (std::size_t i = 0; i < s; ++i) {
      std::uniform_int_distribution<std::size_t> pick(i, cols - 1);
      std::swap(idx[i], idx[pick(rng)]);
      v(static_cast<Eigen::Index>(idx[i])) = Complex(gauss(rng), gauss(rng));
    }
    return v;
  };

  RipEstimate est;
  est.min_ratio = std::numeric_limits<double>::infinity();
  est.max_ratio = 0.0;
  for (std::size_t t = 0; t < trials; ++t) {
    const ComplexVector diff = sparse_vector() - sparse_vector();
    const double denom = diff.squaredNorm();
    if (denom == 0.0) continue;
    const double ratio = (a * diff).squaredNorm() / denom;
    est.min_ratio = std::min(est.min_ratio, ratio);
    est.max_ratio = std::max(est.max_ratio, ratio);
    ++est.samples;
  }
  if (est.samples == 0) {
    est.min_ratio = est.max_ratio = 1.0;
  }
  est.delta = std::max(std::abs(est.max_ratio - 1.0),
                       std::abs(1.0 - est.min_ratio));
  est.below_threshold = est.delta < kRipThreshold;
  return est;
}

std::size_t sample_size_bound(std::size_t s, std::size_t d, double c0) {
  const double d4 = std::pow(static_cast<double>(d), 4);
  if (s < 1 || static_cast<double>(s) > d4) {
    throw Error(ErrorCode::OutOfRange, "sparsity outside [1, d^4]");
  }
  if (!(c0 > 0.0)) throw Error(ErrorCode::OutOfRange, "C0 must be positive");
  const double value =
      c0 * static_cast<double>(s) * std::log(d4 / static_cast<double>(s));
  // Guard against ln(1) rounding to a tiny positive number.
  return static_cast<std::size_t>(std::ceil(value - 1e-12));
}

}  // namespace csqpt
