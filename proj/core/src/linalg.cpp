// Copyright 2026 The qmeas Authors
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

#include "qmeas/linalg.hpp"

#include <string>

namespace qmeas {

namespace {

const Complex kI{0.0, 1.0};

void require_square(const CMatrix& a, const char* what) {
  if (a.rows() != a.cols()) {
    throw ValidationError(std::string(what) + ": matrix must be square, got " +
                          std::to_string(a.rows()) + "x" + std::to_string(a.cols()));
  }
}

void require_same_dim(const CMatrix& a, const CMatrix& b, const char* what) {
  if (a.rows() != b.rows() || a.cols() != b.cols()) {
    throw ValidationError(std::string(what) + ": dimension mismatch, " +
                          std::to_string(a.rows()) + "x" + std::to_string(a.cols()) + " vs " +
                          std::to_string(b.rows()) + "x" + std::to_string(b.cols()));
  }
}

}  // namespace

const CMatrix& pauli_x() {
  static const CMatrix m = [] {
    CMatrix s(2, 2);
    s << 0, 1, 1, 0;
    return s;
  }();
  return m;
}

const CMatrix& pauli_y() {
  static const CMatrix m = [] {
    CMatrix s(2, 2);
    s << Complex(0, 0), Complex(0, -1), Complex(0, 1), Complex(0, 0);
    return s;
  }();
  return m;
}

const CMatrix& pauli_z() {
  static const CMatrix m = [] {
    CMatrix s(2, 2);
    s << 1, 0, 0, -1;
    return s;
  }();
  return m;
}

const CMatrix& identity2() {
  static const CMatrix m = CMatrix::Identity(2, 2);
  return m;
}

bool is_hermitian(const CMatrix& a, double tol) {
  if (a.rows() != a.cols()) return false;
  return (a - a.adjoint()).cwiseAbs().maxCoeff() <= tol;
}

bool is_unitary(const CMatrix& a, double tol) {
  if (a.rows() != a.cols()) return false;
  CMatrix gram = a.adjoint() * a;
  gram -= CMatrix::Identity(a.rows(), a.cols());
  return gram.cwiseAbs().maxCoeff() <= tol;
}

CMatrix kron(const CMatrix& a, const CMatrix& b, Eigen::Index max_dim) {
  const Eigen::Index rows = a.rows() * b.rows();
  const Eigen::Index cols = a.cols() * b.cols();
  if (rows > max_dim || cols > max_dim) {
    throw ValidationError("kron: result dimension " + std::to_string(rows) + "x" +
                          std::to_string(cols) + " exceeds the configured maximum " +
                          std::to_string(max_dim));
  }
  CMatrix out(rows, cols);
  for (Eigen::Index i = 0; i < a.rows(); ++i) {
    for (Eigen::Index j = 0; j < a.cols(); ++j) {
      out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
    }
  }
  return out;
}

CMatrix expm_hermitian(const CMatrix& h, double scale, const Tolerances& tol) {
  require_square(h, "expm_hermitian");
  if (!is_hermitian(h, tol.hermitian)) {
    throw ValidationError("expm_hermitian: generator is not Hermitian to tolerance");
  }
  Eigen::SelfAdjointEigenSolver<CMatrix> solver(h);
  if (solver.info() != Eigen::Success) {
    throw ConsistencyError("expm_hermitian: eigendecomposition failed");
  }
  const CVector phases =
      (kI * scale * solver.eigenvalues().array()).exp().matrix().cast<Complex>();
  CMatrix u = solver.eigenvectors() * phases.asDiagonal() * solver.eigenvectors().adjoint();
  if (!is_unitary(u, tol.unitary)) {
    throw ConsistencyError("expm_hermitian: result failed the unitarity check");
  }
  return u;
}

Complex trace_product(const CMatrix& a, const CMatrix& b) {
  require_square(a, "trace_product");
  require_same_dim(a, b, "trace_product");
  // Tr(a b) = sum_{i,k} a(i,k) b(k,i)
  return (a.transpose().cwiseProduct(b)).sum();
}

DensityOperator::DensityOperator(CMatrix matrix, const Tolerances& tol)
    : matrix_(std::move(matrix)) {
  require_square(matrix_, "DensityOperator");
  if (!is_hermitian(matrix_, tol.hermitian)) {
    throw ValidationError("DensityOperator: matrix is not Hermitian to tolerance");
  }
  const double trace_dev = std::abs(matrix_.trace() - Complex(1.0, 0.0));
  if (trace_dev > tol.trace_one) {
    throw ValidationError("DensityOperator: trace deviates from 1 by " +
                          std::to_string(trace_dev));
  }
  Eigen::SelfAdjointEigenSolver<CMatrix> solver(matrix_, Eigen::EigenvaluesOnly);
  if (solver.info() != Eigen::Success) {
    throw ConsistencyError("DensityOperator: eigenvalue computation failed");
  }
  if (solver.eigenvalues().minCoeff() < -tol.psd) {
    throw ValidationError("DensityOperator: negative eigenvalue " +
                          std::to_string(solver.eigenvalues().minCoeff()));
  }
}

Projector::Projector(CMatrix matrix, const Tolerances& tol) : matrix_(std::move(matrix)) {
  require_square(matrix_, "Projector");
  if (!is_hermitian(matrix_, tol.hermitian)) {
    throw ValidationError("Projector: matrix is not Hermitian to tolerance");
  }
  CMatrix residual = matrix_ * matrix_ - matrix_;
  if (residual.cwiseAbs().maxCoeff() > tol.idempotent) {
    throw ValidationError("Projector: matrix is not idempotent to tolerance");
  }
}

}  // namespace qmeas
