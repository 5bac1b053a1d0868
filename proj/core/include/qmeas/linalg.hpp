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

//! Dense complex-operator kernel: Pauli matrices, Kronecker products,
//! Hermitian matrix exponentials, trace products, and validated operator
//! wrappers used by every other module.

#pragma once

#include <qmeas/types.hpp>

namespace qmeas {

const CMatrix& pauli_x();
const CMatrix& pauli_y();
const CMatrix& pauli_z();
const CMatrix& identity2();

bool is_hermitian(const CMatrix& a, double tol);
bool is_unitary(const CMatrix& a, double tol);

/// Kronecker product with the standard block convention:
/// result(i*rows(b)+k, j*cols(b)+l) = a(i,j) * b(k,l).
/// Throws ValidationError once the result would exceed max_dim on a side.
CMatrix kron(const CMatrix& a, const CMatrix& b, Eigen::Index max_dim = kMaxMatrixDim);

/// exp(i * scale * h) for Hermitian h, computed by eigendecomposition so the
/// result is unitary up to roundoff. Evolution operators in this library are
/// exp(+i H t) with hbar = 1.
CMatrix expm_hermitian(const CMatrix& h, double scale, const Tolerances& tol = {});

/// Tr(a * b), accumulated entrywise against the transpose pattern of `a`
/// without forming the product.
Complex trace_product(const CMatrix& a, const CMatrix& b);

/// A state: Hermitian, unit trace, positive semidefinite (all to tolerance).
class DensityOperator {
 public:
  explicit DensityOperator(CMatrix matrix, const Tolerances& tol = {});

  const CMatrix& matrix() const { return matrix_; }
  Eigen::Index dim() const { return matrix_.rows(); }

 private:
  CMatrix matrix_;
};

/// An orthogonal projector: Hermitian and idempotent to tolerance.
class Projector {
 public:
  explicit Projector(CMatrix matrix, const Tolerances& tol = {});

  const CMatrix& matrix() const { return matrix_; }
  Eigen::Index dim() const { return matrix_.rows(); }

 private:
  CMatrix matrix_;
};

}  // namespace qmeas
