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

#pragma once

#include <complex>
#include <stdexcept>

#include <Eigen/Dense>

namespace qmeas {

using Complex = std::complex<double>;
using CMatrix = Eigen::MatrixXcd;
using CVector = Eigen::VectorXcd;
using RVector = Eigen::VectorXd;

/// An input violates a documented precondition (bad dimension, bad range,
/// non-Hermitian operator where one is required, ...).
struct ValidationError : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

/// A computed quantity failed an internal consistency check, e.g. an
/// expectation value carrying a non-negligible imaginary residue.
struct ConsistencyError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Numerical tolerances. The mathematics of the model is exact; every value
/// here is an implementation artifact and may be overridden per call.
struct Tolerances {
  double hermitian = 1e-10;
  double trace_one = 1e-10;
  double psd = 1e-10;
  double unitary = 1e-10;
  double idempotent = 1e-10;
  double state_norm = 1e-10;
  double stats = 1e-10;         ///< statistics-tensor structure checks
  double imag_residue = 1e-10;  ///< residual imaginary part of real functionals
  double w_floor = 1e-12;       ///< smallest pointer probability usable as a condition
  double tie = 1e-9;            ///< argmax tie refusal margin in classification
  double stationary = 1e-8;     ///< settled-record comparison in time series
  double quadrature = 1e-6;     ///< packet-normalization gate on run grids
};

// Dense-kernel size caps. Everything here is dense storage; these keep an
// accidental large request from allocating gigabytes.
inline constexpr Eigen::Index kMaxVectorDim = Eigen::Index{1} << 13;
inline constexpr Eigen::Index kMaxMatrixDim = Eigen::Index{1} << 11;

}  // namespace qmeas
