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

//! Seeded generators for random operators and model instances, used by the
//! verification layer, the demo command, and the test suites.

#pragma once

#include <cstdint>
#include <random>

#include <qmeas/framework.hpp>
#include <qmeas/linalg.hpp>
#include <qmeas/types.hpp>

namespace qmeas {

using Rng = std::mt19937_64;

/// Complex Gaussian matrix (independent standard normal real/imag parts).
CMatrix random_gaussian(Eigen::Index rows, Eigen::Index cols, Rng& rng);

CMatrix random_hermitian(Eigen::Index dim, Rng& rng);

/// Haar-ish unitary from the QR factorization of a Gaussian matrix.
CMatrix random_unitary(Eigen::Index dim, Rng& rng);

DensityOperator random_density(Eigen::Index dim, Rng& rng);

/// Hermitian positive semidefinite matrix.
CMatrix random_psd(Eigen::Index dim, Rng& rng);

MicroState random_micro_state(int levels, Rng& rng);

/// Splits a dim-dimensional space into `cells` nonempty orthogonal projectors
/// along a random unitary frame; they sum to the identity by construction.
std::vector<Projector> random_cell_partition(Eigen::Index dim, int cells, Rng& rng);

/// Random instrument with Hermitian free Hamiltonian and couplings and a
/// random valid cell partition.
InstrumentModel random_instrument(Eigen::Index dim, int levels, Rng& rng);

}  // namespace qmeas
