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

//! Generic measurement model: a finite-dimensional microsystem coupled to a
//! finite instrument whose pointer positions are orthogonal phase cells.
//! The statistics tensor collects every trace the measurement statistics
//! depend on; expectations, pointer probabilities, conditional expectations,
//! the reduced microsystem state, and the ideal/normal classification are all
//! evaluated from it.

#pragma once

#include <optional>
#include <string>
#include <vector>

#include <qmeas/linalg.hpp>
#include <qmeas/types.hpp>

namespace qmeas {

/// Pure microsystem state: a normalized amplitude vector over the energy
/// eigenbasis (the standard basis of C^n).
class MicroState {
 public:
  explicit MicroState(CVector amplitudes, const Tolerances& tol = {});

  const CVector& amplitudes() const { return amplitudes_; }
  int level_count() const { return static_cast<int>(amplitudes_.size()); }

 private:
  CVector amplitudes_;
};

/// Microsystem spectrum: the energy of each eigenlevel (hbar = 1). The
/// eigenbasis is fixed to the standard basis; observables are supplied as
/// matrices in that basis.
class MicroSystem {
 public:
  explicit MicroSystem(RVector energies);

  const RVector& energies() const { return energies_; }
  int level_count() const { return static_cast<int>(energies_.size()); }

 private:
  RVector energies_;
};

/// Finite instrument: free Hamiltonian, one coupling operator per microsystem
/// level (the coupling induces no transitions between levels), and one phase
/// cell per level. Cells must be mutually orthogonal and complete.
class InstrumentModel {
 public:
  InstrumentModel(CMatrix free_hamiltonian, std::vector<CMatrix> couplings,
                  std::vector<Projector> cells, const Tolerances& tol = {});

  const CMatrix& free_hamiltonian() const { return free_hamiltonian_; }
  const CMatrix& coupling(int level) const;
  const Projector& cell(int cell) const;
  int level_count() const { return static_cast<int>(couplings_.size()); }
  Eigen::Index dim() const { return free_hamiltonian_.rows(); }

 private:
  CMatrix free_hamiltonian_;
  std::vector<CMatrix> couplings_;
  std::vector<Projector> cells_;
};

/// The complete measurement statistic: one complex value per
/// (level r, level s, cell) triple. Diagonal slices (r == s) are the cell
/// weights of the branch states; cross slices carry the residual coherence.
struct StatTensor {
  int levels = 0;
  std::vector<Complex> values;  // index ((r * levels) + s) * levels + cell

  StatTensor() = default;
  explicit StatTensor(int level_count)
      : levels(level_count),
        values(static_cast<std::size_t>(level_count) * level_count * level_count) {}

  Complex& at(int r, int s, int cell) {
    return values[(static_cast<std::size_t>(r) * levels + s) * levels + cell];
  }
  Complex at(int r, int s, int cell) const {
    return values[(static_cast<std::size_t>(r) * levels + s) * levels + cell];
  }
  /// Real part of a diagonal entry: the weight of `cell` in branch r's state.
  double diag(int r, int cell) const { return at(r, r, cell).real(); }
};

/// Structural checks on a statistics tensor: unit row sums, diagonal entries
/// real in [0, 1], Hermiticity in (r, s), and positive semidefiniteness of
/// each per-cell matrix. Throws ConsistencyError on violation.
void validate_stat_tensor(const StatTensor& stats, double tol = 1e-10);

/// Effective instrument Hamiltonian for one microsystem level:
/// free Hamiltonian + coupling(level) + energy(level) * identity.
CMatrix effective_hamiltonian(const MicroSystem& system, const InstrumentModel& instrument,
                              int level);

/// Instrument state evolved between two branches:
/// U_r(t)^dagger * Omega * U_s(t) with U_r(t) = exp(i t K_r). For r == s this
/// is ordinary unitary evolution and the result is again a density operator.
CMatrix cross_evolved_state(const InstrumentModel& instrument, const MicroSystem& system,
                            const DensityOperator& omega, int r, int s, double t,
                            const Tolerances& tol = {});

/// Builds the full statistics tensor at time t from an initial instrument
/// state. Output satisfies the StatTensor structural checks.
StatTensor stat_tensor(const InstrumentModel& instrument, const MicroSystem& system,
                       const DensityOperator& omega, double t, const Tolerances& tol = {});

/// Expectation value of a Hermitian microsystem observable immediately before
/// the pointer is read. The assembled value must be real to tolerance; the
/// residual imaginary part is checked and discarded.
double expectation(const StatTensor& stats, const MicroState& state, const CMatrix& observable,
                   const Tolerances& tol = {});

/// Probability of each pointer cell.
RVector pointer_probabilities(const StatTensor& stats, const MicroState& state,
                              const Tolerances& tol = {});

/// Expectation value of a Hermitian observable conditioned on the pointer
/// being found in `cell`. Defined only when that cell's probability is above
/// the floor; otherwise throws ValidationError.
double conditional_expectation(const StatTensor& stats, const MicroState& state,
                               const CMatrix& observable, int cell,
                               const Tolerances& tol = {});

/// Reduced microsystem state after coupling: diagonal |c_r|^2, off-diagonal
/// entries damped by the summed cross statistics, arranged so that
/// Tr(rho * A) == expectation(stats, state, A) for every Hermitian A.
DensityOperator reduced_state(const StatTensor& stats, const MicroState& state,
                              const Tolerances& tol = {});

enum class Verdict { kIdeal, kNormal, kUnclassified };

std::string to_string(Verdict verdict);

/// Classification outcome. `assignment` maps each microsystem level to its
/// pointer cell when that map is an invertible function; `eta` is the largest
/// pointer deficit max_r (1 - diag(r, assignment(r))).
struct ClassificationReport {
  Verdict verdict = Verdict::kUnclassified;
  std::optional<std::vector<int>> assignment;
  double eta = 0.0;
  Eigen::MatrixXd cell_weights;  ///< per-(level, cell) diagnostic values
  bool argmax_tie = false;
  double offdiag_max = 0.0;      ///< largest |cross entry| over r != s
  double offdiag_bound = 0.0;    ///< sqrt(max(eta, ideal_tol))
  bool offdiag_ok = true;        ///< offdiag_max <= offdiag_bound
};

/// Assigns each level to its maximal-weight cell and grades the instrument:
/// Ideal when the assignment is a permutation and every deficit is within
/// ideal_tol; Normal when the deficit is small but nonzero (below
/// eta_threshold); Unclassified otherwise. Ties within tie_tol are refused
/// rather than silently resolved.
ClassificationReport classify(const StatTensor& stats, double ideal_tol = 1e-12,
                              double eta_threshold = 1e-2, double tie_tol = 1e-9);

}  // namespace qmeas
