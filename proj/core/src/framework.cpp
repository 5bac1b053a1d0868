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

#include "qmeas/framework.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace qmeas {

namespace {

void require_level(int level, int count, const char* what) {
  if (level < 0 || level >= count) {
    throw ValidationError(std::string(what) + ": level index " + std::to_string(level) +
                          " out of range [0, " + std::to_string(count) + ")");
  }
}

void require_hermitian_observable(const CMatrix& observable, int levels, double tol,
                                  const char* what) {
  if (observable.rows() != levels || observable.cols() != levels) {
    throw ValidationError(std::string(what) + ": observable must be " + std::to_string(levels) +
                          "x" + std::to_string(levels));
  }
  if (!is_hermitian(observable, tol)) {
    throw ValidationError(std::string(what) + ": observable is not Hermitian to tolerance");
  }
}

}  // namespace

MicroState::MicroState(CVector amplitudes, const Tolerances& tol)
    : amplitudes_(std::move(amplitudes)) {
  if (amplitudes_.size() == 0) {
    throw ValidationError("MicroState: amplitude vector is empty");
  }
  if (amplitudes_.size() > kMaxVectorDim) {
    throw ValidationError("MicroState: dimension exceeds the configured maximum");
  }
  const double norm_dev = std::abs(amplitudes_.squaredNorm() - 1.0);
  if (norm_dev > tol.state_norm) {
    throw ValidationError("MicroState: amplitudes are not normalized, |norm^2 - 1| = " +
                          std::to_string(norm_dev));
  }
}

MicroSystem::MicroSystem(RVector energies) : energies_(std::move(energies)) {
  if (energies_.size() == 0) {
    throw ValidationError("MicroSystem: energy vector is empty");
  }
  if (!energies_.allFinite()) {
    throw ValidationError("MicroSystem: energies must be finite");
  }
}

InstrumentModel::InstrumentModel(CMatrix free_hamiltonian, std::vector<CMatrix> couplings,
                                 std::vector<Projector> cells, const Tolerances& tol)
    : free_hamiltonian_(std::move(free_hamiltonian)),
      couplings_(std::move(couplings)),
      cells_(std::move(cells)) {
  const Eigen::Index d = free_hamiltonian_.rows();
  if (d == 0 || free_hamiltonian_.cols() != d) {
    throw ValidationError("InstrumentModel: free Hamiltonian must be square and nonempty");
  }
  if (d > kMaxMatrixDim) {
    throw ValidationError("InstrumentModel: dimension exceeds the configured maximum");
  }
  if (!is_hermitian(free_hamiltonian_, tol.hermitian)) {
    throw ValidationError("InstrumentModel: free Hamiltonian is not Hermitian");
  }
  if (couplings_.empty() || couplings_.size() != cells_.size()) {
    throw ValidationError("InstrumentModel: need one coupling and one cell per level");
  }
  for (const CMatrix& v : couplings_) {
    if (v.rows() != d || v.cols() != d) {
      throw ValidationError("InstrumentModel: coupling dimension mismatch");
    }
    if (!is_hermitian(v, tol.hermitian)) {
      throw ValidationError("InstrumentModel: coupling is not Hermitian");
    }
  }
  for (const Projector& p : cells_) {
    if (p.dim() != d) {
      throw ValidationError("InstrumentModel: cell dimension mismatch");
    }
  }
  // Cells must be mutually orthogonal and resolve the identity.
  CMatrix sum = CMatrix::Zero(d, d);
  for (std::size_t a = 0; a < cells_.size(); ++a) {
    sum += cells_[a].matrix();
    for (std::size_t b = a + 1; b < cells_.size(); ++b) {
      const double overlap =
          (cells_[a].matrix() * cells_[b].matrix()).cwiseAbs().maxCoeff();
      if (overlap > tol.idempotent) {
        throw ValidationError("InstrumentModel: cells " + std::to_string(a) + " and " +
                              std::to_string(b) + " are not orthogonal");
      }
    }
  }
  sum -= CMatrix::Identity(d, d);
  if (sum.cwiseAbs().maxCoeff() > tol.idempotent) {
    throw ValidationError("InstrumentModel: cells do not sum to the identity");
  }
}

const CMatrix& InstrumentModel::coupling(int level) const {
  require_level(level, level_count(), "InstrumentModel::coupling");
  return couplings_[static_cast<std::size_t>(level)];
}

const Projector& InstrumentModel::cell(int cell) const {
  require_level(cell, level_count(), "InstrumentModel::cell");
  return cells_[static_cast<std::size_t>(cell)];
}

void validate_stat_tensor(const StatTensor& stats, double tol) {
  const int n = stats.levels;
  if (n <= 0 || stats.values.size() != static_cast<std::size_t>(n) * n * n) {
    throw ConsistencyError("stat tensor: storage does not match the level count");
  }
  for (int r = 0; r < n; ++r) {
    Complex row_sum = 0.0;
    for (int cell = 0; cell < n; ++cell) {
      const Complex d = stats.at(r, r, cell);
      if (std::abs(d.imag()) > tol) {
        throw ConsistencyError("stat tensor: diagonal entry has imaginary part");
      }
      if (d.real() < -tol || d.real() > 1.0 + tol) {
        throw ConsistencyError("stat tensor: diagonal entry outside [0, 1]");
      }
      row_sum += d;
    }
    if (std::abs(row_sum - Complex(1.0, 0.0)) > tol) {
      throw ConsistencyError("stat tensor: diagonal row sum deviates from 1");
    }
  }
  for (int cell = 0; cell < n; ++cell) {
    CMatrix slice(n, n);
    for (int r = 0; r < n; ++r) {
      for (int s = 0; s < n; ++s) {
        slice(r, s) = stats.at(r, s, cell);
      }
    }
    if ((slice - slice.adjoint()).cwiseAbs().maxCoeff() > tol) {
      throw ConsistencyError("stat tensor: cell slice is not Hermitian in (r, s)");
    }
    Eigen::SelfAdjointEigenSolver<CMatrix> solver(slice, Eigen::EigenvaluesOnly);
    if (solver.eigenvalues().minCoeff() < -tol) {
      throw ConsistencyError("stat tensor: cell slice is not positive semidefinite");
    }
    for (int r = 0; r < n; ++r) {
      for (int s = 0; s < n; ++s) {
        if (r == s) continue;
        const double lhs = stats.diag(r, cell) * stats.diag(s, cell);
        const double rhs = std::norm(stats.at(r, s, cell));
        if (rhs > lhs + tol) {
          throw ConsistencyError("stat tensor: Cauchy-Schwarz bound violated");
        }
      }
    }
  }
}

CMatrix effective_hamiltonian(const MicroSystem& system, const InstrumentModel& instrument,
                              int level) {
  if (system.level_count() != instrument.level_count()) {
    throw ValidationError("effective_hamiltonian: system and instrument level counts differ");
  }
  require_level(level, system.level_count(), "effective_hamiltonian");
  CMatrix h = instrument.free_hamiltonian() + instrument.coupling(level);
  h += system.energies()[level] * CMatrix::Identity(instrument.dim(), instrument.dim());
  return h;
}

CMatrix cross_evolved_state(const InstrumentModel& instrument, const MicroSystem& system,
                            const DensityOperator& omega, int r, int s, double t,
                            const Tolerances& tol) {
  if (omega.dim() != instrument.dim()) {
    throw ValidationError("cross_evolved_state: state dimension does not match the instrument");
  }
  if (t < 0.0) {
    throw ValidationError("cross_evolved_state: time must be nonnegative");
  }
  const CMatrix u_r = expm_hermitian(effective_hamiltonian(system, instrument, r), t, tol);
  const CMatrix u_s = expm_hermitian(effective_hamiltonian(system, instrument, s), t, tol);
  return u_r.adjoint() * omega.matrix() * u_s;
}

StatTensor stat_tensor(const InstrumentModel& instrument, const MicroSystem& system,
                       const DensityOperator& omega, double t, const Tolerances& tol) {
  if (omega.dim() != instrument.dim()) {
    throw ValidationError("stat_tensor: state dimension does not match the instrument");
  }
  if (system.level_count() != instrument.level_count()) {
    throw ValidationError("stat_tensor: system and instrument level counts differ");
  }
  if (t < 0.0) {
    throw ValidationError("stat_tensor: time must be nonnegative");
  }
  const int n = instrument.level_count();
  std::vector<CMatrix> propagators;
  propagators.reserve(static_cast<std::size_t>(n));
  for (int r = 0; r < n; ++r) {
    propagators.push_back(expm_hermitian(effective_hamiltonian(system, instrument, r), t, tol));
  }
  StatTensor stats(n);
  for (int r = 0; r < n; ++r) {
    for (int s = 0; s < n; ++s) {
      const CMatrix evolved = propagators[static_cast<std::size_t>(r)].adjoint() *
                              omega.matrix() * propagators[static_cast<std::size_t>(s)];
      for (int cell = 0; cell < n; ++cell) {
        stats.at(r, s, cell) = trace_product(evolved, instrument.cell(cell).matrix());
      }
    }
  }
  validate_stat_tensor(stats, tol.stats);
  return stats;
}

double expectation(const StatTensor& stats, const MicroState& state, const CMatrix& observable,
                   const Tolerances& tol) {
  const int n = stats.levels;
  if (state.level_count() != n) {
    throw ValidationError("expectation: state level count does not match the tensor");
  }
  require_hermitian_observable(observable, n, tol.hermitian, "expectation");
  const CVector& c = state.amplitudes();
  // Branch pair (r, s) of the composite state carries amplitude c_r conj(c_s)
  // and contributes the (s, r) matrix element of the observable.
  Complex value = 0.0;
  for (int r = 0; r < n; ++r) {
    value += std::norm(c[r]) * observable(r, r);
    for (int s = 0; s < n; ++s) {
      if (s == r) continue;
      Complex cross = 0.0;
      for (int cell = 0; cell < n; ++cell) {
        cross += stats.at(r, s, cell);
      }
      value += cross * c[r] * std::conj(c[s]) * observable(s, r);
    }
  }
  if (std::abs(value.imag()) > tol.imag_residue) {
    throw ConsistencyError("expectation: imaginary residue " + std::to_string(value.imag()) +
                           " exceeds tolerance");
  }
  return value.real();
}

RVector pointer_probabilities(const StatTensor& stats, const MicroState& state,
                              const Tolerances& tol) {
  const int n = stats.levels;
  if (state.level_count() != n) {
    throw ValidationError("pointer_probabilities: state level count does not match the tensor");
  }
  const CVector& c = state.amplitudes();
  RVector w(n);
  double total = 0.0;
  for (int cell = 0; cell < n; ++cell) {
    double value = 0.0;
    for (int r = 0; r < n; ++r) {
      value += std::norm(c[r]) * stats.diag(r, cell);
    }
    if (value < -tol.stats || value > 1.0 + tol.stats) {
      throw ConsistencyError("pointer_probabilities: probability outside [0, 1]");
    }
    w[cell] = value;
    total += value;
  }
  if (std::abs(total - 1.0) > tol.stats) {
    throw ConsistencyError("pointer_probabilities: probabilities do not sum to 1");
  }
  return w;
}

double conditional_expectation(const StatTensor& stats, const MicroState& state,
                               const CMatrix& observable, int cell, const Tolerances& tol) {
  const int n = stats.levels;
  if (state.level_count() != n) {
    throw ValidationError("conditional_expectation: state level count does not match the tensor");
  }
  require_level(cell, n, "conditional_expectation");
  require_hermitian_observable(observable, n, tol.hermitian, "conditional_expectation");
  const double w = pointer_probabilities(stats, state, tol)[cell];
  if (w < tol.w_floor) {
    throw ValidationError("conditional_expectation: cell probability " + std::to_string(w) +
                          " is below the floor; the conditional is undefined");
  }
  const CVector& c = state.amplitudes();
  Complex value = 0.0;
  for (int r = 0; r < n; ++r) {
    for (int s = 0; s < n; ++s) {
      value += stats.at(r, s, cell) * c[r] * std::conj(c[s]) * observable(s, r);
    }
  }
  if (std::abs(value.imag()) > tol.imag_residue) {
    throw ConsistencyError("conditional_expectation: imaginary residue exceeds tolerance");
  }
  return value.real() / w;
}

DensityOperator reduced_state(const StatTensor& stats, const MicroState& state,
                              const Tolerances& tol) {
  const int n = stats.levels;
  if (state.level_count() != n) {
    throw ValidationError("reduced_state: state level count does not match the tensor");
  }
  const CVector& c = state.amplitudes();
  // Partial trace of the composite state over the instrument: the diagonal
  // keeps the branch populations, off-diagonal coherences are damped by the
  // summed cross statistics. Tr(rho A) reproduces expectation() termwise.
  CMatrix rho(n, n);
  for (int r = 0; r < n; ++r) {
    rho(r, r) = std::norm(c[r]);
    for (int s = 0; s < n; ++s) {
      if (s == r) continue;
      Complex cross = 0.0;
      for (int cell = 0; cell < n; ++cell) {
        cross += stats.at(r, s, cell);
      }
      rho(r, s) = cross * c[r] * std::conj(c[s]);
    }
  }
  return DensityOperator(std::move(rho), tol);
}

std::string to_string(Verdict verdict) {
  switch (verdict) {
    case Verdict::kIdeal:
      return "Ideal";
    case Verdict::kNormal:
      return "Normal";
    case Verdict::kUnclassified:
      return "Unclassified";
  }
  return "Unclassified";
}

ClassificationReport classify(const StatTensor& stats, double ideal_tol, double eta_threshold,
                              double tie_tol) {
  const int n = stats.levels;
  if (n <= 0) {
    throw ValidationError("classify: empty tensor");
  }
  ClassificationReport report;
  report.cell_weights = Eigen::MatrixXd(n, n);
  for (int r = 0; r < n; ++r) {
    for (int cell = 0; cell < n; ++cell) {
      report.cell_weights(r, cell) = stats.diag(r, cell);
    }
  }

  std::vector<int> assignment(static_cast<std::size_t>(n), -1);
  double eta = 0.0;
  for (int r = 0; r < n; ++r) {
    int best = 0;
    double best_weight = report.cell_weights(r, 0);
    double second = -1.0;
    for (int cell = 1; cell < n; ++cell) {
      const double weight = report.cell_weights(r, cell);
      if (weight > best_weight) {
        second = best_weight;
        best_weight = weight;
        best = cell;
      } else if (weight > second) {
        second = weight;
      }
    }
    if (n > 1 && best_weight - second <= tie_tol) {
      report.argmax_tie = true;
    }
    assignment[static_cast<std::size_t>(r)] = best;
    eta = std::max(eta, 1.0 - best_weight);
  }
  report.eta = eta;

  std::vector<bool> used(static_cast<std::size_t>(n), false);
  bool permutation = true;
  for (int cell : assignment) {
    if (used[static_cast<std::size_t>(cell)]) {
      permutation = false;
      break;
    }
    used[static_cast<std::size_t>(cell)] = true;
  }

  report.offdiag_max = 0.0;
  for (int r = 0; r < n; ++r) {
    for (int s = 0; s < n; ++s) {
      if (r == s) continue;
      for (int cell = 0; cell < n; ++cell) {
        report.offdiag_max = std::max(report.offdiag_max, std::abs(stats.at(r, s, cell)));
      }
    }
  }
  report.offdiag_bound = std::sqrt(std::max(eta, ideal_tol));
  report.offdiag_ok = report.offdiag_max <= report.offdiag_bound + 1e-15;

  if (report.argmax_tie || !permutation) {
    report.verdict = Verdict::kUnclassified;
    return report;
  }
  report.assignment = assignment;
  if (eta <= ideal_tol) {
    report.verdict = Verdict::kIdeal;
  } else if (eta < eta_threshold) {
    report.verdict = Verdict::kNormal;
  } else {
    report.verdict = Verdict::kUnclassified;
    report.assignment.reset();
  }
  return report;
}

}  // namespace qmeas
