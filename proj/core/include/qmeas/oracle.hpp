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

//! Brute-force verification layer: exact bitstring enumeration, dense chain
//! operators, time-resolved traversal dynamics, and an explicit composite
//! evolution, all independent of the closed forms they cross-check.

#pragma once

#include <cstdint>

#include <qmeas/chain.hpp>
#include <qmeas/framework.hpp>
#include <qmeas/linalg.hpp>
#include <qmeas/types.hpp>

namespace qmeas::oracle {

inline constexpr int kMaxEnumerationHalfLength = 12;
inline constexpr int kMaxDenseHalfLength = 5;
inline constexpr int kMaxEmbedHalfLength = 3;
inline constexpr int kMaxTimeResolvedHalfLength = 7;

enum class OverlapKind { kPlusInMinus, kMinusInPlus };

/// Pointer-error overlap by exhaustive enumeration of all 2^(2L+1) z-basis
/// bitstrings, multiplying per-site diagonal weights and compensated-summing
/// the weights of the strings in the opposing majority cell. Results are
/// byte-identical for any thread count.
double enumerate_overlap(int half_length, double polarization, double coupling,
                         OverlapKind kind, int threads = 1);

/// Full kick operator as an explicit product of per-site rotations
/// exp(i J sigma_x), built by repeated Kronecker products.
CMatrix dense_kick_operator(int half_length, double coupling);

/// Z^dagger * state * Z applied site by site to a dense chain operator, i.e.
/// conjugation by the kick without ever forming the full kick matrix.
CMatrix kick_conjugate(const CMatrix& chain_state, int half_length, double coupling);

/// Dense product states and majority projectors of the 2L+1 site chain.
/// Site 1 is the most significant tensor factor; bit value 0 means spin up.
CMatrix dense_chain_state(int half_length, double polarization);
CMatrix dense_kicked_chain_state(int half_length, double polarization, double coupling);
CMatrix dense_majority_projector(int half_length, bool positive);

/// Kick angle accumulated by one site while a point of the packet starting at
/// x sweeps for time t: the exact integral of the interpolated potential over
/// the window [x - site, x + t - site].
double accumulated_phase(const chain::PotentialSpec& potential, int site, double x, double t);

/// Spatial quadrature grid for the traversal dynamics plus the sampling step
/// of time schedules.
struct GridConfig {
  double x_min = 0.0;
  double x_max = 1.0;
  int points = 801;
  double dt = 0.5;
};

/// One time slice of the traversal dynamics: the 2x2x2 statistics block for
/// branch pair (r, s) and cell, pointer weights for the equal superposition,
/// and whether the record has settled onto the post-traversal values.
struct TimeSeriesRecord {
  static constexpr int kPlus = 0;
  static constexpr int kMinus = 1;

  double t = 0.0;
  Complex stats[2][2][2] = {};
  double w[2] = {0.0, 0.0};
  bool stationary = false;

  double diag(int branch, int cell) const { return stats[branch][branch][cell].real(); }
};

/// Time-resolved statistics of the traversal at time t. The packet's spatial
/// degree of freedom is handled analytically (translations cancel in every
/// trace against the cells); what remains is an x-quadrature over per-site
/// rotation angles accumulated from the potential. The stationary flag
/// compares against the record at the critical time.
TimeSeriesRecord time_resolved_stats(const chain::ChainParams& params,
                                     const chain::PotentialSpec& potential,
                                     const chain::PacketSpec& packet, const GridConfig& grid,
                                     double t, const Tolerances& tol = {});

/// Same, reusing a precomputed critical-time record for the stationarity
/// comparison (one evaluation per call instead of two).
TimeSeriesRecord time_resolved_stats(const chain::ChainParams& params,
                                     const chain::PotentialSpec& potential,
                                     const chain::PacketSpec& packet, const GridConfig& grid,
                                     double t, const TimeSeriesRecord& settled_reference,
                                     const Tolerances& tol = {});

/// Chain-only embedding into the generic engine: the kick enters as the
/// minus-branch coupling applied over unit time, cells are the majority
/// projectors, and the initial instrument state is the polarized product.
InstrumentModel embed_chain_instrument(int half_length, double coupling,
                                       const Tolerances& tol = {});
DensityOperator embed_chain_state(int half_length, double polarization,
                                  const Tolerances& tol = {});

/// Deviations between the explicit composite evolution and the statistics-
/// tensor path, maximized over `observable_count` random Hermitian
/// observables.
struct CompositeCheckReport {
  double assembly_dev = 0.0;     ///< sum form vs direct conjugation of the composite
  double expectation_dev = 0.0;
  double weight_dev = 0.0;
  double conditional_dev = 0.0;
  double reduced_dev = 0.0;

  double max_deviation() const;
};

CompositeCheckReport dense_composite_check(const MicroState& state, const MicroSystem& system,
                                           const InstrumentModel& instrument,
                                           const DensityOperator& omega, double t,
                                           int observable_count, std::uint64_t seed,
                                           const Tolerances& tol = {});

}  // namespace qmeas::oracle
