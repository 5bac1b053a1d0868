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

#include "qmeas/oracle.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <string>
#include <utility>
#include <vector>

#include <qmeas/parallel.hpp>
#include <qmeas/random.hpp>

namespace qmeas::oracle {

namespace {

void require_half_length(int half_length, int cap, const char* what) {
  if (half_length < 0 || half_length > cap) {
    throw ValidationError(std::string(what) + ": half_length " + std::to_string(half_length) +
                          " outside [0, " + std::to_string(cap) + "]");
  }
}

/// Single-site kick rotation exp(i theta sigma_x).
Eigen::Matrix2cd site_rotation(double theta) {
  const double c = std::cos(theta);
  const double s = std::sin(theta);
  Eigen::Matrix2cd z;
  z << Complex(c, 0.0), Complex(0.0, s), Complex(0.0, s), Complex(c, 0.0);
  return z;
}

/// Applies an x-rotation gate [[c, i s], [i s, c]] on every site's pairing of
/// a contiguous buffer holding one column (or one row) of the chain operator.
/// The gate's real/imaginary structure is fixed, so the update stays in plain
/// double arithmetic.
void apply_x_rotations_to_span(Complex* span, int sites, double c, double s) {
  const Eigen::Index dim = Eigen::Index{1} << sites;
  for (int site = 1; site <= sites; ++site) {
    const Eigen::Index stride = Eigen::Index{1} << (sites - site);
    for (Eigen::Index block = 0; block < dim; block += 2 * stride) {
      for (Eigen::Index offset = 0; offset < stride; ++offset) {
        Complex& top = span[block + offset];
        Complex& bottom = span[block + offset + stride];
        const double tr = top.real();
        const double ti = top.imag();
        const double br = bottom.real();
        const double bi = bottom.imag();
        top = Complex(c * tr - s * bi, c * ti + s * br);
        bottom = Complex(c * br - s * ti, c * bi + s * tr);
      }
    }
  }
}

/// state <- (tensor power of the x rotation) * state. One cached pass per
/// column with every site gate fused, so the matrix is swept once.
void apply_x_rotations_left(CMatrix& state, int sites, double c, double s) {
  const Eigen::Index dim = state.rows();
  for (Eigen::Index col = 0; col < dim; ++col) {
    apply_x_rotations_to_span(state.data() + col * dim, sites, c, s);
  }
}

/// state <- state * (tensor power of the x rotation). Rows are gathered into
/// a row-major tile, processed in cache, and scattered back: again a single
/// sweep of the matrix. The rotation is symmetric, so rows transform by the
/// same gate.
void apply_x_rotations_right(CMatrix& state, int sites, double c, double s) {
  const Eigen::Index dim = state.rows();
  constexpr Eigen::Index kTileRows = 48;
  std::vector<Complex> tile(static_cast<std::size_t>(kTileRows) * dim);
  for (Eigen::Index row0 = 0; row0 < dim; row0 += kTileRows) {
    const Eigen::Index rows = std::min(kTileRows, dim - row0);
    for (Eigen::Index col = 0; col < dim; ++col) {
      const Complex* column = state.data() + col * dim + row0;
      for (Eigen::Index r = 0; r < rows; ++r) {
        tile[static_cast<std::size_t>(r) * dim + col] = column[r];
      }
    }
    for (Eigen::Index r = 0; r < rows; ++r) {
      apply_x_rotations_to_span(tile.data() + static_cast<std::size_t>(r) * dim, sites, c, s);
    }
    for (Eigen::Index col = 0; col < dim; ++col) {
      Complex* column = state.data() + col * dim + row0;
      for (Eigen::Index r = 0; r < rows; ++r) {
        column[r] = tile[static_cast<std::size_t>(r) * dim + col];
      }
    }
  }
}

/// Probability-style mass of the up-spin count lying in [min_up, max_up] for
/// per-site complex diagonal pairs, by the same convolution as the real DP.
Complex complex_majority_mass(const std::vector<std::pair<Complex, Complex>>& weights,
                              int min_up, int max_up) {
  const int sites = static_cast<int>(weights.size());
  std::vector<Complex> dp(static_cast<std::size_t>(sites) + 1, Complex(0.0, 0.0));
  dp[0] = Complex(1.0, 0.0);
  for (int i = 0; i < sites; ++i) {
    const auto& [up, down] = weights[static_cast<std::size_t>(i)];
    for (int k = i + 1; k >= 1; --k) {
      dp[static_cast<std::size_t>(k)] =
          dp[static_cast<std::size_t>(k)] * down + dp[static_cast<std::size_t>(k - 1)] * up;
    }
    dp[0] *= down;
  }
  min_up = std::max(min_up, 0);
  max_up = std::min(max_up, sites);
  Complex mass(0.0, 0.0);
  for (int k = min_up; k <= max_up; ++k) {
    mass += dp[static_cast<std::size_t>(k)];
  }
  return mass;
}

CMatrix kron_power(const CMatrix& site, int count) {
  CMatrix out = site;
  for (int i = 1; i < count; ++i) {
    out = kron(out, site);
  }
  return out;
}

/// sigma_x acting on one site of the chain, as a dense operator.
CMatrix chain_site_sigma_x(int sites, int site) {
  const Eigen::Index left_dim = Eigen::Index{1} << (site - 1);
  const Eigen::Index right_dim = Eigen::Index{1} << (sites - site);
  CMatrix out = kron(CMatrix::Identity(left_dim, left_dim), pauli_x());
  return kron(out, CMatrix::Identity(right_dim, right_dim));
}

}  // namespace

double enumerate_overlap(int half_length, double polarization, double coupling,
                         OverlapKind kind, int threads) {
  require_half_length(half_length, kMaxEnumerationHalfLength, "enumerate_overlap");
  if (!(std::abs(polarization) <= 1.0)) {
    throw ValidationError("enumerate_overlap: |polarization| <= 1 violated");
  }
  const int sites = 2 * half_length + 1;
  double up_weight;
  double down_weight;
  bool count_lower_tail;  // membership: up count <= half_length
  if (kind == OverlapKind::kPlusInMinus) {
    up_weight = 0.5 * (1.0 + polarization);
    down_weight = 0.5 * (1.0 - polarization);
    count_lower_tail = true;
  } else {
    // Only the z component of the kicked site state survives on the diagonal.
    const double rotated_z = polarization * std::cos(2.0 * coupling);
    up_weight = 0.5 * (1.0 + rotated_z);
    down_weight = 0.5 * (1.0 - rotated_z);
    count_lower_tail = false;
  }
  const std::uint64_t total = std::uint64_t{1} << sites;
  return deterministic_sum(
      total, std::size_t{1} << 18, threads,
      [&](std::size_t begin, std::size_t end) {
        double sum = 0.0;
        double carry = 0.0;
        for (std::uint64_t bits = begin; bits < end; ++bits) {
          // Bit value 1 marks a down spin.
          const int ups = sites - std::popcount(bits);
          const bool member = count_lower_tail ? ups <= half_length : ups >= half_length + 1;
          if (!member) continue;
          double weight = 1.0;
          for (int site = 0; site < sites; ++site) {
            weight *= (bits >> site) & 1u ? down_weight : up_weight;
          }
          const double y = weight - carry;
          const double t = sum + y;
          carry = (t - sum) - y;
          sum = t;
        }
        return sum;
      });
}

CMatrix dense_kick_operator(int half_length, double coupling) {
  require_half_length(half_length, kMaxDenseHalfLength, "dense_kick_operator");
  return kron_power(site_rotation(coupling), 2 * half_length + 1);
}

CMatrix kick_conjugate(const CMatrix& chain_state, int half_length, double coupling) {
  require_half_length(half_length, kMaxDenseHalfLength, "kick_conjugate");
  const int sites = 2 * half_length + 1;
  const Eigen::Index dim = Eigen::Index{1} << sites;
  if (chain_state.rows() != dim || chain_state.cols() != dim) {
    throw ValidationError("kick_conjugate: state dimension does not match the chain");
  }
  CMatrix out = chain_state;
  const double c = std::cos(coupling);
  const double s = std::sin(coupling);
  apply_x_rotations_left(out, sites, c, -s);  // adjoint of the kick
  apply_x_rotations_right(out, sites, c, s);
  return out;
}

CMatrix dense_chain_state(int half_length, double polarization) {
  require_half_length(half_length, kMaxDenseHalfLength, "dense_chain_state");
  return kron_power(chain::site_state_plus(polarization).matrix(), 2 * half_length + 1);
}

CMatrix dense_kicked_chain_state(int half_length, double polarization, double coupling) {
  require_half_length(half_length, kMaxDenseHalfLength, "dense_kicked_chain_state");
  return kron_power(chain::site_state_minus(polarization, coupling).matrix(),
                    2 * half_length + 1);
}

CMatrix dense_majority_projector(int half_length, bool positive) {
  require_half_length(half_length, kMaxDenseHalfLength, "dense_majority_projector");
  const int sites = 2 * half_length + 1;
  const Eigen::Index dim = Eigen::Index{1} << sites;
  CMatrix out = CMatrix::Zero(dim, dim);
  for (Eigen::Index idx = 0; idx < dim; ++idx) {
    const int ups = sites - std::popcount(static_cast<std::uint64_t>(idx));
    const bool in_plus = ups > half_length;  // no zero eigenvalue: 2L+1 is odd
    if (in_plus == positive) out(idx, idx) = 1.0;
  }
  return out;
}

double accumulated_phase(const chain::PotentialSpec& potential, int site, double x, double t) {
  if (t < 0.0) {
    throw ValidationError("accumulated_phase: time must be nonnegative");
  }
  return potential.integral_window(x - site, x + t - site);
}

namespace {

struct QuadratureGrid {
  std::vector<double> nodes;
  std::vector<double> weights;  // trapezoid weight times |packet|^2
};

QuadratureGrid build_grid(const chain::PacketSpec& packet, const GridConfig& grid,
                          const Tolerances& tol) {
  if (grid.points < 2) {
    throw ValidationError("grid: need at least two quadrature points");
  }
  if (!(grid.dt > 0.0)) {
    throw ValidationError("grid: dt must be positive");
  }
  if (grid.x_min > packet.left() || grid.x_max < packet.right()) {
    throw ValidationError("grid: [x_min, x_max] must cover the packet support");
  }
  const double step = (grid.x_max - grid.x_min) / static_cast<double>(grid.points - 1);
  QuadratureGrid out;
  out.nodes.resize(static_cast<std::size_t>(grid.points));
  out.weights.resize(static_cast<std::size_t>(grid.points));
  double norm = 0.0;
  for (int k = 0; k < grid.points; ++k) {
    const double x = grid.x_min + k * step;
    const double w = (k == 0 || k == grid.points - 1) ? 0.5 * step : step;
    out.nodes[static_cast<std::size_t>(k)] = x;
    out.weights[static_cast<std::size_t>(k)] = w * std::norm(packet.value(x));
    norm += out.weights[static_cast<std::size_t>(k)];
  }
  if (std::abs(norm - 1.0) > tol.quadrature) {
    throw ValidationError("grid: too coarse, quadrature norm of the packet is " +
                          std::to_string(norm) + " (must be 1 within " +
                          std::to_string(tol.quadrature) + ")");
  }
  return out;
}

TimeSeriesRecord evaluate_record(const chain::ChainParams& params,
                                 const chain::PotentialSpec& potential,
                                 const chain::PacketSpec& packet, const QuadratureGrid& grid,
                                 double t) {
  const int sites = params.site_count();
  const int half = params.half_length;
  const double m = params.polarization;

  TimeSeriesRecord record;
  record.t = t;

  // Plus branch: the chain never feels the particle, so its cell weights are
  // the static polarized-product masses.
  const std::vector<std::pair<double, double>> plus_weights(
      static_cast<std::size_t>(sites), {0.5 * (1.0 + m), 0.5 * (1.0 - m)});
  const double plus_in_plus = chain::majority_mass(plus_weights, half + 1, sites);
  const double plus_in_minus = chain::majority_mass(plus_weights, 0, half);
  record.stats[0][0][0] = plus_in_plus;
  record.stats[0][0][1] = plus_in_minus;

  // Minus branch and the cross block: for each packet point the chain sees a
  // product of per-site rotations by the accumulated angles, and the cell
  // masses reduce to convolutions over per-site diagonal weights.
  Complex minus_diag[2] = {0.0, 0.0};
  Complex cross[2] = {0.0, 0.0};
  std::vector<std::pair<double, double>> kicked(static_cast<std::size_t>(sites));
  std::vector<std::pair<Complex, Complex>> mixed(static_cast<std::size_t>(sites));
  for (std::size_t k = 0; k < grid.nodes.size(); ++k) {
    const double weight = grid.weights[k];
    if (weight == 0.0) continue;
    const double x = grid.nodes[k];
    for (int site = 1; site <= sites; ++site) {
      const double theta = accumulated_phase(potential, site, x, t);
      const double rotated_z = m * std::cos(2.0 * theta);
      kicked[static_cast<std::size_t>(site - 1)] = {0.5 * (1.0 + rotated_z),
                                                    0.5 * (1.0 - rotated_z)};
      // Diagonal of (polarized site state) * (site rotation).
      const double c = std::cos(theta);
      mixed[static_cast<std::size_t>(site - 1)] = {Complex(0.5 * (1.0 + m) * c, 0.0),
                                                   Complex(0.5 * (1.0 - m) * c, 0.0)};
    }
    minus_diag[0] += weight * chain::majority_mass(kicked, half + 1, sites);
    minus_diag[1] += weight * chain::majority_mass(kicked, 0, half);
    cross[0] += weight * complex_majority_mass(mixed, half + 1, sites);
    cross[1] += weight * complex_majority_mass(mixed, 0, half);
  }
  for (int cell = 0; cell < 2; ++cell) {
    record.stats[1][1][cell] = minus_diag[cell];
    record.stats[0][1][cell] = cross[cell];
    record.stats[1][0][cell] = std::conj(cross[cell]);
  }
  for (int cell = 0; cell < 2; ++cell) {
    record.w[cell] = 0.5 * (record.diag(0, cell) + record.diag(1, cell));
  }

  for (int branch = 0; branch < 2; ++branch) {
    const double row = record.diag(branch, 0) + record.diag(branch, 1);
    if (std::abs(row - 1.0) > 1e-9) {
      throw ConsistencyError("time_resolved_stats: cell weights of a branch do not sum to 1");
    }
    for (int cell = 0; cell < 2; ++cell) {
      const Complex d = record.stats[branch][branch][cell];
      if (std::abs(d.imag()) > 1e-9 || d.real() < -1e-9 || d.real() > 1.0 + 1e-9) {
        throw ConsistencyError("time_resolved_stats: invalid diagonal entry");
      }
    }
  }
  return record;
}

double record_distance(const TimeSeriesRecord& a, const TimeSeriesRecord& b) {
  double dev = 0.0;
  for (int r = 0; r < 2; ++r) {
    for (int s = 0; s < 2; ++s) {
      for (int cell = 0; cell < 2; ++cell) {
        dev = std::max(dev, std::abs(a.stats[r][s][cell] - b.stats[r][s][cell]));
      }
    }
  }
  return dev;
}

void validate_traversal_inputs(const chain::ChainParams& params,
                               const chain::PotentialSpec& potential,
                               const chain::PacketSpec& packet, double t) {
  if (params.half_length > kMaxTimeResolvedHalfLength) {
    throw ValidationError("time_resolved_stats: half_length exceeds the cap " +
                          std::to_string(kMaxTimeResolvedHalfLength));
  }
  if (t < 0.0) {
    throw ValidationError("time_resolved_stats: time must be nonnegative");
  }
  if (packet.right() > potential.left() + 1.0) {
    throw ValidationError(
        "time_resolved_stats: packet must start clear of the first site's potential "
        "(packet right edge <= potential left edge + 1)");
  }
}

}  // namespace

TimeSeriesRecord time_resolved_stats(const chain::ChainParams& params,
                                     const chain::PotentialSpec& potential,
                                     const chain::PacketSpec& packet, const GridConfig& grid,
                                     double t, const TimeSeriesRecord& settled_reference,
                                     const Tolerances& tol) {
  validate_traversal_inputs(params, potential, packet, t);
  const QuadratureGrid quadrature = build_grid(packet, grid, tol);
  TimeSeriesRecord record = evaluate_record(params, potential, packet, quadrature, t);
  const double tau = chain::critical_time(params.half_length, potential.right(), packet.left());
  record.stationary =
      t >= tau && record_distance(record, settled_reference) <= tol.stationary;
  return record;
}

TimeSeriesRecord time_resolved_stats(const chain::ChainParams& params,
                                     const chain::PotentialSpec& potential,
                                     const chain::PacketSpec& packet, const GridConfig& grid,
                                     double t, const Tolerances& tol) {
  validate_traversal_inputs(params, potential, packet, t);
  const QuadratureGrid quadrature = build_grid(packet, grid, tol);
  const double tau = chain::critical_time(params.half_length, potential.right(), packet.left());
  TimeSeriesRecord record = evaluate_record(params, potential, packet, quadrature, t);
  if (t >= tau) {
    const TimeSeriesRecord settled = evaluate_record(params, potential, packet, quadrature, tau);
    record.stationary = record_distance(record, settled) <= tol.stationary;
  }
  return record;
}

InstrumentModel embed_chain_instrument(int half_length, double coupling,
                                       const Tolerances& tol) {
  require_half_length(half_length, kMaxEmbedHalfLength, "embed_chain_instrument");
  const int sites = 2 * half_length + 1;
  const Eigen::Index dim = Eigen::Index{1} << sites;
  CMatrix kick_generator = CMatrix::Zero(dim, dim);
  for (int site = 1; site <= sites; ++site) {
    kick_generator += chain_site_sigma_x(sites, site);
  }
  kick_generator *= coupling;
  std::vector<CMatrix> couplings;
  couplings.push_back(CMatrix::Zero(dim, dim));
  couplings.push_back(std::move(kick_generator));
  std::vector<Projector> cells;
  cells.emplace_back(dense_majority_projector(half_length, /*positive=*/true), tol);
  cells.emplace_back(dense_majority_projector(half_length, /*positive=*/false), tol);
  return InstrumentModel(CMatrix::Zero(dim, dim), std::move(couplings), std::move(cells), tol);
}

DensityOperator embed_chain_state(int half_length, double polarization, const Tolerances& tol) {
  require_half_length(half_length, kMaxEmbedHalfLength, "embed_chain_state");
  return DensityOperator(dense_chain_state(half_length, polarization), tol);
}

double CompositeCheckReport::max_deviation() const {
  return std::max({assembly_dev, expectation_dev, weight_dev, conditional_dev, reduced_dev});
}

CompositeCheckReport dense_composite_check(const MicroState& state, const MicroSystem& system,
                                           const InstrumentModel& instrument,
                                           const DensityOperator& omega, double t,
                                           int observable_count, std::uint64_t seed,
                                           const Tolerances& tol) {
  const int n = instrument.level_count();
  const Eigen::Index dim_inst = instrument.dim();
  const Eigen::Index dim_composite = n * dim_inst;
  if (dim_composite > (Eigen::Index{1} << 12)) {
    throw ValidationError("dense_composite_check: composite dimension exceeds 2^12");
  }
  if (state.level_count() != n || system.level_count() != n) {
    throw ValidationError("dense_composite_check: level counts do not match");
  }

  std::vector<CMatrix> propagators;
  propagators.reserve(static_cast<std::size_t>(n));
  for (int r = 0; r < n; ++r) {
    propagators.push_back(expm_hermitian(effective_hamiltonian(system, instrument, r), t, tol));
  }
  const CVector& c = state.amplitudes();

  // Composite state, sum form: blocks c_r conj(c_s) U_r^dagger Omega U_s.
  CMatrix composite_sum = CMatrix::Zero(dim_composite, dim_composite);
  for (int r = 0; r < n; ++r) {
    for (int s = 0; s < n; ++s) {
      composite_sum.block(r * dim_inst, s * dim_inst, dim_inst, dim_inst) =
          (c[r] * std::conj(c[s])) *
          (propagators[static_cast<std::size_t>(r)].adjoint() * omega.matrix() *
           propagators[static_cast<std::size_t>(s)]);
    }
  }

  // Composite state, direct form: conjugate the initial product state by the
  // block-diagonal propagator.
  CMatrix u_composite = CMatrix::Zero(dim_composite, dim_composite);
  for (int r = 0; r < n; ++r) {
    u_composite.block(r * dim_inst, r * dim_inst, dim_inst, dim_inst) =
        propagators[static_cast<std::size_t>(r)];
  }
  const CMatrix initial = kron(CMatrix(c * c.adjoint()), omega.matrix(),
                               /*max_dim=*/dim_composite);
  const CMatrix composite_direct = u_composite.adjoint() * initial * u_composite;

  CompositeCheckReport report;
  report.assembly_dev = (composite_sum - composite_direct).cwiseAbs().maxCoeff();

  const StatTensor stats = stat_tensor(instrument, system, omega, t, tol);
  const RVector w_path = pointer_probabilities(stats, state, tol);
  const CMatrix identity_n = CMatrix::Identity(n, n);

  // Pointer weights from the dense state.
  RVector w_dense(n);
  for (int cell = 0; cell < n; ++cell) {
    const CMatrix projector =
        kron(identity_n, instrument.cell(cell).matrix(), dim_composite);
    const Complex value = trace_product(composite_direct, projector);
    w_dense[cell] = value.real();
    report.weight_dev = std::max(report.weight_dev, std::abs(value - Complex(w_path[cell])));
  }

  Rng rng(seed);
  for (int k = 0; k < observable_count; ++k) {
    const CMatrix a = random_hermitian(n, rng);
    const Complex dense_value =
        trace_product(composite_direct, kron(a, CMatrix::Identity(dim_inst, dim_inst),
                                             dim_composite));
    if (std::abs(dense_value.imag()) > tol.imag_residue) {
      throw ConsistencyError("dense_composite_check: dense expectation has imaginary residue");
    }
    const double path_value = expectation(stats, state, a, tol);
    report.expectation_dev =
        std::max(report.expectation_dev, std::abs(dense_value.real() - path_value));

    for (int cell = 0; cell < n; ++cell) {
      if (w_dense[cell] < tol.w_floor || w_path[cell] < tol.w_floor) continue;
      const Complex dense_cond =
          trace_product(composite_direct,
                        kron(a, instrument.cell(cell).matrix(), dim_composite)) /
          w_dense[cell];
      const double path_cond = conditional_expectation(stats, state, a, cell, tol);
      report.conditional_dev =
          std::max(report.conditional_dev, std::abs(dense_cond - Complex(path_cond)));
    }
  }

  // Reduced microsystem state vs the partial trace over the instrument.
  const DensityOperator rho = reduced_state(stats, state, tol);
  CMatrix rho_dense(n, n);
  for (int r = 0; r < n; ++r) {
    for (int s = 0; s < n; ++s) {
      Complex sum = 0.0;
      for (Eigen::Index k = 0; k < dim_inst; ++k) {
        sum += composite_direct(r * dim_inst + k, s * dim_inst + k);
      }
      rho_dense(r, s) = sum;
    }
  }
  report.reduced_dev = (rho.matrix() - rho_dense).cwiseAbs().maxCoeff();
  return report;
}

}  // namespace qmeas::oracle
