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

#include "qmeas/chain.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <set>
#include <string>

namespace qmeas::chain {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

void require_polarization(double m, const char* what) {
  if (!(std::abs(m) <= 1.0)) {
    throw ValidationError(std::string(what) + ": |polarization| <= 1 violated (m = " +
                          std::to_string(m) + ")");
  }
}

/// log P[#up <= half_length] for 2*half_length+1 independent sites with the
/// given per-site up probability. Terms are assembled from log-gamma values
/// and combined by log-sum-exp, so the result stays finite and accurate far
/// past the underflow range of the direct product form.
double log_binomial_lower_tail(int half_length, double up_probability) {
  if (half_length < 0) {
    throw ValidationError("overlap: half_length must be nonnegative");
  }
  const int sites = 2 * half_length + 1;
  if (up_probability <= 0.0) return 0.0;   // no up spins at all: the tail is certain
  if (up_probability >= 1.0) return -kInf; // every spin up: the tail is empty
  if (up_probability == 0.5) {
    // Symmetric case: an odd site count puts exactly half the mass below the
    // median, so the tail is 1/2 with no summation error.
    return -std::numbers::ln2;
  }
  const double log_p = std::log(up_probability);
  const double log_q = std::log1p(-up_probability);
  const double log_total = std::lgamma(static_cast<double>(sites) + 1.0);

  double max_term = -kInf;
  std::vector<double> terms(static_cast<std::size_t>(half_length) + 1);
  for (int n = 0; n <= half_length; ++n) {
    const double log_comb = log_total - std::lgamma(static_cast<double>(n) + 1.0) -
                            std::lgamma(static_cast<double>(sites - n) + 1.0);
    const double term = log_comb + n * log_p + (sites - n) * log_q;
    terms[static_cast<std::size_t>(n)] = term;
    max_term = std::max(max_term, term);
  }
  double sum = 0.0;
  for (double term : terms) {
    sum += std::exp(term - max_term);
  }
  double log_tail = max_term + std::log(sum);
  // The tail is a probability; roundoff may push the log a hair above 0.
  return std::min(log_tail, 0.0);
}

}  // namespace

ChainParams::ChainParams(int half_length_in, double polarization_in, double coupling_in)
    : half_length(half_length_in), polarization(polarization_in), coupling(coupling_in) {
  if (half_length < 0) {
    throw ValidationError("ChainParams: half_length must be nonnegative");
  }
  require_polarization(polarization, "ChainParams");
  if (!std::isfinite(coupling)) {
    throw ValidationError("ChainParams: coupling must be finite");
  }
}

PotentialSpec::PotentialSpec(double left, double right, std::vector<double> samples)
    : left_(left), right_(right), samples_(std::move(samples)) {
  if (!(right_ > left_)) {
    throw ValidationError("PotentialSpec: support must satisfy right > left");
  }
  if (samples_.size() < 2) {
    throw ValidationError("PotentialSpec: need at least two profile samples");
  }
  for (double v : samples_) {
    if (!std::isfinite(v)) {
      throw ValidationError("PotentialSpec: profile must be bounded");
    }
  }
  step_ = (right_ - left_) / static_cast<double>(samples_.size() - 1);
}

PotentialSpec PotentialSpec::rectangular(double left, double right, double height, int points) {
  if (points < 2) {
    throw ValidationError("PotentialSpec::rectangular: need at least two points");
  }
  return PotentialSpec(left, right, std::vector<double>(static_cast<std::size_t>(points), height));
}

PotentialSpec PotentialSpec::triangular(double left, double right, double height, int points) {
  if (points < 3 || points % 2 == 0) {
    throw ValidationError("PotentialSpec::triangular: need an odd point count >= 3");
  }
  std::vector<double> samples(static_cast<std::size_t>(points));
  const int mid = (points - 1) / 2;
  for (int i = 0; i < points; ++i) {
    const double frac = i <= mid ? static_cast<double>(i) / mid
                                 : static_cast<double>(points - 1 - i) / mid;
    samples[static_cast<std::size_t>(i)] = height * frac;
  }
  return PotentialSpec(left, right, std::move(samples));
}

double PotentialSpec::integral() const {
  double sum = 0.0;
  for (std::size_t i = 0; i + 1 < samples_.size(); ++i) {
    sum += 0.5 * (samples_[i] + samples_[i + 1]) * step_;
  }
  return sum;
}

double PotentialSpec::integral_window(double lo, double hi) const {
  if (hi <= lo) return 0.0;
  lo = std::max(lo, left_);
  hi = std::min(hi, right_);
  if (hi <= lo) return 0.0;
  auto sample_at = [this](double x) {
    const double pos = (x - left_) / step_;
    const auto idx = static_cast<std::size_t>(
        std::clamp<double>(std::floor(pos), 0.0, static_cast<double>(samples_.size() - 2)));
    const double frac = pos - static_cast<double>(idx);
    return samples_[idx] + frac * (samples_[idx + 1] - samples_[idx]);
  };
  const auto cell_of = [this](double x) {
    return static_cast<std::size_t>(std::clamp<double>(
        std::floor((x - left_) / step_), 0.0, static_cast<double>(samples_.size() - 2)));
  };
  const std::size_t cell_lo = cell_of(lo);
  const std::size_t cell_hi = cell_of(hi);
  if (cell_lo == cell_hi) {
    return 0.5 * (sample_at(lo) + sample_at(hi)) * (hi - lo);
  }
  double sum = 0.0;
  const double first_node = left_ + static_cast<double>(cell_lo + 1) * step_;
  sum += 0.5 * (sample_at(lo) + samples_[cell_lo + 1]) * (first_node - lo);
  for (std::size_t cell = cell_lo + 1; cell < cell_hi; ++cell) {
    sum += 0.5 * (samples_[cell] + samples_[cell + 1]) * step_;
  }
  const double last_node = left_ + static_cast<double>(cell_hi) * step_;
  sum += 0.5 * (samples_[cell_hi] + sample_at(hi)) * (hi - last_node);
  return sum;
}

PacketSpec::PacketSpec(double left, double right, std::vector<Complex> samples, double norm_tol)
    : left_(left), right_(right), samples_(std::move(samples)) {
  if (!(right_ > left_)) {
    throw ValidationError("PacketSpec: support must satisfy right > left");
  }
  if (samples_.size() < 2) {
    throw ValidationError("PacketSpec: need at least two amplitude samples");
  }
  step_ = (right_ - left_) / static_cast<double>(samples_.size() - 1);
  double norm = 0.0;
  for (std::size_t i = 0; i < samples_.size(); ++i) {
    const double weight = (i == 0 || i + 1 == samples_.size()) ? 0.5 * step_ : step_;
    norm += weight * std::norm(samples_[i]);
  }
  if (std::abs(norm - 1.0) > norm_tol) {
    throw ValidationError("PacketSpec: packet is not normalized on its grid, norm^2 = " +
                          std::to_string(norm));
  }
}

PacketSpec PacketSpec::bump(double left, double right, int points) {
  if (points < 3) {
    throw ValidationError("PacketSpec::bump: need at least three points");
  }
  const double step = (right - left) / static_cast<double>(points - 1);
  std::vector<Complex> samples(static_cast<std::size_t>(points));
  for (int i = 0; i < points; ++i) {
    const double x = left + i * step;
    const double y = 2.0 * (x - left) / (right - left) - 1.0;
    const double arg = 1.0 - y * y;
    samples[static_cast<std::size_t>(i)] = arg > 0.0 ? std::exp(-1.0 / arg) : 0.0;
  }
  double norm = 0.0;
  for (int i = 0; i < points; ++i) {
    const double weight = (i == 0 || i == points - 1) ? 0.5 * step : step;
    norm += weight * std::norm(samples[static_cast<std::size_t>(i)]);
  }
  const double scale = 1.0 / std::sqrt(norm);
  for (Complex& s : samples) s *= scale;
  return PacketSpec(left, right, std::move(samples));
}

Complex PacketSpec::value(double x) const {
  if (x < left_ || x > right_) return 0.0;
  const double pos = (x - left_) / step_;
  const auto idx = static_cast<std::size_t>(
      std::clamp<double>(std::floor(pos), 0.0, static_cast<double>(samples_.size() - 2)));
  const double frac = pos - static_cast<double>(idx);
  return samples_[idx] + frac * (samples_[idx + 1] - samples_[idx]);
}

double coupling_strength(const PotentialSpec& potential) { return potential.integral(); }

double critical_time(int half_length, double potential_right, double packet_left) {
  return 2.0 * half_length + 1.0 - potential_right - packet_left;
}

DensityOperator site_state_plus(double polarization, const Tolerances& tol) {
  require_polarization(polarization, "site_state_plus");
  CMatrix m = 0.5 * (identity2() + polarization * pauli_z());
  return DensityOperator(std::move(m), tol);
}

DensityOperator site_state_minus(double polarization, double coupling, const Tolerances& tol) {
  require_polarization(polarization, "site_state_minus");
  const double c = std::cos(2.0 * coupling);
  const double s = std::sin(2.0 * coupling);
  CMatrix m =
      0.5 * (identity2() + polarization * c * pauli_z() - polarization * s * pauli_y());
  return DensityOperator(std::move(m), tol);
}

double log_overlap_plus_in_minus(int half_length, double polarization) {
  require_polarization(polarization, "overlap_plus_in_minus");
  return log_binomial_lower_tail(half_length, 0.5 * (1.0 + polarization));
}

double log_overlap_minus_in_plus(int half_length, double polarization, double coupling) {
  require_polarization(polarization, "overlap_minus_in_plus");
  // The kicked state has per-site up weight (1 + m cos 2J)/2; the plus cell
  // holds at most half_length down spins, a lower binomial tail in the down
  // count with per-site probability (1 - m cos 2J)/2.
  const double down = 0.5 * (1.0 - polarization * std::cos(2.0 * coupling));
  return log_binomial_lower_tail(half_length, down);
}

double overlap_plus_in_minus(int half_length, double polarization) {
  return std::exp(log_overlap_plus_in_minus(half_length, polarization));
}

double overlap_minus_in_plus(int half_length, double polarization, double coupling) {
  return std::exp(log_overlap_minus_in_plus(half_length, polarization, coupling));
}

double decay_rate(double polarization, double coupling) {
  require_polarization(polarization, "decay_rate");
  const double mc = polarization * std::cos(2.0 * coupling);
  if (mc == 0.0) return 0.0;
  const double arg = 1.0 - mc * mc;
  if (arg <= 0.0) return kInf;
  return -0.5 * std::log(arg);
}

ChainClassification classify_chain(const ChainParams& params, double ideal_tol,
                                   double eta_threshold) {
  ChainClassification out;
  out.log_overlap_plus_in_minus =
      log_overlap_plus_in_minus(params.half_length, params.polarization);
  out.log_overlap_minus_in_plus =
      log_overlap_minus_in_plus(params.half_length, params.polarization, params.coupling);
  out.overlap_plus_in_minus = std::exp(out.log_overlap_plus_in_minus);
  out.overlap_minus_in_plus = std::exp(out.log_overlap_minus_in_plus);
  out.rate = decay_rate(params.polarization, params.coupling);
  out.predicted_eta = std::isinf(out.rate) ? 0.0 : std::exp(-out.rate * params.site_count());
  out.in_normal_regime = params.polarization > 0.0 && params.polarization < 1.0 &&
                         params.coupling > std::numbers::pi / 4.0 &&
                         params.coupling <= std::numbers::pi / 2.0;

  ClassificationReport& report = out.report;
  report.cell_weights = Eigen::MatrixXd(2, 2);
  report.cell_weights << 1.0 - out.overlap_plus_in_minus, out.overlap_plus_in_minus,
      out.overlap_minus_in_plus, 1.0 - out.overlap_minus_in_plus;
  report.eta = std::max(out.overlap_plus_in_minus, out.overlap_minus_in_plus);
  // Cross statistics are not part of the closed-form model; nothing to bound.
  report.offdiag_max = 0.0;
  report.offdiag_bound = std::sqrt(std::max(report.eta, ideal_tol));
  report.offdiag_ok = true;

  // Thresholds compare in log domain: a positive overlap far below the range
  // of doubles (log finite, exp underflows) is still not an exact zero, so
  // the default ideal_tol = 0 only accepts mathematically vanishing overlaps.
  const double log_ideal = std::log(ideal_tol);
  const double log_eta_threshold = std::log(eta_threshold);
  if (out.log_overlap_plus_in_minus <= log_ideal &&
      out.log_overlap_minus_in_plus <= log_ideal) {
    report.verdict = Verdict::kIdeal;
    report.assignment = std::vector<int>{0, 1};
  } else if (out.log_overlap_plus_in_minus < log_eta_threshold &&
             out.log_overlap_minus_in_plus < log_eta_threshold) {
    report.verdict = Verdict::kNormal;
    report.assignment = std::vector<int>{0, 1};
  } else {
    report.verdict = Verdict::kUnclassified;
  }
  return out;
}

PerturbedChain perturb_chain_state(const ChainParams& base, std::vector<SitePerturbation> flips) {
  std::set<int> seen;
  for (const SitePerturbation& flip : flips) {
    if (flip.site < 1 || flip.site > base.site_count()) {
      throw ValidationError("perturb_chain_state: site " + std::to_string(flip.site) +
                            " outside [1, " + std::to_string(base.site_count()) + "]");
    }
    if (!seen.insert(flip.site).second) {
      throw ValidationError("perturb_chain_state: duplicate site " + std::to_string(flip.site));
    }
    if (flip.state.dim() != 2) {
      throw ValidationError("perturb_chain_state: site states must be 2x2");
    }
  }
  return PerturbedChain{base, std::move(flips)};
}

std::pair<double, double> site_weights(const CMatrix& site_state) {
  return {site_state(0, 0).real(), site_state(1, 1).real()};
}

std::pair<double, double> kicked_site_weights(const CMatrix& site_state, double coupling) {
  // Bloch components: conjugation by exp(i J sigma_x) rotates (y, z) by 2J,
  // sending z -> y sin(2J) + z cos(2J); only z survives in the weights.
  const double bloch_y = 2.0 * site_state(1, 0).imag();
  const double bloch_z = (site_state(0, 0) - site_state(1, 1)).real();
  const double rotated_z =
      bloch_y * std::sin(2.0 * coupling) + bloch_z * std::cos(2.0 * coupling);
  return {0.5 * (1.0 + rotated_z), 0.5 * (1.0 - rotated_z)};
}

double majority_mass(const std::vector<std::pair<double, double>>& weights, int min_up,
                     int max_up) {
  const int sites = static_cast<int>(weights.size());
  if (sites == 0) {
    throw ValidationError("majority_mass: empty weight list");
  }
  std::vector<double> dp(static_cast<std::size_t>(sites) + 1, 0.0);
  dp[0] = 1.0;
  for (int i = 0; i < sites; ++i) {
    const auto [up, down] = weights[static_cast<std::size_t>(i)];
    for (int k = i + 1; k >= 1; --k) {
      dp[static_cast<std::size_t>(k)] =
          dp[static_cast<std::size_t>(k)] * down + dp[static_cast<std::size_t>(k - 1)] * up;
    }
    dp[0] *= down;
  }
  min_up = std::max(min_up, 0);
  max_up = std::min(max_up, sites);
  double mass = 0.0;
  for (int k = min_up; k <= max_up; ++k) {
    mass += dp[static_cast<std::size_t>(k)];
  }
  return mass;
}

namespace {

std::vector<std::pair<double, double>> chain_weights(const PerturbedChain& chain, bool kicked) {
  const int sites = chain.base.site_count();
  const DensityOperator base_site = site_state_plus(chain.base.polarization);
  const auto base_weights = kicked ? kicked_site_weights(base_site.matrix(), chain.base.coupling)
                                   : site_weights(base_site.matrix());
  std::vector<std::pair<double, double>> weights(static_cast<std::size_t>(sites), base_weights);
  for (const SitePerturbation& flip : chain.flips) {
    weights[static_cast<std::size_t>(flip.site - 1)] =
        kicked ? kicked_site_weights(flip.state.matrix(), chain.base.coupling)
               : site_weights(flip.state.matrix());
  }
  return weights;
}

}  // namespace

double overlap_plus_in_minus(const PerturbedChain& chain) {
  return majority_mass(chain_weights(chain, /*kicked=*/false), 0, chain.base.half_length);
}

double overlap_minus_in_plus(const PerturbedChain& chain) {
  return majority_mass(chain_weights(chain, /*kicked=*/true), chain.base.half_length + 1,
                       chain.base.site_count());
}

}  // namespace qmeas::chain
