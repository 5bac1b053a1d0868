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

//! Batch command-line front end. Every command reads a flat key-value config
//! file (optional) overridden by flags, computes, and emits one deterministic
//! CSV: identical bytes for identical (config, seed), whatever the thread
//! count. Exit codes: 0 success, 1 check failure, 2 validation error.

#include <cmath>
#include <fstream>
#include <iostream>
#include <numbers>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include <qmeas/chain.hpp>
#include <qmeas/framework.hpp>
#include <qmeas/oracle.hpp>
#include <qmeas/parallel.hpp>
#include <qmeas/random.hpp>

#include "run_config.hpp"

namespace {

using namespace qmeas;
using cli::CsvWriter;
using cli::RunConfig;

constexpr const char* kFormatVersion = "1";

struct CommonOptions {
  std::string config_path;
  std::string out_path;
  int threads = 1;
  std::uint64_t seed = 12345;
};

void add_common_flags(CLI::App* cmd, CommonOptions* common) {
  cmd->add_option("--config", common->config_path, "Flat key = value config file");
  cmd->add_option("--out", common->out_path, "Output path (default: stdout)");
  cmd->add_option("--threads", common->threads, "Worker threads (results are thread-count independent)");
  cmd->add_option("--seed", common->seed, "Seed for randomized commands");
}

RunConfig make_config(const CommonOptions& common,
                      const std::vector<std::pair<CLI::Option*, std::string>>& overrides) {
  std::map<std::string, std::string> file_values;
  if (!common.config_path.empty()) {
    file_values = cli::load_config_file(common.config_path);
  }
  RunConfig config(std::move(file_values));
  for (const auto& [option, key] : overrides) {
    if (option->count() > 0) {
      config.override_value(key, option->results().front());
    }
  }
  return config;
}

void emit(const CommonOptions& common, const std::string& text) {
  if (common.out_path.empty()) {
    std::cout << text;
    return;
  }
  std::ofstream out(common.out_path, std::ios::binary);
  if (!out) {
    throw ValidationError("out: cannot open '" + common.out_path + "' for writing");
  }
  out << text;
}

double require_number(const RunConfig& config, const std::string& key) {
  if (!config.has(key)) {
    throw ValidationError(key + ": required parameter is missing");
  }
  return config.number(key, 0.0);
}

int require_integer(const RunConfig& config, const std::string& key) {
  if (!config.has(key)) {
    throw ValidationError(key + ": required parameter is missing");
  }
  return config.integer(key, 0);
}

double require_angle(const RunConfig& config, const std::string& key) {
  if (!config.has(key)) {
    throw ValidationError(key + ": required parameter is missing");
  }
  return config.angle(key, 0.0);
}

// ---------------------------------------------------------------------------
// classify

int run_classify(const CommonOptions& common, const RunConfig& config) {
  const int half_length = require_integer(config, "L");
  const double m = require_number(config, "m");
  const double coupling = require_angle(config, "J");
  const double ideal_tol = config.number("tol.ideal", 0.0);
  const double eta_threshold = config.number("tol.eta", 1e-2);

  const chain::ChainParams params(half_length, m, coupling);
  const chain::ChainClassification result =
      chain::classify_chain(params, ideal_tol, eta_threshold);

  std::ostringstream text;
  CsvWriter csv(text);
  csv.metadata("qmeas", "classify");
  csv.metadata("format", kFormatVersion);
  csv.metadata("L", CsvWriter::format(half_length));
  csv.metadata("m", m);
  csv.metadata("J", coupling);
  csv.metadata("tol.ideal", ideal_tol);
  csv.metadata("tol.eta", eta_threshold);
  csv.header({"verdict", "overlap_plus_in_minus", "overlap_minus_in_plus", "eta", "rate",
              "predicted_eta", "in_normal_regime"});
  csv.row({to_string(result.report.verdict), CsvWriter::format(result.overlap_plus_in_minus),
           CsvWriter::format(result.overlap_minus_in_plus),
           CsvWriter::format(result.report.eta), CsvWriter::format(result.rate),
           CsvWriter::format(result.predicted_eta),
           result.in_normal_regime ? "true" : "false"});
  emit(common, text.str());
  return 0;
}

// ---------------------------------------------------------------------------
// sweep

int run_sweep(const CommonOptions& common, const RunConfig& config) {
  const int l_min = require_integer(config, "sweep.L_min");
  const int l_max = require_integer(config, "sweep.L_max");
  const int l_step = config.integer("sweep.L_step", 1);
  const double m = require_number(config, "m");
  const double coupling = require_angle(config, "J");
  if (l_step <= 0) {
    throw ValidationError("sweep.L_step: must be positive");
  }
  if (l_min < 0 || l_max < l_min) {
    throw ValidationError("sweep.L_min/L_max: need 0 <= L_min <= L_max");
  }
  chain::ChainParams(l_min, m, coupling);  // validate the shared parameters once

  std::vector<int> lengths;
  for (int l = l_min; l <= l_max; l += l_step) lengths.push_back(l);

  struct Row {
    int half_length = 0;
    double log_pm = 0.0;
    double log_mp = 0.0;
  };
  std::vector<Row> rows(lengths.size());
  parallel_tasks(lengths.size(), common.threads, [&](std::size_t i) {
    const int l = lengths[i];
    rows[i] = Row{l, chain::log_overlap_plus_in_minus(l, m),
                  chain::log_overlap_minus_in_plus(l, m, coupling)};
  });

  const double rate = chain::decay_rate(m, coupling);
  const double predicted = rate == 0.0 ? 0.0 : -rate;  // avoid printing "-0"
  std::ostringstream text;
  CsvWriter csv(text);
  csv.metadata("qmeas", "sweep");
  csv.metadata("format", kFormatVersion);
  csv.metadata("m", m);
  csv.metadata("J", coupling);
  csv.metadata("sweep.L_min", CsvWriter::format(l_min));
  csv.metadata("sweep.L_max", CsvWriter::format(l_max));
  csv.metadata("sweep.L_step", CsvWriter::format(l_step));
  csv.header({"L", "N", "overlap_plus_in_minus", "overlap_minus_in_plus", "ln_overlap_over_N",
              "predicted_rate"});
  for (const Row& row : rows) {
    const int sites = 2 * row.half_length + 1;
    const double log_eta = std::max(row.log_pm, row.log_mp);
    csv.row({CsvWriter::format(row.half_length), CsvWriter::format(sites),
             CsvWriter::format(std::exp(row.log_pm)), CsvWriter::format(std::exp(row.log_mp)),
             CsvWriter::format(log_eta / sites), CsvWriter::format(predicted)});
  }
  emit(common, text.str());
  return 0;
}

// ---------------------------------------------------------------------------
// time-series

int run_time_series(const CommonOptions& common, const RunConfig& config) {
  const int half_length = require_integer(config, "L");
  const double m = require_number(config, "m");
  const double coupling = require_angle(config, "J");
  const double a = config.number("a", -1.0);
  const double b = config.number("b", 0.0);
  const double c_supp = config.number("c_supp", -1.0);
  const double d = config.number("d", 0.0);
  const int points = config.integer("grid.points", 801);
  const double dt = config.number("grid.dt", 0.5);

  const chain::ChainParams params(half_length, m, coupling);
  if (!(b > a)) {
    throw ValidationError("a/b: potential support needs b > a");
  }
  if (!(d > c_supp)) {
    throw ValidationError("c_supp/d: packet support needs d > c_supp");
  }
  const double tau = chain::critical_time(half_length, b, c_supp);
  const double t_max = config.number("t_max", tau + 2.0);
  if (t_max < 0.0) {
    throw ValidationError("t_max: must be nonnegative");
  }
  const auto potential =
      chain::PotentialSpec::rectangular(a, b, coupling / (b - a));
  const auto packet = chain::PacketSpec::bump(c_supp, d, points);
  const oracle::GridConfig grid{c_supp, d, points, dt};

  const Tolerances tol;
  // One settled reference shared by the whole schedule.
  const oracle::TimeSeriesRecord settled =
      oracle::time_resolved_stats(params, potential, packet, grid, tau, tol);

  std::vector<double> schedule;
  for (double t = 0.0; t <= t_max + 1e-12; t += dt) schedule.push_back(t);

  std::vector<oracle::TimeSeriesRecord> records(schedule.size());
  parallel_tasks(schedule.size(), common.threads, [&](std::size_t i) {
    records[i] =
        oracle::time_resolved_stats(params, potential, packet, grid, schedule[i], settled, tol);
  });

  std::ostringstream text;
  CsvWriter csv(text);
  csv.metadata("qmeas", "time-series");
  csv.metadata("format", kFormatVersion);
  csv.metadata("L", CsvWriter::format(half_length));
  csv.metadata("m", m);
  csv.metadata("J", coupling);
  csv.metadata("a", a);
  csv.metadata("b", b);
  csv.metadata("c_supp", c_supp);
  csv.metadata("d", d);
  csv.metadata("grid.points", CsvWriter::format(points));
  csv.metadata("grid.dt", dt);
  csv.metadata("t_max", t_max);
  csv.metadata("tau", tau);
  csv.header({"t", "p_plus_plus", "p_plus_minus", "p_minus_plus", "p_minus_minus",
              "coh_plus_re", "coh_plus_im", "coh_minus_re", "coh_minus_im", "w_plus", "w_minus",
              "stationary"});
  constexpr int kPlus = oracle::TimeSeriesRecord::kPlus;
  constexpr int kMinus = oracle::TimeSeriesRecord::kMinus;
  for (const auto& record : records) {
    csv.row({CsvWriter::format(record.t), CsvWriter::format(record.diag(kPlus, kPlus)),
             CsvWriter::format(record.diag(kPlus, kMinus)),
             CsvWriter::format(record.diag(kMinus, kPlus)),
             CsvWriter::format(record.diag(kMinus, kMinus)),
             CsvWriter::format(record.stats[kPlus][kMinus][kPlus].real()),
             CsvWriter::format(record.stats[kPlus][kMinus][kPlus].imag()),
             CsvWriter::format(record.stats[kPlus][kMinus][kMinus].real()),
             CsvWriter::format(record.stats[kPlus][kMinus][kMinus].imag()),
             CsvWriter::format(record.w[kPlus]), CsvWriter::format(record.w[kMinus]),
             record.stationary ? "true" : "false"});
  }
  emit(common, text.str());
  return 0;
}

// ---------------------------------------------------------------------------
// oracle-check

struct CheckRow {
  std::string name;
  double deviation = 0.0;
  double tolerance = 0.0;
  bool pass() const { return deviation <= tolerance; }
};

int run_oracle_check(const CommonOptions& common, const RunConfig& config) {
  const int l_cap = config.integer("L", 8);
  const double tol_oracle = config.number("tol.oracle", 1e-11);
  if (l_cap < 0 || l_cap > oracle::kMaxEnumerationHalfLength) {
    throw ValidationError("L: enumeration cap outside [0, " +
                          std::to_string(oracle::kMaxEnumerationHalfLength) + "]");
  }
  const Tolerances tol;
  std::vector<CheckRow> checks;

  {
    // Closed forms against exhaustive enumeration over a parameter matrix.
    const std::vector<double> ms = {0.0, 0.25, 0.5, 0.9, 1.0};
    const std::vector<double> js = {std::numbers::pi / 4.0, std::numbers::pi / 3.0,
                                    std::numbers::pi / 2.0};
    double dev = 0.0;
    for (int l = 0; l <= l_cap; ++l) {
      for (double m : ms) {
        for (double j : js) {
          const double enum_pm = oracle::enumerate_overlap(
              l, m, j, oracle::OverlapKind::kPlusInMinus, common.threads);
          const double enum_mp = oracle::enumerate_overlap(
              l, m, j, oracle::OverlapKind::kMinusInPlus, common.threads);
          dev = std::max(dev, std::abs(enum_pm - chain::overlap_plus_in_minus(l, m)));
          dev = std::max(dev, std::abs(enum_mp - chain::overlap_minus_in_plus(l, m, j)));
        }
      }
    }
    checks.push_back({"enumeration_vs_closed_form", dev, tol_oracle});
  }

  {
    // Product of per-site rotations against the exponential of the summed
    // generator (they commute).
    double dev = 0.0;
    for (int l = 0; l <= 2; ++l) {
      const int sites = 2 * l + 1;
      const double coupling = 0.8;
      CMatrix generator = CMatrix::Zero(1 << sites, 1 << sites);
      for (int site = 1; site <= sites; ++site) {
        const Eigen::Index left = Eigen::Index{1} << (site - 1);
        const Eigen::Index right = Eigen::Index{1} << (sites - site);
        generator += kron(kron(CMatrix::Identity(left, left), pauli_x()),
                          CMatrix::Identity(right, right));
      }
      const CMatrix direct = expm_hermitian(generator, coupling, tol);
      const CMatrix product = oracle::dense_kick_operator(l, coupling);
      dev = std::max(dev, (direct - product).cwiseAbs().maxCoeff());
    }
    checks.push_back({"kick_product_vs_sum_exponential", dev, 1e-11});
  }

  {
    // Dense conjugation of the product state against the closed-form kicked
    // site states.
    double dev = 0.0;
    for (const auto& [m, j] : std::vector<std::pair<double, double>>{
             {1.0, std::numbers::pi / 2.0}, {0.7, 1.1}}) {
      const CMatrix conjugated =
          oracle::kick_conjugate(oracle::dense_chain_state(3, m), 3, j);
      const CMatrix closed = oracle::dense_kicked_chain_state(3, m, j);
      dev = std::max(dev, (conjugated - closed).cwiseAbs().maxCoeff());
    }
    checks.push_back({"kick_conjugation_vs_site_states", dev, 1e-12});
  }

  {
    // Traversal dynamics settle onto the closed-form overlaps at the critical
    // time, and branch cell weights stay normalized along the way.
    const chain::ChainParams params(3, 0.7, 1.1);
    const auto potential = chain::PotentialSpec::rectangular(-1.0, 0.0, 1.1);
    const auto packet = chain::PacketSpec::bump(-1.0, 0.0, 801);
    const oracle::GridConfig grid{-1.0, 0.0, 801, 0.5};
    const double tau = chain::critical_time(3, potential.right(), packet.left());
    double diag_dev = 0.0;
    double row_dev = 0.0;
    bool stationary_ok = true;
    for (double t : {0.0, 0.5 * tau, tau, tau + 1.0}) {
      const auto record = oracle::time_resolved_stats(params, potential, packet, grid, t, tol);
      for (int branch = 0; branch < 2; ++branch) {
        row_dev = std::max(row_dev,
                           std::abs(record.diag(branch, 0) + record.diag(branch, 1) - 1.0));
      }
      if (t >= tau) {
        stationary_ok = stationary_ok && record.stationary;
        diag_dev = std::max(
            diag_dev, std::abs(record.diag(0, 1) - chain::overlap_plus_in_minus(3, 0.7)));
        diag_dev = std::max(
            diag_dev, std::abs(record.diag(1, 0) - chain::overlap_minus_in_plus(3, 0.7, 1.1)));
      }
    }
    checks.push_back({"traversal_settled_vs_closed_form",
                      stationary_ok ? diag_dev : 1.0, 1e-7});
    checks.push_back({"traversal_row_sums", row_dev, 1e-9});
  }

  {
    // Explicit composite evolution against the statistics-tensor path.
    double dev = 0.0;
    Rng rng(common.seed);
    for (int instance = 0; instance < 4; ++instance) {
      const int levels = 2 + instance % 2;
      const Eigen::Index dim = 6 + 2 * instance;
      const InstrumentModel instrument = random_instrument(dim, levels, rng);
      const DensityOperator omega = random_density(dim, rng);
      const MicroState state = random_micro_state(levels, rng);
      const MicroSystem system(RVector::LinSpaced(levels, -1.0, 1.0));
      const auto report = oracle::dense_composite_check(state, system, instrument, omega,
                                                        0.9 + 0.4 * instance, 6,
                                                        common.seed + instance, tol);
      dev = std::max(dev, report.max_deviation());
    }
    checks.push_back({"composite_vs_stat_tensor", dev, tol_oracle});
  }

  std::ostringstream text;
  CsvWriter csv(text);
  csv.metadata("qmeas", "oracle-check");
  csv.metadata("format", kFormatVersion);
  csv.metadata("L", CsvWriter::format(l_cap));
  csv.metadata("tol.oracle", tol_oracle);
  csv.header({"check", "max_deviation", "tolerance", "status"});
  const CheckRow* first_failure = nullptr;
  for (const CheckRow& check : checks) {
    csv.row({check.name, CsvWriter::format(check.deviation), CsvWriter::format(check.tolerance),
             check.pass() ? "pass" : "fail"});
    if (!check.pass() && first_failure == nullptr) first_failure = &check;
  }
  emit(common, text.str());
  if (first_failure != nullptr) {
    std::cerr << "oracle-check failed: " << first_failure->name << " deviation "
              << CsvWriter::format(first_failure->deviation) << " exceeds "
              << CsvWriter::format(first_failure->tolerance) << "\n";
    return 1;
  }
  return 0;
}

// ---------------------------------------------------------------------------
// framework-demo

int run_framework_demo(const CommonOptions& common, const RunConfig& config) {
  const std::string model = config.raw("model", "random");
  const Tolerances tol;
  Rng rng(common.seed);

  std::optional<InstrumentModel> instrument;
  std::optional<DensityOperator> omega;
  double t = config.number("t", 1.3);
  int levels = 2;
  if (model == "random") {
    const int dim = config.integer("dimK", 8);
    levels = config.integer("levels", 2);
    if (dim < levels || dim > 16) {
      throw ValidationError("dimK: need levels <= dimK <= 16");
    }
    if (levels < 1 || levels > 3) {
      throw ValidationError("levels: need 1 <= levels <= 3");
    }
    instrument.emplace(random_instrument(dim, levels, rng));
    omega.emplace(random_density(dim, rng));
  } else if (model == "chain") {
    const int half_length = config.integer("L", 2);
    const double m = config.number("m", 1.0);
    const double coupling = config.angle("J", std::numbers::pi / 2.0);
    instrument.emplace(oracle::embed_chain_instrument(half_length, coupling, tol));
    omega.emplace(oracle::embed_chain_state(half_length, m, tol));
    t = 1.0;  // the embedded kick acts over unit time
  } else {
    throw ValidationError("model: must be 'random' or 'chain'");
  }

  MicroState state = [&] {
    if (config.has("c_plus") || config.has("c_minus")) {
      if (levels != 2) {
        throw ValidationError("c_plus/c_minus: amplitude flags require a two-level system");
      }
      CVector c(2);
      c << config.number("c_plus", std::numbers::sqrt2 / 2.0),
          config.number("c_minus", std::numbers::sqrt2 / 2.0);
      return MicroState(std::move(c), tol);
    }
    if (levels == 2) {
      CVector c(2);
      c << std::numbers::sqrt2 / 2.0, std::numbers::sqrt2 / 2.0;
      return MicroState(std::move(c), tol);
    }
    return random_micro_state(levels, rng);
  }();

  const MicroSystem system(RVector::Zero(levels));
  const StatTensor stats = stat_tensor(*instrument, system, *omega, t, tol);
  const CMatrix observable = random_hermitian(levels, rng);
  const double identity_expectation =
      expectation(stats, state, CMatrix::Identity(levels, levels), tol);
  const double value = expectation(stats, state, observable, tol);
  const RVector weights = pointer_probabilities(stats, state, tol);
  const DensityOperator rho = reduced_state(stats, state, tol);

  double consistency = 0.0;  // sum_cells w * conditional, against the expectation
  std::vector<double> conditionals(static_cast<std::size_t>(levels), 0.0);
  bool all_cells_usable = true;
  for (int cell = 0; cell < levels; ++cell) {
    if (weights[cell] < tol.w_floor) {
      all_cells_usable = false;
      continue;
    }
    conditionals[static_cast<std::size_t>(cell)] =
        conditional_expectation(stats, state, observable, cell, tol);
    consistency += weights[cell] * conditionals[static_cast<std::size_t>(cell)];
  }
  const double residual = all_cells_usable ? std::abs(consistency - value) : 0.0;

  std::ostringstream text;
  CsvWriter csv(text);
  csv.metadata("qmeas", "framework-demo");
  csv.metadata("format", kFormatVersion);
  csv.metadata("model", model);
  csv.metadata("seed", CsvWriter::format(static_cast<int>(common.seed)));
  csv.metadata("t", t);
  csv.header({"quantity", "value"});
  csv.row({"expectation_identity", CsvWriter::format(identity_expectation)});
  csv.row({"expectation_observable", CsvWriter::format(value)});
  for (int cell = 0; cell < levels; ++cell) {
    csv.row({"w_" + std::to_string(cell + 1), CsvWriter::format(weights[cell])});
  }
  for (int cell = 0; cell < levels; ++cell) {
    csv.row({"conditional_" + std::to_string(cell + 1),
             CsvWriter::format(conditionals[static_cast<std::size_t>(cell)])});
  }
  for (int r = 0; r < levels; ++r) {
    for (int s = 0; s < levels; ++s) {
      const Complex entry = rho.matrix()(r, s);
      csv.row({"rho_re_" + std::to_string(r + 1) + "_" + std::to_string(s + 1),
               CsvWriter::format(entry.real())});
      csv.row({"rho_im_" + std::to_string(r + 1) + "_" + std::to_string(s + 1),
               CsvWriter::format(entry.imag())});
    }
  }
  csv.row({"consistency_residual", CsvWriter::format(residual)});
  emit(common, text.str());
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Finite-instrument quantum measurement simulator"};
  app.require_subcommand(1);

  CommonOptions common;

  // classify
  auto* classify_cmd = app.add_subcommand("classify", "Grade the chain instrument at (L, m, J)");
  add_common_flags(classify_cmd, &common);
  std::string opt_l, opt_m, opt_j, opt_ideal_tol, opt_eta;
  std::vector<std::pair<CLI::Option*, std::string>> classify_overrides = {
      {classify_cmd->add_option("--L", opt_l, "Chain half-length (2L+1 sites)"), "L"},
      {classify_cmd->add_option("--m", opt_m, "Initial per-site polarization"), "m"},
      {classify_cmd->add_option("--J", opt_j, "Kick angle (radians; pi tokens accepted)"), "J"},
      {classify_cmd->add_option("--ideal-tol", opt_ideal_tol, "Ideal verdict threshold"),
       "tol.ideal"},
      {classify_cmd->add_option("--eta-threshold", opt_eta, "Normal verdict threshold"),
       "tol.eta"},
  };

  // sweep
  auto* sweep_cmd = app.add_subcommand("sweep", "Overlap decay across a range of chain lengths");
  add_common_flags(sweep_cmd, &common);
  std::string opt_lmin, opt_lmax, opt_lstep, opt_sweep_m, opt_sweep_j;
  std::vector<std::pair<CLI::Option*, std::string>> sweep_overrides = {
      {sweep_cmd->add_option("--L-min", opt_lmin, "Smallest half-length"), "sweep.L_min"},
      {sweep_cmd->add_option("--L-max", opt_lmax, "Largest half-length"), "sweep.L_max"},
      {sweep_cmd->add_option("--L-step", opt_lstep, "Half-length step"), "sweep.L_step"},
      {sweep_cmd->add_option("--m", opt_sweep_m, "Initial per-site polarization"), "m"},
      {sweep_cmd->add_option("--J", opt_sweep_j, "Kick angle"), "J"},
  };

  // time-series
  auto* series_cmd =
      app.add_subcommand("time-series", "Time-resolved traversal statistics at small L");
  add_common_flags(series_cmd, &common);
  std::string opt_ts_l, opt_ts_m, opt_ts_j, opt_a, opt_b, opt_c, opt_d, opt_points, opt_dt,
      opt_tmax;
  std::vector<std::pair<CLI::Option*, std::string>> series_overrides = {
      {series_cmd->add_option("--L", opt_ts_l, "Chain half-length"), "L"},
      {series_cmd->add_option("--m", opt_ts_m, "Initial per-site polarization"), "m"},
      {series_cmd->add_option("--J", opt_ts_j, "Kick angle"), "J"},
      {series_cmd->add_option("--a", opt_a, "Potential support left edge"), "a"},
      {series_cmd->add_option("--b", opt_b, "Potential support right edge"), "b"},
      {series_cmd->add_option("--c-supp", opt_c, "Packet support left edge"), "c_supp"},
      {series_cmd->add_option("--d", opt_d, "Packet support right edge"), "d"},
      {series_cmd->add_option("--grid-points", opt_points, "Spatial quadrature points"),
       "grid.points"},
      {series_cmd->add_option("--grid-dt", opt_dt, "Time step of the schedule"), "grid.dt"},
      {series_cmd->add_option("--t-max", opt_tmax, "Schedule end (default: tau + 2)"), "t_max"},
  };

  // oracle-check
  auto* oracle_cmd =
      app.add_subcommand("oracle-check", "Brute-force vs closed-form equivalence matrix");
  add_common_flags(oracle_cmd, &common);
  std::string opt_oracle_l, opt_oracle_tol;
  std::vector<std::pair<CLI::Option*, std::string>> oracle_overrides = {
      {oracle_cmd->add_option("--L", opt_oracle_l, "Largest enumerated half-length"), "L"},
      {oracle_cmd->add_option("--oracle-tol", opt_oracle_tol, "Equivalence tolerance"),
       "tol.oracle"},
  };

  // framework-demo
  auto* demo_cmd =
      app.add_subcommand("framework-demo", "Measurement statistics of a small instrument");
  add_common_flags(demo_cmd, &common);
  std::string opt_model, opt_dimk, opt_levels, opt_demo_l, opt_demo_m, opt_demo_j, opt_demo_t,
      opt_cp, opt_cm;
  std::vector<std::pair<CLI::Option*, std::string>> demo_overrides = {
      {demo_cmd->add_option("--model", opt_model, "'random' or 'chain'"), "model"},
      {demo_cmd->add_option("--dimK", opt_dimk, "Instrument dimension (random model)"), "dimK"},
      {demo_cmd->add_option("--levels", opt_levels, "Microsystem levels (random model)"),
       "levels"},
      {demo_cmd->add_option("--L", opt_demo_l, "Chain half-length (chain model)"), "L"},
      {demo_cmd->add_option("--m", opt_demo_m, "Polarization (chain model)"), "m"},
      {demo_cmd->add_option("--J", opt_demo_j, "Kick angle (chain model)"), "J"},
      {demo_cmd->add_option("--t", opt_demo_t, "Coupling time (random model)"), "t"},
      {demo_cmd->add_option("--c-plus", opt_cp, "Upper-level amplitude"), "c_plus"},
      {demo_cmd->add_option("--c-minus", opt_cm, "Lower-level amplitude"), "c_minus"},
  };

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  try {
    if (classify_cmd->parsed()) {
      return run_classify(common, make_config(common, classify_overrides));
    }
    if (sweep_cmd->parsed()) {
      return run_sweep(common, make_config(common, sweep_overrides));
    }
    if (series_cmd->parsed()) {
      return run_time_series(common, make_config(common, series_overrides));
    }
    if (oracle_cmd->parsed()) {
      return run_oracle_check(common, make_config(common, oracle_overrides));
    }
    if (demo_cmd->parsed()) {
      return run_framework_demo(common, make_config(common, demo_overrides));
    }
  } catch (const ValidationError& e) {
    std::cerr << "validation error: " << e.what() << "\n";
    return 2;
  } catch (const ConsistencyError& e) {
    std::cerr << "consistency error: " << e.what() << "\n";
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 2;
}
