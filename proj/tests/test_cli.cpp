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

#include <doctest.h>

#include <sys/wait.h>

#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <numbers>
#include <sstream>
#include <string>

#include <qmeas/chain.hpp>

namespace {

namespace fs = std::filesystem;

struct CliResult {
  int exit_code = -1;
  std::string out;
  std::string err;
};

std::string slurp(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return buffer.str();
}

CliResult run_cli(const std::string& args) {
  static int counter = 0;
  const fs::path dir = fs::temp_directory_path();
  const std::string tag = std::to_string(counter++);
  const fs::path out_path = dir / ("qmeas_cli_out_" + tag + ".txt");
  const fs::path err_path = dir / ("qmeas_cli_err_" + tag + ".txt");
  const std::string command = std::string(QMEAS_CLI_PATH) + " " + args + " > " +
                              out_path.string() + " 2> " + err_path.string();
  const int status = std::system(command.c_str());
  CliResult result;
  result.exit_code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  result.out = slurp(out_path);
  result.err = slurp(err_path);
  fs::remove(out_path);
  fs::remove(err_path);
  return result;
}

/// Value of the first CSV row whose first field equals `name`.
double row_value(const std::string& csv, const std::string& name) {
  std::istringstream lines(csv);
  std::string line;
  while (std::getline(lines, line)) {
    if (line.rfind(name + ",", 0) == 0) {
      return std::stod(line.substr(name.size() + 1));
    }
  }
  FAIL("row not found: ", name);
  return 0.0;
}

std::string last_line(const std::string& text) {
  std::istringstream lines(text);
  std::string line;
  std::string last;
  while (std::getline(lines, line)) {
    if (!line.empty()) last = line;
  }
  return last;
}

std::string format17(double value) {
  char buffer[64];
  std::snprintf(buffer, sizeof(buffer), "%.17g", value);
  return buffer;
}

}  // namespace

TEST_CASE("classify grades the exact point as ideal") {
  const CliResult result = run_cli("classify --L 50 --m 1 --J pi/2");
  CHECK(result.exit_code == 0);
  CHECK(result.out.find("Ideal,0,0,0,inf,0,false") != std::string::npos);
  // The pi/2 token maps to the best double.
  CHECK(result.out.find("# J = " + format17(std::numbers::pi / 2.0)) != std::string::npos);
}

TEST_CASE("classify reports an unpolarized chain as unclassified") {
  const CliResult result = run_cli("classify --L 50 --m 0 --J 0.9");
  CHECK(result.exit_code == 0);
  CHECK(result.out.find("Unclassified,0.5,0.5,0.5,0,1,false") != std::string::npos);
}

TEST_CASE("classify emits the library values bit for bit") {
  const CliResult result = run_cli("classify --L 100 --m 0.8 --J 1.2");
  CHECK(result.exit_code == 0);
  const auto expected = qmeas::chain::classify_chain(qmeas::chain::ChainParams(100, 0.8, 1.2));
  const std::string row = "Normal," + format17(expected.overlap_plus_in_minus) + "," +
                          format17(expected.overlap_minus_in_plus) + "," +
                          format17(expected.report.eta) + "," + format17(expected.rate) + "," +
                          format17(expected.predicted_eta) + ",true";
  CHECK(result.out.find(row) != std::string::npos);
}

TEST_CASE("classify rejects out-of-range parameters with exit 2") {
  const CliResult result = run_cli("classify --L 50 --m 1.5 --J 0.9");
  CHECK(result.exit_code == 2);
  CHECK(result.err.find("polarization") != std::string::npos);
}

TEST_CASE("classify requires its parameters") {
  const CliResult result = run_cli("classify --m 1 --J 0.9");
  CHECK(result.exit_code == 2);
  CHECK(result.err.find("L") != std::string::npos);
}

TEST_CASE("sweep columns collapse at the endpoints of the polarization range") {
  const CliResult zero = run_cli("sweep --L-min 1 --L-max 4 --m 0 --J 0.9");
  CHECK(zero.exit_code == 0);
  CHECK(zero.out.find("1,3,0.5,0.5,") != std::string::npos);
  CHECK(zero.out.find("4,9,0.5,0.5,") != std::string::npos);

  const CliResult one = run_cli("sweep --L-min 1 --L-max 4 --m 1 --J pi/2");
  CHECK(one.exit_code == 0);
  CHECK(one.out.find("1,3,0,0,-inf,-inf") != std::string::npos);
}

TEST_CASE("sweep output is byte-identical across thread counts") {
  const fs::path dir = fs::temp_directory_path();
  const fs::path a = dir / "qmeas_sweep_t1.csv";
  const fs::path b = dir / "qmeas_sweep_t8.csv";
  const std::string base = "sweep --L-min 10 --L-max 200 --L-step 10 --m 0.5 --J pi/2 --out ";
  CHECK(run_cli(base + a.string() + " --threads 1").exit_code == 0);
  CHECK(run_cli(base + b.string() + " --threads 8").exit_code == 0);
  const std::string bytes_a = slurp(a);
  const std::string bytes_b = slurp(b);
  CHECK(!bytes_a.empty());
  CHECK(bytes_a == bytes_b);
  fs::remove(a);
  fs::remove(b);
}

TEST_CASE("config file values are overridden by flags") {
  const fs::path config = fs::temp_directory_path() / "qmeas_test_config.txt";
  {
    std::ofstream out(config);
    out << "# test configuration\n";
    out << "L = 50\n";
    out << "m = 0.5\n";
    out << "J = pi/2\n";
  }
  const CliResult from_file = run_cli("classify --config " + config.string());
  CHECK(from_file.exit_code == 0);
  CHECK(from_file.out.find("Normal,") != std::string::npos);

  const CliResult overridden = run_cli("classify --config " + config.string() + " --m 1");
  CHECK(overridden.exit_code == 0);
  CHECK(overridden.out.find("Ideal,") != std::string::npos);
  fs::remove(config);
}

TEST_CASE("time-series reports the critical time and settles") {
  const CliResult result = run_cli("time-series --L 1 --m 1 --J pi/2");
  CHECK(result.exit_code == 0);
  CHECK(result.out.find("# tau = 4") != std::string::npos);
  // Final sample is past the critical time and flagged stationary.
  const std::string final_row = last_line(result.out);
  CHECK(final_row.find("true") != std::string::npos);
  // First sample carries the static weights: the fully polarized chain reads
  // cell plus with certainty in the uncoupled branch.
  CHECK(result.out.find("\n0,1,0,") != std::string::npos);
}

TEST_CASE("oracle-check passes by default and fails loudly when corrupted") {
  CHECK(run_cli("oracle-check --L 3").exit_code == 0);

  const CliResult corrupted = run_cli("oracle-check --L 3 --oracle-tol 1e-20");
  CHECK(corrupted.exit_code == 1);
  CHECK(corrupted.err.find("enumeration_vs_closed_form") != std::string::npos);

  CHECK(run_cli("oracle-check --L 13").exit_code == 2);
}

TEST_CASE("framework demo on the embedded ideal chain") {
  const CliResult result =
      run_cli("framework-demo --model chain --L 2 --m 1 --J pi/2 --c-plus 0.6 --c-minus 0.8");
  CHECK(result.exit_code == 0);
  CHECK(std::abs(row_value(result.out, "expectation_identity") - 1.0) < 1e-12);
  CHECK(std::abs(row_value(result.out, "w_1") - 0.36) < 1e-10);
  CHECK(std::abs(row_value(result.out, "w_2") - 0.64) < 1e-10);
  CHECK(std::abs(row_value(result.out, "rho_re_1_2")) < 1e-10);
  CHECK(std::abs(row_value(result.out, "consistency_residual")) < 1e-11);
}

TEST_CASE("framework demo on random instruments is self-consistent") {
  const CliResult result = run_cli("framework-demo --model random --dimK 10 --seed 4");
  CHECK(result.exit_code == 0);
  CHECK(std::abs(row_value(result.out, "expectation_identity") - 1.0) < 1e-11);
  CHECK(std::abs(row_value(result.out, "consistency_residual")) < 1e-11);
  const double w1 = row_value(result.out, "w_1");
  const double w2 = row_value(result.out, "w_2");
  CHECK(std::abs(w1 + w2 - 1.0) < 1e-11);
}

TEST_CASE("unnormalized demo amplitudes are refused") {
  const CliResult result =
      run_cli("framework-demo --model chain --L 1 --c-plus 0.6 --c-minus 0.9");
  CHECK(result.exit_code == 2);
}
