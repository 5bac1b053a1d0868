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

#include "run_config.hpp"

#include <cstdio>
#include <fstream>
#include <numbers>
#include <regex>
#include <sstream>

namespace qmeas::cli {

namespace {

std::string trim(const std::string& text) {
  const auto begin = text.find_first_not_of(" \t\r\n");
  if (begin == std::string::npos) return "";
  const auto end = text.find_last_not_of(" \t\r\n");
  return text.substr(begin, end - begin + 1);
}

}  // namespace

std::map<std::string, std::string> load_config_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) {
    throw ValidationError("config: cannot open file '" + path + "'");
  }
  std::map<std::string, std::string> values;
  std::string line;
  int line_number = 0;
  while (std::getline(in, line)) {
    ++line_number;
    const auto comment = line.find('#');
    if (comment != std::string::npos) line.erase(comment);
    const std::string stripped = trim(line);
    if (stripped.empty()) continue;
    const auto eq = stripped.find('=');
    if (eq == std::string::npos) {
      throw ValidationError("config: line " + std::to_string(line_number) +
                            " is not of the form 'key = value'");
    }
    const std::string key = trim(stripped.substr(0, eq));
    const std::string value = trim(stripped.substr(eq + 1));
    if (key.empty() || value.empty()) {
      throw ValidationError("config: line " + std::to_string(line_number) +
                            " has an empty key or value");
    }
    values[key] = value;
  }
  return values;
}

double parse_angle(const std::string& text) {
  static const std::regex pi_form(R"(^\s*([0-9]*\.?[0-9]*)\s*pi\s*(?:/\s*([0-9]+\.?[0-9]*))?\s*$)");
  std::smatch match;
  if (std::regex_match(text, match, pi_form)) {
    const double factor = match[1].str().empty() ? 1.0 : std::stod(match[1].str());
    const double divisor = match[2].str().empty() ? 1.0 : std::stod(match[2].str());
    if (divisor == 0.0) {
      throw ValidationError("angle: division by zero in '" + text + "'");
    }
    return factor * std::numbers::pi / divisor;
  }
  return parse_double(text, "angle");
}

double parse_double(const std::string& text, const std::string& key) {
  try {
    std::size_t used = 0;
    const double value = std::stod(text, &used);
    if (used != text.size()) throw std::invalid_argument(text);
    return value;
  } catch (const std::exception&) {
    throw ValidationError(key + ": '" + text + "' is not a number");
  }
}

int parse_int(const std::string& text, const std::string& key) {
  try {
    std::size_t used = 0;
    const int value = std::stoi(text, &used);
    if (used != text.size()) throw std::invalid_argument(text);
    return value;
  } catch (const std::exception&) {
    throw ValidationError(key + ": '" + text + "' is not an integer");
  }
}

RunConfig::RunConfig(std::map<std::string, std::string> file_values)
    : values_(std::move(file_values)) {}

void RunConfig::override_value(const std::string& key, const std::string& value) {
  values_[key] = value;
}

bool RunConfig::has(const std::string& key) const { return values_.count(key) != 0; }

std::string RunConfig::raw(const std::string& key, const std::string& fallback) const {
  const auto it = values_.find(key);
  return it == values_.end() ? fallback : it->second;
}

double RunConfig::number(const std::string& key, double fallback) const {
  const auto it = values_.find(key);
  return it == values_.end() ? fallback : parse_double(it->second, key);
}

int RunConfig::integer(const std::string& key, int fallback) const {
  const auto it = values_.find(key);
  return it == values_.end() ? fallback : parse_int(it->second, key);
}

double RunConfig::angle(const std::string& key, double fallback) const {
  const auto it = values_.find(key);
  return it == values_.end() ? fallback : parse_angle(it->second);
}

std::vector<std::pair<std::string, std::string>> RunConfig::entries() const {
  return {values_.begin(), values_.end()};
}

void CsvWriter::metadata(const std::string& key, const std::string& value) {
  out_ << "# " << key << " = " << value << "\n";
}

void CsvWriter::metadata(const std::string& key, double value) {
  metadata(key, format(value));
}

void CsvWriter::header(const std::vector<std::string>& columns) {
  for (std::size_t i = 0; i < columns.size(); ++i) {
    out_ << (i == 0 ? "" : ",") << columns[i];
  }
  out_ << "\n";
}

void CsvWriter::row(const std::vector<std::string>& fields) { header(fields); }

std::string CsvWriter::format(double value) {
  char buffer[64];
  std::snprintf(buffer, sizeof(buffer), "%.17g", value);
  return buffer;
}

std::string CsvWriter::format(int value) { return std::to_string(value); }

}  // namespace qmeas::cli
