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

//! Flat key-value run configuration and deterministic CSV emission.
//! Precedence: built-in defaults < config file < command-line flags.

#pragma once

#include <map>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

#include <qmeas/types.hpp>

namespace qmeas::cli {

/// Parses `key = value` lines; blank lines and `#` comments are ignored.
/// Throws ValidationError on malformed lines or unreadable files.
std::map<std::string, std::string> load_config_file(const std::string& path);

/// Radian angle parser. Accepts plain floating literals plus the exact
/// tokens `pi`, `pi/2`, `pi/3`, `pi/4`, `pi/6` and scaled forms like
/// `3pi/4`, mapped to the nearest double.
double parse_angle(const std::string& text);

double parse_double(const std::string& text, const std::string& key);
int parse_int(const std::string& text, const std::string& key);

/// One resolved run configuration: the merged key-value view.
class RunConfig {
 public:
  RunConfig(std::map<std::string, std::string> file_values);

  /// Flag layer: called for options the user passed explicitly.
  void override_value(const std::string& key, const std::string& value);

  bool has(const std::string& key) const;
  std::string raw(const std::string& key, const std::string& fallback) const;
  double number(const std::string& key, double fallback) const;
  int integer(const std::string& key, int fallback) const;
  /// Angle-aware lookup (accepts the pi tokens).
  double angle(const std::string& key, double fallback) const;

  /// Keys actually present, for the CSV metadata block.
  std::vector<std::pair<std::string, std::string>> entries() const;

 private:
  std::map<std::string, std::string> values_;
};

/// CSV writer with a fixed metadata block and 17-significant-digit floats,
/// so output bytes depend only on the data.
class CsvWriter {
 public:
  explicit CsvWriter(std::ostream& out) : out_(out) {}

  void metadata(const std::string& key, const std::string& value);
  void metadata(const std::string& key, double value);
  void header(const std::vector<std::string>& columns);
  void row(const std::vector<std::string>& fields);

  static std::string format(double value);
  static std::string format(int value);

 private:
  std::ostream& out_;
};

}  // namespace qmeas::cli
