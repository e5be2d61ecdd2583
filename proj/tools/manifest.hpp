// Copyright The romscat Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <map>
#include <string>
#include <vector>

namespace romscat::cli {

/// Hex SHA-256 of a byte string.
std::string sha256_hex(const std::string& text);

/// Record of one run: what went in, what came out, which tolerances applied.
struct Manifest {
  std::string command;
  std::string config_path;
  std::string config_text;  // hashed; the canonical argument list when no config file is used
  std::map<std::string, std::string> parameters;
  std::map<std::string, double> tolerances;
  std::vector<std::string> outputs;

  /// Writes <dir>/manifest_<command>.json and returns the path.
  std::string write(const std::string& dir) const;
};

}  // namespace romscat::cli
