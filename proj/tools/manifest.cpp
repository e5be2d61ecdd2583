// Copyright The romscat Authors
// SPDX-License-Identifier: Apache-2.0

#include "manifest.hpp"

#include <openssl/evp.h>

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <sstream>

#include "json.hpp"
#include "romscat/error.hpp"
#include "romscat/formats.hpp"
#include "romscat/parallel.hpp"

namespace romscat::cli {

std::string sha256_hex(const std::string& text) {
  unsigned char digest[EVP_MAX_MD_SIZE];
  unsigned int len = 0;
  if (EVP_Digest(text.data(), text.size(), digest, &len, EVP_sha256(), nullptr) != 1) {
    throw Error("SHA-256 digest failed");
  }
  std::ostringstream os;
  for (unsigned int i = 0; i < len; ++i) os << std::hex << std::setw(2) << std::setfill('0') << int{digest[i]};
  return os.str();
}

std::string Manifest::write(const std::string& dir) const {
  nlohmann::ordered_json j;
  j["tool"] = "romscat";
  j["version"] = ROMSCAT_VERSION;
  j["command"] = command;
  j["config"] = config_path;
  j["config_sha256"] = sha256_hex(config_text);
  j["formats"] = {{"field", kFieldMagic}, {"data", kDataMagic}, {"rom", kRomMagic}, {"basis", kBasisMagic}};
  j["threads"] = thread_count();
  j["parameters"] = parameters;
  j["tolerances"] = tolerances;
  j["outputs"] = outputs;
  std::string name = command;
  std::replace(name.begin(), name.end(), ' ', '_');
  const std::filesystem::path path = std::filesystem::path(dir) / ("manifest_" + name + ".json");
  std::ofstream os(path);
  if (!os) throw FormatError("cannot write '" + path.string() + "'");
  os << j.dump(2) << '\n';
  if (!os) throw FormatError("failed writing '" + path.string() + "'");
  return path.string();
}

}  // namespace romscat::cli
