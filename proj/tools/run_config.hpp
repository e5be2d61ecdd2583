// Copyright The romscat Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "romscat/romscat.hpp"

namespace romscat::cli {

/// One box inclusion, x range ignored in 1D.
struct BoxSpec {
  double x0 = 0.0, x1 = 0.0, z0 = 0.0, z1 = 0.0, value = 0.0;
};

/// Everything a run needs, read from a flat INI file.
struct RunConfig {
  // [grid]
  int nx = 1;
  int nz = 0;
  double h = 1.0;
  // [medium]
  std::string phantom = "homogeneous";
  std::string medium_file;
  double c0 = 1.0;
  double contrast = 0.2;
  double collar_wavelengths = 1.0;
  std::vector<BoxSpec> boxes;
  // [array]
  int m = 0;
  int pitch = 1;
  int row = 1;
  // [pulse]
  double wavelength = 0.0;
  // [time]
  std::optional<double> tau;  // unset means derived from samples_per_period
  double samples_per_period = 2.5;
  int n = 0;
  int substeps = 0;
  // [noise]
  double noise_level = 0.0;
  std::uint64_t seed = 1;
  // [rom]
  double rom_rel_tol = 0.0;
  // [basis]
  std::string basis_kind = "hats";
  std::optional<double> basis_spacing;
  std::optional<double> z_first, z_last, x_first, x_last;
  double psf_tol = 0.02;
  // [inversion]
  std::string method = "rom-gn";
  int max_iter = 5;
  double svd_cutoff = 0.0;
  double fd_step = 1e-4;
  // [output]
  std::string output_dir = ".";
  bool csv = true;

  /// Raw file text, hashed into the manifest.
  std::string text;

  Grid2D grid() const { return Grid2D(nx, nz, h); }
  Pulse pulse() const { return Pulse::ricker(c0 / wavelength); }
  double collar() const { return collar_wavelengths * wavelength; }
  /// Kinematic model: the speed field is known, q is not.
  ForwardSetup forward_setup() const;
  Field speed() const;
  /// True reflectivity from the phantom settings.
  Field reflectivity() const;
  /// Search basis from the [basis] section; PSF-driven meshes need the model.
  SearchBasis basis(const ForwardModel& model, MeshReport* report = nullptr) const;
};

/// Throws ConfigError naming the key on missing or malformed entries and
/// FormatError when the file cannot be read.
RunConfig load_config(const std::string& path);
RunConfig parse_config(const std::string& text);

}  // namespace romscat::cli
