// Copyright The romscat Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "romscat/data_cube.hpp"
#include "romscat/grid.hpp"
#include "romscat/rom.hpp"
#include "romscat/search_basis.hpp"

namespace romscat {

using Bytes = std::vector<std::uint8_t>;

inline constexpr char kFieldMagic[] = "ROMGRID1";
inline constexpr char kDataMagic[] = "ROMDATA1";
inline constexpr char kRomMagic[] = "ROMROM1";
inline constexpr char kBasisMagic[] = "ROMBASIS";

// All binary formats are little-endian. Decoders throw FormatError on a
// wrong magic, truncation or trailing bytes, and never return partial objects.
Bytes encode_field(const Field& f);
Field decode_field(const Bytes& bytes);
Bytes encode_data(const DataCube& d);
DataCube decode_data(const Bytes& bytes);
Bytes encode_rom(const Rom& r);
Rom decode_rom(const Bytes& bytes);
Bytes encode_basis(const SearchBasis& b);
SearchBasis decode_basis(const Bytes& bytes);

Bytes read_file(const std::string& path);
void write_file(const std::string& path, const Bytes& bytes);

void save_field(const std::string& path, const Field& f);
Field load_field(const std::string& path);
void save_data(const std::string& path, const DataCube& d);
DataCube load_data(const std::string& path);
void save_rom(const std::string& path, const Rom& r);
Rom load_rom(const std::string& path);
void save_basis(const std::string& path, const SearchBasis& b);
SearchBasis load_basis(const std::string& path);

/// "ix,iz,x,z,value" per cell after a header line.
void write_field_csv(const std::string& path, const Field& f);
/// "j,r,s,value" per entry, no header, nsteps * m * m lines.
void write_data_csv(const std::string& path, const DataCube& d);
/// Binary 8-bit PGM, linear min-max scaling, one image row per range row.
void write_pgm(const std::string& path, const Field& f);

}  // namespace romscat
