// Copyright The romscat Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include "romscat/born.hpp"
#include "romscat/data_cube.hpp"
#include "romscat/error.hpp"
#include "romscat/formats.hpp"
#include "romscat/forward_model.hpp"
#include "romscat/grid.hpp"
#include "romscat/inversion.hpp"
#include "romscat/linalg.hpp"
#include "romscat/parallel.hpp"
#include "romscat/phantoms.hpp"
#include "romscat/pulse.hpp"
#include "romscat/rom.hpp"
#include "romscat/search_basis.hpp"
#include "romscat/simplex.hpp"
#include "romscat/spectral_oracle.hpp"
#include "romscat/wavesim.hpp"
