#pragma once

/// @brief Umbrella header for the simplexvol library.

#include "simplexvol/error.hpp"
#include "simplexvol/symlin.hpp"
#include "simplexvol/gram.hpp"
#include "simplexvol/lp.hpp"
#include "simplexvol/normals.hpp"
#include "simplexvol/geometry.hpp"
#include "simplexvol/rng.hpp"
#include "simplexvol/volume.hpp"
#include "simplexvol/degen.hpp"
