#pragma once

#include "geofold/lattice.hpp"
#include "geofold/mesh.hpp"
#include "geofold/bands.hpp"
#include "geofold/classify.hpp"
#include "geofold/embed.hpp"
#include "geofold/io.hpp"

namespace geofold {
inline constexpr const char* kVersion = "0.1.0";
}
