#pragma once

#include <string>
#include <vector>

#include "dlamps/raster.hpp"

namespace dlamps {

// Displacement sequences are stored as concatenated "DLF1" records, one per
// frame: 4 magic bytes, width and height as u32 little-endian, then the dx
// plane followed by the dy plane as little-endian 32-bit floats, row-major.
// All frames of a file must share dimensions.

void save_field_sequence(const std::vector<DisplacementField>& sequence,
                         const std::string& path);
std::vector<DisplacementField> load_field_sequence(const std::string& path);

}  // namespace dlamps
