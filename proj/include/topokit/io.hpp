#pragma once

#include <string>

#include "topokit/grid.hpp"

namespace topokit {

// Raw grid file: one-line JSON header {"dims":[...],"order":"row-major"}
// terminated by '\n', followed by little-endian float32 values.
ScalarGrid read_grid_raw(const std::string& path);
void write_grid_raw(const ScalarGrid& grid, const std::string& path);

// Binary PGM (P5, maxval 255), FG = 255. 3D masks are stacked slices
// (height = h*d). Reading uses the given adjacency (default per dims).
BinaryMask read_mask_pgm(const std::string& path);
BinaryMask read_mask_pgm(const std::string& path, int fg_adjacency);
void write_mask_pgm(const BinaryMask& mask, const std::string& path);

}  // namespace topokit
