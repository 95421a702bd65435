#pragma once

#include <string>
#include <utility>
#include <vector>

#include "anisodiff/grid.hpp"

// Binary snapshot format "GFB1": a single scalar field on a centered uniform
// grid. Layout (little endian):
//   magic "GFB1" | u32 dim | per axis: u64 cells, f64 half_length |
//   f64 values, row-major, axis 0 slowest.

namespace anisodiff {

void write_gfb(const std::string& path, const GridSpec& spec,
               const std::vector<double>& field);

std::pair<GridSpec, std::vector<double>> read_gfb(const std::string& path);

} // namespace anisodiff
