#pragma once

#include <filesystem>
#include <iosfwd>

#include "atomcorr/modes.hpp"

namespace atomcorr {

// Sampled detection modes on disk.
//
// Text form: a header line "nx ny dx dy", then nx*ny lines of six numbers
// "Re Ex Im Ex Re Ey Im Ey Re Ez Im Ez". Lines starting with '#' are comments.
//
// Binary form: nx, ny as little-endian uint64, dx, dy as little-endian float64,
// then nx*ny points of six little-endian float64 in the same component order.
//
// Points are row-major with x fastest, on the centred grid described by ModeGrid.

ModeGrid read_mode_grid_text(std::istream& in);
void write_mode_grid_text(std::ostream& out, const ModeGrid& grid);

ModeGrid read_mode_grid_binary(std::istream& in);
void write_mode_grid_binary(std::ostream& out, const ModeGrid& grid);

/// Dispatches on the extension: ".bin" is binary, anything else text.
ModeGrid load_mode_grid(const std::filesystem::path& path);

/// Samples a mode onto a centred grid.
ModeGrid sample_mode(const ModeSpec& mode, std::size_t nx, std::size_t ny, double dx, double dy);

}  // namespace atomcorr
