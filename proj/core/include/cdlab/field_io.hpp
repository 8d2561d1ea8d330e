#pragma once

#include <filesystem>
#include <iosfwd>

#include "cdlab/grid.hpp"

namespace cdlab {

/// Snapshot format: one header line `N m cells... extents...` followed by
/// whitespace-separated values, cell-major with components innermost.
/// Boundary kind is not part of the format; loaded grids default to Neumann.
void save_snapshot(const std::filesystem::path& path, const Field& field);
void write_snapshot(std::ostream& os, const Field& field);
Field load_snapshot(const std::filesystem::path& path);
Field read_snapshot(std::istream& is);

/// CSV export: header `x0[,x1[,x2]],c0,...`, one row per cell with the cell
/// center coordinates then the component values.
void export_csv(const std::filesystem::path& path, const Field& field);

}  // namespace cdlab
