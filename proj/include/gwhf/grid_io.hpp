#pragma once

#include <string>

#include "gwhf/simulate.hpp"

namespace gwhf {

/// "GWHFGRID", uint32 LE header length, JSON header, then nx*ny float32
/// (re, im) pairs, row-major, little-endian.
void write_grid(const std::string& path, const FieldGrid& grid);
FieldGrid read_grid(const std::string& path);
/// Columns x,y,re,im.
void write_grid_csv(const std::string& path, const FieldGrid& grid);

nlohmann::json grid_header(const FieldGrid& grid);

}  // namespace gwhf
