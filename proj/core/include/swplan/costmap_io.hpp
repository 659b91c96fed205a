#pragma once

#include <filesystem>
#include <string>
#include <string_view>

#include "swplan/lattice.hpp"

namespace swplan {

inline constexpr int kCostmapFormatVersion = 1;

/// Costmap text format, version 1.
///
///   swplan-costmap 1
///   width W
///   height H
///   spacing_m S
///   traversable 0101... (row-major, W*H chars)
///   layer current
///   row,col,direction_index,delay
///   ...
///   layer obstacle
///   ...
///
/// All four layers appear in the fixed order current, obstacle, slope,
/// intraversable. Each layer lists every directed edge in canonical order
/// (targets row-major, directions in enumeration order) with the delay
/// printed to 6 decimal places. Writing the result of a load reproduces the
/// input byte for byte.
std::string costmap_to_string(const CostLayerSet& layers);
CostLayerSet parse_costmap(std::string_view text);

void save_costmap(const CostLayerSet& layers, const std::filesystem::path& p);
CostLayerSet load_costmap(const std::filesystem::path& p);

}  // namespace swplan
