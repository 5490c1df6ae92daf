#pragma once

// JSON polygon and scenario files.
//
//   polygon:  {"vertices": [[x, y], ...]}
//   scenario: {"keyframes": [{"time": t, "vertices": [[x, y], ...]}, ...]}
//
// Numbers are written with 17 significant digits so load(save(x)) == x.

#include <string>

#include "squarepeg/deformation.hpp"
#include "squarepeg/geom.hpp"

namespace squarepeg {

Polygon parse_polygon(const std::string& text);
DeformationScenario parse_scenario(const std::string& text);

std::string format_polygon(const Polygon& poly);
std::string format_scenario(const DeformationScenario& sc);

Polygon load_polygon(const std::string& path);
DeformationScenario load_scenario(const std::string& path);
void save_polygon(const Polygon& poly, const std::string& path);
void save_scenario(const DeformationScenario& sc, const std::string& path);

/// 17 significant digits.
std::string format_number(double x);

std::string read_file(const std::string& path);
void write_file(const std::string& path, const std::string& text);

}  // namespace squarepeg
