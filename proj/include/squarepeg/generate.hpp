#pragma once

#include <cstddef>
#include <cstdint>
#include <string>

#include "squarepeg/geom.hpp"

namespace squarepeg {

enum class GenMethod { Angular, Uncross };

GenMethod parse_gen_method(const std::string& name);

/// Angular: sorted random angles with radii in [0.3, 1], star-shaped about the
/// origin. Uncross: points in the unit square untangled by 2-opt moves; throws
/// after 1e5 moves. Deterministic per seed.
Polygon gen_random_polygon(std::size_t n, std::uint64_t seed, GenMethod method);

}  // namespace squarepeg
