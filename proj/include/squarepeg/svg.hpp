#pragma once

// SVG 1.1 figures: the polygon with its inscribed squares, and optionally a
// second panel showing torus curves in the unit-square chart of X x X.

#include <string>
#include <vector>

#include "squarepeg/enumerator.hpp"
#include "squarepeg/torus.hpp"

namespace squarepeg {

/// Deterministic bytes for fixed inputs. The polygon and every square are
/// closed paths; the y axis is flipped here and nowhere else.
std::string render_svg(const Polygon& poly, const std::vector<InscribedSquare>& squares,
                       const std::vector<TorusCurve>* curves = nullptr);

void render_svg(const Polygon& poly, const std::vector<InscribedSquare>& squares,
                const std::vector<TorusCurve>* curves, const std::string& path);

}  // namespace squarepeg
