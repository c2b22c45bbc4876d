#pragma once

#include <string>

#include "fpf/colorer.hpp"

namespace fpf::svg {

/// Deterministic SVG of a coloring for k <= 2. Each cell is filled with the
/// color of its first class; every further membership adds a hatched layer in
/// that class's color, in class order. 1-D domains are drawn as a strip.
/// Throws ConfigError for k >= 3.
std::string render(const geom::DomainComplex& x, const color::Coloring& c, int width = 800);

}  // namespace fpf::svg
