#pragma once

#include "peerimex/bench/convergence.hpp"
#include "peerimex/stability.hpp"

#include <string>
#include <vector>

namespace peerimex {

struct Box {
    double x_min = 0.0;
    double x_max = 0.0;
    double y_min = 0.0;
    double y_max = 0.0;
};

/// Bounding box of all vertices (and the origin) padded by `margin`.
[[nodiscard]] Box region_viewport(const std::vector<StabilityPolygon>& polygons, double margin = 0.2);

/// Nested stability contours, largest first: beta = 0 red, the largest
/// beta black, others blue. Empty input still yields axes; a note is
/// appended to `warnings` if given.
[[nodiscard]] std::string render_regions_svg(const std::vector<StabilityPolygon>& polygons,
                                             std::vector<std::string>* warnings = nullptr);

/// Log-log error against dt, one polyline per method, plus one dashed
/// guide segment per entry of `guide_orders`.
[[nodiscard]] std::string render_convergence_svg(const bench::ConvergenceReport& report,
                                                 const std::vector<int>& guide_orders,
                                                 std::vector<std::string>* warnings = nullptr);

}  // namespace peerimex
