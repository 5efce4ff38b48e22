#pragma once

#include <array>
#include <optional>
#include <span>

namespace peerimex::bench {

/// Ghost cells next to a 1-D array of m cell averages.
/// left = {u_{-2}, u_{-1}, u_0}, right = {u_{m+1}, u_{m+2}, u_{m+3}}.
/// A missing outflow side is filled by constant extrapolation; a missing
/// inflow side is an error.
struct WenoGhosts {
    std::optional<std::array<double, 3>> left;
    std::optional<std::array<double, 3>> right;
};

/// Upwind WENO5 face values, biased by the sign of the wind. faces[i] is
/// the left face of cell i; faces[m] is the right end (m + 1 entries).
void weno5_faces(std::span<const double> u, int wind_sign, const WenoGhosts& ghosts, std::span<double> faces,
                 double eps = 1e-12);

/// d/dx u ~ (u_{i+1/2} - u_{i-1/2}) / dx from the WENO5 face values.
void weno5_derivative(std::span<const double> u, int wind_sign, double dx, const WenoGhosts& ghosts,
                      std::span<double> out, double eps = 1e-12);

}  // namespace peerimex::bench
