#include "peerimex/bench/weno5.hpp"

#include "peerimex/error.hpp"

#include <vector>

namespace peerimex::bench {

namespace {

/// Left-biased reconstruction at the right face of the centre cell c from
/// (a, b, c, d, e) = v_{i-2} .. v_{i+2}.
double reconstruct(double a, double b, double c, double d, double e, double eps) {
    const double b0 = 13.0 / 12.0 * (a - 2.0 * b + c) * (a - 2.0 * b + c) + 0.25 * (a - 4.0 * b + 3.0 * c) * (a - 4.0 * b + 3.0 * c);
    const double b1 = 13.0 / 12.0 * (b - 2.0 * c + d) * (b - 2.0 * c + d) + 0.25 * (b - d) * (b - d);
    const double b2 = 13.0 / 12.0 * (c - 2.0 * d + e) * (c - 2.0 * d + e) + 0.25 * (3.0 * c - 4.0 * d + e) * (3.0 * c - 4.0 * d + e);
    const double a0 = 0.1 / ((eps + b0) * (eps + b0));
    const double a1 = 0.6 / ((eps + b1) * (eps + b1));
    const double a2 = 0.3 / ((eps + b2) * (eps + b2));
    const double q0 = (2.0 * a - 7.0 * b + 11.0 * c) / 6.0;
    const double q1 = (-b + 5.0 * c + 2.0 * d) / 6.0;
    const double q2 = (2.0 * c + 5.0 * d - e) / 6.0;
    return (a0 * q0 + a1 * q1 + a2 * q2) / (a0 + a1 + a2);
}

}  // namespace

void weno5_faces(std::span<const double> u, int wind_sign, const WenoGhosts& ghosts, std::span<double> faces,
                 double eps) {
    const std::size_t m = u.size();
    if (m < 6) throw Error(ErrorCode::grid_too_small, "WENO5 needs at least 6 cells");
    if (faces.size() != m + 1) throw Error(ErrorCode::invalid_argument, "WENO5 face array must hold m + 1 values");
    const bool positive = wind_sign >= 0;
    if (positive && !ghosts.left)
        throw Error(ErrorCode::boundary_underspecified, "inflow ghost cells missing on the left");
    if (!positive && !ghosts.right)
        throw Error(ErrorCode::boundary_underspecified, "inflow ghost cells missing on the right");

    // Extended array v[k] = u_{k-3}, k = 0..m+5.
    std::vector<double> v(m + 6);
    const auto left = ghosts.left.value_or(std::array<double, 3>{u[0], u[0], u[0]});
    const auto right = ghosts.right.value_or(std::array<double, 3>{u[m - 1], u[m - 1], u[m - 1]});
    v[0] = left[0];
    v[1] = left[1];
    v[2] = left[2];
    for (std::size_t i = 0; i < m; ++i) v[i + 3] = u[i];
    v[m + 3] = right[0];
    v[m + 4] = right[1];
    v[m + 5] = right[2];

    // faces[i] is the left face of cell i, between v[i+2] and v[i+3].
    for (std::size_t i = 0; i <= m; ++i) {
        const std::size_t k = i + 2;
        faces[i] = positive ? reconstruct(v[k - 2], v[k - 1], v[k], v[k + 1], v[k + 2], eps)
                            : reconstruct(v[k + 3], v[k + 2], v[k + 1], v[k], v[k - 1], eps);
    }
}

void weno5_derivative(std::span<const double> u, int wind_sign, double dx, const WenoGhosts& ghosts,
                      std::span<double> out, double eps) {
    const std::size_t m = u.size();
    std::vector<double> faces(m + 1);
    weno5_faces(u, wind_sign, ghosts, faces, eps);
    for (std::size_t i = 0; i < m; ++i) out[i] = (faces[i + 1] - faces[i]) / dx;
}

}  // namespace peerimex::bench
