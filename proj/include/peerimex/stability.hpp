#pragma once

#include "peerimex/linalg.hpp"
#include "peerimex/tableau.hpp"

#include <string>
#include <vector>

namespace peerimex {

/// Scaled eigenvalues of the split test equation y' = lambda0 y + lambda1 y.
struct StabilityPoint {
    Complex z0;  ///< dt * lambda0, explicit part
    Complex z1;  ///< dt * lambda1, implicit part
};

/// M(z0, z1) = (I - z0 Rhat - z1 R)^{-1} (P + z0 Qhat).
/// Throws ErrorCode::singular_at_point when the system matrix is singular.
[[nodiscard]] ComplexMatrix stability_matrix(const ImexTableau& t, Complex z0, Complex z1);

/// rho(M(z0, z1)); +inf where the system matrix is singular.
[[nodiscard]] double amplification(const ImexTableau& t, Complex z0, Complex z1);

struct StabilityCheck {
    bool stable = false;       ///< rho < 1 and not on the boundary
    bool on_boundary = false;  ///< |rho - 1| <= tol
    double rho = 0.0;
};

[[nodiscard]] StabilityCheck is_stable(const ImexTableau& t, Complex z0, Complex z1, double tol = 1e-5);

/// Boundary-locus matrix G(w, z1) = (w Rhat + Qhat)^{-1} (w I - w z1 R - P);
/// its eigenvalues z0 satisfy det(w I - M(z0, z1)) = 0.
[[nodiscard]] ComplexMatrix boundary_locus_matrix(const ImexTableau& t, Complex w, Complex z1);

/// Implicit-part sample z1(y) = -|y| / tan(beta) + i y on the edge of the
/// wedge of half-angle beta. beta = 0 selects the explicit set (z1 = 0).
[[nodiscard]] Complex wedge_z1(double beta_deg, double y);

enum class RaySearch {
    /// Bisection on [0, R] with an unstable outer end, stopping on |rho - 1| <= tol.
    bracket,
    /// March outward from the origin to the first unstable point, then bisect.
    first_exit,
};

struct RayOptions {
    double tol = 1e-5;
    double bracket_radius = 50.0;
    double max_radius = 400.0;
    double march_step = 0.005;
    RaySearch search = RaySearch::bracket;
};

/// Radius of the boundary of S_{beta,y} along the ray at `ray_angle_deg`
/// for a fixed implicit value z1. Throws ErrorCode::no_boundary_on_ray.
[[nodiscard]] double ray_boundary_radius(const ImexTableau& t, double ray_angle_deg, Complex z1,
                                         const RayOptions& opts = {});

/// Intersection of the boundary of S_{beta,y} with the ray (a point z0).
[[nodiscard]] Complex boundary_point(const ImexTableau& t, double beta_deg, double ray_angle_deg,
                                     double y, const RayOptions& opts = {});

struct RayMinimum {
    double radius = 0.0;
    double y = 0.0;  ///< minimising implicit parameter
};

/// Minimises the boundary radius along one ray over y (coarse scan + 1-D
/// Nelder-Mead), giving the boundary of S_beta on that ray.
[[nodiscard]] RayMinimum wedge_ray(const ImexTableau& t, double beta_deg, double ray_angle_deg,
                                   const RayOptions& opts = {});

struct RegionOptions {
    int n_rays = 360;
    RayOptions ray;
    int threads = 1;
};

/// Polygonal approximation of the boundary of S_beta (or S_E for beta = 0),
/// closed through the origin.
struct StabilityPolygon {
    double beta_deg = 0.0;
    std::vector<double> ray_angles_deg;
    std::vector<Complex> vertices;
    std::vector<double> minimizing_y;
    /// Shoelace area of origin + vertices; a lower bound when partial.
    double area = 0.0;
    /// Left end of the stable interval (x_max, 0] on the negative real axis.
    double x_max = 0.0;
    bool partial = false;
    std::vector<double> failed_rays_deg;
};

[[nodiscard]] StabilityPolygon wedge_region(const ImexTableau& t, double beta_deg,
                                            const RegionOptions& opts = {});

/// Left end of the stable real interval containing the origin, for S_beta
/// (beta = 0: explicit set).
[[nodiscard]] double real_axis_extent(const ImexTableau& t, double beta_deg, const RayOptions& opts = {});

/// Shoelace area of a closed polygon (implicit closure).
[[nodiscard]] double shoelace_area(const std::vector<Complex>& vertices);

/// Largest alpha (degrees) with rho(M(0, z1)) < 1 on the wedge edge
/// |Im z1| = -tan(alpha) Re z1, resolved to `resolution_deg`.
[[nodiscard]] double implicit_angle(const ImexTableau& t, double resolution_deg = 0.01);

/// CSV block: header, one row per vertex, trailing `# area=... x_max=...`.
[[nodiscard]] std::string region_csv(const std::vector<StabilityPolygon>& polygons);

}  // namespace peerimex
