#pragma once

#include "peerimex/bench/norms.hpp"
#include "peerimex/integrator.hpp"
#include "peerimex/linalg.hpp"
#include "peerimex/split_system.hpp"

#include <cstddef>
#include <functional>
#include <string>
#include <vector>

namespace peerimex::bench {

enum class GridLayout {
    node_uniform,      ///< x_i = i dx, i = 1..m (x = 0 is the boundary)
    cell_centered_1d,  ///< x_i = (i - 1/2) dx
    cell_centered_2d,  ///< m x m cells, index i + m j
};

struct GridSpec {
    int m = 0;
    double dx = 0.0;
    GridLayout layout = GridLayout::node_uniform;

    [[nodiscard]] std::size_t points() const noexcept;
    /// Coordinate of the i-th point along one axis (zero based).
    [[nodiscard]] double coordinate(int i) const noexcept;
};

[[nodiscard]] GridSpec make_grid(int m, GridLayout layout);

struct ProblemInstance {
    std::string name;
    SplitSystem system;
    GridSpec grid;
    double t0 = 0.0;
    double t_end = 1.0;
    Vector u0;
    /// Component-major blocks, e.g. {"u", "v"}: all u values, then all v values.
    std::vector<std::string> components;
    NormKind norm = NormKind::l2_vector;
    /// h in the discrete norms.
    double norm_weight = 1.0;
    /// Quantity whose error is measured; empty means the full state.
    std::function<Vector(const Vector&)> observable;
    StarterKind starter = StarterKind::runge_kutta;
    /// Identifies the problem and its parameters (reference-solution cache key).
    std::string key;

    [[nodiscard]] Vector observe(const Vector& state) const;
    /// Norm of observe(a) - observe(b).
    [[nodiscard]] double error(const Vector& a, const Vector& b) const;
};

struct AdvectionReactionParams {
    double alpha1 = 1.0;
    double k1 = 1e6;
    double k2 = 2e6;
    double s1 = 0.0;
    double s2 = 1.0;
    double t_end = 1.0;
    /// u(0, t); empty means 1 - sin(12 t)^4.
    std::function<double(double)> inflow;
    /// u(x, 0); empty means 1 + s2 x. v starts at (k1 u + s2) / k2 (0 if k2 = 0).
    std::function<double(double)> initial_u;
};

/// Linear advection of u with reaction u <-> v, m nodes on (0, 1].
/// F0: 4th-order finite-difference advection, F1: pointwise reaction.
[[nodiscard]] ProblemInstance advection_reaction_problem(int m, const AdvectionReactionParams& params = {});

/// The advection operator alone: out = -alpha d/dx u with u(0) = boundary.
void advection_fd(std::span<const double> u, double boundary, double alpha, double dx, std::span<double> out);

struct AdsorptionParams {
    double kappa = 1e6;
    double k1 = 50.0;
    double k2 = 100.0;
    double t_end = 1.25;
    /// Wind a(t); empty means -(3/pi) atan(100 (t - 1)).
    std::function<double(double)> velocity;
    /// u(0, t) while a > 0; empty means 1 - cos(6 pi t)^2.
    std::function<double(double)> inflow_left;
    /// u(1, t) while a < 0.
    double inflow_right = 0.0;
};

/// Adsorption/desorption with a reversing wind, m cells, WENO5 advection.
/// Errors are measured on the total concentration u + v in the l1 norm.
[[nodiscard]] ProblemInstance adsorption_desorption_problem(int m, const AdsorptionParams& params = {});

struct SchnakenbergParams {
    double d1 = 0.05;
    double d2 = 1.0;
    double kappa = 100.0;
    double a = 0.1305;
    double b = 0.7695;
    double t_end = 1.0;
    double bump = 1e-3;
};

/// 2-D Schnakenberg reaction-diffusion on m x m cells with Neumann
/// boundaries. F0: reaction, F1: diffusion.
[[nodiscard]] ProblemInstance schnakenberg_problem(int m, const SchnakenbergParams& params = {});

/// Five-point Laplacian on m x m cells with reflected ghost cells.
void neumann_laplacian(std::span<const double> u, int m, double dx, std::span<double> out);

/// advreac, adsdes or schnakenberg with default parameters.
[[nodiscard]] ProblemInstance problem_by_name(const std::string& name, int m);

}  // namespace peerimex::bench
