#include "peerimex/bench/problems.hpp"

#include "peerimex/bench/weno5.hpp"
#include "peerimex/error.hpp"
#include "peerimex/format.hpp"

#include <cmath>
#include <numbers>
#include <sstream>

namespace peerimex::bench {

std::size_t GridSpec::points() const noexcept {
    const auto n = static_cast<std::size_t>(m);
    return layout == GridLayout::cell_centered_2d ? n * n : n;
}

double GridSpec::coordinate(int i) const noexcept {
    return layout == GridLayout::node_uniform ? (i + 1) * dx : (i + 0.5) * dx;
}

GridSpec make_grid(int m, GridLayout layout) {
    if (m < 1) throw Error(ErrorCode::grid_too_small, "grid needs at least one cell");
    return GridSpec{m, 1.0 / m, layout};
}

Vector ProblemInstance::observe(const Vector& state) const { return observable ? observable(state) : state; }

double ProblemInstance::error(const Vector& a, const Vector& b) const {
    return grid_norm(Vector(observe(a) - observe(b)), norm, norm_weight);
}

void advection_fd(std::span<const double> u, double boundary, double alpha, double dx, std::span<double> out) {
    const std::size_t m = u.size();
    if (m < 8) throw Error(ErrorCode::grid_too_small, "advection stencil needs at least 8 nodes");
    // at(k) = u at node k, k = 0 is the inflow boundary.
    const auto at = [&](std::size_t k) { return k == 0 ? boundary : u[k - 1]; };
    const double s = -alpha / dx;
    out[0] = s * (-2.0 * at(0) - 3.0 * at(1) + 6.0 * at(2) - at(3)) / 6.0;
    for (std::size_t k = 2; k + 1 < m; ++k)
        out[k - 1] = s * (at(k - 2) - 8.0 * at(k - 1) + 8.0 * at(k + 1) - at(k + 2)) / 12.0;
    const std::size_t n = m;
    out[n - 2] = s * (at(n - 3) - 6.0 * at(n - 2) + 3.0 * at(n - 1) + 2.0 * at(n)) / 6.0;
    out[n - 1] = s * (3.0 * at(n - 4) - 16.0 * at(n - 3) + 36.0 * at(n - 2) - 48.0 * at(n - 1) + 25.0 * at(n)) / 12.0;
}

ProblemInstance advection_reaction_problem(int m, const AdvectionReactionParams& params) {
    if (m < 8) throw Error(ErrorCode::grid_too_small, "advection-reaction needs m >= 8");
    const auto n = static_cast<std::size_t>(m);
    ProblemInstance p;
    p.name = "advreac";
    p.grid = make_grid(m, GridLayout::node_uniform);
    p.t_end = params.t_end;
    p.components = {"u", "v"};
    p.norm = NormKind::l2_vector;

    const auto inflow = params.inflow ? params.inflow : [](double t) {
        const double s = std::sin(12.0 * t);
        return 1.0 - s * s * s * s;
    };
    const auto init = params.initial_u ? params.initial_u : [s2 = params.s2](double x) { return 1.0 + s2 * x; };
    const double dx = p.grid.dx;
    const AdvectionReactionParams k = params;

    SplitSystem& sys = p.system;
    sys.dim = 2 * n;
    sys.block_size = 2;
    sys.structure = JacobianStructure::pointwise_blocks;
    sys.f0 = [n, dx, inflow, alpha = k.alpha1](double t, std::span<const double> u, std::span<double> out) {
        advection_fd(u.subspan(0, n), inflow(t), alpha, dx, out.subspan(0, n));
        for (std::size_t i = n; i < 2 * n; ++i) out[i] = 0.0;
    };
    sys.f1 = [n, k](double, std::span<const double> u, std::span<double> out) {
        for (std::size_t i = 0; i < n; ++i) {
            const double a = u[i], b = u[i + n];
            out[i] = -k.k1 * a + k.k2 * b + k.s1;
            out[i + n] = k.k1 * a - k.k2 * b + k.s2;
        }
    };
    sys.jac1 = [n, k](double, std::span<const double>, std::span<const double> v, std::span<double> out) {
        for (std::size_t i = 0; i < n; ++i) {
            out[i] = -k.k1 * v[i] + k.k2 * v[i + n];
            out[i + n] = k.k1 * v[i] - k.k2 * v[i + n];
        }
    };
    sys.jac1_blocks = [n, k](double, std::span<const double>, std::span<double> blocks) {
        for (std::size_t i = 0; i < n; ++i) {
            blocks[4 * i] = -k.k1;
            blocks[4 * i + 1] = k.k2;
            blocks[4 * i + 2] = k.k1;
            blocks[4 * i + 3] = -k.k2;
        }
    };

    p.u0.resize(static_cast<Eigen::Index>(2 * n));
    for (int i = 0; i < m; ++i) {
        const double u = init(p.grid.coordinate(i));
        p.u0(i) = u;
        p.u0(i + m) = k.k2 != 0.0 ? (k.k1 * u + k.s2) / k.k2 : 0.0;
    }

    std::ostringstream key;
    key << "advreac:m=" << m << ":alpha1=" << format_double(k.alpha1) << ":k1=" << format_double(k.k1)
        << ":k2=" << format_double(k.k2) << ":s1=" << format_double(k.s1) << ":s2=" << format_double(k.s2)
        << ":T=" << format_double(k.t_end);
    if (params.inflow || params.initial_u) key << ":custom";
    p.key = key.str();
    return p;
}

ProblemInstance adsorption_desorption_problem(int m, const AdsorptionParams& params) {
    if (m < 16) throw Error(ErrorCode::grid_too_small, "adsorption-desorption needs m >= 16 for WENO5");
    const auto n = static_cast<std::size_t>(m);
    ProblemInstance p;
    p.name = "adsdes";
    p.grid = make_grid(m, GridLayout::cell_centered_1d);
    p.t_end = params.t_end;
    p.components = {"u", "v"};
    p.norm = NormKind::l1_discrete;
    p.norm_weight = p.grid.dx;
    p.starter = StarterKind::initial_value;
    p.observable = [n](const Vector& w) -> Vector {
        const auto k = static_cast<Eigen::Index>(n);
        return w.head(k) + w.segment(k, k);
    };

    const auto velocity = params.velocity ? params.velocity : [](double t) {
        return -(3.0 / std::numbers::pi) * std::atan(100.0 * (t - 1.0));
    };
    const auto inflow = params.inflow_left ? params.inflow_left : [](double t) {
        const double c = std::cos(6.0 * std::numbers::pi * t);
        return 1.0 - c * c;
    };
    const double right = params.inflow_right;
    const double dx = p.grid.dx;
    const double kappa = params.kappa, k1 = params.k1, k2 = params.k2;

    SplitSystem& sys = p.system;
    sys.dim = 2 * n;
    sys.block_size = 2;
    sys.structure = JacobianStructure::pointwise_blocks;
    sys.f0 = [n, dx, velocity, inflow, right](double t, std::span<const double> u, std::span<double> out) {
        const double a = velocity(t);
        WenoGhosts ghosts;
        int wind = 1;
        if (a >= 0.0) {
            const double g = inflow(t);
            ghosts.left = {g, g, g};
        } else {
            wind = -1;
            ghosts.right = {right, right, right};
        }
        weno5_derivative(u.subspan(0, n), wind, dx, ghosts, out.subspan(0, n));
        for (std::size_t i = 0; i < n; ++i) out[i] *= -a;
        for (std::size_t i = n; i < 2 * n; ++i) out[i] = 0.0;
    };
    sys.f1 = [n, kappa, k1, k2](double, std::span<const double> u, std::span<double> out) {
        for (std::size_t i = 0; i < n; ++i) {
            const double r = kappa * (u[i + n] - k1 * u[i] / (1.0 + k2 * u[i]));
            out[i] = r;
            out[i + n] = -r;
        }
    };
    sys.jac1 = [n, kappa, k1, k2](double, std::span<const double> u, std::span<const double> v,
                                  std::span<double> out) {
        for (std::size_t i = 0; i < n; ++i) {
            const double d = 1.0 + k2 * u[i];
            const double r = kappa * (v[i + n] - k1 / (d * d) * v[i]);
            out[i] = r;
            out[i + n] = -r;
        }
    };
    sys.jac1_blocks = [n, kappa, k1, k2](double, std::span<const double> u, std::span<double> blocks) {
        for (std::size_t i = 0; i < n; ++i) {
            const double d = 1.0 + k2 * u[i];
            const double dphi = kappa * k1 / (d * d);
            blocks[4 * i] = -dphi;
            blocks[4 * i + 1] = kappa;
            blocks[4 * i + 2] = dphi;
            blocks[4 * i + 3] = -kappa;
        }
    };
    p.u0 = Vector::Zero(static_cast<Eigen::Index>(2 * n));

    std::ostringstream key;
    key << "adsdes:m=" << m << ":kappa=" << format_double(kappa) << ":k1=" << format_double(k1)
        << ":k2=" << format_double(k2) << ":T=" << format_double(params.t_end) << ":right=" << format_double(right);
    if (params.velocity || params.inflow_left) key << ":custom";
    p.key = key.str();
    return p;
}

void neumann_laplacian(std::span<const double> u, int m, double dx, std::span<double> out) {
    const double s = 1.0 / (dx * dx);
    for (int j = 0; j < m; ++j) {
        for (int i = 0; i < m; ++i) {
            const std::size_t k = static_cast<std::size_t>(i + m * j);
            const double c = u[k];
            const double w = i > 0 ? u[k - 1] : c;
            const double e = i + 1 < m ? u[k + 1] : c;
            const double so = j > 0 ? u[k - static_cast<std::size_t>(m)] : c;
            const double no = j + 1 < m ? u[k + static_cast<std::size_t>(m)] : c;
            out[k] = s * (w + e + so + no - 4.0 * c);
        }
    }
}

ProblemInstance schnakenberg_problem(int m, const SchnakenbergParams& params) {
    if (m < 8) throw Error(ErrorCode::grid_too_small, "Schnakenberg needs m >= 8");
    const std::size_t n = static_cast<std::size_t>(m) * static_cast<std::size_t>(m);
    ProblemInstance p;
    p.name = "schnakenberg";
    p.grid = make_grid(m, GridLayout::cell_centered_2d);
    p.t_end = params.t_end;
    p.components = {"u", "v"};
    p.norm = NormKind::l2_discrete;
    p.norm_weight = p.grid.dx;

    const double dx = p.grid.dx;
    const SchnakenbergParams k = params;
    SplitSystem& sys = p.system;
    sys.dim = 2 * n;
    sys.block_size = 2;
    sys.structure = JacobianStructure::symmetric_elliptic;
    sys.f0 = [n, k](double, std::span<const double> u, std::span<double> out) {
        for (std::size_t i = 0; i < n; ++i) {
            const double a = u[i], b = u[i + n];
            const double aab = a * a * b;
            out[i] = k.kappa * (k.a - a + aab);
            out[i + n] = k.kappa * (k.b - aab);
        }
    };
    const auto diffusion = [n, m, dx, k](std::span<const double> u, std::span<double> out) {
        neumann_laplacian(u.subspan(0, n), m, dx, out.subspan(0, n));
        neumann_laplacian(u.subspan(n, n), m, dx, out.subspan(n, n));
        for (std::size_t i = 0; i < n; ++i) {
            out[i] *= k.d1;
            out[i + n] *= k.d2;
        }
    };
    sys.f1 = [diffusion](double, std::span<const double> u, std::span<double> out) { diffusion(u, out); };
    sys.jac1 = [diffusion](double, std::span<const double>, std::span<const double> v, std::span<double> out) {
        diffusion(v, out);
    };

    p.u0.resize(static_cast<Eigen::Index>(2 * n));
    const double ustar = k.a + k.b;
    const double vstar = k.b / (ustar * ustar);
    for (int j = 0; j < m; ++j) {
        for (int i = 0; i < m; ++i) {
            const double x = p.grid.coordinate(i) - 1.0 / 3.0;
            const double y = p.grid.coordinate(j) - 0.5;
            const auto idx = static_cast<Eigen::Index>(i + m * j);
            p.u0(idx) = ustar + k.bump * std::exp(-100.0 * (x * x + y * y));
            p.u0(idx + static_cast<Eigen::Index>(n)) = vstar;
        }
    }

    std::ostringstream key;
    key << "schnakenberg:m=" << m << ":d1=" << format_double(k.d1) << ":d2=" << format_double(k.d2)
        << ":kappa=" << format_double(k.kappa) << ":a=" << format_double(k.a) << ":b=" << format_double(k.b)
        << ":T=" << format_double(k.t_end) << ":bump=" << format_double(k.bump);
    p.key = key.str();
    return p;
}

ProblemInstance problem_by_name(const std::string& name, int m) {
    if (name == "advreac") return advection_reaction_problem(m);
    if (name == "adsdes") return adsorption_desorption_problem(m);
    if (name == "schnakenberg") return schnakenberg_problem(m);
    throw Error(ErrorCode::invalid_argument, "unknown problem '" + name + "' (advreac, adsdes, schnakenberg)");
}

}  // namespace peerimex::bench
