#include "peerimex/stability.hpp"

#include "peerimex/error.hpp"
#include "peerimex/format.hpp"
#include "peerimex/nelder_mead.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <sstream>
#include <thread>

namespace peerimex {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

double deg2rad(double d) { return d * std::numbers::pi / 180.0; }

Complex direction(double angle_deg) { return std::polar(1.0, deg2rad(angle_deg)); }

double bisect(const ImexTableau& t, Complex dir, Complex z1, double lo, double hi, double tol) {
    for (int it = 0; it < 200; ++it) {
        const double mid = 0.5 * (lo + hi);
        const double rho = amplification(t, mid * dir, z1);
        if (std::abs(rho - 1.0) <= tol) return mid;
        if (rho < 1.0) lo = mid;
        else hi = mid;
        if (hi - lo <= 1e-14 * std::max(1.0, hi)) break;
    }
    return 0.5 * (lo + hi);
}

std::vector<double> y_scan_grid() {
    std::vector<double> ys{0.0};
    constexpr int n = 26;
    for (int k = 0; k < n; ++k) {
        const double y = std::pow(10.0, -2.0 + 5.0 * k / (n - 1));
        ys.push_back(y);
        ys.push_back(-y);
    }
    return ys;
}

double radius_or_inf(const ImexTableau& t, double ray_angle_deg, Complex z1, const RayOptions& opts) {
    try {
        return ray_boundary_radius(t, ray_angle_deg, z1, opts);
    } catch (const Error& e) {
        if (e.code() == ErrorCode::no_boundary_on_ray) return kInf;
        throw;
    }
}

}  // namespace

ComplexMatrix stability_matrix(const ImexTableau& t, Complex z0, Complex z1) {
    const auto s = t.stages();
    const ComplexMatrix a = ComplexMatrix::Identity(s, s) - z0 * t.explicit_curr().cast<Complex>() -
                            z1 * t.implicit_coupling().cast<Complex>();
    for (int i = 0; i < s; ++i)
        if (std::abs(a(i, i)) < 1e-300)
            throw Error(ErrorCode::singular_at_point, "I - z0 Rhat - z1 R is singular");
    const ComplexMatrix b = t.propagation().cast<Complex>() + z0 * t.explicit_prev().cast<Complex>();
    return a.triangularView<Eigen::Lower>().solve(b);
}

double amplification(const ImexTableau& t, Complex z0, Complex z1) {
    try {
        const double rho = spectral_radius(stability_matrix(t, z0, z1));
        return std::isfinite(rho) ? rho : kInf;
    } catch (const Error& e) {
        if (e.code() == ErrorCode::singular_at_point) return kInf;
        throw;
    }
}

StabilityCheck is_stable(const ImexTableau& t, Complex z0, Complex z1, double tol) {
    if (!(tol > 0.0)) throw Error(ErrorCode::invalid_argument, "tolerance must be positive");
    StabilityCheck c;
    c.rho = amplification(t, z0, z1);
    c.on_boundary = std::abs(c.rho - 1.0) <= tol;
    c.stable = c.rho < 1.0 && !c.on_boundary;
    return c;
}

ComplexMatrix boundary_locus_matrix(const ImexTableau& t, Complex w, Complex z1) {
    const auto s = t.stages();
    const ComplexMatrix lhs = w * t.explicit_curr().cast<Complex>() + t.explicit_prev().cast<Complex>();
    const ComplexMatrix rhs = w * ComplexMatrix::Identity(s, s) -
                              w * z1 * t.implicit_coupling().cast<Complex>() -
                              t.propagation().cast<Complex>();
    return lhs.partialPivLu().solve(rhs);
}

Complex wedge_z1(double beta_deg, double y) {
    if (beta_deg <= 0.0) return {0.0, 0.0};
    if (beta_deg >= 90.0) return {0.0, y};
    return {-std::abs(y) / std::tan(deg2rad(beta_deg)), y};
}

double ray_boundary_radius(const ImexTableau& t, double ray_angle_deg, Complex z1, const RayOptions& opts) {
    const Complex dir = direction(ray_angle_deg);
    if (opts.search == RaySearch::first_exit) {
        double r = 0.0;
        while (true) {
            const double next = r + opts.march_step;
            if (amplification(t, next * dir, z1) >= 1.0) return bisect(t, dir, z1, r, next, opts.tol);
            r = next;
            if (r > opts.max_radius)
                throw Error(ErrorCode::no_boundary_on_ray, "no instability found along the ray");
        }
    }
    double hi = opts.bracket_radius;
    while (amplification(t, hi * dir, z1) < 1.0) {
        hi *= 2.0;
        if (hi > opts.max_radius)
            throw Error(ErrorCode::no_boundary_on_ray, "outer bracket point stays stable");
    }
    return bisect(t, dir, z1, 0.0, hi, opts.tol);
}

Complex boundary_point(const ImexTableau& t, double beta_deg, double ray_angle_deg, double y,
                       const RayOptions& opts) {
    if (!(ray_angle_deg > 90.0 && ray_angle_deg < 270.0))
        throw Error(ErrorCode::invalid_argument, "ray angle must lie in (90, 270) degrees");
    return ray_boundary_radius(t, ray_angle_deg, wedge_z1(beta_deg, y), opts) * direction(ray_angle_deg);
}

RayMinimum wedge_ray(const ImexTableau& t, double beta_deg, double ray_angle_deg, const RayOptions& opts) {
    if (beta_deg <= 0.0) return {ray_boundary_radius(t, ray_angle_deg, Complex{}, opts), 0.0};

    static const std::vector<double> grid = y_scan_grid();
    RayMinimum best{kInf, 0.0};
    for (double y : grid) {
        const double r = radius_or_inf(t, ray_angle_deg, wedge_z1(beta_deg, y), opts);
        if (r < best.radius) best = {r, y};
    }
    if (!std::isfinite(best.radius))
        throw Error(ErrorCode::no_boundary_on_ray, "no finite boundary for any implicit sample");

    NelderMeadOptions nm;
    nm.max_evaluations = 200;
    nm.x_tol = 1e-4 * std::max(1.0, std::abs(best.y));
    nm.f_tol = 1e-6;
    nm.initial_step = {std::max(0.05, 0.25 * std::abs(best.y))};
    const auto res = nelder_mead(
        [&](const std::vector<double>& y) {
            return radius_or_inf(t, ray_angle_deg, wedge_z1(beta_deg, y[0]), opts);
        },
        {best.y}, nm);
    if (res.value < best.radius) best = {res.value, res.x[0]};
    return best;
}

double shoelace_area(const std::vector<Complex>& v) {
    double twice = 0.0;
    for (std::size_t i = 0; i < v.size(); ++i) {
        const Complex& a = v[i];
        const Complex& b = v[(i + 1) % v.size()];
        twice += a.real() * b.imag() - b.real() * a.imag();
    }
    return 0.5 * std::abs(twice);
}

double real_axis_extent(const ImexTableau& t, double beta_deg, const RayOptions& opts) {
    RayOptions exit_opts = opts;
    exit_opts.search = RaySearch::first_exit;
    return -wedge_ray(t, beta_deg, 180.0, exit_opts).radius;
}

StabilityPolygon wedge_region(const ImexTableau& t, double beta_deg, const RegionOptions& opts) {
    if (opts.n_rays < 16) throw Error(ErrorCode::invalid_argument, "wedge_region needs at least 16 rays");
    if (beta_deg < 0.0 || beta_deg > 90.0)
        throw Error(ErrorCode::invalid_argument, "wedge angle must lie in [0, 90] degrees");
    const auto n = static_cast<std::size_t>(opts.n_rays);
    std::vector<double> angles(n);
    for (std::size_t k = 0; k < n; ++k)
        angles[k] = 90.0 + 180.0 * (static_cast<double>(k) + 0.5) / static_cast<double>(n);

    std::vector<RayMinimum> found(n);
    std::vector<char> ok(n, 1);
    auto work = [&](std::size_t begin, std::size_t stride) {
        for (std::size_t k = begin; k < n; k += stride) {
            try {
                found[k] = wedge_ray(t, beta_deg, angles[k], opts.ray);
            } catch (const Error& e) {
                if (e.code() != ErrorCode::no_boundary_on_ray) throw;
                ok[k] = 0;
            }
        }
    };
    const auto threads = static_cast<std::size_t>(std::max(1, opts.threads));
    if (threads == 1) {
        work(0, 1);
    } else {
        std::vector<std::jthread> pool;
        for (std::size_t w = 0; w < threads; ++w) pool.emplace_back(work, w, threads);
    }

    StabilityPolygon poly;
    poly.beta_deg = beta_deg;
    std::vector<Complex> closed{Complex{}};
    for (std::size_t k = 0; k < n; ++k) {
        if (!ok[k]) {
            poly.partial = true;
            poly.failed_rays_deg.push_back(angles[k]);
            continue;
        }
        poly.ray_angles_deg.push_back(angles[k]);
        poly.vertices.push_back(found[k].radius * direction(angles[k]));
        poly.minimizing_y.push_back(found[k].y);
        closed.push_back(poly.vertices.back());
    }
    poly.area = shoelace_area(closed);
    try {
        poly.x_max = real_axis_extent(t, beta_deg, opts.ray);
    } catch (const Error& e) {
        if (e.code() != ErrorCode::no_boundary_on_ray) throw;
        poly.x_max = -kInf;
        poly.partial = true;
    }
    return poly;
}

namespace {

bool wedge_edge_stable(const ImexTableau& t, double alpha_deg) {
    const Complex dir = std::polar(1.0, std::numbers::pi - deg2rad(alpha_deg));
    constexpr int n = 600;
    constexpr double lo = -2.0;
    constexpr double hi = 4.0;
    auto rho_at = [&](double log_r) { return amplification(t, Complex{}, std::pow(10.0, log_r) * dir); };
    int worst = 0;
    double worst_rho = -1.0;
    for (int k = 0; k < n; ++k) {
        const double rho = rho_at(lo + (hi - lo) * k / (n - 1));
        if (rho >= 1.0) return false;
        if (rho > worst_rho) {
            worst_rho = rho;
            worst = k;
        }
    }
    // Golden-section refinement around the largest sample.
    const double h = (hi - lo) / (n - 1);
    double a = lo + h * std::max(0, worst - 1);
    double b = lo + h * std::min(n - 1, worst + 1);
    const double g = 0.5 * (std::sqrt(5.0) - 1.0);
    double x1 = b - g * (b - a);
    double x2 = a + g * (b - a);
    double f1 = rho_at(x1);
    double f2 = rho_at(x2);
    for (int it = 0; it < 60; ++it) {
        if (f1 >= 1.0 || f2 >= 1.0) return false;
        if (f1 > f2) {
            b = x2; x2 = x1; f2 = f1;
            x1 = b - g * (b - a); f1 = rho_at(x1);
        } else {
            a = x1; x1 = x2; f1 = f2;
            x2 = a + g * (b - a); f2 = rho_at(x2);
        }
    }
    return f1 < 1.0 && f2 < 1.0;
}

}  // namespace

double implicit_angle(const ImexTableau& t, double resolution_deg) {
    if (wedge_edge_stable(t, 90.0)) return 90.0;
    if (!wedge_edge_stable(t, resolution_deg)) return 0.0;
    double lo = resolution_deg;
    double hi = 90.0;
    while (hi - lo > resolution_deg) {
        const double mid = 0.5 * (lo + hi);
        if (wedge_edge_stable(t, mid)) lo = mid;
        else hi = mid;
    }
    return lo;
}

std::string region_csv(const std::vector<StabilityPolygon>& polygons) {
    std::ostringstream os;
    os << "beta_deg,ray_angle_deg,re_z0,im_z0\n";
    for (const auto& p : polygons) {
        for (std::size_t k = 0; k < p.vertices.size(); ++k)
            os << format_double(p.beta_deg) << ',' << format_double(p.ray_angles_deg[k]) << ','
               << format_double(p.vertices[k].real()) << ',' << format_double(p.vertices[k].imag()) << '\n';
        os << "# area=" << format_double(p.area) << " x_max=" << format_double(p.x_max) << '\n';
    }
    return os.str();
}

}  // namespace peerimex
