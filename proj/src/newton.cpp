#include "peerimex/newton.hpp"

#include "peerimex/error.hpp"
#include "peerimex/linalg.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <vector>

namespace peerimex {

namespace {

double norm_inf(std::span<const double> v) {
    double m = 0.0;
    for (double x : v) m = std::max(m, std::abs(x));
    return m;
}

double dot(std::span<const double> a, std::span<const double> b) {
    double s = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
    return s;
}

}  // namespace

NewtonResult newton_solve(const ResidualFn& g, const LinearSolveFn& solve, std::span<double> x,
                          const NewtonOptions& opts) {
    const std::size_t n = x.size();
    std::vector<double> res(n);
    std::vector<double> neg(n);
    std::vector<double> delta(n);
    NewtonResult out;
    int growth = 0;
    double previous = 0.0;
    for (int it = 0;; ++it) {
        g(x, res);
        const double r = norm_inf(res);
        out.residual = r;
        if (!std::isfinite(r)) {
            throw Error(ErrorCode::newton_nonconvergence, "Newton residual is not finite");
        }
        const double tol = it == 0 ? opts.initial_tol : opts.tol;
        if (r <= tol * (1.0 + norm_inf(x))) return out;
        if (it > 0) {
            growth = r > previous ? growth + 1 : 0;
            if (growth >= 3) {
                std::ostringstream os;
                os << "Newton diverged (residual " << r << ")";
                throw Error(ErrorCode::newton_nonconvergence, os.str());
            }
        }
        if (it >= opts.max_iters) {
            std::ostringstream os;
            os << "Newton did not converge in " << opts.max_iters << " iterations (residual " << r << ")";
            throw Error(ErrorCode::newton_nonconvergence, os.str());
        }
        previous = r;
        for (std::size_t i = 0; i < n; ++i) neg[i] = -res[i];
        solve(x, neg, delta);
        ++out.linear_solves;
        for (std::size_t i = 0; i < n; ++i) x[i] += delta[i];
        out.iterations = it + 1;
        // Residual stuck at its rounding floor: the update itself is negligible.
        if (norm_inf(delta) <= opts.step_tol * (1.0 + norm_inf(x))) return out;
    }
}

int conjugate_gradient(const std::function<void(std::span<const double>, std::span<double>)>& apply,
                       std::span<const double> rhs, std::span<double> x, double rel_tol, int max_iters) {
    const std::size_t n = rhs.size();
    std::fill(x.begin(), x.end(), 0.0);
    std::vector<double> r(rhs.begin(), rhs.end());
    std::vector<double> p = r;
    std::vector<double> ap(n);
    const double target = rel_tol * std::sqrt(dot(rhs, rhs));
    double rr = dot(r, r);
    if (std::sqrt(rr) <= target) return 0;
    for (int it = 1; it <= max_iters; ++it) {
        apply(p, ap);
        const double pap = dot(p, ap);
        if (!(pap > 0.0)) throw Error(ErrorCode::newton_nonconvergence, "CG met a non-positive curvature direction");
        const double alpha = rr / pap;
        for (std::size_t i = 0; i < n; ++i) {
            x[i] += alpha * p[i];
            r[i] -= alpha * ap[i];
        }
        const double rr_new = dot(r, r);
        if (std::sqrt(rr_new) <= target) return it;
        const double beta = rr_new / rr;
        rr = rr_new;
        for (std::size_t i = 0; i < n; ++i) p[i] = r[i] + beta * p[i];
    }
    return max_iters;
}

NewtonResult solve_stage(const SplitSystem& sys, double t, double gamma, std::span<const double> rhs,
                         std::span<double> x, const NewtonOptions& opts) {
    const std::size_t n = sys.dim;
    std::vector<double> f(n);
    const ResidualFn residual = [&](std::span<const double> xv, std::span<double> g) {
        sys.f1(t, xv, f);
        for (std::size_t i = 0; i < n; ++i) g[i] = xv[i] - gamma * f[i] - rhs[i];
    };

    if (sys.structure == JacobianStructure::pointwise_blocks && (!sys.jac1_blocks || sys.block_size == 0))
        throw Error(ErrorCode::invalid_argument, "pointwise-block systems need jac1_blocks and a block size");
    LinearSolveFn solve;
    switch (sys.structure) {
        case JacobianStructure::pointwise_blocks: {
            solve = [&](std::span<const double> xv, std::span<const double> b, std::span<double> delta) {
                const std::size_t bs = sys.block_size;
                const std::size_t nodes = sys.nodes();
                std::vector<double> blocks(nodes * bs * bs);
                sys.jac1_blocks(t, xv, blocks);
                if (bs == 2) {
                    for (std::size_t k = 0; k < nodes; ++k) {
                        const double* j = &blocks[4 * k];
                        const double a00 = 1.0 - gamma * j[0], a01 = -gamma * j[1];
                        const double a10 = -gamma * j[2], a11 = 1.0 - gamma * j[3];
                        const double det = a00 * a11 - a01 * a10;
                        const double b0 = b[k], b1 = b[k + nodes];
                        delta[k] = (a11 * b0 - a01 * b1) / det;
                        delta[k + nodes] = (a00 * b1 - a10 * b0) / det;
                    }
                    return;
                }
                Matrix a(static_cast<Eigen::Index>(bs), static_cast<Eigen::Index>(bs));
                Vector bk(static_cast<Eigen::Index>(bs));
                for (std::size_t k = 0; k < nodes; ++k) {
                    for (std::size_t r = 0; r < bs; ++r) {
                        for (std::size_t c = 0; c < bs; ++c)
                            a(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(c)) =
                                (r == c ? 1.0 : 0.0) - gamma * blocks[k * bs * bs + r * bs + c];
                        bk(static_cast<Eigen::Index>(r)) = b[k + r * nodes];
                    }
                    const Vector dk = a.partialPivLu().solve(bk);
                    for (std::size_t r = 0; r < bs; ++r) delta[k + r * nodes] = dk(static_cast<Eigen::Index>(r));
                }
            };
            break;
        }
        case JacobianStructure::symmetric_elliptic: {
            solve = [&](std::span<const double> xv, std::span<const double> b, std::span<double> delta) {
                std::vector<double> jv(n);
                const auto apply = [&](std::span<const double> v, std::span<double> out) {
                    sys.jac1(t, xv, v, jv);
                    for (std::size_t i = 0; i < n; ++i) out[i] = v[i] - gamma * jv[i];
                };
                conjugate_gradient(apply, b, delta, opts.cg_rel_tol, opts.cg_max_iters);
            };
            break;
        }
        case JacobianStructure::dense: {
            solve = [&](std::span<const double> xv, std::span<const double> b, std::span<double> delta) {
                const auto m = static_cast<Eigen::Index>(n);
                Matrix a(m, m);
                std::vector<double> e(n, 0.0);
                std::vector<double> col(n);
                for (std::size_t j = 0; j < n; ++j) {
                    e[j] = 1.0;
                    sys.jac1(t, xv, e, col);
                    e[j] = 0.0;
                    for (std::size_t i = 0; i < n; ++i)
                        a(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) =
                            (i == j ? 1.0 : 0.0) - gamma * col[i];
                }
                const Vector d = a.partialPivLu().solve(Eigen::Map<const Vector>(b.data(), m));
                std::copy(d.data(), d.data() + m, delta.begin());
            };
            break;
        }
    }
    return newton_solve(residual, solve, x, opts);
}

}  // namespace peerimex
