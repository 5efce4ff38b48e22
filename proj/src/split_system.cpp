#include "peerimex/split_system.hpp"

#include <algorithm>
#include <cmath>
#include <vector>

namespace peerimex {

SplitSystem with_finite_difference_jacobian(SplitSystem sys, double eps) {
    const RhsFunction f1 = sys.f1;
    sys.jac1 = [f1, eps](double t, std::span<const double> u, std::span<const double> v, std::span<double> out) {
        double unorm = 0.0;
        double vnorm = 0.0;
        for (std::size_t i = 0; i < u.size(); ++i) {
            unorm = std::max(unorm, std::abs(u[i]));
            vnorm = std::max(vnorm, std::abs(v[i]));
        }
        if (vnorm == 0.0) {
            std::fill(out.begin(), out.end(), 0.0);
            return;
        }
        const double h = eps * std::max(1.0, unorm) / vnorm;
        std::vector<double> up(u.begin(), u.end());
        for (std::size_t i = 0; i < u.size(); ++i) up[i] += h * v[i];
        std::vector<double> base(u.size());
        f1(t, u, base);
        f1(t, up, out);
        for (std::size_t i = 0; i < u.size(); ++i) out[i] = (out[i] - base[i]) / h;
    };
    if (sys.structure == JacobianStructure::pointwise_blocks) {
        const std::size_t b = sys.block_size;
        const std::size_t n = sys.nodes();
        sys.jac1_blocks = [f1, eps, b, n](double t, std::span<const double> u, std::span<double> blocks) {
            std::vector<double> base(u.size());
            std::vector<double> pert(u.size());
            f1(t, u, base);
            for (std::size_t c = 0; c < b; ++c) {
                // Perturbing component c at every node at once yields column c of every block.
                std::vector<double> up(u.begin(), u.end());
                std::vector<double> h(n);
                for (std::size_t k = 0; k < n; ++k) {
                    h[k] = eps * std::max(1.0, std::abs(u[k + c * n]));
                    up[k + c * n] += h[k];
                }
                f1(t, up, pert);
                for (std::size_t k = 0; k < n; ++k)
                    for (std::size_t r = 0; r < b; ++r)
                        blocks[k * b * b + r * b + c] = (pert[k + r * n] - base[k + r * n]) / h[k];
            }
        };
    }
    return sys;
}

SplitSystem linearly_implicit_split(std::size_t dim, RhsFunction f, JacobianApply j, JacobianStructure structure) {
    SplitSystem sys;
    sys.dim = dim;
    sys.structure = structure;
    sys.f0 = [f, j](double t, std::span<const double> u, std::span<double> out) {
        std::vector<double> ju(u.size());
        f(t, u, out);
        j(t, u, u, ju);
        for (std::size_t i = 0; i < u.size(); ++i) out[i] -= ju[i];
    };
    sys.f1 = [j](double t, std::span<const double> u, std::span<double> out) { j(t, u, u, out); };
    sys.jac1 = j;
    return sys;
}

}  // namespace peerimex
