#pragma once

#include <cstddef>
#include <functional>
#include <span>

namespace peerimex {

using RhsFunction = std::function<void(double t, std::span<const double> u, std::span<double> out)>;
/// out = J(t, u) v
using JacobianApply =
    std::function<void(double t, std::span<const double> u, std::span<const double> v, std::span<double> out)>;
/// Fills one row-major block_size x block_size Jacobian per spatial node.
using BlockJacobian = std::function<void(double t, std::span<const double> u, std::span<double> blocks)>;

enum class JacobianStructure {
    dense,
    /// F1 couples only the components of one spatial node. The state is
    /// component-major: component c of node k lives at index k + c * nodes.
    pointwise_blocks,
    /// dF1/du is symmetric negative semi-definite (diffusion).
    symmetric_elliptic,
};

/// u' = F0(t, u) + F1(t, u) with F0 advanced explicitly and F1 implicitly.
/// All callables must tolerate concurrent calls from independent runs.
struct SplitSystem {
    std::size_t dim = 0;
    RhsFunction f0;
    RhsFunction f1;
    JacobianApply jac1;
    BlockJacobian jac1_blocks;
    JacobianStructure structure = JacobianStructure::dense;
    std::size_t block_size = 1;

    [[nodiscard]] std::size_t nodes() const noexcept { return block_size == 0 ? dim : dim / block_size; }
};

/// Replaces the stiff Jacobian (and blocks, for pointwise systems) with
/// forward finite differences of f1.
[[nodiscard]] SplitSystem with_finite_difference_jacobian(SplitSystem sys, double eps = 1e-7);

/// Linearly implicit split: F0 = F - J u, F1 = J u, dF1/du = J.
[[nodiscard]] SplitSystem linearly_implicit_split(std::size_t dim, RhsFunction f, JacobianApply j,
                                                  JacobianStructure structure = JacobianStructure::dense);

}  // namespace peerimex
