#pragma once

#include "peerimex/split_system.hpp"

#include <cstddef>
#include <functional>
#include <span>

namespace peerimex {

struct NewtonOptions {
    /// Absolute tolerance on ||g||_inf, scaled by 1 + ||x||_inf.
    double tol = 1e-11;
    /// Tolerance for accepting the initial guess without any update. The
    /// default 0 always takes one step, so predictor errors cannot pile up
    /// and tiny solutions keep their relative accuracy.
    double initial_tol = 0.0;
    int max_iters = 25;
    /// Also accept once an update is below step_tol * (1 + ||x||_inf).
    double step_tol = 1e-14;
    double cg_rel_tol = 1e-10;
    int cg_max_iters = 500;
};

struct NewtonResult {
    int iterations = 0;
    double residual = 0.0;
    std::size_t linear_solves = 0;
};

using ResidualFn = std::function<void(std::span<const double> x, std::span<double> g)>;
/// Solves g'(x) delta = rhs for delta.
using LinearSolveFn = std::function<void(std::span<const double> x, std::span<const double> rhs, std::span<double> delta)>;

/// Full Newton iteration on g(x) = 0 starting from x (updated in place).
/// Throws ErrorCode::newton_nonconvergence on divergence (residual growth over
/// three consecutive iterations) or when max_iters is exhausted.
NewtonResult newton_solve(const ResidualFn& g, const LinearSolveFn& solve, std::span<double> x,
                          const NewtonOptions& opts = {});

/// Solves the stage equation x - gamma F1(t, x) = rhs, picking the linear
/// solver from the system's structure hint.
NewtonResult solve_stage(const SplitSystem& sys, double t, double gamma, std::span<const double> rhs,
                         std::span<double> x, const NewtonOptions& opts = {});

/// Matrix-free conjugate gradients for a symmetric positive definite operator,
/// started from zero. Returns the iteration count.
int conjugate_gradient(const std::function<void(std::span<const double>, std::span<double>)>& apply,
                       std::span<const double> rhs, std::span<double> x, double rel_tol, int max_iters);

}  // namespace peerimex
