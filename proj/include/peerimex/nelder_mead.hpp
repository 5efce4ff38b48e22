#pragma once

#include <functional>
#include <optional>
#include <vector>

namespace peerimex {

struct NelderMeadOptions {
    double reflection = 1.0;
    double expansion = 2.0;
    double contraction = 0.5;
    double shrink = 0.5;
    /// Stop when the simplex diameter (max vertex distance from the best) drops below this.
    double x_tol = 1e-6;
    /// When positive, convergence also requires the spread of simplex values below this.
    double f_tol = 0.0;
    /// 0 means 500 * dimension.
    int max_evaluations = 0;
    /// Initial simplex edge per coordinate; empty uses 5% of |x| (0.00025 for zeros).
    std::vector<double> initial_step;
    /// Called after every iteration with the current best point and value.
    std::function<void(int iteration, const std::vector<double>& x, double f)> on_iteration;
};

struct NelderMeadResult {
    std::vector<double> x;
    double value = 0.0;
    int evaluations = 0;
    int iterations = 0;
    bool converged = false;
};

/// Derivative-free simplex minimisation. The returned point is never worse
/// than the starting point.
[[nodiscard]] NelderMeadResult nelder_mead(const std::function<double(const std::vector<double>&)>& f,
                                           std::vector<double> x0, const NelderMeadOptions& opts = {});

}  // namespace peerimex
