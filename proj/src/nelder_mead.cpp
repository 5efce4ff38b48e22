#include "peerimex/nelder_mead.hpp"

#include "peerimex/error.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

namespace peerimex {

namespace {

double sanitize(double v) { return std::isnan(v) ? std::numeric_limits<double>::infinity() : v; }

}  // namespace

NelderMeadResult nelder_mead(const std::function<double(const std::vector<double>&)>& f,
                             std::vector<double> x0, const NelderMeadOptions& opts) {
    const std::size_t d = x0.size();
    if (d == 0) throw Error(ErrorCode::invalid_argument, "nelder_mead needs at least one variable");
    const int budget = opts.max_evaluations > 0 ? opts.max_evaluations : static_cast<int>(500 * d);

    NelderMeadResult res;
    auto eval = [&](const std::vector<double>& x) {
        ++res.evaluations;
        return sanitize(f(x));
    };

    std::vector<std::vector<double>> simplex(d + 1, x0);
    std::vector<double> values(d + 1);
    values[0] = eval(x0);
    if (!std::isfinite(values[0]))
        throw Error(ErrorCode::invalid_argument, "objective is not finite at the starting point");
    for (std::size_t i = 0; i < d; ++i) {
        double step = 0.0;
        if (i < opts.initial_step.size()) step = opts.initial_step[i];
        else step = x0[i] != 0.0 ? 0.05 * x0[i] : 0.00025;
        simplex[i + 1][i] += step;
        values[i + 1] = eval(simplex[i + 1]);
    }

    std::vector<std::size_t> order(d + 1);
    auto sort_simplex = [&] {
        std::iota(order.begin(), order.end(), std::size_t{0});
        std::stable_sort(order.begin(), order.end(),
                         [&](std::size_t a, std::size_t b) { return values[a] < values[b]; });
        std::vector<std::vector<double>> s2;
        std::vector<double> v2;
        for (auto k : order) {
            s2.push_back(simplex[k]);
            v2.push_back(values[k]);
        }
        simplex = std::move(s2);
        values = std::move(v2);
    };
    auto point = [&](const std::vector<double>& centroid, const std::vector<double>& worst, double t) {
        std::vector<double> p(d);
        for (std::size_t i = 0; i < d; ++i) p[i] = centroid[i] + t * (centroid[i] - worst[i]);
        return p;
    };

    sort_simplex();
    while (true) {
        double diameter = 0.0;
        for (std::size_t k = 1; k <= d; ++k)
            for (std::size_t i = 0; i < d; ++i)
                diameter = std::max(diameter, std::abs(simplex[k][i] - simplex[0][i]));
        const double spread = values[d] - values[0];
        if (diameter < opts.x_tol && (opts.f_tol <= 0.0 || spread <= opts.f_tol)) {
            res.converged = true;
            break;
        }
        if (res.evaluations >= budget) break;
        ++res.iterations;

        std::vector<double> centroid(d, 0.0);
        for (std::size_t k = 0; k < d; ++k)
            for (std::size_t i = 0; i < d; ++i) centroid[i] += simplex[k][i] / static_cast<double>(d);

        const auto xr = point(centroid, simplex[d], opts.reflection);
        const double fr = eval(xr);
        if (fr < values[0]) {
            const auto xe = point(centroid, simplex[d], opts.reflection * opts.expansion);
            const double fe = eval(xe);
            if (fe < fr) {
                simplex[d] = xe;
                values[d] = fe;
            } else {
                simplex[d] = xr;
                values[d] = fr;
            }
        } else if (fr < values[d - 1]) {
            simplex[d] = xr;
            values[d] = fr;
        } else {
            const bool outside = fr < values[d];
            const auto xc = outside ? point(centroid, simplex[d], opts.reflection * opts.contraction)
                                    : point(centroid, simplex[d], -opts.contraction);
            const double fc = eval(xc);
            if (fc < (outside ? fr : values[d])) {
                simplex[d] = xc;
                values[d] = fc;
            } else {
                for (std::size_t k = 1; k <= d; ++k) {
                    for (std::size_t i = 0; i < d; ++i)
                        simplex[k][i] = simplex[0][i] + opts.shrink * (simplex[k][i] - simplex[0][i]);
                    values[k] = eval(simplex[k]);
                }
            }
        }
        sort_simplex();
        if (opts.on_iteration) opts.on_iteration(res.iterations, simplex[0], values[0]);
    }
    res.x = simplex[0];
    res.value = values[0];
    return res;
}

}  // namespace peerimex
