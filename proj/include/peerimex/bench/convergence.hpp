#pragma once

#include "peerimex/bench/problems.hpp"
#include "peerimex/integrator.hpp"
#include "peerimex/tableau.hpp"

#include <optional>
#include <string>
#include <vector>

namespace peerimex::bench {

/// Integrates p to t_end with the problem's starter. Reads and writes the
/// in-memory cache, and the directory named by PEERIMEX_CACHE_DIR if set.
[[nodiscard]] Vector reference_solution(const ProblemInstance& p, const ImexTableau& method, double dt_ref,
                                        const IntegrateOptions& opts = {}, bool use_cache = true);

/// Drops the in-memory reference cache.
void clear_reference_cache();

struct ConvergenceRow {
    std::string method;
    double dt = 0.0;
    double error = 0.0;           ///< NaN when the run did not finish
    double observed_order = 0.0;  ///< NaN for the first row and next to failures
    bool converged = true;
    std::string failure;
};

struct ConvergenceReport {
    std::string problem;
    std::string reference;
    std::vector<ConvergenceRow> rows;
    /// Methods for which every dt failed.
    std::vector<std::string> failed_methods;

    [[nodiscard]] std::vector<ConvergenceRow> rows_for(const std::string& method) const;
};

struct ConvergenceOptions {
    /// Defaults to the highest-order method of the study.
    std::optional<ImexTableau> reference_method;
    /// dt_ref = min(dts) / reference_refinement.
    double reference_refinement = 8.0;
    int threads = 1;
    /// A finished run whose error exceeds this multiple of the reference
    /// norm is reported as non-convergent.
    double divergence_factor = 1.0;
    IntegrateOptions integrate;
    bool use_cache = true;
};

/// log2(e_prev / e_cur) when dt halves, log(e_prev / e_cur) / log(dt_prev / dt_cur) otherwise.
[[nodiscard]] double observed_order(double e_prev, double e_cur, double dt_prev, double dt_cur);

/// Errors against a fine-step reference for every (method, dt) pair.
[[nodiscard]] ConvergenceReport convergence_study(const ProblemInstance& p, const std::vector<ImexTableau>& methods,
                                                  const std::vector<double>& dts, const ConvergenceOptions& opts = {});

/// `problem,method,dt,error,observed_order` rows.
[[nodiscard]] std::string convergence_csv(const ConvergenceReport& report, bool header = true);

}  // namespace peerimex::bench
