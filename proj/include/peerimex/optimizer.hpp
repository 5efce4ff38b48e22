#pragma once

#include "peerimex/linalg.hpp"
#include "peerimex/nelder_mead.hpp"
#include "peerimex/stability.hpp"
#include "peerimex/tableau.hpp"

#include <cstdint>
#include <filesystem>
#include <functional>
#include <map>
#include <mutex>
#include <optional>
#include <string>
#include <vector>

namespace peerimex {

/// Implicit Peer method (c, P, R) whose S2 is searched for.
struct ImplicitPeerBase {
    Vector c;
    Matrix p;
    Matrix r;
    std::string label;
    /// Implicit angle in degrees; the search wedge.
    double alpha_deg = 90.0;

    [[nodiscard]] int stages() const noexcept { return static_cast<int>(c.size()); }
};

/// Base of an existing tableau (its S2 is dropped). alpha_deg is measured
/// with implicit_angle unless given.
[[nodiscard]] ImplicitPeerBase base_of(const ImexTableau& t, std::optional<double> alpha_deg = std::nullopt);

/// Loads a base from a tableau file; an optional `alpha` key sets the wedge angle.
[[nodiscard]] ImplicitPeerBase load_base(const std::filesystem::path& path);

/// d = s (s - 1) / 2.
[[nodiscard]] std::size_t parameter_count(int s);

/// Row-wise strictly lower S2: p = (s21, s31, s32, s41, ...).
[[nodiscard]] Matrix s2_from_parameters(int s, const std::vector<double>& p);
[[nodiscard]] std::vector<double> parameters_from_s2(const Matrix& s2);

[[nodiscard]] ImexTableau tableau_from_parameters(const ImplicitPeerBase& base, const std::vector<double>& p,
                                                  const std::string& label = "");

/// p0: the S2 entries of the most-recent-values extrapolation.
[[nodiscard]] std::vector<double> initial_parameters(const ImplicitPeerBase& base);

/// c_ex of the tableau assembled at p0.
[[nodiscard]] double reference_constant_c0(const ImplicitPeerBase& base);

struct ObjectiveBreakdown {
    double area = 0.0;  ///< |S_alpha|
    double c_ex = 0.0;
    double c0 = 0.0;
    double penalty = 0.0;  ///< weight * |c_ex - c0|
    double value = 0.0;    ///< -area + penalty
    /// Assembly or region computation failed; area counts as 0.
    bool region_failed = false;
};

struct ObjectiveOptions {
    int n_rays = 120;
    RayOptions ray;
    int threads = 1;
    /// 0 selects 1.5 * 10^s.
    double weight = 0.0;
};

/// -|S_alpha| + 1.5 10^s |c_ex - c0| with a cache on a 1e-10 parameter grid.
class Objective {
public:
    Objective(ImplicitPeerBase base, ObjectiveOptions opts = {});

    [[nodiscard]] ObjectiveBreakdown evaluate(const std::vector<double>& p);
    [[nodiscard]] double operator()(const std::vector<double>& p) { return evaluate(p).value; }

    [[nodiscard]] const ImplicitPeerBase& base() const noexcept { return base_; }
    [[nodiscard]] double c0() const noexcept { return c0_; }
    [[nodiscard]] double weight() const noexcept { return weight_; }
    [[nodiscard]] std::size_t cache_hits() const noexcept { return hits_; }

private:
    ImplicitPeerBase base_;
    ObjectiveOptions opts_;
    double c0_ = 0.0;
    double weight_ = 0.0;
    std::map<std::vector<std::int64_t>, ObjectiveBreakdown> cache_;
    std::mutex mutex_;
    std::size_t hits_ = 0;
};

struct IterationRecord {
    int iteration = 0;
    std::vector<double> p;
    ObjectiveBreakdown breakdown;
};

struct OptimizeOptions {
    ObjectiveOptions objective;
    NelderMeadOptions simplex;
    /// Extra Nelder-Mead runs restarted from the best point.
    int restarts = 0;
    /// Ray count of the final verification.
    int final_rays = 360;
    std::optional<std::vector<double>> start;
    std::function<void(const IterationRecord&)> on_iteration;
};

struct OptimizeResult {
    std::vector<double> p;
    ObjectiveBreakdown search;  ///< at the search ray count
    ObjectiveBreakdown final;   ///< re-evaluated at final_rays
    ObjectiveBreakdown start;   ///< at the starting point, search ray count
    ImexTableau tableau;
    int evaluations = 0;
    bool converged = false;
};

[[nodiscard]] OptimizeResult optimize_s2(const ImplicitPeerBase& base, const OptimizeOptions& opts = {});

/// `iter,value,area,c_ex,penalty`.
[[nodiscard]] std::string iteration_log_header();
[[nodiscard]] std::string iteration_log_line(const IterationRecord& rec);

}  // namespace peerimex
