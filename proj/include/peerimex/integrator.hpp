#pragma once

#include "peerimex/linalg.hpp"
#include "peerimex/newton.hpp"
#include "peerimex/split_system.hpp"
#include "peerimex/tableau.hpp"

#include <cstddef>
#include <string>
#include <vector>

namespace peerimex {

/// Stage values of one step: stages[i] approximates u(t + c_i dt).
struct PeerState {
    double t = 0.0;
    double dt = 0.0;
    std::vector<Vector> stages;
    /// F0 at (t + c_i dt, stages[i]), reused by the next step.
    std::vector<Vector> f0;
};

struct SolveStats {
    std::size_t steps = 0;
    std::size_t newton_iters_total = 0;
    std::size_t newton_failures = 0;
    std::size_t linear_solves = 0;
};

enum class StarterKind {
    /// Classical RK4 on F0 + F1 with substep doubling until converged.
    runge_kutta,
    /// Every stage set to the initial value.
    initial_value,
};

struct StarterOptions {
    StarterKind kind = StarterKind::runge_kutta;
    /// Substeps per stage interval on the first pass.
    int initial_substeps = 64;
    int max_substeps = 1 << 17;
    /// Accept when two passes (n and 2n substeps) agree to tol * (1 + |u|).
    double tol = 1e-12;
};

/// Stages of step zero, w_{0,i} ~ u(t0 + c_i dt).
/// Throws ErrorCode::starter_failure if the substep runs blow up.
[[nodiscard]] PeerState starting_values(const SplitSystem& sys, const Vector& u0, double t0, double dt,
                                        const Vector& c, const StarterOptions& opts = {});

/// One IMEX-Peer step: returns w_n from w_{n-1}. Newton failures are
/// reported as ErrorCode::step_failure naming the stage and residual.
[[nodiscard]] PeerState imex_step(const ImexTableau& t, const SplitSystem& sys, const PeerState& st,
                                  SolveStats& stats, const NewtonOptions& newton = {});

struct IntegrateOptions {
    NewtonOptions newton;
    StarterOptions starter;
};

struct IntegrationResult {
    Vector final_state;
    SolveStats stats;
};

/// Constant-step march from t0 to T. The step count (T - t0) / dt must be
/// an integer; the starter covers the first step, so N - 1 Peer steps follow.
[[nodiscard]] IntegrationResult integrate(const ImexTableau& t, const SplitSystem& sys, const Vector& u0,
                                          double t0, double t_end, double dt, const IntegrateOptions& opts = {});

/// Same as integrate but returns the stage vector after `steps` Peer steps
/// taken from the given starting state.
[[nodiscard]] PeerState advance(const ImexTableau& t, const SplitSystem& sys, PeerState st, std::size_t steps,
                                SolveStats& stats, const NewtonOptions& newton = {});

/// CSV rows `t,index,value` for one snapshot.
[[nodiscard]] std::string snapshot_csv(double t, const Vector& u, bool header = true);

}  // namespace peerimex
