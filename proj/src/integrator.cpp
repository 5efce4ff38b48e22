#include "peerimex/integrator.hpp"

#include "peerimex/error.hpp"
#include "peerimex/format.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <sstream>

namespace peerimex {

namespace {

bool all_finite(const Vector& v) { return v.allFinite(); }

void eval(const RhsFunction& f, double t, const Vector& u, Vector& out) {
    f(t, std::span<const double>(u.data(), static_cast<std::size_t>(u.size())),
      std::span<double>(out.data(), static_cast<std::size_t>(out.size())));
}

/// RK4 on F0 + F1 through the given (sorted, same-signed) offsets from t0.
/// Returns false as soon as the iterate stops being finite.
bool rk4_chain(const SplitSystem& sys, const Vector& u0, double t0, double dt, const std::vector<double>& offsets,
               int substeps, std::vector<Vector>& out) {
    const auto m = static_cast<Eigen::Index>(sys.dim);
    Vector a(m), b(m), k1(m), k2(m), k3(m), k4(m), tmp(m);
    auto rhs = [&](double t, const Vector& u, Vector& k) {
        eval(sys.f0, t, u, a);
        eval(sys.f1, t, u, b);
        k = a + b;
    };
    Vector u = u0;
    double t = t0;
    double pos = 0.0;
    out.clear();
    for (double target : offsets) {
        const double h = (target - pos) * dt / substeps;
        for (int k = 0; k < substeps; ++k) {
            rhs(t, u, k1);
            tmp = u + 0.5 * h * k1;
            rhs(t + 0.5 * h, tmp, k2);
            tmp = u + 0.5 * h * k2;
            rhs(t + 0.5 * h, tmp, k3);
            tmp = u + h * k3;
            rhs(t + h, tmp, k4);
            u += (h / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
            t = t0 + (pos + (target - pos) * (k + 1) / substeps) * dt;
        }
        if (!all_finite(u)) return false;
        t = t0 + target * dt;
        pos = target;
        out.push_back(u);
    }
    return true;
}

}  // namespace

PeerState starting_values(const SplitSystem& sys, const Vector& u0, double t0, double dt, const Vector& c,
                          const StarterOptions& opts) {
    if (!(dt > 0.0)) throw Error(ErrorCode::invalid_argument, "step size must be positive");
    if (static_cast<std::size_t>(u0.size()) != sys.dim)
        throw Error(ErrorCode::invalid_argument, "initial value has the wrong dimension");
    const auto s = static_cast<std::size_t>(c.size());
    PeerState st;
    st.t = t0;
    st.dt = dt;
    st.stages.assign(s, u0);

    if (opts.kind == StarterKind::runge_kutta) {
        // Forward chain through positive nodes, backward chain through the rest.
        std::vector<std::size_t> fwd;
        std::vector<std::size_t> bwd;
        for (std::size_t i = 0; i < s; ++i) (c(static_cast<Eigen::Index>(i)) > 0.0 ? fwd : bwd).push_back(i);
        std::sort(fwd.begin(), fwd.end(), [&](auto x, auto y) { return c(static_cast<Eigen::Index>(x)) < c(static_cast<Eigen::Index>(y)); });
        std::sort(bwd.begin(), bwd.end(), [&](auto x, auto y) { return c(static_cast<Eigen::Index>(x)) > c(static_cast<Eigen::Index>(y)); });

        for (const auto* group : {&fwd, &bwd}) {
            if (group->empty()) continue;
            std::vector<double> offsets;
            for (auto i : *group) offsets.push_back(c(static_cast<Eigen::Index>(i)));
            std::vector<Vector> coarse;
            std::vector<Vector> fine;
            int n = std::max(1, opts.initial_substeps);
            bool coarse_ok = rk4_chain(sys, u0, t0, dt, offsets, n, coarse);
            while (true) {
                const bool fine_ok = rk4_chain(sys, u0, t0, dt, offsets, 2 * n, fine);
                bool converged = coarse_ok && fine_ok;
                for (std::size_t k = 0; converged && k < fine.size(); ++k) {
                    const double scale = 1.0 + max_abs(fine[k]);
                    converged = max_abs(Vector(fine[k] - coarse[k])) <= opts.tol * scale;
                }
                if (converged || (fine_ok && 4 * n > opts.max_substeps)) break;
                if (4 * n > opts.max_substeps) {
                    std::ostringstream os;
                    os << "starting procedure unstable with " << 2 * n
                       << " substeps per stage interval; try a smaller step size";
                    throw Error(ErrorCode::starter_failure, os.str());
                }
                coarse = fine;
                coarse_ok = fine_ok;
                n *= 2;
            }
            for (std::size_t k = 0; k < group->size(); ++k) st.stages[(*group)[k]] = fine[k];
        }
    }

    st.f0.resize(s);
    for (std::size_t i = 0; i < s; ++i) {
        st.f0[i].resize(u0.size());
        eval(sys.f0, t0 + c(static_cast<Eigen::Index>(i)) * dt, st.stages[i], st.f0[i]);
    }
    return st;
}

PeerState imex_step(const ImexTableau& t, const SplitSystem& sys, const PeerState& st, SolveStats& stats,
                    const NewtonOptions& newton) {
    const int s = t.stages();
    const auto m = static_cast<Eigen::Index>(sys.dim);
    const double dt = st.dt;
    const Vector& c = t.nodes();
    const Matrix& p = t.propagation();
    const Matrix& r = t.implicit_coupling();
    const Matrix& qhat = t.explicit_prev();
    const Matrix& rhat = t.explicit_curr();
    const Matrix predictor = simple_extrapolation(c);

    PeerState next;
    next.t = st.t + dt;
    next.dt = dt;
    next.stages.resize(static_cast<std::size_t>(s));
    next.f0.resize(static_cast<std::size_t>(s));
    std::vector<Vector> f1(static_cast<std::size_t>(s));

    Vector rhs(m);
    for (int i = 0; i < s; ++i) {
        rhs.setZero();
        for (int j = 0; j < s; ++j) {
            const auto uj = static_cast<std::size_t>(j);
            if (p(i, j) != 0.0) rhs += p(i, j) * st.stages[uj];
            if (qhat(i, j) != 0.0) rhs += (dt * qhat(i, j)) * st.f0[uj];
        }
        for (int j = 0; j < i; ++j) {
            const auto uj = static_cast<std::size_t>(j);
            if (rhat(i, j) != 0.0) rhs += (dt * rhat(i, j)) * next.f0[uj];
            if (r(i, j) != 0.0) rhs += (dt * r(i, j)) * f1[uj];
        }
        Vector w = Vector::Zero(m);
        for (int j = 0; j < s; ++j) w += predictor(i, j) * st.stages[static_cast<std::size_t>(j)];

        const double gamma = dt * r(i, i);
        const double ti = next.t + c(i) * dt;
        try {
            const auto res = solve_stage(sys, ti, gamma, std::span<const double>(rhs.data(), rhs.size()),
                                         std::span<double>(w.data(), w.size()), newton);
            stats.newton_iters_total += static_cast<std::size_t>(res.iterations);
            stats.linear_solves += res.linear_solves;
        } catch (const Error& e) {
            if (e.code() != ErrorCode::newton_nonconvergence) throw;
            ++stats.newton_failures;
            std::ostringstream os;
            os << "stage " << i + 1 << " at t=" << ti << ": " << e.what();
            throw Error(ErrorCode::step_failure, os.str());
        }
        const auto ui = static_cast<std::size_t>(i);
        f1[ui] = (w - rhs) / gamma;
        next.f0[ui].resize(m);
        eval(sys.f0, ti, w, next.f0[ui]);
        next.stages[ui] = std::move(w);
    }
    ++stats.steps;
    return next;
}

PeerState advance(const ImexTableau& t, const SplitSystem& sys, PeerState st, std::size_t steps, SolveStats& stats,
                  const NewtonOptions& newton) {
    for (std::size_t n = 0; n < steps; ++n) {
        try {
            st = imex_step(t, sys, st, stats, newton);
        } catch (const Error& e) {
            if (e.code() != ErrorCode::step_failure) throw;
            std::ostringstream os;
            os << "step " << n + 1 << ": " << e.what();
            throw Error(ErrorCode::step_failure, os.str());
        }
        for (const auto& w : st.stages)
            if (!w.allFinite()) {
                std::ostringstream os;
                os << "step " << n + 1 << ": solution is no longer finite";
                throw Error(ErrorCode::step_failure, os.str());
            }
    }
    return st;
}

IntegrationResult integrate(const ImexTableau& t, const SplitSystem& sys, const Vector& u0, double t0,
                            double t_end, double dt, const IntegrateOptions& opts) {
    IntegrationResult out;
    if (t_end == t0) {
        out.final_state = u0;
        return out;
    }
    if (!(dt > 0.0) || !(t_end > t0)) throw Error(ErrorCode::invalid_argument, "need dt > 0 and t_end > t0");
    const double ratio = (t_end - t0) / dt;
    const double steps = std::round(ratio);
    if (steps < 1.0 || std::abs(ratio - steps) > 1e-9 * std::max(1.0, steps))
        throw Error(ErrorCode::invalid_argument, "(t_end - t0) / dt must be a whole number of steps");
    PeerState st = starting_values(sys, u0, t0, dt, t.nodes(), opts.starter);
    st = advance(t, sys, std::move(st), static_cast<std::size_t>(steps) - 1, out.stats, opts.newton);
    out.final_state = st.stages.back();
    return out;
}

std::string snapshot_csv(double t, const Vector& u, bool header) {
    std::ostringstream os;
    if (header) os << "t,index,value\n";
    for (Eigen::Index i = 0; i < u.size(); ++i)
        os << format_double(t) << ',' << i << ',' << format_double(u(i)) << '\n';
    return os.str();
}

}  // namespace peerimex
