#include "peerimex/bench/convergence.hpp"

#include "peerimex/error.hpp"
#include "peerimex/format.hpp"
#include "peerimex/tableau_io.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <limits>
#include <map>
#include <mutex>
#include <sstream>
#include <thread>

namespace peerimex::bench {

namespace {

std::mutex cache_mutex;
std::map<std::string, Vector> memory_cache;

std::string cache_key(const ProblemInstance& p, const ImexTableau& method, double dt_ref,
                      const IntegrateOptions& opts) {
    std::ostringstream os;
    os << p.key << "|" << method.label() << "|" << serialize_tableau(method) << "|" << format_double(dt_ref) << "|"
       << static_cast<int>(p.starter) << "|" << format_double(opts.newton.tol) << "|"
       << format_double(opts.starter.tol);
    return os.str();
}

std::filesystem::path disk_path(const std::string& key) {
    const char* dir = std::getenv("PEERIMEX_CACHE_DIR");
    if (dir == nullptr || *dir == '\0') return {};
    char name[32];
    std::snprintf(name, sizeof name, "ref-%016zx.bin", std::hash<std::string>{}(key));
    return std::filesystem::path(dir) / name;
}

/// Binary layout: key length, key bytes, value count, doubles.
bool read_disk(const std::filesystem::path& path, const std::string& key, Vector& out) {
    std::ifstream in(path, std::ios::binary);
    if (!in) return false;
    std::uint64_t len = 0;
    in.read(reinterpret_cast<char*>(&len), sizeof len);
    if (!in || len != key.size()) return false;
    std::string stored(len, '\0');
    in.read(stored.data(), static_cast<std::streamsize>(len));
    if (!in || stored != key) return false;
    std::uint64_t count = 0;
    in.read(reinterpret_cast<char*>(&count), sizeof count);
    if (!in) return false;
    out.resize(static_cast<Eigen::Index>(count));
    in.read(reinterpret_cast<char*>(out.data()), static_cast<std::streamsize>(count * sizeof(double)));
    return static_cast<bool>(in);
}

void write_disk(const std::filesystem::path& path, const std::string& key, const Vector& v) {
    std::error_code ec;
    std::filesystem::create_directories(path.parent_path(), ec);
    std::ostringstream os(std::ios::binary);
    const std::uint64_t len = key.size();
    const std::uint64_t count = static_cast<std::uint64_t>(v.size());
    os.write(reinterpret_cast<const char*>(&len), sizeof len);
    os.write(key.data(), static_cast<std::streamsize>(len));
    os.write(reinterpret_cast<const char*>(&count), sizeof count);
    os.write(reinterpret_cast<const char*>(v.data()), static_cast<std::streamsize>(count * sizeof(double)));
    try {
        write_file_atomic(path.string(), os.str());
    } catch (const std::exception&) {
        // The cache is best effort.
    }
}

IntegrateOptions with_problem_starter(const ProblemInstance& p, IntegrateOptions opts) {
    opts.starter.kind = p.starter;
    return opts;
}

}  // namespace

Vector reference_solution(const ProblemInstance& p, const ImexTableau& method, double dt_ref,
                          const IntegrateOptions& opts, bool use_cache) {
    const IntegrateOptions run = with_problem_starter(p, opts);
    const std::string key = cache_key(p, method, dt_ref, run);
    if (use_cache) {
        {
            std::lock_guard lock(cache_mutex);
            if (auto it = memory_cache.find(key); it != memory_cache.end()) return it->second;
        }
        const auto path = disk_path(key);
        Vector v;
        if (!path.empty() && read_disk(path, key, v)) {
            std::lock_guard lock(cache_mutex);
            memory_cache.emplace(key, v);
            return v;
        }
    }
    Vector v = integrate(method, p.system, p.u0, p.t0, p.t_end, dt_ref, run).final_state;
    if (use_cache) {
        const auto path = disk_path(key);
        if (!path.empty()) write_disk(path, key, v);
        std::lock_guard lock(cache_mutex);
        memory_cache.emplace(key, v);
    }
    return v;
}

void clear_reference_cache() {
    std::lock_guard lock(cache_mutex);
    memory_cache.clear();
}

std::vector<ConvergenceRow> ConvergenceReport::rows_for(const std::string& method) const {
    std::vector<ConvergenceRow> out;
    for (const auto& r : rows)
        if (r.method == method) out.push_back(r);
    return out;
}

double observed_order(double e_prev, double e_cur, double dt_prev, double dt_cur) {
    if (!(e_prev > 0.0) || !(e_cur > 0.0) || !std::isfinite(e_prev) || !std::isfinite(e_cur))
        return std::numeric_limits<double>::quiet_NaN();
    if (dt_prev == 2.0 * dt_cur) return std::log2(e_prev / e_cur);
    return std::log(e_prev / e_cur) / std::log(dt_prev / dt_cur);
}

ConvergenceReport convergence_study(const ProblemInstance& p, const std::vector<ImexTableau>& methods,
                                    const std::vector<double>& dts, const ConvergenceOptions& opts) {
    if (methods.empty()) throw Error(ErrorCode::invalid_argument, "convergence study needs at least one method");
    if (dts.empty()) throw Error(ErrorCode::invalid_argument, "convergence study needs at least one step size");
    for (std::size_t k = 0; k < dts.size(); ++k) {
        if (!(dts[k] > 0.0)) throw Error(ErrorCode::invalid_argument, "step sizes must be positive");
        if (k > 0 && !(dts[k] < dts[k - 1]))
            throw Error(ErrorCode::invalid_argument, "step sizes must be strictly decreasing");
    }

    const ImexTableau reference_method = opts.reference_method.value_or(
        *std::max_element(methods.begin(), methods.end(),
                          [](const ImexTableau& a, const ImexTableau& b) { return a.order() < b.order(); }));
    const double dt_ref = dts.back() / opts.reference_refinement;
    const Vector reference = reference_solution(p, reference_method, dt_ref, opts.integrate, opts.use_cache);

    ConvergenceReport report;
    report.problem = p.name;
    std::ostringstream ref;
    ref << reference_method.label() << " at dt=" << format_double(dt_ref);
    report.reference = ref.str();

    const double reference_norm = grid_norm(p.observe(reference), p.norm, p.norm_weight);
    const std::size_t nd = dts.size();
    report.rows.resize(methods.size() * nd);
    const IntegrateOptions run = with_problem_starter(p, opts.integrate);
    std::atomic<std::size_t> next{0};
    const auto worker = [&] {
        for (std::size_t job = next++; job < report.rows.size(); job = next++) {
            const ImexTableau& method = methods[job / nd];
            ConvergenceRow& row = report.rows[job];
            row.method = method.label();
            row.dt = dts[job % nd];
            try {
                const Vector u = integrate(method, p.system, p.u0, p.t0, p.t_end, row.dt, run).final_state;
                row.error = p.error(u, reference);
                if (!std::isfinite(row.error)) throw Error(ErrorCode::step_failure, "error is not finite");
                if (row.error > opts.divergence_factor * reference_norm) {
                    row.converged = false;
                    row.failure = "error exceeds the size of the solution";
                }
            } catch (const Error& e) {
                if (is_validation_error(e.code())) throw;
                row.converged = false;
                row.error = std::numeric_limits<double>::quiet_NaN();
                row.failure = e.what();
            }
        }
    };
    const int threads = std::max(1, std::min<int>(opts.threads, static_cast<int>(report.rows.size())));
    if (threads == 1) {
        worker();
    } else {
        std::vector<std::jthread> pool;
        std::exception_ptr failure;
        std::mutex failure_mutex;
        for (int i = 0; i < threads; ++i)
            pool.emplace_back([&] {
                try {
                    worker();
                } catch (...) {
                    std::lock_guard lock(failure_mutex);
                    if (!failure) failure = std::current_exception();
                    next = report.rows.size();
                }
            });
        pool.clear();
        if (failure) std::rethrow_exception(failure);
    }

    for (std::size_t mi = 0; mi < methods.size(); ++mi) {
        bool any = false;
        for (std::size_t k = 0; k < nd; ++k) {
            ConvergenceRow& row = report.rows[mi * nd + k];
            any = any || row.converged;
            const ConvergenceRow* prev = k == 0 ? nullptr : &report.rows[mi * nd + k - 1];
            row.observed_order = prev != nullptr && prev->converged && row.converged
                                     ? observed_order(prev->error, row.error, dts[k - 1], dts[k])
                                     : std::numeric_limits<double>::quiet_NaN();
        }
        if (!any) report.failed_methods.push_back(methods[mi].label());
    }
    return report;
}

std::string convergence_csv(const ConvergenceReport& report, bool header) {
    std::ostringstream os;
    if (header) os << "problem,method,dt,error,observed_order\n";
    for (const auto& r : report.rows) {
        os << report.problem << ',' << r.method << ',' << format_double(r.dt) << ','
           << (std::isfinite(r.error) ? format_double(r.error) : std::string("nan")) << ','
           << (std::isfinite(r.observed_order) ? format_double(r.observed_order) : std::string("")) << '\n';
    }
    return os.str();
}

}  // namespace peerimex::bench
