#include "peerimex/optimizer.hpp"

#include "peerimex/error.hpp"
#include "peerimex/format.hpp"
#include "peerimex/tableau_io.hpp"

#include <json.hpp>

#include <cmath>
#include <fstream>
#include <sstream>

namespace peerimex {

ImplicitPeerBase base_of(const ImexTableau& t, std::optional<double> alpha_deg) {
    ImplicitPeerBase base{t.nodes(), t.propagation(), t.implicit_coupling(), t.label(), 90.0};
    if (alpha_deg) {
        base.alpha_deg = *alpha_deg;
    } else {
        const Matrix zero = Matrix::Zero(t.stages(), t.stages());
        base.alpha_deg = implicit_angle(assemble_imex(base.c, base.p, base.r, zero, base.label));
    }
    return base;
}

ImplicitPeerBase load_base(const std::filesystem::path& path) {
    const ImexTableau t = load_tableau(path);
    std::ifstream in(path);
    std::stringstream ss;
    ss << in.rdbuf();
    std::optional<double> alpha;
    try {
        const auto doc = nlohmann::json::parse(ss.str());
        if (doc.contains("alpha")) alpha = doc.at("alpha").get<double>();
    } catch (const nlohmann::json::exception& e) {
        throw Error(ErrorCode::malformed_file, path.string() + ": " + e.what());
    }
    return base_of(t, alpha);
}

std::size_t parameter_count(int s) {
    if (s < 1) throw Error(ErrorCode::invalid_argument, "stage count must be positive");
    return static_cast<std::size_t>(s) * static_cast<std::size_t>(s - 1) / 2;
}

Matrix s2_from_parameters(int s, const std::vector<double>& p) {
    if (p.size() != parameter_count(s)) {
        std::ostringstream os;
        os << "expected " << parameter_count(s) << " S2 parameters for s=" << s << ", got " << p.size();
        throw Error(ErrorCode::invalid_argument, os.str());
    }
    Matrix s2 = Matrix::Zero(s, s);
    std::size_t k = 0;
    for (int i = 1; i < s; ++i)
        for (int j = 0; j < i; ++j) s2(i, j) = p[k++];
    return s2;
}

std::vector<double> parameters_from_s2(const Matrix& s2) {
    std::vector<double> p;
    for (Eigen::Index i = 1; i < s2.rows(); ++i)
        for (Eigen::Index j = 0; j < i; ++j) p.push_back(s2(i, j));
    return p;
}

ImexTableau tableau_from_parameters(const ImplicitPeerBase& base, const std::vector<double>& p,
                                    const std::string& label) {
    return assemble_imex(base.c, base.p, base.r, s2_from_parameters(base.stages(), p),
                         label.empty() ? base.label + "-opt" : label);
}

std::vector<double> initial_parameters(const ImplicitPeerBase& base) {
    return parameters_from_s2(recent_value_extrapolation(base.c).second);
}

double reference_constant_c0(const ImplicitPeerBase& base) {
    return error_constants(tableau_from_parameters(base, initial_parameters(base))).extrapolation;
}

Objective::Objective(ImplicitPeerBase base, ObjectiveOptions opts)
    : base_(std::move(base)), opts_(std::move(opts)), c0_(reference_constant_c0(base_)) {
    weight_ = opts_.weight > 0.0 ? opts_.weight : 1.5 * std::pow(10.0, base_.stages());
}

ObjectiveBreakdown Objective::evaluate(const std::vector<double>& p) {
    std::vector<std::int64_t> key;
    key.reserve(p.size());
    for (double x : p) key.push_back(std::llround(x * 1e10));
    {
        std::lock_guard lock(mutex_);
        if (auto it = cache_.find(key); it != cache_.end()) {
            ++hits_;
            return it->second;
        }
    }

    ObjectiveBreakdown out;
    out.c0 = c0_;
    try {
        const ImexTableau t = tableau_from_parameters(base_, p);
        out.c_ex = error_constants(t).extrapolation;
        try {
            RegionOptions region{opts_.n_rays, opts_.ray, opts_.threads};
            const StabilityPolygon poly = wedge_region(t, base_.alpha_deg, region);
            out.area = std::isfinite(poly.area) ? poly.area : 0.0;
            out.region_failed = poly.partial && poly.vertices.empty();
        } catch (const Error&) {
            out.area = 0.0;
            out.region_failed = true;
        }
    } catch (const Error&) {
        out.c_ex = std::numeric_limits<double>::infinity();
        out.region_failed = true;
    }
    out.penalty = std::isfinite(out.c_ex) ? weight_ * std::abs(out.c_ex - c0_) : 1e300;
    out.value = -out.area + out.penalty;

    std::lock_guard lock(mutex_);
    cache_.emplace(std::move(key), out);
    return out;
}

OptimizeResult optimize_s2(const ImplicitPeerBase& base, const OptimizeOptions& opts) {
    Objective objective(base, opts.objective);
    std::vector<double> x = opts.start.value_or(initial_parameters(base));
    if (x.size() != parameter_count(base.stages()))
        throw Error(ErrorCode::invalid_argument, "starting point has the wrong number of S2 parameters");

    OptimizeResult result{.tableau = tableau_from_parameters(base, x)};
    result.start = objective.evaluate(x);
    const auto f = [&](const std::vector<double>& p) { return objective(p); };

    int iteration = 0;
    NelderMeadOptions nm = opts.simplex;
    nm.on_iteration = [&](int, const std::vector<double>& best, double) {
        ++iteration;
        if (opts.on_iteration) opts.on_iteration(IterationRecord{iteration, best, objective.evaluate(best)});
    };
    bool converged = false;
    for (int run = 0; run <= opts.restarts; ++run) {
        const NelderMeadResult r = nelder_mead(f, x, nm);
        x = r.x;
        result.evaluations += r.evaluations;
        converged = r.converged;
    }
    result.p = x;
    result.converged = converged;
    result.search = objective.evaluate(x);

    ObjectiveOptions verify = opts.objective;
    verify.n_rays = opts.final_rays;
    Objective final_objective(base, verify);
    result.final = final_objective.evaluate(x);
    result.tableau = tableau_from_parameters(base, x, base.label + "-opt");
    return result;
}

std::string iteration_log_header() { return "iter,value,area,c_ex,penalty"; }

std::string iteration_log_line(const IterationRecord& rec) {
    std::ostringstream os;
    os << rec.iteration << ',' << format_double(rec.breakdown.value) << ',' << format_double(rec.breakdown.area) << ','
       << format_double(rec.breakdown.c_ex) << ',' << format_double(rec.breakdown.penalty);
    return os.str();
}

}  // namespace peerimex
