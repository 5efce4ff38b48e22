#include "cli.hpp"

#include "peerimex/bench/convergence.hpp"
#include "peerimex/error.hpp"
#include "peerimex/format.hpp"
#include "peerimex/optimizer.hpp"
#include "peerimex/stability.hpp"
#include "peerimex/svg.hpp"
#include "peerimex/tableau.hpp"
#include "peerimex/tableau_io.hpp"

#include <CLI11.hpp>

#include <algorithm>
#include <cmath>
#include <iomanip>
#include <ostream>
#include <set>
#include <sstream>

namespace peerimex::cli {

namespace {

struct Options {
    std::vector<std::string> methods;
    std::vector<std::string> method_files;
    std::vector<std::string> betas{"0", "alpha"};
    int rays = 360;
    double tol = 1e-5;
    std::string problem;
    int m = 0;
    std::vector<double> dts;
    std::string out;
    std::string svg;
    std::string manifest;
    int threads = 1;
    int restarts = 0;
    bool check = false;
    int search_rays = 120;
    std::vector<double> start;
};

std::vector<ImexTableau> resolve_methods(const Options& o, const std::vector<std::string>& fallback) {
    std::vector<ImexTableau> out;
    for (const auto& name : o.methods) out.push_back(builtin(name));
    for (const auto& file : o.method_files) out.push_back(load_tableau(file));
    if (out.empty())
        for (const auto& name : fallback) out.push_back(builtin(name));
    if (out.empty()) throw Error(ErrorCode::invalid_argument, "no method given (use --method or --method-file)");
    return out;
}

void print_vector(std::ostream& os, const std::string& name, const Vector& v) {
    os << name << " = [";
    for (Eigen::Index i = 0; i < v.size(); ++i) os << (i ? ", " : "") << format_double(v(i));
    os << "]\n";
}

void print_matrix(std::ostream& os, const std::string& name, const Matrix& m) {
    os << name << " =\n";
    for (Eigen::Index i = 0; i < m.rows(); ++i) {
        os << "  [";
        for (Eigen::Index j = 0; j < m.cols(); ++j) os << (j ? ", " : "") << format_double(m(i, j));
        os << "]\n";
    }
}

int cmd_tableau(const Options& o, std::ostream& out) {
    const auto methods = resolve_methods(o, {});
    bool ok = true;
    for (const auto& t : methods) {
        out << "method " << t.label() << " (s=" << t.stages() << ", order " << t.order() << ")\n";
        print_vector(out, "c", t.nodes());
        print_matrix(out, "P", t.propagation());
        print_matrix(out, "R", t.implicit_coupling());
        print_matrix(out, "S1", t.extrapolation_prev());
        print_matrix(out, "S2", t.extrapolation_curr());
        print_matrix(out, "Qhat", t.explicit_prev());
        print_matrix(out, "Rhat", t.explicit_curr());
        if (o.check) {
            const ConsistencyReport rep = consistency_report(t);
            for (std::size_t j = 0; j < rep.residuals.size(); ++j)
                out << "|d_" << j + 1 << "|_inf = " << format_double(max_abs(rep.residuals[j])) << "\n";
            out << "|Pe - e|_inf = " << format_double(rep.preconsistency_residual) << "\n";
            out << "extrapolation residual = " << format_double(rep.extrapolation_residual) << "\n";
            out << "eig(P) =";
            for (const auto& z : rep.p_eigenvalues)
                out << " " << format_double(z.real()) << (z.imag() < 0 ? "-" : "+") << format_double(std::abs(z.imag()))
                    << "i";
            out << "\n";
            out << "zero stability = " << to_string(rep.zero_stability) << "\n";
            out << "stage order = " << rep.stage_order << "\n";
            const ErrorConstants ec = error_constants(t);
            out << "c_im = " << format_double(ec.implicit) << "\n";
            out << "c_ex = " << format_double(ec.extrapolation) << "\n";
            const bool passed = rep.stage_order >= t.stages() &&
                                (rep.zero_stability == ZeroStability::optimal ||
                                 rep.zero_stability == ZeroStability::strong) &&
                                rep.extrapolation_residual <= 1e-10;
            out << "check " << (passed ? "passed" : "FAILED") << "\n";
            ok = ok && passed;
        }
        if (!o.out.empty()) write_file_atomic(o.out, serialize_tableau(t));
    }
    return ok ? 0 : 1;
}

std::vector<double> resolve_betas(const Options& o, const ImexTableau& t) {
    std::vector<double> betas;
    for (const auto& b : o.betas) {
        if (b == "alpha") {
            betas.push_back(implicit_angle(t));
            continue;
        }
        try {
            std::size_t used = 0;
            betas.push_back(std::stod(b, &used));
            if (used != b.size()) throw std::invalid_argument(b);
        } catch (const std::exception&) {
            throw Error(ErrorCode::invalid_argument, "bad --beta value '" + b + "' (number or 'alpha')");
        }
    }
    return betas;
}

int cmd_stability(const Options& o, std::ostream& out, std::ostream& err) {
    const auto methods = resolve_methods(o, {});
    if (methods.size() != 1) throw Error(ErrorCode::invalid_argument, "stability takes exactly one method");
    const ImexTableau& t = methods.front();
    RegionOptions region;
    region.n_rays = o.rays;
    region.ray.tol = o.tol;
    region.threads = o.threads;
    std::vector<StabilityPolygon> polys;
    for (double beta : resolve_betas(o, t)) {
        polys.push_back(wedge_region(t, beta, region));
        const auto& p = polys.back();
        out << t.label() << " beta=" << format_double(p.beta_deg) << " area=" << format_double(p.area)
            << " x_max=" << format_double(p.x_max) << (p.partial ? " partial" : "") << "\n";
        if (p.partial) err << "warning: " << p.failed_rays_deg.size() << " rays without a boundary at beta=" << p.beta_deg
                           << "; area is a lower bound\n";
    }
    if (!o.out.empty()) write_file_atomic(o.out, region_csv(polys));
    if (!o.svg.empty()) {
        std::vector<std::string> warnings;
        write_file_atomic(o.svg, render_regions_svg(polys, &warnings));
        for (const auto& w : warnings) err << "warning: " << w << "\n";
    }
    return 0;
}

int cmd_angle(const Options& o, std::ostream& out) {
    for (const auto& t : resolve_methods(o, {}))
        out << t.label() << " alpha=" << std::fixed << std::setprecision(2) << implicit_angle(t) << std::defaultfloat
            << "\n";
    return 0;
}

int cmd_optimize(const Options& o, std::ostream& out, std::ostream& err) {
    ImplicitPeerBase base;
    if (o.method_files.size() + o.methods.size() != 1)
        throw Error(ErrorCode::invalid_argument, "optimize takes exactly one base method");
    base = o.method_files.empty() ? base_of(builtin(o.methods.front())) : load_base(o.method_files.front());

    OptimizeOptions opts;
    opts.objective.n_rays = o.search_rays;
    opts.objective.ray.tol = o.tol;
    opts.objective.threads = o.threads;
    opts.final_rays = o.rays;
    opts.restarts = o.restarts;
    if (!o.start.empty()) opts.start = o.start;
    out << iteration_log_header() << "\n";
    opts.on_iteration = [&](const IterationRecord& rec) { out << iteration_log_line(rec) << "\n"; };
    const OptimizeResult r = optimize_s2(base, opts);
    err << "alpha=" << base.alpha_deg << " c0=" << format_double(reference_constant_c0(base))
        << " start value=" << format_double(r.start.value) << " final area(" << o.rays
        << " rays)=" << format_double(r.final.area) << " c_ex=" << format_double(r.final.c_ex)
        << (r.converged ? "" : " (evaluation budget exhausted)") << "\n";
    const std::string json = serialize_tableau(r.tableau);
    if (o.out.empty())
        out << json << "\n";
    else
        write_file_atomic(o.out, json);
    return 0;
}

std::vector<double> default_dts(const std::string& problem, int m) {
    std::vector<double> dts;
    if (problem == "advreac")
        for (int k = 0; k <= 3; ++k) dts.push_back(std::ldexp(1e-3, -k));
    else if (problem == "adsdes")
        for (int j = 2; j <= 5; ++j) dts.push_back(std::ldexp(1.0 / m, -j));
    else
        for (int j = 1; j <= 5; ++j) dts.push_back(std::ldexp(1.0, 3 - j) / m);
    return dts;
}

int cmd_converge(Options& o, std::ostream& out, std::ostream& err) {
    if (o.m == 0) o.m = o.problem == "adsdes" ? 200 : 100;
    const bench::ProblemInstance p = bench::problem_by_name(o.problem, o.m);
    const auto methods = resolve_methods(o, {"imex-bdf2", "imex-peer2"});
    if (o.dts.empty()) o.dts = default_dts(o.problem, o.m);
    bench::ConvergenceOptions opts;
    opts.threads = o.threads;
    const bench::ConvergenceReport report = bench::convergence_study(p, methods, o.dts, opts);
    const std::string csv = bench::convergence_csv(report);
    if (o.out.empty())
        out << csv;
    else
        write_file_atomic(o.out, csv);
    for (const auto& row : report.rows)
        if (!row.converged) err << "note: " << row.method << " dt=" << row.dt << " did not converge: " << row.failure << "\n";
    if (!o.svg.empty()) {
        std::set<int> orders;
        for (const auto& t : methods) orders.insert(t.order());
        std::vector<std::string> warnings;
        write_file_atomic(o.svg, render_convergence_svg(report, {orders.begin(), orders.end()}, &warnings));
        for (const auto& w : warnings) err << "warning: " << w << "\n";
    }
    return report.failed_methods.size() == methods.size() ? 2 : 0;
}

std::string join(const std::vector<double>& v) {
    std::string s;
    for (std::size_t i = 0; i < v.size(); ++i) s += (i ? "," : "") + format_double(v[i]);
    return s;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    CLI::App app{"IMEX two-step Peer methods: tableaus, stability regions, S2 search and PDE benchmarks", "peerimex"};
    app.set_config("--config", "", "Read options from a manifest or config file");
    app.require_subcommand(1);
    Options o;

    const auto add_method = [&](CLI::App* sub) {
        sub->add_option("--method,--methods", o.methods, "Built-in method(s), comma separated")
            ->delimiter(',')
            ->check(CLI::IsMember(builtin_names()));
        sub->add_option("--method-file", o.method_files, "Tableau JSON file(s)")->check(CLI::ExistingFile);
    };
    const auto add_common = [&](CLI::App* sub) {
        sub->add_option("--out", o.out, "Output file");
        sub->add_option("--manifest", o.manifest, "Manifest path (default: <out>.manifest)");
        sub->configurable();
    };

    auto* tab = app.add_subcommand("tableau", "Print a tableau; --check adds order and stability diagnostics");
    add_method(tab);
    add_common(tab);
    tab->add_flag("--check", o.check, "Report residuals and fail if a condition is violated");

    auto* stab = app.add_subcommand("stability", "Stability regions S_beta as CSV/SVG");
    add_method(stab);
    add_common(stab);
    stab->add_option("--beta", o.betas, "Wedge angles in degrees, or 'alpha'")->delimiter(',')->capture_default_str();
    stab->add_option("--rays", o.rays, "Number of rays")->check(CLI::Range(16, 100000))->capture_default_str();
    stab->add_option("--tol", o.tol, "Boundary tolerance |rho - 1|")->check(CLI::PositiveNumber)->capture_default_str();
    stab->add_option("--svg", o.svg, "SVG plot of the contours");
    stab->add_option("--threads", o.threads, "Worker threads")->check(CLI::Range(1, 1024))->capture_default_str();

    auto* ang = app.add_subcommand("angle", "Implicit stability angle alpha");
    add_method(ang);
    add_common(ang);

    auto* opt = app.add_subcommand("optimize", "Search S2 balancing |S_alpha| against c_ex");
    add_method(opt);
    add_common(opt);
    opt->add_option("--rays", o.rays, "Rays of the final verification")->check(CLI::Range(16, 100000))->capture_default_str();
    opt->add_option("--search-rays", o.search_rays, "Rays during the search")->check(CLI::Range(16, 100000))->capture_default_str();
    opt->add_option("--tol", o.tol, "Boundary tolerance |rho - 1|")->check(CLI::PositiveNumber)->capture_default_str();
    opt->add_option("--restarts", o.restarts, "Simplex restarts from the best point")->check(CLI::Range(0, 100))->capture_default_str();
    opt->add_option("--start", o.start, "Starting S2 parameters p21,p31,p32,...")->delimiter(',');
    opt->add_option("--threads", o.threads, "Worker threads")->check(CLI::Range(1, 1024))->capture_default_str();

    auto* conv = app.add_subcommand("converge", "Convergence study on a PDE benchmark");
    add_method(conv);
    add_common(conv);
    conv->add_option("--problem", o.problem, "Benchmark")
        ->required()
        ->check(CLI::IsMember({"advreac", "adsdes", "schnakenberg"}));
    conv->add_option("--m", o.m, "Grid size (default 100, adsdes 200)")->check(CLI::Range(1, 100000));
    conv->add_option("--dts", o.dts, "Step sizes, descending")->delimiter(',');
    conv->add_option("--svg", o.svg, "SVG log-log error plot");
    conv->add_option("--threads", o.threads, "Worker threads")->check(CLI::Range(1, 1024))->capture_default_str();

    try {
        std::vector<std::string> reversed(args.rbegin(), args.rend());
        app.parse(reversed);
    } catch (const CLI::CallForHelp&) {
        out << app.help();
        return 0;
    } catch (const CLI::CallForAllHelp&) {
        out << app.help("", CLI::AppFormatMode::All);
        return 0;
    } catch (const CLI::ParseError& e) {
        err << "error: " << e.what() << "\n";
        return 1;
    }

    CLI::App* sub = app.get_subcommands().front();
    const std::string name = sub->get_name();
    try {
        int code = 0;
        if (name == "tableau") code = cmd_tableau(o, out);
        else if (name == "stability") code = cmd_stability(o, out, err);
        else if (name == "angle") code = cmd_angle(o, out);
        else if (name == "optimize") code = cmd_optimize(o, out, err);
        else code = cmd_converge(o, out, err);

        std::string manifest = o.manifest;
        if (manifest.empty()) manifest = o.out.empty() ? "peerimex-" + name + ".manifest" : o.out + ".manifest";
        std::ostringstream os;
        os << "# peerimex " << name << " run; replay with: peerimex --config <this file>\n";
        if (name == "converge") os << "# resolved: m=" << o.m << " dts=" << join(o.dts) << "\n";
        os << "[" << name << "]\n";
        std::istringstream lines(sub->config_to_str(true, false));
        for (std::string line; std::getline(lines, line);)
            if (!line.ends_with("=\"\"") && !line.ends_with("=[]")) os << line << "\n";
        write_file_atomic(manifest, os.str());
        return code;
    } catch (const Error& e) {
        err << "error [" << to_string(e.code()) << "]: " << e.what() << "\n";
        return is_validation_error(e.code()) ? 1 : 2;
    } catch (const std::exception& e) {
        err << "error: " << e.what() << "\n";
        return 2;
    }
}

}  // namespace peerimex::cli
