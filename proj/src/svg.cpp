#include "peerimex/svg.hpp"

#include "peerimex/format.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <map>
#include <numeric>
#include <sstream>

namespace peerimex {

namespace {

constexpr double kWidth = 640.0;
constexpr double kHeight = 480.0;
constexpr double kMargin = 48.0;
const char* const kPalette[] = {"#1b9e77", "#d95f02", "#7570b3", "#e7298a", "#66a61e", "#e6ab02"};

std::string num(double x) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.6g", x);
    return buf;
}

std::string header(double w, double h, const std::string& view_box) {
    std::ostringstream os;
    os << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << num(w) << "\" height=\"" << num(h)
       << "\" viewBox=\"" << view_box << "\">\n";
    return os.str();
}

}  // namespace

Box region_viewport(const std::vector<StabilityPolygon>& polygons, double margin) {
    Box b{0.0, 0.0, 0.0, 0.0};
    for (const auto& poly : polygons)
        for (const auto& v : poly.vertices) {
            b.x_min = std::min(b.x_min, v.real());
            b.x_max = std::max(b.x_max, v.real());
            b.y_min = std::min(b.y_min, v.imag());
            b.y_max = std::max(b.y_max, v.imag());
        }
    b.x_min -= margin;
    b.x_max += margin;
    b.y_min -= margin;
    b.y_max += margin;
    return b;
}

std::string render_regions_svg(const std::vector<StabilityPolygon>& polygons, std::vector<std::string>* warnings) {
    const Box box = region_viewport(polygons);
    const double w = box.x_max - box.x_min;
    const double h = box.y_max - box.y_min;
    const double scale = 100.0;
    // SVG y grows downwards, so the view box spans (-y_max, -y_min).
    std::ostringstream os;
    os << header(w * scale, h * scale,
                 num(box.x_min) + " " + num(-box.y_max) + " " + num(w) + " " + num(h));
    os << "<!-- bbox " << num(box.x_min) << " " << num(box.x_max) << " " << num(box.y_min) << " "
       << num(box.y_max) << " -->\n";
    const double stroke = 0.01 * std::max(w, h);
    os << "<g stroke=\"#888888\" stroke-width=\"" << num(stroke / 2) << "\">\n";
    os << "<line class=\"axis\" x1=\"" << num(box.x_min) << "\" y1=\"0\" x2=\"" << num(box.x_max) << "\" y2=\"0\"/>\n";
    os << "<line class=\"axis\" x1=\"0\" y1=\"" << num(-box.y_max) << "\" x2=\"0\" y2=\"" << num(-box.y_min) << "\"/>\n";
    os << "</g>\n";

    std::vector<const StabilityPolygon*> order;
    double beta_max = 0.0;
    for (const auto& poly : polygons) {
        if (poly.vertices.empty()) {
            if (warnings) warnings->push_back("empty region for beta=" + num(poly.beta_deg) + "; nothing to draw");
            continue;
        }
        order.push_back(&poly);
        beta_max = std::max(beta_max, poly.beta_deg);
    }
    if (order.empty() && warnings && polygons.empty()) warnings->push_back("no regions to draw");
    std::stable_sort(order.begin(), order.end(), [](auto a, auto b) { return a->area > b->area; });

    for (const auto* poly : order) {
        const char* color = poly->beta_deg == 0.0 ? "#d62728" : (poly->beta_deg == beta_max ? "#000000" : "#1f77b4");
        os << "<path class=\"region\" data-beta=\"" << num(poly->beta_deg) << "\" data-area=\""
           << format_double(poly->area) << "\" fill=\"none\" stroke=\"" << color << "\" stroke-width=\""
           << num(stroke) << "\" d=\"M 0 0";
        for (const auto& v : poly->vertices) os << " L " << num(v.real()) << " " << num(-v.imag());
        os << " Z\"/>\n";
    }
    os << "</svg>\n";
    return os.str();
}

std::string render_convergence_svg(const bench::ConvergenceReport& report, const std::vector<int>& guide_orders,
                                   std::vector<std::string>* warnings) {
    double lx0 = std::numeric_limits<double>::infinity(), lx1 = -lx0;
    double ly0 = lx0, ly1 = -lx0;
    std::map<std::string, std::vector<std::pair<double, double>>> series;
    std::vector<std::string> order;
    for (const auto& r : report.rows) {
        if (!series.count(r.method)) order.push_back(r.method);
        auto& s = series[r.method];
        if (!r.converged || !(r.error > 0.0) || !std::isfinite(r.error)) continue;
        const double x = std::log10(r.dt), y = std::log10(r.error);
        s.emplace_back(x, y);
        lx0 = std::min(lx0, x);
        lx1 = std::max(lx1, x);
        ly0 = std::min(ly0, y);
        ly1 = std::max(ly1, y);
    }
    if (!std::isfinite(lx0)) {
        if (warnings) warnings->push_back("no finite errors to plot");
        lx0 = -3.0;
        lx1 = -1.0;
        ly0 = -6.0;
        ly1 = 0.0;
    }
    lx0 = std::floor(lx0);
    lx1 = std::ceil(lx1);
    ly0 = std::floor(ly0);
    ly1 = std::ceil(ly1);
    if (lx1 == lx0) lx1 += 1.0;
    if (ly1 == ly0) ly1 += 1.0;
    const auto px = [&](double x) { return kMargin + (x - lx0) / (lx1 - lx0) * (kWidth - 2 * kMargin); };
    const auto py = [&](double y) { return kHeight - kMargin - (y - ly0) / (ly1 - ly0) * (kHeight - 2 * kMargin); };

    std::ostringstream os;
    os << header(kWidth, kHeight, "0 0 " + num(kWidth) + " " + num(kHeight));
    os << "<rect class=\"frame\" x=\"" << num(kMargin) << "\" y=\"" << num(kMargin) << "\" width=\""
       << num(kWidth - 2 * kMargin) << "\" height=\"" << num(kHeight - 2 * kMargin)
       << "\" fill=\"none\" stroke=\"#000000\"/>\n";
    os << "<g font-family=\"sans-serif\" font-size=\"11\">\n";
    for (double d = lx0; d <= lx1 + 1e-9; d += 1.0)
        os << "<text x=\"" << num(px(d)) << "\" y=\"" << num(kHeight - kMargin + 16) << "\" text-anchor=\"middle\">1e"
           << num(d) << "</text>\n";
    for (double d = ly0; d <= ly1 + 1e-9; d += 1.0)
        os << "<text x=\"" << num(kMargin - 6) << "\" y=\"" << num(py(d) + 4) << "\" text-anchor=\"end\">1e" << num(d)
           << "</text>\n";
    os << "<text x=\"" << num(kWidth / 2) << "\" y=\"" << num(kHeight - 8) << "\" text-anchor=\"middle\">dt</text>\n";
    os << "<text x=\"" << num(kWidth / 2) << "\" y=\"20\" text-anchor=\"middle\">" << report.problem << "</text>\n";
    os << "</g>\n";

    for (std::size_t k = 0; k < order.size(); ++k) {
        const auto& pts = series[order[k]];
        const char* color = kPalette[k % std::size(kPalette)];
        if (!pts.empty()) {
            os << "<polyline class=\"series\" data-method=\"" << order[k] << "\" fill=\"none\" stroke=\"" << color
               << "\" stroke-width=\"1.5\" points=\"";
            for (std::size_t i = 0; i < pts.size(); ++i)
                os << (i ? " " : "") << num(px(pts[i].first)) << "," << num(py(pts[i].second));
            os << "\"/>\n";
        }
        os << "<text x=\"" << num(kWidth - kMargin - 4) << "\" y=\"" << num(kMargin + 14 + 14 * k)
           << "\" text-anchor=\"end\" font-family=\"sans-serif\" font-size=\"11\" fill=\"" << color << "\">"
           << order[k] << "</text>\n";
    }

    // Guides start at the lower-left data corner and span one decade in dt.
    for (std::size_t k = 0; k < guide_orders.size(); ++k) {
        const double p = guide_orders[k];
        const double x0 = lx0 + 0.1 * (lx1 - lx0);
        const double y0 = ly0 + 0.1 * (ly1 - ly0);
        const double x1 = std::min(lx1, x0 + std::min(1.0, (ly1 - y0) / p));
        os << "<line class=\"guide\" data-order=\"" << guide_orders[k] << "\" x1=\"" << num(px(x0)) << "\" y1=\""
           << num(py(y0)) << "\" x2=\"" << num(px(x1)) << "\" y2=\"" << num(py(y0 + p * (x1 - x0)))
           << "\" stroke=\"#555555\" stroke-dasharray=\"4 3\"/>\n";
    }
    os << "</svg>\n";
    return os.str();
}

}  // namespace peerimex
