#ifndef CAUSAL_PERM_HARNESS_PLOT_HPP
#define CAUSAL_PERM_HARNESS_PLOT_HPP

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <map>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "table.hpp"

namespace causal_perm::harness {

enum class PlotKind { ratio_vs_p, time_vs_tpr, tpr_vs_p, fpr_vs_p };

inline PlotKind parse_plot_kind(const std::string& s) {
    if (s == "ratio-vs-p") return PlotKind::ratio_vs_p;
    if (s == "time-vs-tpr") return PlotKind::time_vs_tpr;
    if (s == "tpr-vs-p") return PlotKind::tpr_vs_p;
    if (s == "fpr-vs-p") return PlotKind::fpr_vs_p;
    throw InvalidArgument("unknown plot kind '" + s + "'");
}

inline std::string plot_kind_name(PlotKind k) {
    switch (k) {
        case PlotKind::ratio_vs_p: return "ratio-vs-p";
        case PlotKind::time_vs_tpr: return "time-vs-tpr";
        case PlotKind::tpr_vs_p: return "tpr-vs-p";
        case PlotKind::fpr_vs_p: return "fpr-vs-p";
    }
    return "";
}

struct PlotPoint {
    double x = 0, y = 0, err = 0;
};

struct PlotSeries {
    std::string label;
    std::vector<PlotPoint> points;
};

namespace detail {

inline std::string num(double v, const char* f = "%.2f") {
    char buf[40];
    std::snprintf(buf, sizeof buf, f, v);
    return buf;
}

inline std::string xml_escape(const std::string& s) {
    std::string out;
    for (char c : s) {
        switch (c) {
            case '&': out += "&amp;"; break;
            case '<': out += "&lt;"; break;
            case '>': out += "&gt;"; break;
            case '"': out += "&quot;"; break;
            default: out += c;
        }
    }
    return out;
}

}  // namespace detail

/// Groups the table into one series per algorithm (split further by
/// density or alpha when several are present).
inline std::vector<PlotSeries> build_series(const ResultTable& rows, PlotKind kind) {
    if (rows.empty()) throw TableError("cannot plot an empty table");
    const auto groups = aggregate(rows);
    std::set<std::string> rhos;
    std::set<double> alphas;
    std::set<int> ps;
    for (const auto& g : groups) {
        rhos.insert(g.key.rho_expr);
        alphas.insert(g.key.alpha);
        ps.insert(g.key.p);
    }
    std::map<std::string, PlotSeries> series;
    for (const auto& g : groups) {
        std::string label = g.key.algorithm;
        PlotPoint pt;
        if (kind == PlotKind::time_vs_tpr) {
            if (ps.size() > 1) label += " p=" + std::to_string(g.key.p);
            if (!std::isfinite(g.wall_time.mean))
                throw TableError("time-vs-tpr needs the wall_time column (timing file missing?)");
            pt = {g.tpr.mean, g.wall_time.mean, g.wall_time.se};
        } else {
            if (rhos.size() > 1) label += " rho=" + g.key.rho_expr;
            if (alphas.size() > 1) label += " alpha=" + detail::num(g.key.alpha, "%g");
            const Stat& s = kind == PlotKind::ratio_vs_p ? g.edge_ratio : kind == PlotKind::tpr_vs_p ? g.tpr : g.fpr;
            pt = {static_cast<double>(g.key.p), s.mean, s.se};
        }
        if (!std::isfinite(pt.x) || !std::isfinite(pt.y)) continue;
        if (!std::isfinite(pt.err)) pt.err = 0.0;
        auto& s = series[label];
        s.label = label;
        s.points.push_back(pt);
    }
    if (series.empty()) throw TableError("table has no plottable rows for " + plot_kind_name(kind));
    std::vector<PlotSeries> out;
    for (auto& [_, s] : series) {
        std::sort(s.points.begin(), s.points.end(), [](const PlotPoint& a, const PlotPoint& b) {
            return std::tie(a.x, a.y) < std::tie(b.x, b.y);
        });
        out.push_back(std::move(s));
    }
    return out;
}

/// Static SVG: polyline per series (omitted for single points), circle
/// markers, and standard-error bars.
inline std::string render_svg(const std::vector<PlotSeries>& series, const std::string& xlabel,
                              const std::string& ylabel, const std::string& title) {
    constexpr double W = 720, H = 440, L = 70, R = 190, T = 40, B = 60;
    static constexpr std::array<const char*, 8> palette{"#1f77b4", "#d62728", "#2ca02c", "#ff7f0e",
                                                        "#9467bd", "#8c564b", "#e377c2", "#17becf"};
    double x0 = INFINITY, x1 = -INFINITY, y0 = INFINITY, y1 = -INFINITY;
    for (const auto& s : series) {
        for (const auto& p : s.points) {
            x0 = std::min(x0, p.x);
            x1 = std::max(x1, p.x);
            y0 = std::min(y0, p.y - p.err);
            y1 = std::max(y1, p.y + p.err);
        }
    }
    auto widen = [](double& lo, double& hi) {
        if (hi - lo < 1e-12) {
            const double pad = std::max(0.5, std::abs(lo) * 0.1);
            lo -= pad;
            hi += pad;
        } else {
            const double pad = 0.05 * (hi - lo);
            lo -= pad;
            hi += pad;
        }
    };
    widen(x0, x1);
    widen(y0, y1);
    auto sx = [&](double x) { return L + (x - x0) / (x1 - x0) * (W - L - R); };
    auto sy = [&](double y) { return H - B - (y - y0) / (y1 - y0) * (H - T - B); };
    using detail::num;

    std::ostringstream svg;
    svg << "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n"
        << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << num(W, "%.0f") << "\" height=\""
        << num(H, "%.0f") << "\" font-family=\"sans-serif\" font-size=\"12\">\n"
        << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n"
        << "<text x=\"" << num((L + W - R) / 2) << "\" y=\"24\" text-anchor=\"middle\" font-size=\"14\">"
        << detail::xml_escape(title) << "</text>\n"
        << "<rect x=\"" << num(L) << "\" y=\"" << num(T) << "\" width=\"" << num(W - L - R) << "\" height=\""
        << num(H - T - B) << "\" fill=\"none\" stroke=\"black\"/>\n";
    for (int i = 0; i <= 4; ++i) {
        const double xv = x0 + (x1 - x0) * i / 4.0, yv = y0 + (y1 - y0) * i / 4.0;
        svg << "<line x1=\"" << num(sx(xv)) << "\" y1=\"" << num(H - B) << "\" x2=\"" << num(sx(xv)) << "\" y2=\""
            << num(H - B + 5) << "\" stroke=\"black\"/>\n"
            << "<text x=\"" << num(sx(xv)) << "\" y=\"" << num(H - B + 18) << "\" text-anchor=\"middle\">"
            << num(xv, "%.3g") << "</text>\n"
            << "<line x1=\"" << num(L - 5) << "\" y1=\"" << num(sy(yv)) << "\" x2=\"" << num(L) << "\" y2=\""
            << num(sy(yv)) << "\" stroke=\"black\"/>\n"
            << "<text x=\"" << num(L - 8) << "\" y=\"" << num(sy(yv) + 4) << "\" text-anchor=\"end\">"
            << num(yv, "%.3g") << "</text>\n";
    }
    svg << "<text x=\"" << num((L + W - R) / 2) << "\" y=\"" << num(H - 15) << "\" text-anchor=\"middle\">"
        << detail::xml_escape(xlabel) << "</text>\n"
        << "<text transform=\"translate(18," << num((T + H - B) / 2) << ") rotate(-90)\" text-anchor=\"middle\">"
        << detail::xml_escape(ylabel) << "</text>\n";

    for (std::size_t i = 0; i < series.size(); ++i) {
        const auto& s = series[i];
        const char* color = palette[i % palette.size()];
        if (s.points.size() > 1) {
            svg << "<polyline fill=\"none\" stroke=\"" << color << "\" stroke-width=\"1.5\" points=\"";
            for (std::size_t j = 0; j < s.points.size(); ++j)
                svg << (j ? " " : "") << num(sx(s.points[j].x)) << ',' << num(sy(s.points[j].y));
            svg << "\"/>\n";
        }
        for (const auto& p : s.points) {
            if (p.err > 0)
                svg << "<line x1=\"" << num(sx(p.x)) << "\" y1=\"" << num(sy(p.y - p.err)) << "\" x2=\""
                    << num(sx(p.x)) << "\" y2=\"" << num(sy(p.y + p.err)) << "\" stroke=\"" << color << "\"/>\n";
            svg << "<circle cx=\"" << num(sx(p.x)) << "\" cy=\"" << num(sy(p.y)) << "\" r=\"3.5\" fill=\"" << color
                << "\"/>\n";
        }
        const double ly = T + 14 + 18.0 * static_cast<double>(i);
        svg << "<circle cx=\"" << num(W - R + 16) << "\" cy=\"" << num(ly - 4) << "\" r=\"4\" fill=\"" << color
            << "\"/>\n<text x=\"" << num(W - R + 26) << "\" y=\"" << num(ly) << "\">" << detail::xml_escape(s.label)
            << "</text>\n";
    }
    svg << "</svg>\n";
    return svg.str();
}

inline void write_series_csv(std::ostream& out, const std::vector<PlotSeries>& series) {
    out << kSchemaLine << '\n' << "series,x,y,se\n";
    for (const auto& s : series)
        for (const auto& p : s.points)
            out << detail::csv_escape(s.label) << ',' << detail::fmt_double(p.x) << ',' << detail::fmt_double(p.y)
                << ',' << detail::fmt_double(p.err) << '\n';
}

/// Writes `<kind>.svg` and `<kind>.csv` into `out_dir`; returns the SVG
/// path. Nothing is written if the table cannot be plotted.
inline std::filesystem::path emit_plots(const ResultTable& rows, PlotKind kind, const std::filesystem::path& out_dir) {
    const auto series = build_series(rows, kind);
    std::string xlabel = "p", ylabel;
    switch (kind) {
        case PlotKind::ratio_vs_p: ylabel = "edges(D_pi) / edges(D*)"; break;
        case PlotKind::tpr_vs_p: ylabel = "true positive rate"; break;
        case PlotKind::fpr_vs_p: ylabel = "false positive rate"; break;
        case PlotKind::time_vs_tpr:
            xlabel = "true positive rate";
            ylabel = "wall time (s)";
            break;
    }
    const std::string name = plot_kind_name(kind);
    const std::string svg = render_svg(series, xlabel, ylabel, name);
    std::ostringstream csv;
    write_series_csv(csv, series);

    std::filesystem::create_directories(out_dir);
    const auto svg_path = out_dir / (name + ".svg");
    std::ofstream(svg_path, std::ios::binary) << svg;
    std::ofstream(out_dir / (name + ".csv"), std::ios::binary) << csv.str();
    return svg_path;
}

}  // namespace causal_perm::harness

#endif
