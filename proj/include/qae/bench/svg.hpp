#pragma once

#include <algorithm>
#include <cmath>
#include <map>
#include <string>
#include <vector>

#include "qae/bench/csv.hpp"
#include "qae/bench/runner.hpp"

namespace qae::bench {

namespace detail {

struct Series {
    std::string label;
    std::vector<std::pair<double, double>> points;  // x, y
};

inline const char* kPalette[] = {"#1f77b4", "#d62728", "#2ca02c", "#9467bd",
                                 "#ff7f0e", "#8c564b", "#17becf", "#7f7f7f"};

/// Log-log scatter/line chart. Purely string assembly over the parsed
/// series; axis ticks at powers of ten.
inline std::string render_loglog(const std::vector<Series>& series, const std::string& title,
                                 const std::string& x_label, const std::string& y_label) {
    const double width = 840, height = 560;
    const double ml = 80, mr = 220, mt = 50, mb = 60;

    double x_min = 1e300, x_max = -1e300, y_min = 1e300, y_max = -1e300;
    for (const auto& s : series) {
        for (const auto& [x, y] : s.points) {
            if (x <= 0 || y <= 0) continue;
            x_min = std::min(x_min, x);
            x_max = std::max(x_max, x);
            y_min = std::min(y_min, y);
            y_max = std::max(y_max, y);
        }
    }
    if (x_min > x_max || y_min > y_max) {
        throw std::runtime_error("plot: no positive data points");
    }
    if (x_min == x_max) {
        x_min /= 2;
        x_max *= 2;
    }
    if (y_min == y_max) {
        y_min /= 2;
        y_max *= 2;
    }
    const double lx0 = std::log10(x_min), lx1 = std::log10(x_max);
    const double ly0 = std::log10(y_min), ly1 = std::log10(y_max);
    auto px = [&](double x) {
        return ml + (std::log10(x) - lx0) / (lx1 - lx0) * (width - ml - mr);
    };
    auto py = [&](double y) {
        return height - mb - (std::log10(y) - ly0) / (ly1 - ly0) * (height - mt - mb);
    };

    std::string svg;
    char buf[512];
    std::snprintf(buf, sizeof buf,
                  "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"%g\" height=\"%g\" "
                  "font-family=\"sans-serif\" font-size=\"12\">\n",
                  width, height);
    svg += buf;
    svg += "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
    std::snprintf(buf, sizeof buf,
                  "<text x=\"%g\" y=\"24\" font-size=\"16\">%s</text>\n", ml, title.c_str());
    svg += buf;

    for (int d = static_cast<int>(std::ceil(lx0)); d <= static_cast<int>(std::floor(lx1));
         ++d) {
        const double x = px(std::pow(10.0, d));
        std::snprintf(buf, sizeof buf,
                      "<line x1=\"%g\" y1=\"%g\" x2=\"%g\" y2=\"%g\" stroke=\"#ddd\"/>\n"
                      "<text x=\"%g\" y=\"%g\" text-anchor=\"middle\">1e%d</text>\n",
                      x, mt, x, height - mb, x, height - mb + 18, d);
        svg += buf;
    }
    for (int d = static_cast<int>(std::ceil(ly0)); d <= static_cast<int>(std::floor(ly1));
         ++d) {
        const double y = py(std::pow(10.0, d));
        std::snprintf(buf, sizeof buf,
                      "<line x1=\"%g\" y1=\"%g\" x2=\"%g\" y2=\"%g\" stroke=\"#ddd\"/>\n"
                      "<text x=\"%g\" y=\"%g\" text-anchor=\"end\">1e%d</text>\n",
                      ml, y, width - mr, y, ml - 6, y + 4, d);
        svg += buf;
    }
    std::snprintf(buf, sizeof buf,
                  "<rect x=\"%g\" y=\"%g\" width=\"%g\" height=\"%g\" fill=\"none\" "
                  "stroke=\"#333\"/>\n"
                  "<text x=\"%g\" y=\"%g\" text-anchor=\"middle\">%s</text>\n"
                  "<text x=\"18\" y=\"%g\" transform=\"rotate(-90 18 %g)\" "
                  "text-anchor=\"middle\">%s</text>\n",
                  ml, mt, width - ml - mr, height - mt - mb, ml + (width - ml - mr) / 2,
                  height - 18, x_label.c_str(), mt + (height - mt - mb) / 2,
                  mt + (height - mt - mb) / 2, y_label.c_str());
    svg += buf;

    for (std::size_t i = 0; i < series.size(); ++i) {
        const char* color = detail::kPalette[i % std::size(detail::kPalette)];
        std::string path;
        for (const auto& [x, y] : series[i].points) {
            if (x <= 0 || y <= 0) continue;
            char pt[64];
            std::snprintf(pt, sizeof pt, "%s%g,%g", path.empty() ? "M" : " L", px(x), py(y));
            path += pt;
            std::snprintf(buf, sizeof buf,
                          "<circle cx=\"%g\" cy=\"%g\" r=\"2.5\" fill=\"%s\" "
                          "fill-opacity=\"0.55\"/>\n",
                          px(x), py(y), color);
            svg += buf;
        }
        if (!path.empty()) {
            std::snprintf(buf, sizeof buf,
                          "<path d=\"%s\" fill=\"none\" stroke=\"%s\" stroke-width=\"1.8\"/>\n",
                          path.c_str(), color);
            svg += buf;
        }
        std::snprintf(buf, sizeof buf,
                      "<rect x=\"%g\" y=\"%g\" width=\"12\" height=\"12\" fill=\"%s\"/>\n"
                      "<text x=\"%g\" y=\"%g\">%s</text>\n",
                      width - mr + 16, mt + 18.0 * i, color, width - mr + 34,
                      mt + 18.0 * i + 10, series[i].label.c_str());
        svg += buf;
    }
    svg += "</svg>\n";
    return svg;
}

inline std::size_t column_of(const std::vector<std::string>& header, const std::string& name) {
    for (std::size_t i = 0; i < header.size(); ++i) {
        if (header[i] == name) return i;
    }
    throw std::runtime_error("plot: CSV is missing column '" + name + "'");
}

}  // namespace detail

/// Renders a bounds CSV (five theoretical curves over epsilon) or a
/// sweep CSV (median relative error versus Grover applications, one
/// series per estimator x distribution). Throws on schema mismatch or an
/// empty CSV; nothing is written in that case.
inline void plot_svg(const std::string& csv_path, const std::string& kind,
                     const std::string& out_path) {
    const auto table = read_csv(csv_path);
    if (table.size() < 2) throw std::runtime_error("plot: CSV has no data rows");
    const auto& header = table[0];

    std::vector<detail::Series> series;
    std::string title, x_label, y_label;

    if (kind == "bounds") {
        const std::size_t eps_col = detail::column_of(header, "epsilon");
        for (const char* name :
             {"fae_upper", "iqae_upper", "cmc_ref_sn1", "cp_upper", "mlae_lower"}) {
            const std::size_t col = detail::column_of(header, name);
            detail::Series s;
            s.label = name;
            for (std::size_t r = 1; r < table.size(); ++r) {
                s.points.emplace_back(std::stod(table[r][eps_col]),
                                      std::stod(table[r][col]));
            }
            std::sort(s.points.begin(), s.points.end());
            series.push_back(std::move(s));
        }
        title = "Query bounds vs target error";
        x_label = "epsilon";
        y_label = "oracle queries";
    } else if (kind == "sweep") {
        const std::size_t est_col = detail::column_of(header, "estimator");
        const std::size_t dist_col = detail::column_of(header, "distribution");
        const std::size_t q_col = detail::column_of(header, "grover_applications");
        const std::size_t err_col = detail::column_of(header, "relative_error_pct");
        const std::size_t tgt_col = detail::column_of(header, "target_value");
        const std::size_t err_tag_col = detail::column_of(header, "error");

        // median per (estimator, distribution, target)
        std::map<std::string, std::map<double, std::vector<std::pair<double, double>>>>
            groups;
        for (std::size_t r = 1; r < table.size(); ++r) {
            if (!table[r][err_tag_col].empty()) continue;
            const std::string key = table[r][est_col] + "  " + table[r][dist_col];
            groups[key][std::stod(table[r][tgt_col])].emplace_back(
                std::stod(table[r][q_col]), std::stod(table[r][err_col]));
        }
        for (auto& [key, by_target] : groups) {
            detail::Series s;
            s.label = key;
            for (auto& [target, pts] : by_target) {
                auto med = [](std::vector<double> v) {
                    std::sort(v.begin(), v.end());
                    return v[v.size() / 2];
                };
                std::vector<double> xs, ys;
                for (auto& [x, y] : pts) {
                    xs.push_back(x);
                    ys.push_back(y);
                }
                s.points.emplace_back(med(xs), med(ys));
            }
            std::sort(s.points.begin(), s.points.end());
            series.push_back(std::move(s));
        }
        if (series.empty()) throw std::runtime_error("plot: no usable sweep rows");
        title = "Relative estimation error vs queries";
        x_label = "Grover applications (samples for cmc)";
        y_label = "median relative error (%)";
    } else {
        throw std::invalid_argument("plot: kind must be 'bounds' or 'sweep'");
    }

    const std::string svg = detail::render_loglog(series, title, x_label, y_label);
    std::ofstream out(out_path, std::ios::binary);
    if (!out) throw std::runtime_error("plot: cannot open output " + out_path);
    out << svg;
}

}  // namespace qae::bench
