/*
 * Copyright 2026 The dismet Authors
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *   http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#include "dismet/svg.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <sstream>

namespace dismet {

namespace {

constexpr double kWidth = 720.0;
constexpr double kHeight = 440.0;
constexpr double kMarginLeft = 64.0;
constexpr double kMarginRight = 150.0;
constexpr double kMarginTop = 40.0;
constexpr double kMarginBottom = 52.0;

const char* kPalette[] = {"#1f77b4", "#ff7f0e", "#2ca02c", "#d62728", "#9467bd", "#8c564b",
                          "#e377c2", "#7f7f7f", "#bcbd22", "#17becf", "#393b79", "#637939",
                          "#8c6d31", "#843c39", "#7b4173", "#3182bd", "#e6550d"};

std::string fmt(double v) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%.6f", v);
    return buf;
}

std::string fmt_tick(double v) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%.2f", v);
    return buf;
}

std::string escape(const std::string& s) {
    std::string out;
    for (char c : s) {
        switch (c) {
            case '&': out += "&amp;"; break;
            case '<': out += "&lt;"; break;
            case '>': out += "&gt;"; break;
            default: out += c;
        }
    }
    return out;
}

}  // namespace

std::string svg_line_chart(const std::string& title, const std::string& x_label,
                           const std::string& y_label, const std::vector<SvgSeries>& series) {
    double xmin = 1e300, xmax = -1e300, ymin = 1e300, ymax = -1e300;
    for (const SvgSeries& s : series) {
        for (double v : s.x) {
            xmin = std::min(xmin, v);
            xmax = std::max(xmax, v);
        }
        for (double v : s.y) {
            ymin = std::min(ymin, v);
            ymax = std::max(ymax, v);
        }
    }
    if (xmin > xmax) {
        xmin = 0.0;
        xmax = 1.0;
    }
    if (ymin > ymax) {
        ymin = 0.0;
        ymax = 1.0;
    }
    // Scores live in [0, 1]; widen to that range when close so charts compare.
    if (ymin >= 0.0 && ymax <= 1.0) {
        ymin = 0.0;
        ymax = 1.0;
    }
    if (xmax == xmin) xmax = xmin + 1.0;
    if (ymax == ymin) ymax = ymin + 1.0;

    const double plot_w = kWidth - kMarginLeft - kMarginRight;
    const double plot_h = kHeight - kMarginTop - kMarginBottom;
    auto px = [&](double x) { return kMarginLeft + (x - xmin) / (xmax - xmin) * plot_w; };
    auto py = [&](double y) { return kMarginTop + plot_h - (y - ymin) / (ymax - ymin) * plot_h; };

    std::ostringstream out;
    out << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << fmt(kWidth) << "\" height=\""
        << fmt(kHeight) << "\" viewBox=\"0 0 " << fmt(kWidth) << " " << fmt(kHeight) << "\">\n";
    out << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
    out << "<text x=\"" << fmt(kWidth / 2) << "\" y=\"20\" text-anchor=\"middle\" font-size=\"15\" "
           "font-family=\"sans-serif\">" << escape(title) << "</text>\n";

    for (int t = 0; t <= 5; ++t) {
        double fx = xmin + (xmax - xmin) * t / 5.0;
        double fy = ymin + (ymax - ymin) * t / 5.0;
        out << "<line x1=\"" << fmt(px(fx)) << "\" y1=\"" << fmt(kMarginTop) << "\" x2=\""
            << fmt(px(fx)) << "\" y2=\"" << fmt(kMarginTop + plot_h)
            << "\" stroke=\"#dddddd\" stroke-width=\"1\"/>\n";
        out << "<line x1=\"" << fmt(kMarginLeft) << "\" y1=\"" << fmt(py(fy)) << "\" x2=\""
            << fmt(kMarginLeft + plot_w) << "\" y2=\"" << fmt(py(fy))
            << "\" stroke=\"#dddddd\" stroke-width=\"1\"/>\n";
        out << "<text x=\"" << fmt(px(fx)) << "\" y=\"" << fmt(kMarginTop + plot_h + 18)
            << "\" text-anchor=\"middle\" font-size=\"11\" font-family=\"sans-serif\">"
            << fmt_tick(fx) << "</text>\n";
        out << "<text x=\"" << fmt(kMarginLeft - 8) << "\" y=\"" << fmt(py(fy) + 4)
            << "\" text-anchor=\"end\" font-size=\"11\" font-family=\"sans-serif\">" << fmt_tick(fy)
            << "</text>\n";
    }
    out << "<rect x=\"" << fmt(kMarginLeft) << "\" y=\"" << fmt(kMarginTop) << "\" width=\""
        << fmt(plot_w) << "\" height=\"" << fmt(plot_h)
        << "\" fill=\"none\" stroke=\"#333333\" stroke-width=\"1\"/>\n";
    out << "<text x=\"" << fmt(kMarginLeft + plot_w / 2) << "\" y=\"" << fmt(kHeight - 14)
        << "\" text-anchor=\"middle\" font-size=\"12\" font-family=\"sans-serif\">"
        << escape(x_label) << "</text>\n";
    out << "<text x=\"18\" y=\"" << fmt(kMarginTop + plot_h / 2)
        << "\" text-anchor=\"middle\" font-size=\"12\" font-family=\"sans-serif\" transform=\"rotate(-90 18 "
        << fmt(kMarginTop + plot_h / 2) << ")\">" << escape(y_label) << "</text>\n";

    for (std::size_t s = 0; s < series.size(); ++s) {
        const char* color = kPalette[s % (sizeof(kPalette) / sizeof(kPalette[0]))];
        out << "<polyline fill=\"none\" stroke=\"" << color << "\" stroke-width=\"1.8\" points=\"";
        for (std::size_t k = 0; k < series[s].x.size(); ++k) {
            if (k) out << ' ';
            out << fmt(px(series[s].x[k])) << ',' << fmt(py(series[s].y[k]));
        }
        out << "\"/>\n";
        for (std::size_t k = 0; k < series[s].x.size(); ++k) {
            out << "<circle cx=\"" << fmt(px(series[s].x[k])) << "\" cy=\"" << fmt(py(series[s].y[k]))
                << "\" r=\"2.5\" fill=\"" << color << "\"/>\n";
        }
        double ly = kMarginTop + 14.0 * static_cast<double>(s);
        out << "<line x1=\"" << fmt(kWidth - kMarginRight + 10) << "\" y1=\"" << fmt(ly + 4)
            << "\" x2=\"" << fmt(kWidth - kMarginRight + 28) << "\" y2=\"" << fmt(ly + 4)
            << "\" stroke=\"" << color << "\" stroke-width=\"2\"/>\n";
        out << "<text x=\"" << fmt(kWidth - kMarginRight + 32) << "\" y=\"" << fmt(ly + 8)
            << "\" font-size=\"10\" font-family=\"sans-serif\">" << escape(series[s].label)
            << "</text>\n";
    }
    out << "</svg>\n";
    return out.str();
}

std::string svg_heatmap(const std::string& title, const std::vector<std::string>& labels,
                        const Matrix& values, double vmin, double vmax) {
    const std::size_t n = values.rows;
    const double cell = std::min(36.0, 420.0 / static_cast<double>(n == 0 ? 1 : n));
    const double left = 170.0, top = 60.0;
    const double width = left + cell * static_cast<double>(n) + 40.0;
    const double height = top + cell * static_cast<double>(n) + 170.0;

    std::ostringstream out;
    out << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << fmt(width) << "\" height=\""
        << fmt(height) << "\">\n";
    out << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
    out << "<text x=\"" << fmt(width / 2) << "\" y=\"24\" text-anchor=\"middle\" font-size=\"15\" "
           "font-family=\"sans-serif\">" << escape(title) << "</text>\n";

    for (std::size_t r = 0; r < n; ++r) {
        for (std::size_t c = 0; c < n; ++c) {
            double t = (values.at(r, c) - vmin) / (vmax - vmin);
            t = std::clamp(t, 0.0, 1.0);
            // Blue (low) through white to red (high).
            int red, green, blue;
            if (t < 0.5) {
                double u = t * 2.0;
                red = static_cast<int>(60 + 195 * u);
                green = static_cast<int>(100 + 155 * u);
                blue = 255;
            } else {
                double u = (t - 0.5) * 2.0;
                red = 255;
                green = static_cast<int>(255 - 175 * u);
                blue = static_cast<int>(255 - 195 * u);
            }
            char color[16];
            std::snprintf(color, sizeof(color), "#%02x%02x%02x", red, green, blue);
            double x = left + cell * static_cast<double>(c);
            double y = top + cell * static_cast<double>(r);
            out << "<rect x=\"" << fmt(x) << "\" y=\"" << fmt(y) << "\" width=\"" << fmt(cell)
                << "\" height=\"" << fmt(cell) << "\" fill=\"" << color
                << "\" stroke=\"#888888\" stroke-width=\"0.5\"/>\n";
            char val[16];
            std::snprintf(val, sizeof(val), "%d", static_cast<int>(std::lround(values.at(r, c))));
            out << "<text x=\"" << fmt(x + cell / 2) << "\" y=\"" << fmt(y + cell / 2 + 3)
                << "\" text-anchor=\"middle\" font-size=\"9\" font-family=\"sans-serif\">" << val
                << "</text>\n";
        }
    }
    for (std::size_t r = 0; r < n; ++r) {
        out << "<text x=\"" << fmt(left - 6) << "\" y=\"" << fmt(top + cell * (static_cast<double>(r) + 0.5) + 3)
            << "\" text-anchor=\"end\" font-size=\"10\" font-family=\"sans-serif\">"
            << escape(labels[r]) << "</text>\n";
        double cx = left + cell * (static_cast<double>(r) + 0.5);
        double cy = top + cell * static_cast<double>(n) + 8;
        out << "<text x=\"" << fmt(cx) << "\" y=\"" << fmt(cy)
            << "\" text-anchor=\"end\" font-size=\"10\" font-family=\"sans-serif\" transform=\"rotate(-60 "
            << fmt(cx) << " " << fmt(cy) << ")\">" << escape(labels[r]) << "</text>\n";
    }
    out << "</svg>\n";
    return out.str();
}

std::string svg_bar_chart(const std::string& title, const std::vector<std::string>& labels,
                          const std::vector<double>& values) {
    const std::size_t n = values.size();
    const double left = 64.0, top = 48.0, plot_h = 280.0;
    const double bar = 28.0, gap = 10.0;
    const double width = left + static_cast<double>(n) * (bar + gap) + 40.0;
    const double height = top + plot_h + 140.0;

    double vmax = 1.0;
    for (double v : values) vmax = std::max(vmax, v);

    std::ostringstream out;
    out << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << fmt(width) << "\" height=\""
        << fmt(height) << "\">\n";
    out << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
    out << "<text x=\"" << fmt(width / 2) << "\" y=\"24\" text-anchor=\"middle\" font-size=\"15\" "
           "font-family=\"sans-serif\">" << escape(title) << "</text>\n";
    for (int t = 0; t <= 5; ++t) {
        double fy = vmax * t / 5.0;
        double y = top + plot_h - fy / vmax * plot_h;
        out << "<line x1=\"" << fmt(left) << "\" y1=\"" << fmt(y) << "\" x2=\""
            << fmt(width - 20) << "\" y2=\"" << fmt(y) << "\" stroke=\"#dddddd\"/>\n";
        out << "<text x=\"" << fmt(left - 8) << "\" y=\"" << fmt(y + 4)
            << "\" text-anchor=\"end\" font-size=\"11\" font-family=\"sans-serif\">" << fmt_tick(fy)
            << "</text>\n";
    }
    for (std::size_t i = 0; i < n; ++i) {
        double h = values[i] / vmax * plot_h;
        double x = left + static_cast<double>(i) * (bar + gap) + gap;
        const char* color = kPalette[i % (sizeof(kPalette) / sizeof(kPalette[0]))];
        out << "<rect x=\"" << fmt(x) << "\" y=\"" << fmt(top + plot_h - h) << "\" width=\""
            << fmt(bar) << "\" height=\"" << fmt(h) << "\" fill=\"" << color << "\"/>\n";
        double cx = x + bar / 2;
        double cy = top + plot_h + 12;
        out << "<text x=\"" << fmt(cx) << "\" y=\"" << fmt(cy)
            << "\" text-anchor=\"end\" font-size=\"10\" font-family=\"sans-serif\" transform=\"rotate(-60 "
            << fmt(cx) << " " << fmt(cy) << ")\">" << escape(labels[i]) << "</text>\n";
    }
    out << "</svg>\n";
    return out.str();
}

}  // namespace dismet
