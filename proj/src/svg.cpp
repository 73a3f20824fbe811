#include <algorithm>
#include <cstdio>
#include <sstream>
#include <stdexcept>
#include <vector>

#include "slicecov/trace.hpp"

namespace slicecov {

namespace {

constexpr double kWidth = 640, kHeight = 400;
constexpr double kLeft = 50, kRight = 470, kTop = 20, kBottom = 360;

const char* kPalette[] = {"#1f77b4", "#ff7f0e", "#2ca02c", "#d62728",
                          "#9467bd", "#8c564b", "#e377c2", "#17becf"};

std::string fmt(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.2f", v);
    return buf;
}

struct Series {
    std::string name;
    std::string color;
    // (position in trace.points, value); gaps in position break the polyline
    std::vector<std::pair<int, double>> values;
};

} // namespace

std::string render_svg(const MetricTrace& trace) {
    if (trace.points.empty()) throw std::invalid_argument("cannot plot an empty trace");

    std::vector<Series> series;
    auto series_for = [&](const std::string& name) -> Series& {
        for (Series& s : series)
            if (s.name == name) return s;
        series.push_back({name, kPalette[series.size() % std::size(kPalette)], {}});
        return series.back();
    };
    for (std::size_t i = 0; i < trace.points.size(); ++i)
        for (const auto& [name, value] : trace.points[i].coverage)
            series_for(name).values.emplace_back(static_cast<int>(i), value.to_double());
    series.push_back({"intersection", "#000000", {}});
    for (std::size_t i = 0; i < trace.points.size(); ++i)
        series.back().values.emplace_back(static_cast<int>(i),
                                          trace.points[i].intersection_ratio.to_double());

    int min_index = trace.points.front().version_index;
    int max_index = trace.points.back().version_index;
    double x_span = std::max(max_index - min_index, 1);
    auto x_of = [&](int version_index) {
        return kLeft + (version_index - min_index) / x_span * (kRight - kLeft);
    };
    auto y_of = [&](double value) { return kBottom - value * (kBottom - kTop); };

    std::ostringstream out;
    out << "<svg xmlns=\"http://www.w3.org/2000/svg\" viewBox=\"0 0 " << kWidth << " " << kHeight
        << "\" font-family=\"monospace\" font-size=\"11\">\n";
    out << "<rect x=\"0\" y=\"0\" width=\"" << kWidth << "\" height=\"" << kHeight
        << "\" fill=\"white\"/>\n";

    // axes and ticks
    out << "<line x1=\"" << fmt(kLeft) << "\" y1=\"" << fmt(kTop) << "\" x2=\"" << fmt(kLeft)
        << "\" y2=\"" << fmt(kBottom) << "\" stroke=\"black\"/>\n";
    out << "<line x1=\"" << fmt(kLeft) << "\" y1=\"" << fmt(kBottom) << "\" x2=\"" << fmt(kRight)
        << "\" y2=\"" << fmt(kBottom) << "\" stroke=\"black\"/>\n";
    for (int i = 0; i <= 4; ++i) {
        double v = i * 0.25;
        double y = y_of(v);
        out << "<line class=\"ytick\" data-value=\"" << fmt(v) << "\" x1=\"" << fmt(kLeft - 4)
            << "\" y1=\"" << fmt(y) << "\" x2=\"" << fmt(kLeft) << "\" y2=\"" << fmt(y)
            << "\" stroke=\"black\"/>\n";
        out << "<text x=\"" << fmt(kLeft - 8) << "\" y=\"" << fmt(y + 4)
            << "\" text-anchor=\"end\">" << fmt(v) << "</text>\n";
    }
    int step = std::max(1, (max_index - min_index) / 10);
    for (int v = min_index; v <= max_index; v += step) {
        double x = x_of(v);
        out << "<line class=\"xtick\" data-value=\"" << v << "\" x1=\"" << fmt(x) << "\" y1=\""
            << fmt(kBottom) << "\" x2=\"" << fmt(x) << "\" y2=\"" << fmt(kBottom + 4)
            << "\" stroke=\"black\"/>\n";
        out << "<text x=\"" << fmt(x) << "\" y=\"" << fmt(kBottom + 16)
            << "\" text-anchor=\"middle\">" << v << "</text>\n";
    }

    // data: polyline segments over consecutive points, markers everywhere
    for (const Series& s : series) {
        std::size_t i = 0;
        int segment = 0;
        while (i < s.values.size()) {
            std::size_t j = i + 1;
            while (j < s.values.size() && s.values[j].first == s.values[j - 1].first + 1) ++j;
            if (j - i >= 2) {
                out << "<polyline class=\"series\" data-name=\"" << s.name << "\" data-segment=\""
                    << segment << "\" fill=\"none\" stroke=\"" << s.color << "\" points=\"";
                for (std::size_t k = i; k < j; ++k) {
                    if (k > i) out << " ";
                    const auto& [pos, value] = s.values[k];
                    out << fmt(x_of(trace.points[static_cast<std::size_t>(pos)].version_index))
                        << "," << fmt(y_of(value));
                }
                out << "\"/>\n";
                ++segment;
            }
            i = j;
        }
        for (const auto& [pos, value] : s.values)
            out << "<circle class=\"marker\" data-name=\"" << s.name << "\" cx=\""
                << fmt(x_of(trace.points[static_cast<std::size_t>(pos)].version_index)) << "\" cy=\""
                << fmt(y_of(value)) << "\" r=\"2.5\" fill=\"" << s.color << "\"/>\n";
    }

    // legend
    double ly = kTop;
    for (const Series& s : series) {
        out << "<rect x=\"" << fmt(kRight + 14) << "\" y=\"" << fmt(ly) << "\" width=\"12\" "
            << "height=\"12\" fill=\"" << s.color << "\"/>\n";
        out << "<text x=\"" << fmt(kRight + 30) << "\" y=\"" << fmt(ly + 10) << "\">" << s.name
            << "</text>\n";
        ly += 18;
    }

    out << "</svg>\n";
    return out.str();
}

} // namespace slicecov
