#pragma once

// Minimal self-contained SVG emitters: polyline charts for LE curves and a
// rectangle heat map for phase diagrams.  Static artifacts, no dependencies.

#include <algorithm>
#include <cmath>
#include <sstream>
#include <string>
#include <vector>

#include "mosaic/io.hpp"

namespace mosaic {

struct SvgSeries {
    std::string label;
    std::string color;
    std::vector<std::pair<double, double>> points;
};

inline std::string svg_polyline_chart(const std::vector<SvgSeries>& series, const std::string& title,
                                      const std::string& xlabel, const std::string& ylabel) {
    const double Wpx = 720, Hpx = 480, ml = 64, mr = 16, mt = 32, mb = 48;
    double xmin = 1e300, xmax = -1e300, ymin = 1e300, ymax = -1e300;
    for (auto& s : series)
        for (auto& [x, y] : s.points) {
            xmin = std::min(xmin, x); xmax = std::max(xmax, x);
            ymin = std::min(ymin, y); ymax = std::max(ymax, y);
        }
    if (!(xmin < xmax)) { xmin -= 1; xmax += 1; }
    if (!(ymin < ymax)) { ymin -= 1; ymax += 1; }
    double ypad = 0.05 * (ymax - ymin);
    ymin -= ypad; ymax += ypad;

    auto X = [&](double x) { return ml + (x - xmin) / (xmax - xmin) * (Wpx - ml - mr); };
    auto Y = [&](double y) { return Hpx - mb - (y - ymin) / (ymax - ymin) * (Hpx - mt - mb); };

    std::ostringstream os;
    os << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << Wpx << "\" height=\"" << Hpx << "\">\n";
    os << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
    os << "<text x=\"" << Wpx / 2 << "\" y=\"20\" text-anchor=\"middle\" font-size=\"14\">" << title << "</text>\n";
    // axes
    os << "<line x1=\"" << ml << "\" y1=\"" << Hpx - mb << "\" x2=\"" << Wpx - mr << "\" y2=\"" << Hpx - mb
       << "\" stroke=\"black\"/>\n";
    os << "<line x1=\"" << ml << "\" y1=\"" << mt << "\" x2=\"" << ml << "\" y2=\"" << Hpx - mb
       << "\" stroke=\"black\"/>\n";
    for (int i = 0; i <= 4; ++i) {
        double xv = xmin + (xmax - xmin) * i / 4.0, yv = ymin + (ymax - ymin) * i / 4.0;
        os << "<text x=\"" << X(xv) << "\" y=\"" << Hpx - mb + 18 << "\" text-anchor=\"middle\" font-size=\"11\">"
           << format_double(xv) << "</text>\n";
        os << "<text x=\"" << ml - 6 << "\" y=\"" << Y(yv) + 4 << "\" text-anchor=\"end\" font-size=\"11\">"
           << format_double(yv) << "</text>\n";
    }
    os << "<text x=\"" << Wpx / 2 << "\" y=\"" << Hpx - 10 << "\" text-anchor=\"middle\" font-size=\"12\">"
       << xlabel << "</text>\n";
    os << "<text x=\"16\" y=\"" << Hpx / 2 << "\" font-size=\"12\" transform=\"rotate(-90 16 " << Hpx / 2
       << ")\" text-anchor=\"middle\">" << ylabel << "</text>\n";
    int li = 0;
    for (auto& s : series) {
        os << "<polyline fill=\"none\" stroke=\"" << s.color << "\" stroke-width=\"1.5\" points=\"";
        for (auto& [x, y] : s.points) os << X(x) << "," << Y(y) << " ";
        os << "\"/>\n";
        os << "<text x=\"" << Wpx - mr - 6 << "\" y=\"" << mt + 16 * (li + 1)
           << "\" text-anchor=\"end\" font-size=\"11\" fill=\"" << s.color << "\">" << s.label << "</text>\n";
        ++li;
    }
    os << "</svg>\n";
    return os.str();
}

struct HeatCell {
    double x = 0.0, y = 0.0;
    std::string color;
};

inline std::string svg_heatmap(const std::vector<HeatCell>& cells, double cell_w, double cell_h,
                               const std::string& title, const std::string& xlabel,
                               const std::string& ylabel,
                               const std::vector<std::pair<std::string, std::string>>& legend) {
    const double Wpx = 760, Hpx = 520, ml = 64, mr = 120, mt = 32, mb = 48;
    double xmin = 1e300, xmax = -1e300, ymin = 1e300, ymax = -1e300;
    for (auto& c : cells) {
        xmin = std::min(xmin, c.x); xmax = std::max(xmax, c.x);
        ymin = std::min(ymin, c.y); ymax = std::max(ymax, c.y);
    }
    xmin -= cell_w / 2; xmax += cell_w / 2;
    ymin -= cell_h / 2; ymax += cell_h / 2;
    auto X = [&](double x) { return ml + (x - xmin) / (xmax - xmin) * (Wpx - ml - mr); };
    auto Y = [&](double y) { return Hpx - mb - (y - ymin) / (ymax - ymin) * (Hpx - mt - mb); };
    double pw = cell_w / (xmax - xmin) * (Wpx - ml - mr);
    double ph = cell_h / (ymax - ymin) * (Hpx - mt - mb);

    std::ostringstream os;
    os << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << Wpx << "\" height=\"" << Hpx << "\">\n";
    os << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
    os << "<text x=\"" << (ml + Wpx - mr) / 2 << "\" y=\"20\" text-anchor=\"middle\" font-size=\"14\">"
       << title << "</text>\n";
    for (auto& c : cells)
        os << "<rect x=\"" << X(c.x) - pw / 2 << "\" y=\"" << Y(c.y) - ph / 2 << "\" width=\"" << pw
           << "\" height=\"" << ph << "\" fill=\"" << c.color << "\"/>\n";
    for (int i = 0; i <= 4; ++i) {
        double xv = xmin + (xmax - xmin) * i / 4.0, yv = ymin + (ymax - ymin) * i / 4.0;
        os << "<text x=\"" << X(xv) << "\" y=\"" << Hpx - mb + 18 << "\" text-anchor=\"middle\" font-size=\"11\">"
           << format_double(xv) << "</text>\n";
        os << "<text x=\"" << ml - 6 << "\" y=\"" << Y(yv) + 4 << "\" text-anchor=\"end\" font-size=\"11\">"
           << format_double(yv) << "</text>\n";
    }
    os << "<text x=\"" << (ml + Wpx - mr) / 2 << "\" y=\"" << Hpx - 10
       << "\" text-anchor=\"middle\" font-size=\"12\">" << xlabel << "</text>\n";
    os << "<text x=\"16\" y=\"" << Hpx / 2 << "\" font-size=\"12\" transform=\"rotate(-90 16 " << Hpx / 2
       << ")\" text-anchor=\"middle\">" << ylabel << "</text>\n";
    int li = 0;
    for (auto& [name, color] : legend) {
        os << "<rect x=\"" << Wpx - mr + 10 << "\" y=\"" << mt + 20 * li << "\" width=\"14\" height=\"14\" fill=\""
           << color << "\"/>\n";
        os << "<text x=\"" << Wpx - mr + 30 << "\" y=\"" << mt + 20 * li + 12 << "\" font-size=\"12\">" << name
           << "</text>\n";
        ++li;
    }
    os << "</svg>\n";
    return os.str();
}

} // namespace mosaic
