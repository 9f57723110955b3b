#include "speedlimit/svg_plot.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <stdexcept>
#include <vector>

namespace speedlimit {

namespace {

struct Table {
    std::vector<std::string> headers;
    std::vector<std::vector<double>> columns;  // columns[c][row]
};

Table read_csv(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::invalid_argument("plot: cannot open '" + path + "'");

    Table table;
    std::string line;
    if (!std::getline(in, line)) throw std::invalid_argument("plot: '" + path + "' is empty");
    std::istringstream header(line);
    for (std::string cell; std::getline(header, cell, ',');) table.headers.push_back(cell);
    if (table.headers.size() < 2) {
        throw std::invalid_argument("plot: need at least two columns in '" + path + "'");
    }
    table.columns.resize(table.headers.size());

    std::size_t row = 1;
    while (std::getline(in, line)) {
        ++row;
        if (line.empty()) continue;
        std::istringstream cells(line);
        std::string cell;
        std::size_t c = 0;
        while (std::getline(cells, cell, ',')) {
            if (c >= table.columns.size()) break;
            try {
                table.columns[c].push_back(std::stod(cell));
            } catch (const std::exception&) {
                std::ostringstream msg;
                msg << "plot: non-numeric cell '" << cell << "' at row " << row << " of '"
                    << path << "'";
                throw std::invalid_argument(msg.str());
            }
            ++c;
        }
        if (c != table.columns.size()) {
            std::ostringstream msg;
            msg << "plot: row " << row << " of '" << path << "' has " << c << " cells, expected "
                << table.columns.size();
            throw std::invalid_argument(msg.str());
        }
    }
    if (table.columns[0].empty()) {
        throw std::invalid_argument("plot: no data rows in '" + path + "'");
    }
    return table;
}

std::string fmt(double v) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%.6g", v);
    return buf;
}

}  // namespace

void write_svg_plot(const std::string& csv_path, const std::string& svg_path) {
    const Table table = read_csv(csv_path);

    const double width = 960, height = 600;
    const double ml = 70, mr = 180, mt = 30, mb = 50;  // margins; right holds the legend

    double x_min = INFINITY, x_max = -INFINITY, y_min = INFINITY, y_max = -INFINITY;
    for (double x : table.columns[0]) {
        if (!std::isfinite(x)) continue;
        x_min = std::min(x_min, x);
        x_max = std::max(x_max, x);
    }
    for (std::size_t c = 1; c < table.columns.size(); ++c) {
        for (double y : table.columns[c]) {
            if (!std::isfinite(y)) continue;
            y_min = std::min(y_min, y);
            y_max = std::max(y_max, y);
        }
    }
    if (!std::isfinite(x_min) || !std::isfinite(y_min)) {
        throw std::invalid_argument("plot: no finite samples in '" + csv_path + "'");
    }
    if (x_max == x_min) x_max = x_min + 1.0;
    if (y_max == y_min) y_max = y_min + 1.0;

    auto sx = [&](double x) { return ml + (x - x_min) / (x_max - x_min) * (width - ml - mr); };
    auto sy = [&](double y) { return height - mb - (y - y_min) / (y_max - y_min) * (height - mt - mb); };

    static const char* palette[] = {"#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e",
                                    "#8c564b", "#e377c2", "#7f7f7f", "#bcbd22", "#17becf"};
    const std::size_t n_colors = sizeof(palette) / sizeof(palette[0]);

    std::ostringstream svg;
    svg << "<svg xmlns='http://www.w3.org/2000/svg' width='" << width << "' height='" << height
        << "' viewBox='0 0 " << width << " " << height << "'>\n"
        << "<rect width='100%' height='100%' fill='white'/>\n"
        << "<rect x='" << ml << "' y='" << mt << "' width='" << width - ml - mr << "' height='"
        << height - mt - mb << "' fill='none' stroke='#444'/>\n";

    // Axis tick labels at the corners plus midpoints.
    for (int i = 0; i <= 2; ++i) {
        const double fx = x_min + (x_max - x_min) * i / 2.0;
        const double fy = y_min + (y_max - y_min) * i / 2.0;
        svg << "<text x='" << sx(fx) << "' y='" << height - mb + 20
            << "' font-size='12' text-anchor='middle'>" << fmt(fx) << "</text>\n"
            << "<text x='" << ml - 8 << "' y='" << sy(fy) + 4
            << "' font-size='12' text-anchor='end'>" << fmt(fy) << "</text>\n";
    }
    svg << "<text x='" << (ml + width - mr) / 2 << "' y='" << height - 12
        << "' font-size='13' text-anchor='middle'>" << table.headers[0] << "</text>\n";

    for (std::size_t c = 1; c < table.columns.size(); ++c) {
        const char* color = palette[(c - 1) % n_colors];
        svg << "<polyline fill='none' stroke='" << color << "' stroke-width='1.5' points='";
        bool any = false;
        for (std::size_t k = 0; k < table.columns[0].size(); ++k) {
            const double x = table.columns[0][k];
            const double y = table.columns[c][k];
            if (!std::isfinite(x) || !std::isfinite(y)) continue;
            svg << fmt(sx(x)) << "," << fmt(sy(y)) << " ";
            any = true;
        }
        svg << "'/>\n";
        const double ly = mt + 18.0 * static_cast<double>(c);
        svg << "<line x1='" << width - mr + 10 << "' y1='" << ly << "' x2='" << width - mr + 34
            << "' y2='" << ly << "' stroke='" << color << "' stroke-width='2'/>\n"
            << "<text x='" << width - mr + 40 << "' y='" << ly + 4 << "' font-size='12'>"
            << table.headers[c] << (any ? "" : " (no finite data)") << "</text>\n";
    }
    svg << "</svg>\n";

    const std::filesystem::path target(svg_path);
    if (target.has_parent_path()) {
        std::error_code ec;
        std::filesystem::create_directories(target.parent_path(), ec);
    }
    std::ofstream out(svg_path, std::ios::binary | std::ios::trunc);
    if (!out) throw std::invalid_argument("plot: cannot open '" + svg_path + "' for writing");
    out << svg.str();
    if (!out.flush()) throw std::runtime_error("plot: write to '" + svg_path + "' failed");
}

}  // namespace speedlimit
