#pragma once

#include <string>

namespace speedlimit {

/// Renders a numeric CSV (header row, first column = x axis) as an SVG
/// line chart, one polyline per remaining column. Convenience output with
/// no styling guarantees; non-finite samples are skipped. Throws
/// std::invalid_argument on unreadable or non-numeric input.
void write_svg_plot(const std::string& csv_path, const std::string& svg_path);

}  // namespace speedlimit
