#pragma once

#include <Eigen/Core>

#include <string>
#include <vector>

namespace wpd {

/// Deterministic 12-point line chart (one point per calendar month).
/// Throws on non-finite values or when values.size() != 12.
std::string render_month_line_svg(const Eigen::ArrayXd& values,
                                  const std::string& title,
                                  const std::string& y_label);

/// XML text escaping for SVG labels.
std::string xml_escape(const std::string& text);

} // namespace wpd
