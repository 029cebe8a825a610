#pragma once

#include "wpd/series.hpp"

#include <Eigen/Core>

#include <string>
#include <vector>

namespace wpd {

/// Scale/translation lattice for the continuous transform. Scales are months
/// (>= 1, ascending); translations are 1-based month indices into the series.
struct ScaleGrid {
    std::vector<double> scales;
    std::vector<Eigen::Index> translations;
};

/// Dyadic scales {1,2,4,8,16} capped at the series length, one translation
/// per month.
ScaleGrid default_grid(Eigen::Index series_length);

/// |W| heatmap input: rows follow grid.scales, columns grid.translations.
/// edge(r,c) marks cells whose support ran past the end of the series and
/// was truncated.
struct ScalogramMatrix {
    Eigen::MatrixXd values;
    Eigen::Array<bool, Eigen::Dynamic, Eigen::Dynamic> edge;
    ScaleGrid grid;
    std::string wavelet = "haar-analytic";
};

/// Continuous transform by exact quadrature against the analytic Haar
/// (+1 on [0,1/2), -1 on [1/2,1)):
///   W(a,b) = (1/sqrt(a)) * integral f(x) psi((x-b)/a) dx
/// with f piecewise constant on unit month cells [i, i+1). The integral is
/// evaluated in closed form from prefix sums, so a constant series yields
/// exactly zero wherever the support stays inside the record.
ScalogramMatrix cwt_quadrature(const RainfallSeries& series, const ScaleGrid& grid);

/// Matrix as CSV: one row per scale, one column per translation.
std::string scalogram_to_csv(const ScalogramMatrix& m);

/// Deterministic SVG heatmap: x = translation (months), y = scale rows in
/// log2 order, cell luminance monotone in |W| from black (0) to white (max).
/// Truncated-support cells carry a dashed outline.
std::string render_heatmap_svg(const ScalogramMatrix& m);

} // namespace wpd
