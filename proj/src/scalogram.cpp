#include "wpd/scalogram.hpp"

#include "wpd/util.hpp"

#include <cmath>

namespace wpd {

ScaleGrid default_grid(Eigen::Index series_length) {
    ScaleGrid grid;
    for (double a : {1.0, 2.0, 4.0, 8.0, 16.0})
        if (a <= static_cast<double>(series_length)) grid.scales.push_back(a);
    if (grid.scales.empty()) grid.scales.push_back(1.0);
    for (Eigen::Index b = 1; b <= series_length; ++b) grid.translations.push_back(b);
    return grid;
}

namespace {

// Integral of the piecewise-constant signal over [1, t), clamped to the
// record [1, n+1). prefix[k] = sum of the first k samples.
double signal_integral(const Eigen::ArrayXd& prefix, double t) {
    const auto n = static_cast<double>(prefix.size() - 1);
    if (t <= 1.0) return 0.0;
    if (t >= n + 1.0) return prefix[prefix.size() - 1];
    double cell = std::floor(t);
    auto idx = static_cast<Eigen::Index>(cell); // cell i covers [i, i+1)
    return prefix[idx - 1] + (t - cell) * (prefix[idx] - prefix[idx - 1]);
}

} // namespace

ScalogramMatrix cwt_quadrature(const RainfallSeries& series, const ScaleGrid& grid) {
    if (series.has_missing())
        throw Error("scalogram requires a gap-free series");
    if (grid.scales.empty() || grid.translations.empty())
        throw RangeError("scale grid must be nonempty");

    const Eigen::Index n = series.size();
    for (std::size_t i = 0; i < grid.scales.size(); ++i) {
        double a = grid.scales[i];
        if (!(a >= 1.0))
            throw RangeError("scale " + format_double(a) +
                             " is below one month and covers no sample");
        if (i > 0 && !(a > grid.scales[i - 1]))
            throw RangeError("scales must be strictly ascending");
    }
    for (Eigen::Index b : grid.translations)
        if (b < 1 || b > n)
            throw RangeError("translation " + std::to_string(b) +
                             " outside 1.." + std::to_string(n));

    Eigen::ArrayXd prefix(n + 1);
    prefix[0] = 0.0;
    for (Eigen::Index i = 0; i < n; ++i) prefix[i + 1] = prefix[i] + series.values()[i];

    const auto rows = static_cast<Eigen::Index>(grid.scales.size());
    const auto cols = static_cast<Eigen::Index>(grid.translations.size());
    ScalogramMatrix m;
    m.grid = grid;
    m.values.resize(rows, cols);
    m.edge.resize(rows, cols);

    for (Eigen::Index r = 0; r < rows; ++r) {
        const double a = grid.scales[static_cast<std::size_t>(r)];
        const double inv_sqrt_a = 1.0 / std::sqrt(a);
        for (Eigen::Index c = 0; c < cols; ++c) {
            const auto b = static_cast<double>(grid.translations[static_cast<std::size_t>(c)]);
            const double mid = b + 0.5 * a;
            const double end = b + a;
            const double plus = signal_integral(prefix, mid) - signal_integral(prefix, b);
            const double minus = signal_integral(prefix, end) - signal_integral(prefix, mid);
            m.values(r, c) = inv_sqrt_a * (plus - minus);
            m.edge(r, c) = end > static_cast<double>(n) + 1.0;
        }
    }
    return m;
}

std::string scalogram_to_csv(const ScalogramMatrix& m) {
    std::string out = "scale";
    for (Eigen::Index b : m.grid.translations) {
        out += ",t";
        out += std::to_string(b);
    }
    out += '\n';
    for (Eigen::Index r = 0; r < m.values.rows(); ++r) {
        out += format_double(m.grid.scales[static_cast<std::size_t>(r)]);
        for (Eigen::Index c = 0; c < m.values.cols(); ++c) {
            out += ',';
            out += format_double(m.values(r, c));
        }
        out += '\n';
    }
    return out;
}

} // namespace wpd
