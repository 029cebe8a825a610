#include "wpd/svg.hpp"

#include "wpd/errors.hpp"
#include "wpd/scalogram.hpp"
#include "wpd/util.hpp"

#include <algorithm>
#include <cmath>

namespace wpd {

std::string xml_escape(const std::string& text) {
    std::string out;
    out.reserve(text.size());
    for (char c : text) {
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

namespace {

std::string svg_open(int w, int h) {
    std::string out = "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n";
    out += "<svg xmlns=\"http://www.w3.org/2000/svg\" version=\"1.1\" width=\"" +
           std::to_string(w) + "\" height=\"" + std::to_string(h) +
           "\" viewBox=\"0 0 " + std::to_string(w) + " " + std::to_string(h) + "\">\n";
    out += "<rect x=\"0\" y=\"0\" width=\"" + std::to_string(w) + "\" height=\"" +
           std::to_string(h) + "\" fill=\"#ffffff\"/>\n";
    return out;
}

std::string text_el(int x, int y, const std::string& body, const std::string& extra = "") {
    return "<text x=\"" + std::to_string(x) + "\" y=\"" + std::to_string(y) +
           "\" font-family=\"monospace\" font-size=\"11\"" +
           (extra.empty() ? "" : " " + extra) + ">" + xml_escape(body) + "</text>\n";
}

} // namespace

std::string render_heatmap_svg(const ScalogramMatrix& m) {
    const Eigen::Index rows = m.values.rows();
    const Eigen::Index cols = m.values.cols();
    if (rows == 0 || cols == 0) throw RangeError("empty scalogram matrix");
    if (!m.values.allFinite()) throw Error("scalogram holds non-finite values");

    const int cell_w = static_cast<int>(std::clamp<Eigen::Index>(900 / cols, 2, 24));
    const int cell_h = 24;
    const int x0 = 70;
    const int y0 = 40;
    const int plot_w = static_cast<int>(cols) * cell_w;
    const int plot_h = static_cast<int>(rows) * cell_h;
    const int width = x0 + plot_w + 20;
    const int height = y0 + plot_h + 50;

    const double max_abs = m.values.cwiseAbs().maxCoeff();

    std::string out = svg_open(width, height);
    out += text_el(x0, 22, "scalogram (" + m.wavelet + "), |W| black=0 white=max");

    for (Eigen::Index r = 0; r < rows; ++r) {
        for (Eigen::Index c = 0; c < cols; ++c) {
            double t = max_abs > 0.0 ? std::abs(m.values(r, c)) / max_abs : 0.0;
            int g = static_cast<int>(std::lround(255.0 * t));
            std::string fill = "rgb(" + std::to_string(g) + "," + std::to_string(g) +
                               "," + std::to_string(g) + ")";
            out += "<rect class=\"cell\" x=\"" +
                   std::to_string(x0 + static_cast<int>(c) * cell_w) + "\" y=\"" +
                   std::to_string(y0 + static_cast<int>(r) * cell_h) + "\" width=\"" +
                   std::to_string(cell_w) + "\" height=\"" + std::to_string(cell_h) +
                   "\" fill=\"" + fill + "\"";
            if (m.edge(r, c)) out += " stroke=\"#888888\" stroke-dasharray=\"3,2\"";
            out += "/>\n";
        }
    }

    // scale labels, one per row (rows are already in ascending = log2 order)
    for (Eigen::Index r = 0; r < rows; ++r) {
        int y = y0 + static_cast<int>(r) * cell_h + cell_h / 2 + 4;
        out += text_el(x0 - 8, y, format_double(m.grid.scales[static_cast<std::size_t>(r)]),
                       "text-anchor=\"end\"");
    }
    out += text_el(18, y0 + plot_h / 2, "scale (months)",
                   "transform=\"rotate(-90 18 " + std::to_string(y0 + plot_h / 2) + ")\" text-anchor=\"middle\"");

    const Eigen::Index tick_step = std::max<Eigen::Index>(1, cols / 8);
    for (Eigen::Index c = 0; c < cols; c += tick_step) {
        int x = x0 + static_cast<int>(c) * cell_w + cell_w / 2;
        out += text_el(x, y0 + plot_h + 16,
                       std::to_string(m.grid.translations[static_cast<std::size_t>(c)]),
                       "text-anchor=\"middle\"");
    }
    out += text_el(x0 + plot_w / 2, y0 + plot_h + 36, "translation (months)",
                   "text-anchor=\"middle\"");

    out += "</svg>\n";
    return out;
}

std::string render_month_line_svg(const Eigen::ArrayXd& values,
                                  const std::string& title,
                                  const std::string& y_label) {
    if (values.size() != 12) throw RangeError("month chart needs exactly 12 values");
    if (!values.allFinite()) throw Error("month chart holds non-finite values");

    const int x0 = 70;
    const int y0 = 40;
    const int plot_w = 660;
    const int plot_h = 220;
    const int width = x0 + plot_w + 30;
    const int height = y0 + plot_h + 60;

    double vmin = values.minCoeff();
    double vmax = values.maxCoeff();
    if (vmax == vmin) {
        vmin -= 1.0;
        vmax += 1.0;
    }

    auto px = [&](int i) { return x0 + (i * plot_w) / 11; };
    auto py = [&](double v) {
        return y0 + plot_h -
               static_cast<int>(std::lround((v - vmin) / (vmax - vmin) * plot_h));
    };

    std::string out = svg_open(width, height);
    out += text_el(x0, 22, title);

    for (int q = 0; q <= 4; ++q) {
        double v = vmin + (vmax - vmin) * q / 4.0;
        int y = py(v);
        out += "<line x1=\"" + std::to_string(x0) + "\" y1=\"" + std::to_string(y) +
               "\" x2=\"" + std::to_string(x0 + plot_w) + "\" y2=\"" + std::to_string(y) +
               "\" stroke=\"#dddddd\"/>\n";
        out += text_el(x0 - 8, y + 4, format_fixed(v, 1), "text-anchor=\"end\"");
    }

    std::string points;
    for (int i = 0; i < 12; ++i) {
        if (i > 0) points += ' ';
        points += std::to_string(px(i)) + "," + std::to_string(py(values[i]));
    }
    out += "<polyline points=\"" + points +
           "\" fill=\"none\" stroke=\"#1f4e8c\" stroke-width=\"2\"/>\n";
    for (int i = 0; i < 12; ++i) {
        out += "<circle cx=\"" + std::to_string(px(i)) + "\" cy=\"" +
               std::to_string(py(values[i])) + "\" r=\"3\" fill=\"#1f4e8c\"/>\n";
        out += text_el(px(i), y0 + plot_h + 18, month_name(i + 1).substr(0, 3),
                       "text-anchor=\"middle\"");
    }
    out += text_el(18, y0 + plot_h / 2, y_label,
                   "transform=\"rotate(-90 18 " + std::to_string(y0 + plot_h / 2) + ")\" text-anchor=\"middle\"");
    out += "</svg>\n";
    return out;
}

} // namespace wpd
