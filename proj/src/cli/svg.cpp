#include "timeless/cli/svg.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdio>
#include <sstream>

#include "timeless/errors.hpp"

namespace timeless::cli {

namespace {

constexpr double kWidth = 800.0, kHeight = 500.0;
constexpr double kLeft = 80.0, kRight = 180.0, kTop = 40.0, kBottom = 60.0;
constexpr int kTicks = 5;
constexpr std::array<const char*, 8> kPalette{"#1f77b4", "#d62728", "#2ca02c", "#ff7f0e",
                                              "#9467bd", "#8c564b", "#e377c2", "#17becf"};

std::string fixed(double v) {
    char buf[48];
    std::snprintf(buf, sizeof buf, "%.2f", v);
    return buf;
}

std::string tick_label(double v) {
    char buf[48];
    std::snprintf(buf, sizeof buf, "%.4g", std::abs(v) < 1e-300 ? 0.0 : v);
    return buf;
}

std::string escape(const std::string& s) {
    std::string out;
    for (char c : s) {
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

void require_finite(const std::vector<double>& values, const std::string& what) {
    for (std::size_t i = 0; i < values.size(); ++i) {
        if (!std::isfinite(values[i]))
            throw UsageError("emit_svg: " + what + " has a non-finite value at index " + std::to_string(i));
    }
}

// Padded range; a degenerate range is widened so flat data stays visible.
std::pair<double, double> range(double lo, double hi) {
    if (hi - lo <= 1e-12 * std::max(1.0, std::abs(hi))) {
        const double pad = std::max(1.0, std::abs(hi)) * 0.5;
        return {lo - pad, hi + pad};
    }
    const double pad = 0.05 * (hi - lo);
    return {lo - pad, hi + pad};
}

}  // namespace

std::string emit_svg(const Plot& plot) {
    if (plot.series.empty()) throw UsageError("emit_svg: no series to plot");
    if (plot.x.size() < 2) throw UsageError("emit_svg: the abscissa needs at least two points");
    require_finite(plot.x, "abscissa");
    for (const auto& s : plot.series) {
        if (s.values.size() != plot.x.size())
            throw UsageError("emit_svg: series '" + s.label + "' has " + std::to_string(s.values.size()) +
                             " points, abscissa has " + std::to_string(plot.x.size()));
        require_finite(s.values, "series '" + s.label + "'");
    }

    const auto [x_lo, x_hi] = std::minmax_element(plot.x.begin(), plot.x.end());
    auto [xmin, xmax] = range(*x_lo, *x_hi);
    double ylo = plot.series.front().values.front(), yhi = ylo;
    for (const auto& s : plot.series) {
        const auto [a, b] = std::minmax_element(s.values.begin(), s.values.end());
        ylo = std::min(ylo, *a);
        yhi = std::max(yhi, *b);
    }
    auto [ymin, ymax] = range(ylo, yhi);

    const double pw = kWidth - kLeft - kRight, ph = kHeight - kTop - kBottom;
    auto sx = [&](double x) { return kLeft + (x - xmin) / (xmax - xmin) * pw; };
    auto sy = [&](double y) { return kTop + (ymax - y) / (ymax - ymin) * ph; };

    std::ostringstream svg;
    svg << "<svg xmlns=\"http://www.w3.org/2000/svg\" viewBox=\"0 0 " << kWidth << ' ' << kHeight << "\" width=\"" << kWidth
        << "\" height=\"" << kHeight << "\" font-family=\"sans-serif\" font-size=\"12\">\n";
    svg << "<rect x=\"0\" y=\"0\" width=\"" << kWidth << "\" height=\"" << kHeight << "\" fill=\"white\"/>\n";
    if (!plot.title.empty())
        svg << "<text x=\"" << fixed(kLeft + pw / 2) << "\" y=\"24\" text-anchor=\"middle\" font-size=\"15\">" << escape(plot.title)
            << "</text>\n";

    // axes
    svg << "<g class=\"axes\" stroke=\"black\" fill=\"none\">\n";
    svg << "<line x1=\"" << fixed(kLeft) << "\" y1=\"" << fixed(kTop + ph) << "\" x2=\"" << fixed(kLeft + pw) << "\" y2=\""
        << fixed(kTop + ph) << "\"/>\n";
    svg << "<line x1=\"" << fixed(kLeft) << "\" y1=\"" << fixed(kTop) << "\" x2=\"" << fixed(kLeft) << "\" y2=\"" << fixed(kTop + ph)
        << "\"/>\n";
    svg << "</g>\n<g class=\"ticks\">\n";
    for (int i = 0; i <= kTicks; ++i) {
        const double u = static_cast<double>(i) / kTicks;
        const double xv = xmin + u * (xmax - xmin), yv = ymin + u * (ymax - ymin);
        const double px = sx(xv), py = sy(yv);
        svg << "<line x1=\"" << fixed(px) << "\" y1=\"" << fixed(kTop + ph) << "\" x2=\"" << fixed(px) << "\" y2=\""
            << fixed(kTop + ph + 5) << "\" stroke=\"black\"/>";
        svg << "<text x=\"" << fixed(px) << "\" y=\"" << fixed(kTop + ph + 18) << "\" text-anchor=\"middle\">" << tick_label(xv)
            << "</text>\n";
        svg << "<line x1=\"" << fixed(kLeft - 5) << "\" y1=\"" << fixed(py) << "\" x2=\"" << fixed(kLeft) << "\" y2=\"" << fixed(py)
            << "\" stroke=\"black\"/>";
        svg << "<text x=\"" << fixed(kLeft - 8) << "\" y=\"" << fixed(py + 4) << "\" text-anchor=\"end\">" << tick_label(yv)
            << "</text>\n";
    }
    svg << "</g>\n";
    if (!plot.x_label.empty())
        svg << "<text x=\"" << fixed(kLeft + pw / 2) << "\" y=\"" << fixed(kHeight - 15) << "\" text-anchor=\"middle\">"
            << escape(plot.x_label) << "</text>\n";
    if (!plot.y_label.empty())
        svg << "<text x=\"20\" y=\"" << fixed(kTop + ph / 2) << "\" text-anchor=\"middle\" transform=\"rotate(-90 20 "
            << fixed(kTop + ph / 2) << ")\">" << escape(plot.y_label) << "</text>\n";

    for (std::size_t k = 0; k < plot.series.size(); ++k) {
        const auto& s = plot.series[k];
        const char* colour = kPalette[k % kPalette.size()];
        svg << "<path class=\"series\" fill=\"none\" stroke=\"" << colour << "\" stroke-width=\"1.5\" data-label=\"" << escape(s.label)
            << "\" d=\"";
        for (std::size_t i = 0; i < s.values.size(); ++i)
            svg << (i ? " L" : "M") << fixed(sx(plot.x[i])) << ' ' << fixed(sy(s.values[i]));
        svg << "\"/>\n";
    }

    // legend
    svg << "<g class=\"legend\">\n";
    for (std::size_t k = 0; k < plot.series.size(); ++k) {
        const double y = kTop + 10 + 20.0 * static_cast<double>(k);
        const double x = kLeft + pw + 15;
        svg << "<line x1=\"" << fixed(x) << "\" y1=\"" << fixed(y) << "\" x2=\"" << fixed(x + 25) << "\" y2=\"" << fixed(y)
            << "\" stroke=\"" << kPalette[k % kPalette.size()] << "\" stroke-width=\"2\"/>";
        svg << "<text x=\"" << fixed(x + 32) << "\" y=\"" << fixed(y + 4) << "\">" << escape(plot.series[k].label) << "</text>\n";
    }
    svg << "</g>\n</svg>\n";
    return svg.str();
}

}  // namespace timeless::cli
