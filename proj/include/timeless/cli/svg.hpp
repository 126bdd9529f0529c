// svg.hpp: Minimal deterministic line charts

#pragma once

#include <string>
#include <vector>

namespace timeless::cli {

struct Series {
    std::string label;
    std::vector<double> values;
};

struct Plot {
    std::string title;
    std::string x_label;
    std::string y_label;
    std::vector<double> x;
    std::vector<Series> series;
};

std::string emit_svg(const Plot& plot);

}  // namespace timeless::cli
