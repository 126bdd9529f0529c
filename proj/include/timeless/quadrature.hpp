// quadrature.hpp: Gauss–Legendre rules and composite integration

#pragma once

#include <cstddef>
#include <vector>

namespace timeless {

// n-point Gauss–Legendre rule on [-1, 1].
class GaussLegendre {
public:
    explicit GaussLegendre(std::size_t points);

    std::size_t size() const noexcept { return nodes_.size(); }
    const std::vector<double>& nodes() const noexcept { return nodes_; }
    const std::vector<double>& weights() const noexcept { return weights_; }

    // Nodes and weights of the composite rule on [lo, hi] split into
    // `panels` equal subintervals. Output vectors are overwritten.
    void composite(double lo, double hi, std::size_t panels, std::vector<double>& x,
                   std::vector<double>& w) const;

    template <typename F>
    auto integrate(F&& f, double lo, double hi, std::size_t panels = 1) const {
        std::vector<double> x, w;
        composite(lo, hi, panels, x, w);
        auto acc = w[0] * f(x[0]);
        for (std::size_t i = 1; i < x.size(); ++i) acc += w[i] * f(x[i]);
        return acc;
    }

private:
    std::vector<double> nodes_;
    std::vector<double> weights_;
};

}  // namespace timeless
