#include "timeless/quadrature.hpp"

#include <cmath>
#include <numbers>

#include "timeless/errors.hpp"

namespace timeless {

GaussLegendre::GaussLegendre(std::size_t points) : nodes_(points), weights_(points) {
    if (points == 0) throw DomainError("GaussLegendre: need at least one point");
    const std::size_t n = points;
    for (std::size_t i = 0; i < (n + 1) / 2; ++i) {
        // Tricomi initial guess, then Newton on P_n.
        double x = std::cos(std::numbers::pi * (static_cast<double>(i) + 0.75) / (static_cast<double>(n) + 0.5));
        double dp = 0.0;
        for (int iter = 0; iter < 100; ++iter) {
            double p0 = 1.0, p1 = x;
            for (std::size_t k = 2; k <= n; ++k) {
                const double pk = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / static_cast<double>(k);
                p0 = p1;
                p1 = pk;
            }
            dp = static_cast<double>(n) * (x * p1 - p0) / (x * x - 1.0);
            const double dx = p1 / dp;
            x -= dx;
            if (std::abs(dx) < 1e-16) break;
        }
        {
            // Recompute the derivative at the converged root.
            double p0 = 1.0, p1 = x;
            for (std::size_t k = 2; k <= n; ++k) {
                const double pk = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / static_cast<double>(k);
                p0 = p1;
                p1 = pk;
            }
            dp = n == 1 ? 1.0 : static_cast<double>(n) * (x * p1 - p0) / (x * x - 1.0);
        }
        const double w = 2.0 / ((1.0 - x * x) * dp * dp);
        nodes_[i] = -x;
        nodes_[n - 1 - i] = x;
        weights_[i] = w;
        weights_[n - 1 - i] = w;
    }
}

void GaussLegendre::composite(double lo, double hi, std::size_t panels, std::vector<double>& x,
                              std::vector<double>& w) const {
    if (panels == 0) throw DomainError("GaussLegendre::composite: need at least one panel");
    x.resize(panels * size());
    w.resize(panels * size());
    const double h = (hi - lo) / static_cast<double>(panels);
    for (std::size_t p = 0; p < panels; ++p) {
        const double mid = lo + (static_cast<double>(p) + 0.5) * h;
        for (std::size_t i = 0; i < size(); ++i) {
            x[p * size() + i] = mid + 0.5 * h * nodes_[i];
            w[p * size() + i] = 0.5 * h * weights_[i];
        }
    }
}

}  // namespace timeless
