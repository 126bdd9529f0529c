// clock.hpp: Real-clock reading distributions
//
// A clock model gives the probability density of the unobservable evolution
// parameter t when the clock reads T. Every non-ideal clock is realized as a
// Gaussian centred on T with variance 2·b(T), where b(T) is the coefficient of
// the second-derivative term in the small-spread expansion of the density.

#pragma once

#include <optional>

namespace timeless {

struct ClockSpread {
    double b = 0.0;      // squared-time units
    double sigma = 0.0;  // db/dT
};

class ClockModel {
public:
    enum class Kind { ideal, gaussian, ng_van_dam };

    static ClockModel ideal() { return ClockModel(Kind::ideal, 0.0, 0.0, 0.0); }
    // Fixed-width clock: standard deviation `width`, so b = width²/2.
    static ClockModel gaussian(double width);
    // b(T) = prefactor · T_P^{4/3} · T^{2/3}.
    static ClockModel ng_van_dam(double planck_time, double prefactor = 1.0);

    Kind kind() const noexcept { return kind_; }
    double width() const noexcept { return width_; }
    double planck_time() const noexcept { return planck_time_; }
    double prefactor() const noexcept { return prefactor_; }

    ClockSpread spread(double T) const;

    // Standard deviation of t given the reading T, √(2b(T)).
    double reading_stddev(double T) const;

    // Density of t given reading T. Empty for a delta distribution (ideal
    // clock or zero width), which consumers treat analytically.
    std::optional<double> density(double t, double T) const;

    // True when the reading distribution is a delta at T.
    bool exact(double T) const { return reading_stddev(T) == 0.0; }

private:
    ClockModel(Kind kind, double width, double planck_time, double prefactor)
        : kind_(kind), width_(width), planck_time_(planck_time), prefactor_(prefactor) {}

    void require_reading(double T) const;

    Kind kind_;
    double width_;
    double planck_time_;
    double prefactor_;
};

const char* to_string(ClockModel::Kind kind) noexcept;

}  // namespace timeless
