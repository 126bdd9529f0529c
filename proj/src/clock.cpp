#include "timeless/clock.hpp"

#include <cmath>
#include <numbers>
#include <sstream>

#include "timeless/errors.hpp"

namespace timeless {

ClockModel ClockModel::gaussian(double width) {
    if (!(width >= 0.0) || !std::isfinite(width)) throw DomainError("gaussian clock: width must be finite and >= 0");
    return ClockModel(Kind::gaussian, width, 0.0, 0.0);
}

ClockModel ClockModel::ng_van_dam(double planck_time, double prefactor) {
    if (!(planck_time > 0.0) || !std::isfinite(planck_time))
        throw DomainError("ng_van_dam clock: planck time must be finite and > 0");
    if (!(prefactor > 0.0) || !std::isfinite(prefactor))
        throw DomainError("ng_van_dam clock: prefactor must be finite and > 0");
    return ClockModel(Kind::ng_van_dam, 0.0, planck_time, prefactor);
}

void ClockModel::require_reading(double T) const {
    if (!std::isfinite(T)) throw DomainError("clock: reading must be finite");
    if (kind_ == Kind::ng_van_dam && !(T > 0.0)) {
        std::ostringstream os;
        os << "ng_van_dam clock: reading T must be > 0, got " << T;
        throw DomainError(os.str());
    }
}

ClockSpread ClockModel::spread(double T) const {
    require_reading(T);
    switch (kind_) {
        case Kind::ideal: return {};
        case Kind::gaussian: return {0.5 * width_ * width_, 0.0};
        case Kind::ng_van_dam: {
            const double scale = prefactor_ * std::pow(planck_time_, 4.0 / 3.0);
            return {scale * std::cbrt(T * T), (2.0 / 3.0) * scale / std::cbrt(T)};
        }
    }
    return {};
}

double ClockModel::reading_stddev(double T) const { return std::sqrt(2.0 * spread(T).b); }

std::optional<double> ClockModel::density(double t, double T) const {
    const double sd = reading_stddev(T);
    if (sd == 0.0) return std::nullopt;
    const double u = (t - T) / sd;
    return std::exp(-0.5 * u * u) / (sd * std::sqrt(2.0 * std::numbers::pi));
}

const char* to_string(ClockModel::Kind kind) noexcept {
    switch (kind) {
        case ClockModel::Kind::ideal: return "ideal";
        case ClockModel::Kind::gaussian: return "gaussian";
        case ClockModel::Kind::ng_van_dam: return "ng_van_dam";
    }
    return "unknown";
}

}  // namespace timeless
