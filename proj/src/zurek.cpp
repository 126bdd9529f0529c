#include "timeless/zurek.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>

namespace timeless {

void SpinBathConfig::validate() const {
    const std::size_t n = couplings.size();
    if (n == 0) throw DomainError("spin bath: environment size N must be >= 1");
    if (alpha.size() != n || beta.size() != n) {
        std::ostringstream os;
        os << "spin bath: expected " << n << " alpha/beta amplitudes, got " << alpha.size() << "/" << beta.size();
        throw StructuralError(os.str());
    }
    for (double g : couplings)
        if (!std::isfinite(g)) throw DomainError("spin bath: couplings must be finite");
    const double system_norm = std::norm(a) + std::norm(b);
    if (std::abs(system_norm - 1.0) > 1e-12) {
        std::ostringstream os;
        os << "spin bath: normalization |a|^2 + |b|^2 = " << system_norm << " != 1";
        throw DomainError(os.str());
    }
    for (std::size_t k = 0; k < n; ++k) {
        const double atom_norm = std::norm(alpha[k]) + std::norm(beta[k]);
        if (std::abs(atom_norm - 1.0) > 1e-12) {
            std::ostringstream os;
            os << "spin bath: normalization |alpha_" << k + 1 << "|^2 + |beta_" << k + 1 << "|^2 = " << atom_norm
               << " != 1";
            throw DomainError(os.str());
        }
    }
}

namespace couplings {

std::vector<double> constant(std::size_t n, double g) { return std::vector<double>(n, g); }

std::vector<double> linear(std::size_t n, double g0) {
    std::vector<double> out(n);
    for (std::size_t k = 0; k < n; ++k) out[k] = static_cast<double>(k + 1) * g0;
    return out;
}

std::vector<double> uniform(std::size_t n, double lo, double hi, Rng& rng) {
    if (!(lo <= hi)) throw DomainError("couplings::uniform: need lo <= hi");
    std::vector<double> out(n);
    for (auto& g : out) g = rng.uniform(lo, hi);
    return out;
}

}  // namespace couplings

namespace {

std::pair<Complex, Complex> random_pair(Rng& rng) {
    const double weight = rng.uniform();
    const double first = rng.phase();
    const double second = rng.phase();
    return {std::polar(std::sqrt(weight), first), std::polar(std::sqrt(1.0 - weight), second)};
}

}  // namespace

SpinBathConfig random_bath(std::vector<double> couplings, std::uint64_t seed) {
    Rng rng(seed);
    auto [a, b] = random_pair(rng);
    SpinBathConfig cfg;
    cfg.a = a;
    cfg.b = b;
    cfg.couplings = std::move(couplings);
    for (std::size_t k = 0; k < cfg.couplings.size(); ++k) {
        auto [al, be] = random_pair(rng);
        cfg.alpha.push_back(al);
        cfg.beta.push_back(be);
    }
    cfg.seed = seed;
    return cfg;
}

SpinBathConfig random_bath(std::vector<double> couplings, Complex a, Complex b, std::uint64_t seed) {
    SpinBathConfig cfg = random_bath(std::move(couplings), seed);
    cfg.a = a;
    cfg.b = b;
    return cfg;
}

SpinBathConfig balanced_bath(std::vector<double> couplings, Complex a, Complex b) {
    SpinBathConfig cfg;
    const Complex h(std::numbers::sqrt2 / 2.0, 0.0);
    cfg.alpha.assign(couplings.size(), h);
    cfg.beta.assign(couplings.size(), h);
    cfg.couplings = std::move(couplings);
    cfg.a = a;
    cfg.b = b;
    return cfg;
}

Complex coherence_z(const SpinBathConfig& cfg, double t) {
    cfg.validate();
    Complex z(1.0, 0.0);
    for (std::size_t k = 0; k < cfg.size(); ++k) {
        const double bias = std::norm(cfg.alpha[k]) - std::norm(cfg.beta[k]);
        const double angle = 2.0 * cfg.couplings[k] * t;
        z *= Complex(std::cos(angle), bias * std::sin(angle));
    }
    return z;
}

CoherenceTrace coherence_trace(const SpinBathConfig& cfg, std::span<const double> times) {
    CoherenceTrace out;
    out.times.assign(times.begin(), times.end());
    out.values.reserve(times.size());
    for (double t : times) out.values.push_back(coherence_z(cfg, t));
    return out;
}

namespace {

// a ⊗_k [α_k e^{iφ_k}|+⟩ + β_k e^{−iφ_k}|−⟩] with φ_k = sign·g_k t, system in `system_index`.
Vector branch(const SpinBathConfig& cfg, Complex amplitude, Eigen::Index system_index, double sign, double t) {
    Vector out = Vector::Zero(2);
    out(system_index) = amplitude;
    for (std::size_t k = 0; k < cfg.size(); ++k) {
        const double phase = sign * cfg.couplings[k] * t;
        Vector atom(2);
        atom << cfg.alpha[k] * std::polar(1.0, phase), cfg.beta[k] * std::polar(1.0, -phase);
        out = kron(out, atom);
    }
    return out;
}

void require_capacity(const SpinBathConfig& cfg, std::size_t limit, const char* who) {
    if (cfg.size() > limit) {
        std::ostringstream os;
        os << who << ": N = " << cfg.size() << " exceeds the state-vector limit " << limit;
        throw CapacityError(os.str());
    }
}

}  // namespace

StateVector initial_state(const SpinBathConfig& cfg) { return evolved_state(cfg, 0.0); }

StateVector evolved_state(const SpinBathConfig& cfg, double t) {
    cfg.validate();
    require_capacity(cfg, kMaxBathSpins, "evolved_state");
    Vector psi = branch(cfg, cfg.a, 0, 1.0, t);
    psi += branch(cfg, cfg.b, 1, -1.0, t);
    return StateVector::normalized(std::move(psi));
}

HermitianOperator interaction_hamiltonian(const SpinBathConfig& cfg) {
    cfg.validate();
    require_capacity(cfg, 13, "interaction_hamiltonian");
    // Diagonal in the product z-basis: energy Σ_k g_k s s_k.
    const std::size_t n = cfg.size();
    const Eigen::Index dim = Eigen::Index{1} << (n + 1);
    RealVector energy(dim);
    for (Eigen::Index index = 0; index < dim; ++index) {
        const double s = (index >> n) & 1 ? -1.0 : 1.0;
        double e = 0.0;
        for (std::size_t k = 0; k < n; ++k) {
            const double sk = (index >> (n - 1 - k)) & 1 ? -1.0 : 1.0;
            e += cfg.couplings[k] * s * sk;
        }
        energy(index) = e;
    }
    return HermitianOperator::diagonal(energy);
}

DensityMatrix reduced_density(const SpinBathConfig& cfg, double t) {
    const Complex z = coherence_z(cfg, t);
    Matrix rho(2, 2);
    rho << std::norm(cfg.a), z * cfg.a * std::conj(cfg.b), std::conj(z) * std::conj(cfg.a) * cfg.b, std::norm(cfg.b);
    return DensityMatrix::from_trusted(std::move(rho));
}

// --------------------------------------------------------------------------
// Revivals
// --------------------------------------------------------------------------

namespace {

// d/dt ln|z|², from |f_k|² = 1 − (1 − D_k²) sin²(2g_k t).
double log_magnitude_slope(const SpinBathConfig& cfg, double t) {
    double slope = 0.0;
    for (std::size_t k = 0; k < cfg.size(); ++k) {
        const double d = std::norm(cfg.alpha[k]) - std::norm(cfg.beta[k]);
        const double g = cfg.couplings[k];
        const double s = std::sin(2.0 * g * t);
        const double factor = 1.0 - (1.0 - d * d) * s * s;
        slope += -(1.0 - d * d) * 2.0 * g * std::sin(4.0 * g * t) / factor;
    }
    return slope;
}

template <typename F>
double golden_section_max(F&& f, double lo, double hi, double tolerance) {
    const double ratio = (std::sqrt(5.0) - 1.0) / 2.0;
    double x1 = hi - ratio * (hi - lo), x2 = lo + ratio * (hi - lo);
    double f1 = f(x1), f2 = f(x2);
    while (hi - lo > tolerance) {
        if (f1 < f2) {
            lo = x1;
            x1 = x2;
            f1 = f2;
            x2 = lo + ratio * (hi - lo);
            f2 = f(x2);
        } else {
            hi = x2;
            x2 = x1;
            f2 = f1;
            x1 = hi - ratio * (hi - lo);
            f1 = f(x1);
        }
    }
    return 0.5 * (lo + hi);
}

}  // namespace

std::vector<Revival> revival_search(const SpinBathConfig& cfg, double t_max, double step, double threshold) {
    cfg.validate();
    if (!(t_max > 0.0) || !(step > 0.0)) throw DomainError("revival_search: t_max and step must be > 0");
    double g_max = 0.0;
    for (double g : cfg.couplings) g_max = std::max(g_max, std::abs(g));
    if (g_max > 0.0 && step > std::numbers::pi / (20.0 * g_max)) {
        std::ostringstream os;
        os << "revival_search: step " << step << " does not resolve the fastest factor (need <= pi/(20 g_max) = "
           << std::numbers::pi / (20.0 * g_max) << ")";
        throw DomainError(os.str());
    }
    const auto count = static_cast<std::size_t>(std::floor(t_max / step));
    auto magnitude = [&](double t) { return std::abs(coherence_z(cfg, t)); };
    std::vector<double> samples(count + 1);
    for (std::size_t i = 0; i <= count; ++i) samples[i] = magnitude(static_cast<double>(i) * step);

    std::vector<Revival> out;
    for (std::size_t i = 1; i < count; ++i) {
        if (!(samples[i] >= samples[i - 1] && samples[i] > samples[i + 1])) continue;
        const double lo = static_cast<double>(i - 1) * step, hi = static_cast<double>(i + 1) * step;
        double t = golden_section_max(magnitude, lo, hi, 1e-9);
        // |z| is flat to second order at the peak, so the slope of ln|z|²
        // pins the location far more sharply than function values.
        double left = std::max(lo, t - 1e-6), right = std::min(hi, t + 1e-6);
        if (log_magnitude_slope(cfg, left) > 0.0 && log_magnitude_slope(cfg, right) < 0.0) {
            while (right - left > 1e-12 * std::max(1.0, t)) {
                const double mid = 0.5 * (left + right);
                (log_magnitude_slope(cfg, mid) > 0.0 ? left : right) = mid;
            }
            t = 0.5 * (left + right);
        }
        const double m = magnitude(t);
        if (m >= threshold) out.push_back({t, m});
    }
    return out;
}

// --------------------------------------------------------------------------
// Clock-corrected coherence
// --------------------------------------------------------------------------

std::vector<FrequencyLine> coherence_spectrum(const SpinBathConfig& cfg) {
    cfg.validate();
    require_capacity(cfg, kMaxBathSpins, "coherence_spectrum");
    double scale = 0.0;
    for (double g : cfg.couplings) scale += 2.0 * std::abs(g);
    const double merge = 1e-12 * std::max(1.0, scale);

    std::vector<FrequencyLine> lines{{0.0, 1.0}};
    std::vector<FrequencyLine> next;
    for (std::size_t k = 0; k < cfg.size(); ++k) {
        const double shift = 2.0 * cfg.couplings[k];
        const double up = std::norm(cfg.alpha[k]), down = std::norm(cfg.beta[k]);
        next.clear();
        next.reserve(2 * lines.size());
        for (const auto& l : lines) {
            next.push_back({l.omega + shift, l.weight * up});
            next.push_back({l.omega - shift, l.weight * down});
        }
        std::sort(next.begin(), next.end(), [](const auto& x, const auto& y) { return x.omega < y.omega; });
        lines.clear();
        for (const auto& l : next) {
            if (!lines.empty() && l.omega - lines.back().omega <= merge)
                lines.back().weight += l.weight;
            else
                lines.push_back(l);
        }
    }
    return lines;
}

namespace {

Complex smoothed_coherence(const std::vector<FrequencyLine>& lines, double b, double reading) {
    Complex z(0.0, 0.0);
    for (const auto& l : lines) z += std::polar(l.weight * std::exp(-l.omega * l.omega * b), l.omega * reading);
    return z;
}

}  // namespace

Complex clock_corrected_coherence(const SpinBathConfig& cfg, const ClockModel& clock, double reading) {
    const double b = clock.spread(reading).b;
    if (b == 0.0) return coherence_z(cfg, reading);
    return smoothed_coherence(coherence_spectrum(cfg), b, reading);
}

std::vector<double> revival_window_suprema(const SpinBathConfig& cfg, const ClockModel& clock, double period,
                                           std::size_t count, double halfwidth) {
    if (!(period > 0.0) || !(halfwidth > 0.0) || halfwidth >= period)
        throw DomainError("revival_window_suprema: need 0 < halfwidth < period");
    const auto lines = coherence_spectrum(cfg);
    double omega_max = 0.0;
    for (const auto& l : lines) omega_max = std::max(omega_max, std::abs(l.omega));
    const double step = omega_max > 0.0 ? std::numbers::pi / (20.0 * omega_max) : halfwidth;
    auto magnitude = [&](double T) { return std::abs(smoothed_coherence(lines, clock.spread(T).b, T)); };

    std::vector<double> out;
    for (std::size_t m = 1; m <= count; ++m) {
        const double centre = static_cast<double>(m) * period;
        const double lo = centre - halfwidth, hi = centre + halfwidth;
        const auto samples = static_cast<std::size_t>(std::ceil((hi - lo) / step));
        const double h = (hi - lo) / static_cast<double>(samples);
        std::size_t best = 0;
        double best_value = -1.0;
        for (std::size_t i = 0; i <= samples; ++i) {
            const double v = magnitude(lo + static_cast<double>(i) * h);
            if (v > best_value) best_value = v, best = i;
        }
        const double a = lo + static_cast<double>(best > 0 ? best - 1 : 0) * h;
        const double b = lo + static_cast<double>(std::min(best + 1, samples)) * h;
        const double t = golden_section_max(magnitude, a, b, 1e-10 * std::max(1.0, centre));
        out.push_back(std::max(best_value, magnitude(t)));
    }
    return out;
}

}  // namespace timeless
