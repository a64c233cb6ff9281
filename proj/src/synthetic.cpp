#include "htf/synthetic.hpp"

#include <cmath>
#include <numbers>
#include <random>
#include <vector>

namespace htf {

namespace {

constexpr int kNoiseBurnIn = 500;

// Phase offsets put the daily peak at noon and the annual peak mid-year.
constexpr double kDailyPhase = -std::numbers::pi / 2.0;
constexpr double kAnnualPhase = -std::numbers::pi / 2.0;

class GaussianStream {
public:
    explicit GaussianStream(std::uint64_t seed) : gen_(seed) {}

    // Box-Muller on raw 53-bit uniforms, identical across platforms.
    double next() {
        if (have_spare_) {
            have_spare_ = false;
            return spare_;
        }
        double u1 = 0.0;
        do {
            u1 = uniform01();
        } while (u1 <= 0.0);
        const double u2 = uniform01();
        const double radius = std::sqrt(-2.0 * std::log(u1));
        const double angle = 2.0 * std::numbers::pi * u2;
        spare_ = radius * std::sin(angle);
        have_spare_ = true;
        return radius * std::cos(angle);
    }

private:
    double uniform01() { return static_cast<double>(gen_() >> 11) * 0x1.0p-53; }

    std::mt19937_64 gen_;
    bool have_spare_ = false;
    double spare_ = 0.0;
};

} // namespace

void SyntheticConfig::validate() const {
    if (n_years < 1) throw InvalidArgument("synthetic series needs at least one year");
    if (daily_amplitude < 0.0 || annual_amplitude < 0.0) {
        throw InvalidArgument("amplitudes must be nonnegative");
    }
    if (!(ar_coefficient > -1.0 && ar_coefficient < 1.0)) {
        throw InvalidArgument("AR coefficient must lie in (-1, 1)");
    }
    if (noise_sigma < 0.0) throw InvalidArgument("noise sigma must be nonnegative");
}

TimeSeries generate_synthetic(const SyntheticConfig& cfg) {
    cfg.validate();
    const std::size_t n =
        static_cast<std::size_t>(cfg.n_years) * static_cast<std::size_t>(kHoursPerYear);

    GaussianStream noise(cfg.seed);
    double ar = 0.0;
    for (int k = 0; k < kNoiseBurnIn; ++k) {
        ar = cfg.ar_coefficient * ar + cfg.noise_sigma * noise.next();
    }

    std::vector<double> values(n);
    for (std::size_t t = 1; t <= n; ++t) {
        const int phase = static_cast<int>((t - 1) % kPeriod) + 1;
        double x = cfg.base_level;
        x += cfg.daily_amplitude *
             std::sin(2.0 * std::numbers::pi * phase / kPeriod + kDailyPhase);
        x += cfg.annual_amplitude *
             std::sin(2.0 * std::numbers::pi * static_cast<double>(t) / kHoursPerYear +
                      kAnnualPhase);
        ar = cfg.ar_coefficient * ar + cfg.noise_sigma * noise.next();
        x += ar;
        if (cfg.clip_nonnegative && x < 0.0) {
            x = 0.0;
        }
        values[t - 1] = x;
    }
    return TimeSeries(std::move(values), 1);
}

std::optional<SyntheticConfig> synthetic_preset(std::string_view name) {
    SyntheticConfig cfg;
    cfg.n_years = 11;
    if (name == "irradiation") {
        cfg.base_level = -150.0;
        cfg.daily_amplitude = 400.0;
        cfg.annual_amplitude = 90.0;
        cfg.ar_coefficient = 0.6;
        cfg.noise_sigma = 40.0;
        cfg.clip_nonnegative = true;
        return cfg;
    }
    if (name == "humidity") {
        cfg.base_level = 70.0;
        cfg.daily_amplitude = 6.0;
        cfg.annual_amplitude = 6.0;
        cfg.ar_coefficient = 0.7;
        cfg.noise_sigma = 9.0;
        return cfg;
    }
    if (name == "temperature") {
        cfg.base_level = 15.0;
        cfg.daily_amplitude = 4.0;
        cfg.annual_amplitude = 7.0;
        cfg.ar_coefficient = 0.7;
        cfg.noise_sigma = 1.34;
        return cfg;
    }
    if (name == "wind") {
        cfg.base_level = 3.0;
        cfg.daily_amplitude = 1.06;
        cfg.annual_amplitude = 0.8;
        cfg.ar_coefficient = 0.5;
        cfg.noise_sigma = 0.97;
        cfg.clip_nonnegative = true;
        return cfg;
    }
    return std::nullopt;
}

} // namespace htf
