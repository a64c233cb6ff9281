#pragma once

#include <cstdint>
#include <optional>
#include <string_view>

#include "htf/series.hpp"

namespace htf {

/// Synthetic hourly series: base level plus daily and annual sinusoids plus
/// AR(1) noise, optionally clipped at zero for solar- or wind-like data.
/// Stands in for the measured series; the presets are calibrated to the
/// variation coefficients 1.5 / 0.2 / 0.4 / 0.5 of the four data kinds.
struct SyntheticConfig {
    int n_years = 11;
    double base_level = 0.0;
    double daily_amplitude = 0.0;
    double annual_amplitude = 0.0;
    double ar_coefficient = 0.0;  ///< in (-1, 1)
    double noise_sigma = 0.0;     ///< std deviation of the AR innovation
    bool clip_nonnegative = false;
    std::uint64_t seed = 0;

    void validate() const;
};

/// Deterministic per seed; samples start at phase 1.
TimeSeries generate_synthetic(const SyntheticConfig& cfg);

/// Calibrated presets: "irradiation", "humidity", "temperature", "wind".
/// Returns nothing for an unknown name.
std::optional<SyntheticConfig> synthetic_preset(std::string_view name);

} // namespace htf
