#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <vector>

#include "htf/errors.hpp"

namespace htf {

/// Samples per day at the fixed one-hour step.
inline constexpr int kPeriod = 24;

/// Hours in one bookkeeping year (365 days).
inline constexpr int kHoursPerYear = 8760;

/// Lower clamp for seasonal coefficients, bounds the amplification of the
/// multiplicative adjustment on phases whose mean is near zero.
inline constexpr double kEpsilonCoeff = 1e-6;

/// Uniformly hourly-sampled scalar sequence with hour-of-day phase metadata.
///
/// Sample indices are 1-based: sample t=1 is the first measurement and its
/// hour-of-day is start_phase. The phase of sample t is
/// ((start_phase - 1 + t - 1) mod 24) + 1, so phases cycle 1..24.
/// Immutable after construction.
class TimeSeries {
public:
    /// @throws InsufficientData on an empty sequence
    /// @throws NonFiniteValue if any sample is NaN or infinite
    /// @throws InvalidPhase if start_phase is outside [1, 24]
    TimeSeries(std::vector<double> values, int start_phase);

    std::size_t size() const noexcept { return values_.size(); }

    /// Sample at 1-based index t.
    double value_at(std::size_t t) const;

    /// Hour-of-day in [1, 24] of the sample at 1-based index t.
    int phase_at(std::size_t t) const;

    int start_phase() const noexcept { return start_phase_; }

    std::span<const double> values() const noexcept { return values_; }

private:
    std::vector<double> values_;
    int start_phase_;
};

/// Per-phase multiplicative seasonal coefficients, one per hour of day.
///
/// Coefficients are strictly positive and average to 1, so dividing a series
/// by them (stationarize) preserves its overall level.
class SeasonalProfile {
public:
    /// @throws InvalidArgument unless exactly 24 positive coefficients whose
    ///         mean is within 1e-9 of 1
    explicit SeasonalProfile(std::vector<double> coefficients);

    /// The all-ones profile (no seasonal adjustment).
    static SeasonalProfile unit();

    /// Coefficient for hour-of-day phase in [1, 24].
    double coefficient(int phase) const;

    std::span<const double> coefficients() const noexcept { return coeffs_; }

private:
    std::vector<double> coeffs_;
};

/// Tapped delay line input: the p most recent values, newest first, plus an
/// optional time-index component for the hour being predicted.
struct LagVector {
    std::vector<double> lags;          ///< [x(t), x(t-1), ..., x(t-p+1)]
    std::optional<double> time_index;  ///< i/24, present when the predictor uses it

    /// Lags with the time index appended when present.
    std::vector<double> flatten() const;
};

/// Contiguous window of samples, 1-based inclusive bounds.
struct SampleWindow {
    std::size_t first = 0;
    std::size_t last = 0;
    std::size_t count() const noexcept { return last >= first ? last - first + 1 : 0; }
};

/// Builds the tapped delay line [x(t), x(t-1), ..., x(t-p+1)] over raw
/// samples (1-based t). The supervised target paired with it is x(t+1).
/// @throws InvalidLagCount when p < 1
/// @throws IndexOutOfRange when t < p or t exceeds the sample count
LagVector make_tdl(std::span<const double> values, std::size_t p, std::size_t t);
LagVector make_tdl(const TimeSeries& series, std::size_t p, std::size_t t);

/// Time-index input value for an hour of day: phase/24, in {1/24, ..., 1}.
/// @throws InvalidPhase outside [1, 24]
double time_index(int phase);

/// Estimates per-phase coefficients over a window: phase mean divided by the
/// window mean, clamped below by kEpsilonCoeff and renormalized to mean 1.
/// @throws InsufficientData when the window covers fewer than two periods
/// @throws DegenerateMean when the window mean magnitude is below 1e-9
SeasonalProfile seasonal_profile(const TimeSeries& series, SampleWindow window);

/// Profile over the whole series span.
SeasonalProfile seasonal_profile(const TimeSeries& series);

/// Divides each sample by its phase coefficient: y(k) = x(k) / c(phase(k)).
TimeSeries stationarize(const TimeSeries& series, const SeasonalProfile& profile);

/// Exact inverse of stationarize: y(k) = x(k) * c(phase(k)).
TimeSeries restore(const TimeSeries& series, const SeasonalProfile& profile);

struct LearnTestSplit {
    TimeSeries learn;
    TimeSeries test;
};

/// Splits off the final test_years * 8760 samples as the test span; phases
/// are preserved and learn + test concatenate back to the input.
/// @throws InvalidArgument when test_years < 1
/// @throws InsufficientData when the series cannot cover the split
LearnTestSplit split_learn_test(const TimeSeries& series, int test_years);

} // namespace htf
