#include "htf/series.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

namespace htf {

namespace {

int wrap_phase(long long raw) {
    long long m = (raw % kPeriod + kPeriod) % kPeriod;
    return static_cast<int>(m) + 1;
}

} // namespace

TimeSeries::TimeSeries(std::vector<double> values, int start_phase)
    : values_(std::move(values)), start_phase_(start_phase) {
    if (values_.empty()) {
        throw InsufficientData("time series needs at least one sample");
    }
    for (double v : values_) {
        if (!std::isfinite(v)) {
            throw NonFiniteValue("time series contains a non-finite sample");
        }
    }
    if (start_phase_ < 1 || start_phase_ > kPeriod) {
        throw InvalidPhase("start phase must lie in [1, 24]");
    }
}

double TimeSeries::value_at(std::size_t t) const {
    if (t < 1 || t > values_.size()) {
        throw IndexOutOfRange("sample index " + std::to_string(t) + " outside [1, " +
                              std::to_string(values_.size()) + "]");
    }
    return values_[t - 1];
}

int TimeSeries::phase_at(std::size_t t) const {
    if (t < 1 || t > values_.size()) {
        throw IndexOutOfRange("sample index " + std::to_string(t) + " outside [1, " +
                              std::to_string(values_.size()) + "]");
    }
    return wrap_phase(static_cast<long long>(start_phase_) - 1 + static_cast<long long>(t) - 1);
}

SeasonalProfile::SeasonalProfile(std::vector<double> coefficients)
    : coeffs_(std::move(coefficients)) {
    if (coeffs_.size() != static_cast<std::size_t>(kPeriod)) {
        throw InvalidArgument("seasonal profile needs exactly 24 coefficients");
    }
    double sum = 0.0;
    for (double c : coeffs_) {
        if (!(c > 0.0) || !std::isfinite(c)) {
            throw InvalidArgument("seasonal coefficients must be positive and finite");
        }
        sum += c;
    }
    if (std::abs(sum / kPeriod - 1.0) > 1e-9) {
        throw InvalidArgument("seasonal coefficients must average to 1");
    }
}

SeasonalProfile SeasonalProfile::unit() {
    return SeasonalProfile(std::vector<double>(kPeriod, 1.0));
}

double SeasonalProfile::coefficient(int phase) const {
    if (phase < 1 || phase > kPeriod) {
        throw InvalidPhase("phase must lie in [1, 24]");
    }
    return coeffs_[static_cast<std::size_t>(phase - 1)];
}

std::vector<double> LagVector::flatten() const {
    std::vector<double> out = lags;
    if (time_index) {
        out.push_back(*time_index);
    }
    return out;
}

LagVector make_tdl(std::span<const double> values, std::size_t p, std::size_t t) {
    if (p < 1) {
        throw InvalidLagCount("lag count must be at least 1");
    }
    if (t < p || t > values.size()) {
        throw IndexOutOfRange("tapped delay line at t=" + std::to_string(t) +
                              " does not fit p=" + std::to_string(p) + " lags");
    }
    LagVector out;
    out.lags.resize(p);
    for (std::size_t i = 0; i < p; ++i) {
        out.lags[i] = values[t - 1 - i];
    }
    return out;
}

LagVector make_tdl(const TimeSeries& series, std::size_t p, std::size_t t) {
    return make_tdl(series.values(), p, t);
}

double time_index(int phase) {
    if (phase < 1 || phase > kPeriod) {
        throw InvalidPhase("time index phase must lie in [1, 24]");
    }
    return static_cast<double>(phase) / kPeriod;
}

SeasonalProfile seasonal_profile(const TimeSeries& series, SampleWindow window) {
    if (window.first < 1 || window.last > series.size() || window.first > window.last) {
        throw IndexOutOfRange("profile window outside the series");
    }
    if (window.count() < 2 * static_cast<std::size_t>(kPeriod)) {
        throw InsufficientData("profile window must cover at least two full periods");
    }

    double phase_sum[kPeriod] = {};
    std::size_t phase_count[kPeriod] = {};
    double total = 0.0;
    for (std::size_t t = window.first; t <= window.last; ++t) {
        const int ph = series.phase_at(t);
        const double v = series.value_at(t);
        phase_sum[ph - 1] += v;
        phase_count[ph - 1] += 1;
        total += v;
    }
    const double global_mean = total / static_cast<double>(window.count());
    if (std::abs(global_mean) < 1e-9) {
        throw DegenerateMean("window mean too close to zero for ratio coefficients");
    }

    std::vector<double> coeffs(kPeriod);
    for (int ph = 0; ph < kPeriod; ++ph) {
        const double phase_mean = phase_sum[ph] / static_cast<double>(phase_count[ph]);
        coeffs[ph] = std::max(phase_mean / global_mean, kEpsilonCoeff);
    }
    const double coeff_mean =
        std::accumulate(coeffs.begin(), coeffs.end(), 0.0) / static_cast<double>(kPeriod);
    for (double& c : coeffs) {
        c /= coeff_mean;
    }
    return SeasonalProfile(std::move(coeffs));
}

SeasonalProfile seasonal_profile(const TimeSeries& series) {
    return seasonal_profile(series, SampleWindow{1, series.size()});
}

TimeSeries stationarize(const TimeSeries& series, const SeasonalProfile& profile) {
    std::vector<double> out(series.size());
    for (std::size_t t = 1; t <= series.size(); ++t) {
        out[t - 1] = series.value_at(t) / profile.coefficient(series.phase_at(t));
    }
    return TimeSeries(std::move(out), series.start_phase());
}

TimeSeries restore(const TimeSeries& series, const SeasonalProfile& profile) {
    std::vector<double> out(series.size());
    for (std::size_t t = 1; t <= series.size(); ++t) {
        out[t - 1] = series.value_at(t) * profile.coefficient(series.phase_at(t));
    }
    return TimeSeries(std::move(out), series.start_phase());
}

LearnTestSplit split_learn_test(const TimeSeries& series, int test_years) {
    if (test_years < 1) {
        throw InvalidArgument("test span must cover at least one year");
    }
    const std::size_t test_len =
        static_cast<std::size_t>(test_years) * static_cast<std::size_t>(kHoursPerYear);
    if (series.size() < test_len + 2) {
        throw InsufficientData("series too short to hold the requested test span");
    }
    const std::size_t learn_len = series.size() - test_len;
    std::span<const double> all = series.values();
    std::vector<double> learn(all.begin(), all.begin() + static_cast<std::ptrdiff_t>(learn_len));
    std::vector<double> test(all.begin() + static_cast<std::ptrdiff_t>(learn_len), all.end());
    const int test_phase = series.phase_at(learn_len + 1);
    return LearnTestSplit{TimeSeries(std::move(learn), series.start_phase()),
                          TimeSeries(std::move(test), test_phase)};
}

} // namespace htf
