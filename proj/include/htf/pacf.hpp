#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "htf/errors.hpp"
#include "htf/series.hpp"

namespace htf {

/// Correlation values indexed by lag 0..max_lag; entry 0 is 1 by definition.
struct CorrelationSequence {
    std::vector<double> values;
    std::size_t n = 0;  ///< sample count the estimate is based on

    std::size_t max_lag() const noexcept { return values.empty() ? 0 : values.size() - 1; }
    double at(std::size_t lag) const;
};

/// Biased sample autocorrelation r(k) = c(k)/c(0), with c(k) the lag-k
/// autocovariance about the sample mean divided by n. The biased form keeps
/// the sequence positive semi-definite.
/// @throws ConstantSeries on zero variance
/// @throws LagTooLarge when max_lag >= sample count
CorrelationSequence acf(std::span<const double> values, std::size_t max_lag);
CorrelationSequence acf(const TimeSeries& series, std::size_t max_lag);

/// Partial autocorrelations phi(k,k) via the Durbin-Levinson recursion on
/// the biased ACF; entry at lag 0 is defined as 1.
/// @throws NumericalBreakdown when a recursion denominator falls below 1e-14
CorrelationSequence pacf(std::span<const double> values, std::size_t max_lag);
CorrelationSequence pacf(const TimeSeries& series, std::size_t max_lag);

/// Picks the number of input lags from the PACF cutoff: the largest k such
/// that |pacf(j)| exceeds the 95% band 1.96/sqrt(n) for every j <= k, clamped
/// into [min_p, max_p]. Scanning from lag 1 keeps spurious single-lag band
/// exceedances at high lags from inflating the order.
std::size_t select_lag_count(const TimeSeries& series, std::size_t max_lag,
                             std::size_t min_p, std::size_t max_p);

} // namespace htf
