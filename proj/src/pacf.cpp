#include "htf/pacf.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace htf {

double CorrelationSequence::at(std::size_t lag) const {
    if (lag >= values.size()) {
        throw IndexOutOfRange("lag " + std::to_string(lag) + " beyond computed range");
    }
    return values[lag];
}

CorrelationSequence acf(std::span<const double> values, std::size_t max_lag) {
    const std::size_t n = values.size();
    if (max_lag >= n) {
        throw LagTooLarge("max_lag must be smaller than the sample count");
    }
    double mean = 0.0;
    for (double v : values) {
        mean += v;
    }
    mean /= static_cast<double>(n);

    double c0 = 0.0;
    for (double v : values) {
        const double d = v - mean;
        c0 += d * d;
    }
    c0 /= static_cast<double>(n);
    if (c0 == 0.0) {
        throw ConstantSeries("autocorrelation undefined for a constant series");
    }

    CorrelationSequence out;
    out.n = n;
    out.values.resize(max_lag + 1);
    out.values[0] = 1.0;
    for (std::size_t k = 1; k <= max_lag; ++k) {
        double ck = 0.0;
        for (std::size_t t = 0; t + k < n; ++t) {
            ck += (values[t] - mean) * (values[t + k] - mean);
        }
        ck /= static_cast<double>(n);
        out.values[k] = ck / c0;
    }
    return out;
}

CorrelationSequence acf(const TimeSeries& series, std::size_t max_lag) {
    return acf(series.values(), max_lag);
}

CorrelationSequence pacf(std::span<const double> values, std::size_t max_lag) {
    if (max_lag < 1) {
        throw InvalidArgument("pacf needs max_lag >= 1");
    }
    const CorrelationSequence r = acf(values, max_lag);

    CorrelationSequence out;
    out.n = r.n;
    out.values.resize(max_lag + 1);
    out.values[0] = 1.0;

    // Durbin-Levinson: phi holds the AR(k) coefficients of the current order.
    std::vector<double> phi(max_lag + 1, 0.0);
    std::vector<double> phi_next(max_lag + 1, 0.0);
    phi[1] = r.values[1];
    out.values[1] = r.values[1];
    double err = 1.0 - r.values[1] * r.values[1];

    for (std::size_t k = 2; k <= max_lag; ++k) {
        if (std::abs(err) < 1e-14) {
            throw NumericalBreakdown("prediction error vanished in the Durbin-Levinson recursion");
        }
        double num = r.values[k];
        for (std::size_t j = 1; j < k; ++j) {
            num -= phi[j] * r.values[k - j];
        }
        const double a = num / err;
        out.values[k] = a;
        for (std::size_t j = 1; j < k; ++j) {
            phi_next[j] = phi[j] - a * phi[k - j];
        }
        phi_next[k] = a;
        std::swap(phi, phi_next);
        err *= 1.0 - a * a;
    }
    return out;
}

CorrelationSequence pacf(const TimeSeries& series, std::size_t max_lag) {
    return pacf(series.values(), max_lag);
}

std::size_t select_lag_count(const TimeSeries& series, std::size_t max_lag,
                             std::size_t min_p, std::size_t max_p) {
    if (min_p < 1 || max_p < min_p) {
        throw InvalidArgument("lag bounds must satisfy 1 <= min_p <= max_p");
    }
    if (max_p > max_lag) {
        throw InvalidArgument("max_p must not exceed max_lag");
    }
    const CorrelationSequence p = pacf(series, max_lag);
    const double band = 1.96 / std::sqrt(static_cast<double>(p.n));

    std::size_t cutoff = 0;
    while (cutoff < max_lag && std::abs(p.values[cutoff + 1]) > band) {
        ++cutoff;
    }
    return std::clamp(cutoff, min_p, max_p);
}

} // namespace htf
