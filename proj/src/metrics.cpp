#include "htf/metrics.hpp"

#include <cmath>

namespace htf {

double rmse(std::span<const double> predicted, std::span<const double> observed) {
    if (predicted.empty() || observed.empty()) {
        throw EmptyInput("rmse needs at least one sample");
    }
    if (predicted.size() != observed.size()) {
        throw LengthMismatch("rmse inputs differ in length");
    }
    double acc = 0.0;
    for (std::size_t i = 0; i < predicted.size(); ++i) {
        const double d = predicted[i] - observed[i];
        acc += d * d;
    }
    return std::sqrt(acc / static_cast<double>(predicted.size()));
}

double nrmse(std::span<const double> predicted, std::span<const double> observed) {
    const double err = rmse(predicted, observed);
    double mean = 0.0;
    for (double v : observed) {
        mean += v;
    }
    mean /= static_cast<double>(observed.size());
    if (std::abs(mean) < 1e-9) {
        throw DegenerateMean("observed mean too close to zero for nRMSE");
    }
    return err / mean;
}

double variation_coefficient(std::span<const double> series) {
    if (series.size() < 2) {
        throw TooShort("variation coefficient needs at least two samples");
    }
    double mean = 0.0;
    for (double v : series) {
        mean += v;
    }
    mean /= static_cast<double>(series.size());
    if (std::abs(mean) < 1e-9) {
        throw DegenerateMean("series mean too close to zero for variation coefficient");
    }
    double var = 0.0;
    for (double v : series) {
        const double d = v - mean;
        var += d * d;
    }
    var /= static_cast<double>(series.size());
    return std::sqrt(var) / mean;
}

} // namespace htf
