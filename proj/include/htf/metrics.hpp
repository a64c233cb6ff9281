#pragma once

#include <span>

#include "htf/errors.hpp"

namespace htf {

/// Root-mean-square error between two equally long vectors.
/// @throws EmptyInput, LengthMismatch
double rmse(std::span<const double> predicted, std::span<const double> observed);

/// Normalized RMSE: rmse / mean(observed).
/// @throws DegenerateMean when |mean(observed)| < 1e-9
double nrmse(std::span<const double> predicted, std::span<const double> observed);

/// Variation coefficient: population standard deviation / mean.
/// @throws TooShort (length < 2), DegenerateMean
double variation_coefficient(std::span<const double> series);

} // namespace htf
