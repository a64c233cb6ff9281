#pragma once

#include <string>

#include "htf/series.hpp"

namespace htf {

/// Reads an hourly series from the documented CSV form: header "hour,value",
/// then one row per sample with hour cycling 1..24.
/// @throws IoError, ParseError (with the line number), NonFiniteValue,
///         NonHourlyStep
TimeSeries load_csv(const std::string& path);

/// Writes a series in the same format.
void save_csv(const std::string& path, const TimeSeries& series);

} // namespace htf
