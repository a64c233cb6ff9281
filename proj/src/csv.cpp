#include "htf/csv.hpp"

#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <string>
#include <vector>

namespace htf {

namespace {

std::string strip_cr(std::string line) {
    if (!line.empty() && line.back() == '\r') {
        line.pop_back();
    }
    return line;
}

ParseError parse_error(std::size_t line_no, const std::string& what) {
    return ParseError("line " + std::to_string(line_no) + ": " + what);
}

} // namespace

TimeSeries load_csv(const std::string& path) {
    std::ifstream in(path);
    if (!in) {
        throw IoError("cannot open " + path);
    }

    std::string line;
    std::size_t line_no = 0;
    if (!std::getline(in, line)) {
        throw parse_error(1, "missing header");
    }
    ++line_no;
    if (strip_cr(line) != "hour,value") {
        throw parse_error(line_no, "expected header \"hour,value\"");
    }

    std::vector<double> values;
    int start_phase = 0;
    int prev_hour = 0;
    while (std::getline(in, line)) {
        ++line_no;
        line = strip_cr(line);
        if (line.empty()) {
            continue;
        }
        const std::size_t comma = line.find(',');
        if (comma == std::string::npos) {
            throw parse_error(line_no, "missing value field");
        }
        int hour = 0;
        const auto hour_end = line.data() + comma;
        const auto [hp, hec] = std::from_chars(line.data(), hour_end, hour);
        if (hec != std::errc{} || hp != hour_end) {
            throw parse_error(line_no, "bad hour field");
        }
        if (hour < 1 || hour > kPeriod) {
            throw parse_error(line_no, "hour outside [1, 24]");
        }
        const std::string value_field = line.substr(comma + 1);
        if (value_field.empty()) {
            throw parse_error(line_no, "missing value field");
        }
        char* vend = nullptr;
        const double value = std::strtod(value_field.c_str(), &vend);
        if (vend != value_field.c_str() + value_field.size()) {
            throw parse_error(line_no, "bad value field");
        }
        if (!std::isfinite(value)) {
            throw NonFiniteValue("line " + std::to_string(line_no) + ": non-finite value");
        }
        if (values.empty()) {
            start_phase = hour;
        } else if (hour != prev_hour % kPeriod + 1) {
            throw NonHourlyStep("line " + std::to_string(line_no) + ": hour " +
                                std::to_string(prev_hour) + " -> " + std::to_string(hour) +
                                " is not a one-hour step");
        }
        prev_hour = hour;
        values.push_back(value);
    }
    if (values.empty()) {
        throw InsufficientData("no samples in " + path);
    }
    return TimeSeries(std::move(values), start_phase);
}

void save_csv(const std::string& path, const TimeSeries& series) {
    std::ofstream out(path);
    if (!out) {
        throw IoError("cannot open " + path + " for writing");
    }
    out << "hour,value\n";
    char buf[64];
    for (std::size_t t = 1; t <= series.size(); ++t) {
        std::snprintf(buf, sizeof buf, "%d,%.17g\n", series.phase_at(t), series.value_at(t));
        out << buf;
    }
    if (!out) {
        throw IoError("failed to write " + path);
    }
}

} // namespace htf
