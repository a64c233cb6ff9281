#pragma once

#include <cstddef>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "htf/errors.hpp"
#include "htf/forecast.hpp"

namespace htf {

/// One (series, predictor) cell: either a valid nRMSE or an explicit error.
struct ReportCell {
    std::string series;
    std::string predictor;
    std::optional<double> nrmse;
    std::string error;
    std::size_t n_forecasts = 0;
    long long seed = 0;
    std::optional<double> validation_score;
};

/// Grid of evaluation results, row-major by (series, predictor).
struct Report {
    std::vector<std::string> series_names;
    std::vector<std::string> predictor_names;
    std::vector<ReportCell> cells;
    std::string selection_note;

    const ReportCell& cell(std::size_t series, std::size_t predictor) const;
    ReportCell& cell(std::size_t series, std::size_t predictor);

    /// Index of the lowest-nRMSE predictor for a series; ties go to the
    /// earlier predictor in grid order. Empty when every cell errored.
    std::optional<std::size_t> best_predictor_index(std::size_t series) const;
};

/// Inverse of PredictorSpec::name(); the naming is bijective by design.
/// @throws ParseError on an unknown name
PredictorSpec parse_predictor_name(const std::string& name);

/// CSV with header "series,predictor,nrmse,n_forecasts,seed"; nRMSE carries
/// nine significant digits, errors render as ERROR:<message>.
void emit_csv(std::ostream& out, const Report& report);
void emit_csv_file(const std::string& path, const Report& report);

/// Aligned text tables in the benchmark shape: the nRMSE grid with 3-decimal
/// values and '*' on per-series minima, then the best-configuration summary
/// (type, nRMSE, time index, stationary, transfer functions).
void emit_text(std::ostream& out, const Report& report);
void emit_text_file(const std::string& path, const Report& report);

/// Reads a report back from its CSV form.
Report load_report_csv(std::istream& in);
Report load_report_csv_file(const std::string& path);

} // namespace htf
