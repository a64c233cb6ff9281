#pragma once

#include <cstdint>
#include <iosfwd>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "htf/network.hpp"
#include "htf/series.hpp"
#include "htf/trainer.hpp"

namespace htf {

enum class PredictorKind { Persistence, CorrectedPersistence, Mlp };

/// A named pipeline variant from the benchmark taxonomy.
///
/// Names follow the table convention: P, CP, N-MLP, HTF-MLP with suffixes
/// -s (stationarized) and -t (time-index input). HTF-MLP covers any
/// mix_ratio > 0; the percentage of non-bijective nodes is appended when it
/// differs from the default 50 (e.g. HTF-MLP-20-s), and a trailing '*' marks
/// the sparse variant whose non-bijective nodes see only the time index.
struct PredictorSpec {
    PredictorKind kind = PredictorKind::Persistence;
    bool stationarized = false;
    bool time_index = false;
    double mix_ratio = 0.0;
    bool mask_tanh_prime_to_time_index = false;

    std::string name() const;

    /// @throws InvalidArgument when flags are inconsistent (mask without
    ///         time index or without non-bijective nodes; -s/-t on a
    ///         persistence baseline)
    void validate() const;
};

/// Inclusive bounds for the PACF-selected lag count.
struct LagBounds {
    std::size_t min_p = 4;
    std::size_t max_p = 9;
};

/// Affine map between original values and the network range [-1, 1],
/// built from learning-span extrema.
struct MinMaxScaler {
    double lo = -1.0;
    double hi = 1.0;

    static MinMaxScaler fit(std::span<const double> values);
    double scale(double x) const { return 2.0 * (x - lo) / (hi - lo) - 1.0; }
    double unscale(double y) const { return lo + (y + 1.0) * (hi - lo) / 2.0; }
};

/// One-step-ahead predictor working in original units. Immutable and safe
/// for concurrent inference once built.
class Predictor {
public:
    virtual ~Predictor() = default;

    virtual const std::string& name() const = 0;

    /// Number of trailing history samples a forecast needs.
    virtual std::size_t context_size() const = 0;

    /// Forecast of the next value given the most recent history (oldest
    /// first) and the hour-of-day of the sample being predicted.
    virtual double forecast_next(std::span<const double> history, int next_phase) const = 0;

    virtual void save(std::ostream& out) const = 0;
};

struct EvaluationResult {
    std::string predictor_name;
    std::string series_name;
    double nrmse = 0.0;
    std::size_t n_forecasts = 0;
    std::string seed_info;
};

/// Persistence baseline: the forecast of x(t+1) is x(t).
/// @throws IndexOutOfRange unless 1 <= t < length
double persistence_forecast(const TimeSeries& series, std::size_t t);

/// Persistence rescaled by the ratio of the seasonal coefficients at the
/// target and source hours: x(t) * c(phase(t+1)) / c(phase(t)).
double corrected_persistence_forecast(const TimeSeries& series, const SeasonalProfile& profile,
                                      std::size_t t);

std::unique_ptr<Predictor> make_persistence();
std::unique_ptr<Predictor> make_corrected_persistence(SeasonalProfile profile);

/// Supervised pairs from a series: row t-p+1 holds the tapped delay line at
/// t (plus the raw time index of hour t+1 when requested) with target x(t+1).
SupervisedSet make_supervised(const TimeSeries& series, std::size_t p, bool with_time_index);

/// Full MLP pipeline: optional stationarization by the learning-span
/// profile, PACF lag selection on the series the network sees, supervised
/// pair construction, [-1,1] scaling of lag inputs and targets (the time
/// index stays raw), chronological validation holdout, and best-of-restarts
/// training. The resulting predictor forecasts in original units.
std::unique_ptr<Predictor> build_mlp_predictor(const TimeSeries& learn, const PredictorSpec& spec,
                                               const TrainConfig& tc, const LagBounds& bounds);

/// Dispatch on spec.kind; persistence baselines take their profile from the
/// learning span.
std::unique_ptr<Predictor> build_predictor(const TimeSeries& learn, const PredictorSpec& spec,
                                           const TrainConfig& tc, const LagBounds& bounds);

/// One-step-ahead forecasts for every test sample, using observed history
/// only (warm-up context supplies the samples preceding the test span).
/// @throws InsufficientContext when the context is too short or its phases
///         do not join up with the test span
std::vector<double> forecast_series(const Predictor& predictor, const TimeSeries& test,
                                    const TimeSeries& warmup_context);

/// nRMSE of the predictor over the whole test span, in original units.
EvaluationResult evaluate_predictor(const Predictor& predictor, const TimeSeries& test,
                                    const TimeSeries& warmup_context);

/// Predictor serialization (spec fields, profile, scaler and network blob).
void save_predictor(std::ostream& out, const Predictor& predictor);
std::unique_ptr<Predictor> load_predictor(std::istream& in);

/// Extra accessors for the trained MLP variant.
class MlpPredictor : public Predictor {
public:
    MlpPredictor(PredictorSpec spec, std::size_t p, std::optional<SeasonalProfile> profile,
                 MinMaxScaler scaler, NetworkConfig config, Parameters params,
                 std::uint64_t seed, double validation_score);

    const std::string& name() const override { return name_; }
    std::size_t context_size() const override { return p_; }
    double forecast_next(std::span<const double> history, int next_phase) const override;
    void save(std::ostream& out) const override;

    const PredictorSpec& spec() const { return spec_; }
    std::size_t lag_count() const { return p_; }
    const NetworkConfig& config() const { return config_; }
    const Parameters& parameters() const { return params_; }
    const MinMaxScaler& scaler() const { return scaler_; }
    std::uint64_t winning_seed() const { return seed_; }
    double validation_score() const { return validation_score_; }

private:
    PredictorSpec spec_;
    std::string name_;
    std::size_t p_;
    std::optional<SeasonalProfile> profile_;
    MinMaxScaler scaler_;
    NetworkConfig config_;
    Parameters params_;
    std::uint64_t seed_ = 0;
    double validation_score_ = 0.0;
};

} // namespace htf
