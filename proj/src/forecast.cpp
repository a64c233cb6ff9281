#include "htf/forecast.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <utility>

#include "binary_io.hpp"
#include "htf/metrics.hpp"
#include "htf/pacf.hpp"

namespace htf {

namespace {

constexpr std::uint32_t kPredictorMagic = 0x50465448;  // "HTFP" little-endian
constexpr std::uint32_t kPredictorVersion = 1;

int wrap_phase(int raw) {
    return ((raw - 1) % kPeriod + kPeriod) % kPeriod + 1;
}

class PersistencePredictor final : public Predictor {
public:
    PersistencePredictor() : name_("P") {}

    const std::string& name() const override { return name_; }
    std::size_t context_size() const override { return 1; }

    double forecast_next(std::span<const double> history, int /*next_phase*/) const override {
        if (history.empty()) {
            throw InsufficientContext("persistence needs one past sample");
        }
        return history.back();
    }

    void save(std::ostream& out) const override {
        detail::write_u32(out, kPredictorMagic);
        detail::write_u32(out, kPredictorVersion);
        detail::write_u8(out, 0);
    }

private:
    std::string name_;
};

class CorrectedPersistencePredictor final : public Predictor {
public:
    explicit CorrectedPersistencePredictor(SeasonalProfile profile)
        : name_("CP"), profile_(std::move(profile)) {}

    const std::string& name() const override { return name_; }
    std::size_t context_size() const override { return 1; }

    double forecast_next(std::span<const double> history, int next_phase) const override {
        if (history.empty()) {
            throw InsufficientContext("corrected persistence needs one past sample");
        }
        const int prev_phase = wrap_phase(next_phase - 1);
        return history.back() * profile_.coefficient(next_phase) /
               profile_.coefficient(prev_phase);
    }

    void save(std::ostream& out) const override {
        detail::write_u32(out, kPredictorMagic);
        detail::write_u32(out, kPredictorVersion);
        detail::write_u8(out, 1);
        for (double c : profile_.coefficients()) {
            detail::write_f64(out, c);
        }
    }

private:
    std::string name_;
    SeasonalProfile profile_;
};

} // namespace

std::string PredictorSpec::name() const {
    switch (kind) {
        case PredictorKind::Persistence: return "P";
        case PredictorKind::CorrectedPersistence: return "CP";
        case PredictorKind::Mlp: break;
    }
    std::string out;
    if (mix_ratio == 0.0) {
        out = "N-MLP";
    } else {
        out = "HTF-MLP";
        const int pct = static_cast<int>(std::lround(mix_ratio * 100.0));
        if (pct != 50) {
            out += "-" + std::to_string(pct);
        }
    }
    if (stationarized) out += "-s";
    if (time_index) out += "-t";
    if (mask_tanh_prime_to_time_index) out += "*";
    return out;
}

void PredictorSpec::validate() const {
    if (!(mix_ratio >= 0.0 && mix_ratio <= 1.0)) {
        throw InvalidArgument("mix_ratio must lie in [0, 1]");
    }
    if (kind != PredictorKind::Mlp) {
        if (stationarized || time_index || mask_tanh_prime_to_time_index || mix_ratio != 0.0) {
            throw InvalidArgument("persistence baselines take no MLP flags");
        }
        return;
    }
    if (mask_tanh_prime_to_time_index && (!time_index || mix_ratio <= 0.0)) {
        throw InvalidArgument(
            "the time-index-only wiring needs the time index input and non-bijective nodes");
    }
}

MinMaxScaler MinMaxScaler::fit(std::span<const double> values) {
    if (values.empty()) {
        throw EmptyInput("scaler needs at least one value");
    }
    const auto [lo_it, hi_it] = std::minmax_element(values.begin(), values.end());
    if (*hi_it - *lo_it < 1e-12) {
        throw ConstantSeries("scaler range collapsed; series is constant");
    }
    return MinMaxScaler{*lo_it, *hi_it};
}

double persistence_forecast(const TimeSeries& series, std::size_t t) {
    if (t < 1 || t >= series.size()) {
        throw IndexOutOfRange("persistence forecast origin must satisfy 1 <= t < length");
    }
    return series.value_at(t);
}

double corrected_persistence_forecast(const TimeSeries& series, const SeasonalProfile& profile,
                                      std::size_t t) {
    if (t < 1 || t >= series.size()) {
        throw IndexOutOfRange("persistence forecast origin must satisfy 1 <= t < length");
    }
    return series.value_at(t) * profile.coefficient(series.phase_at(t + 1)) /
           profile.coefficient(series.phase_at(t));
}

std::unique_ptr<Predictor> make_persistence() {
    return std::make_unique<PersistencePredictor>();
}

std::unique_ptr<Predictor> make_corrected_persistence(SeasonalProfile profile) {
    return std::make_unique<CorrectedPersistencePredictor>(std::move(profile));
}

SupervisedSet make_supervised(const TimeSeries& series, std::size_t p, bool with_time_index) {
    if (p < 1) {
        throw InvalidLagCount("lag count must be at least 1");
    }
    if (series.size() < p + 1) {
        throw InsufficientData("series too short for supervised pairs");
    }
    const std::size_t rows = series.size() - p;
    const std::size_t cols = p + (with_time_index ? 1 : 0);
    SupervisedSet set;
    set.inputs.resize(static_cast<Eigen::Index>(rows), static_cast<Eigen::Index>(cols));
    set.targets.resize(static_cast<Eigen::Index>(rows));
    for (std::size_t t = p; t < series.size(); ++t) {
        const Eigen::Index r = static_cast<Eigen::Index>(t - p);
        for (std::size_t i = 0; i < p; ++i) {
            set.inputs(r, static_cast<Eigen::Index>(i)) = series.value_at(t - i);
        }
        if (with_time_index) {
            set.inputs(r, static_cast<Eigen::Index>(p)) = time_index(series.phase_at(t + 1));
        }
        set.targets(r) = series.value_at(t + 1);
    }
    return set;
}

MlpPredictor::MlpPredictor(PredictorSpec spec, std::size_t p,
                           std::optional<SeasonalProfile> profile, MinMaxScaler scaler,
                           NetworkConfig config, Parameters params, std::uint64_t seed,
                           double validation_score)
    : spec_(spec),
      name_(spec.name()),
      p_(p),
      profile_(std::move(profile)),
      scaler_(scaler),
      config_(std::move(config)),
      params_(std::move(params)),
      seed_(seed),
      validation_score_(validation_score) {}

double MlpPredictor::forecast_next(std::span<const double> history, int next_phase) const {
    if (history.size() < p_) {
        throw InsufficientContext("history shorter than the tapped delay line");
    }
    std::vector<double> input(static_cast<std::size_t>(config_.n_inputs));
    for (std::size_t i = 0; i < p_; ++i) {
        double v = history[history.size() - 1 - i];
        if (profile_) {
            v /= profile_->coefficient(wrap_phase(next_phase - 1 - static_cast<int>(i)));
        }
        input[i] = scaler_.scale(v);
    }
    if (spec_.time_index) {
        input[p_] = time_index(next_phase);
    }
    double y = scaler_.unscale(forward(config_, params_, input));
    if (profile_) {
        y *= profile_->coefficient(next_phase);
    }
    return y;
}

void MlpPredictor::save(std::ostream& out) const {
    detail::write_u32(out, kPredictorMagic);
    detail::write_u32(out, kPredictorVersion);
    detail::write_u8(out, 2);
    std::uint8_t flags = 0;
    if (spec_.stationarized) flags |= 1u;
    if (spec_.time_index) flags |= 2u;
    if (spec_.mask_tanh_prime_to_time_index) flags |= 4u;
    if (profile_) flags |= 8u;
    detail::write_u8(out, flags);
    detail::write_f64(out, spec_.mix_ratio);
    detail::write_u32(out, static_cast<std::uint32_t>(p_));
    if (profile_) {
        for (double c : profile_->coefficients()) {
            detail::write_f64(out, c);
        }
    }
    detail::write_f64(out, scaler_.lo);
    detail::write_f64(out, scaler_.hi);
    detail::write_u64(out, seed_);
    detail::write_f64(out, validation_score_);
    save_network(out, config_, params_);
}

std::unique_ptr<Predictor> build_mlp_predictor(const TimeSeries& learn, const PredictorSpec& spec,
                                               const TrainConfig& tc, const LagBounds& bounds) {
    spec.validate();
    if (spec.kind != PredictorKind::Mlp) {
        throw InvalidArgument("build_mlp_predictor needs an MLP spec");
    }
    tc.validate();

    std::optional<SeasonalProfile> profile;
    if (spec.stationarized) {
        profile = seasonal_profile(learn);
    }
    const TimeSeries work = profile ? stationarize(learn, *profile) : learn;

    const std::size_t p = select_lag_count(work, bounds.max_p, bounds.min_p, bounds.max_p);
    SupervisedSet sup = make_supervised(work, p, spec.time_index);

    const MinMaxScaler scaler = MinMaxScaler::fit(work.values());
    for (std::size_t i = 0; i < p; ++i) {
        const Eigen::Index col = static_cast<Eigen::Index>(i);
        sup.inputs.col(col) = sup.inputs.col(col).unaryExpr(
            [&scaler](double x) { return scaler.scale(x); });
    }
    sup.targets = sup.targets.unaryExpr([&scaler](double x) { return scaler.scale(x); });

    const Eigen::Index rows = sup.size();
    if (rows < 2) {
        throw InsufficientData("too few supervised pairs for a validation holdout");
    }
    Eigen::Index n_val = static_cast<Eigen::Index>(
        std::llround(tc.validation_fraction * static_cast<double>(rows)));
    n_val = std::clamp<Eigen::Index>(n_val, 1, rows - 1);
    const Eigen::Index n_train = rows - n_val;

    SupervisedSet train_set;
    train_set.inputs = sup.inputs.topRows(n_train);
    train_set.targets = sup.targets.head(n_train);
    SupervisedSet val_set;
    val_set.inputs = sup.inputs.bottomRows(n_val);
    val_set.targets = sup.targets.tail(n_val);

    NetworkConfig config;
    config.n_inputs = static_cast<int>(p) + (spec.time_index ? 1 : 0);
    config.n_hidden = config.n_inputs;
    config.mix_ratio = spec.mix_ratio;
    config.time_index_enabled = spec.time_index;
    if (spec.mask_tanh_prime_to_time_index) {
        std::vector<std::uint8_t> mask(
            static_cast<std::size_t>(config.n_hidden) * static_cast<std::size_t>(config.n_inputs),
            1);
        const int first_nb = config.n_hidden - config.n_non_bijective();
        for (int j = first_nb; j < config.n_hidden; ++j) {
            for (int i = 0; i < config.n_inputs; ++i) {
                mask[static_cast<std::size_t>(j) * config.n_inputs + i] =
                    (i == config.n_inputs - 1) ? 1 : 0;
            }
        }
        config.connection_mask = std::move(mask);
    }
    config.validate();

    TrainOutcome outcome = multi_restart_train(config, train_set, val_set, tc);
    return std::make_unique<MlpPredictor>(spec, p, std::move(profile), scaler, std::move(config),
                                          std::move(outcome.params), outcome.seed,
                                          outcome.validation_nrmse);
}

std::unique_ptr<Predictor> build_predictor(const TimeSeries& learn, const PredictorSpec& spec,
                                           const TrainConfig& tc, const LagBounds& bounds) {
    spec.validate();
    switch (spec.kind) {
        case PredictorKind::Persistence:
            return make_persistence();
        case PredictorKind::CorrectedPersistence:
            return make_corrected_persistence(seasonal_profile(learn));
        case PredictorKind::Mlp:
            return build_mlp_predictor(learn, spec, tc, bounds);
    }
    throw InvalidArgument("unknown predictor kind");
}

std::vector<double> forecast_series(const Predictor& predictor, const TimeSeries& test,
                                    const TimeSeries& warmup_context) {
    const std::size_t context = predictor.context_size();
    if (warmup_context.size() < context) {
        throw InsufficientContext("warm-up context shorter than the predictor needs");
    }
    const int joined = wrap_phase(warmup_context.phase_at(warmup_context.size()) + 1);
    if (joined != test.start_phase()) {
        throw InsufficientContext("warm-up context does not join up with the test span");
    }

    std::vector<double> window(warmup_context.values().end() - static_cast<std::ptrdiff_t>(context),
                               warmup_context.values().end());
    std::vector<double> forecasts;
    forecasts.reserve(test.size());
    for (std::size_t k = 1; k <= test.size(); ++k) {
        forecasts.push_back(predictor.forecast_next(window, test.phase_at(k)));
        window.push_back(test.value_at(k));
        if (window.size() > context) {
            window.erase(window.begin());
        }
    }
    return forecasts;
}

EvaluationResult evaluate_predictor(const Predictor& predictor, const TimeSeries& test,
                                    const TimeSeries& warmup_context) {
    const std::vector<double> forecasts = forecast_series(predictor, test, warmup_context);
    EvaluationResult result;
    result.predictor_name = predictor.name();
    result.nrmse = nrmse(forecasts, test.values());
    result.n_forecasts = forecasts.size();
    return result;
}

void save_predictor(std::ostream& out, const Predictor& predictor) {
    predictor.save(out);
    if (!out) {
        throw IoError("failed to write predictor");
    }
}

std::unique_ptr<Predictor> load_predictor(std::istream& in) {
    if (detail::read_u32(in) != kPredictorMagic) {
        throw ParseError("not a predictor file");
    }
    if (detail::read_u32(in) != kPredictorVersion) {
        throw ParseError("unsupported predictor version");
    }
    const std::uint8_t kind = detail::read_u8(in);
    if (kind == 0) {
        return make_persistence();
    }
    if (kind == 1) {
        std::vector<double> coeffs(kPeriod);
        for (double& c : coeffs) {
            c = detail::read_f64(in);
        }
        return make_corrected_persistence(SeasonalProfile(std::move(coeffs)));
    }
    if (kind != 2) {
        throw ParseError("unknown predictor kind");
    }
    const std::uint8_t flags = detail::read_u8(in);
    PredictorSpec spec;
    spec.kind = PredictorKind::Mlp;
    spec.stationarized = (flags & 1u) != 0;
    spec.time_index = (flags & 2u) != 0;
    spec.mask_tanh_prime_to_time_index = (flags & 4u) != 0;
    spec.mix_ratio = detail::read_f64(in);
    const std::size_t p = detail::read_u32(in);
    std::optional<SeasonalProfile> profile;
    if ((flags & 8u) != 0) {
        std::vector<double> coeffs(kPeriod);
        for (double& c : coeffs) {
            c = detail::read_f64(in);
        }
        profile = SeasonalProfile(std::move(coeffs));
    }
    MinMaxScaler scaler;
    scaler.lo = detail::read_f64(in);
    scaler.hi = detail::read_f64(in);
    const std::uint64_t seed = detail::read_u64(in);
    const double val = detail::read_f64(in);
    auto [config, params] = load_network(in);
    spec.validate();
    return std::make_unique<MlpPredictor>(spec, p, std::move(profile), scaler, std::move(config),
                                          std::move(params), seed, val);
}

} // namespace htf
