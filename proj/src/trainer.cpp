#include "htf/trainer.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <ostream>
#include <string>

namespace htf {

namespace {

constexpr double kMuFloor = 1e-20;
constexpr double kSseImprovementFloor = 1e-12;

double sse_of(const NetworkConfig& config, const Parameters& params, const SupervisedSet& data) {
    const Eigen::VectorXd r = data.targets - forward_batch(config, params, data.inputs);
    return r.squaredNorm();
}

double validation_score(const NetworkConfig& config, const Parameters& params,
                        const SupervisedSet& val) {
    const Eigen::VectorXd pred = forward_batch(config, params, val.inputs);
    const double rmse = std::sqrt((pred - val.targets).squaredNorm() /
                                  static_cast<double>(val.size()));
    const double mean = std::abs(val.targets.mean());
    return mean < 1e-9 ? rmse : rmse / mean;
}

void check_set(const NetworkConfig& config, const SupervisedSet& data, const char* which) {
    if (data.size() == 0) {
        throw EmptyDataset(std::string(which) + " set is empty");
    }
    if (data.inputs.rows() != data.targets.size()) {
        throw DimensionMismatch(std::string(which) + " inputs and targets disagree in length");
    }
    if (data.inputs.cols() != config.n_inputs) {
        throw DimensionMismatch(std::string(which) + " input width does not match the network");
    }
}

} // namespace

void TrainConfig::validate() const {
    if (max_epochs < 0) throw InvalidArgument("max_epochs must be nonnegative");
    if (max_fail < 1) throw InvalidArgument("max_fail must be at least 1");
    if (n_restarts < 1) throw InvalidArgument("n_restarts must be at least 1");
    if (!(validation_fraction > 0.0 && validation_fraction < 0.5)) {
        throw InvalidArgument("validation_fraction must lie in (0, 0.5)");
    }
    if (!(mu_init > 0.0) || !(mu_increase > 0.0) || !(mu_decrease > 0.0) || !(mu_max > 0.0)) {
        throw InvalidArgument("mu parameters must be positive");
    }
}

const char* to_string(StopReason reason) {
    switch (reason) {
        case StopReason::MaxEpochs: return "max_epochs";
        case StopReason::EarlyStop: return "early_stop";
        case StopReason::MuCeiling: return "mu_ceiling";
        case StopReason::Converged: return "converged";
    }
    return "unknown";
}

Eigen::VectorXd lm_step(const Eigen::MatrixXd& jacobian, const Eigen::VectorXd& residuals,
                        double mu) {
    if (!(mu > 0.0)) {
        throw InvalidArgument("mu must be positive");
    }
    if (jacobian.rows() != residuals.size()) {
        throw DimensionMismatch("jacobian rows must match the residual count");
    }
    const Eigen::Index q = jacobian.cols();
    Eigen::MatrixXd normal = Eigen::MatrixXd::Zero(q, q);
    normal.selfadjointView<Eigen::Lower>().rankUpdate(jacobian.transpose());
    normal.diagonal().array() += mu;

    const Eigen::LDLT<Eigen::MatrixXd, Eigen::Lower> ldlt(normal);
    if (ldlt.info() != Eigen::Success) {
        throw SingularSystem("damped normal equations could not be factorized");
    }
    Eigen::VectorXd delta = ldlt.solve(jacobian.transpose() * residuals);
    if (!delta.allFinite()) {
        throw SingularSystem("damped normal equations produced a non-finite step");
    }
    return delta;
}

TrainOutcome train(const NetworkConfig& config, const SupervisedSet& train_data,
                   const SupervisedSet& val_data, const TrainConfig& tc, std::uint64_t seed) {
    config.validate();
    tc.validate();
    check_set(config, train_data, "training");
    check_set(config, val_data, "validation");

    Parameters params = init_weights(config, seed);
    double sse = sse_of(config, params, train_data);
    double mu = tc.mu_init;

    TrainOutcome out;
    out.seed = seed;
    out.validation_nrmse = validation_score(config, params, val_data);
    out.params = params;
    out.train_sse = sse;
    out.history.push_back(EpochRecord{0, sse, mu, out.validation_nrmse, 0});

    int fail_count = 0;
    int epoch = 0;
    out.stop_reason = StopReason::MaxEpochs;

    while (epoch < tc.max_epochs) {
        const Eigen::MatrixXd jac = jacobian(config, params, train_data.inputs);
        const Eigen::VectorXd residuals =
            train_data.targets - forward_batch(config, params, train_data.inputs);

        // Retry the damped step with growing mu until the SSE decreases.
        bool accepted = false;
        Parameters candidate;
        double candidate_sse = 0.0;
        while (!accepted) {
            bool solvable = true;
            try {
                const Eigen::VectorXd delta = lm_step(jac, residuals, mu);
                candidate = Parameters::from_flat(config, params.to_flat() + delta);
                candidate_sse = sse_of(config, candidate, train_data);
            } catch (const SingularSystem&) {
                solvable = false;
            }
            if (solvable && candidate_sse < sse) {
                accepted = true;
            } else {
                mu *= tc.mu_increase;
                if (mu > tc.mu_max) {
                    out.stop_reason = StopReason::MuCeiling;
                    return out;
                }
            }
        }

        const double improvement = sse - candidate_sse;
        params = std::move(candidate);
        sse = candidate_sse;
        mu = std::max(mu * tc.mu_decrease, kMuFloor);
        ++epoch;
        out.epochs_run = epoch;

        // A fail is a validation score strictly above the best seen so far;
        // the counter resets on any non-fail epoch.
        const double val = validation_score(config, params, val_data);
        if (val > out.validation_nrmse) {
            ++fail_count;
        } else {
            fail_count = 0;
            if (val < out.validation_nrmse) {
                out.validation_nrmse = val;
                out.params = params;
                out.train_sse = sse;
            }
        }
        out.history.push_back(EpochRecord{epoch, sse, mu, val, fail_count});

        if (fail_count >= tc.max_fail) {
            out.stop_reason = StopReason::EarlyStop;
            return out;
        }
        if (improvement < kSseImprovementFloor) {
            out.stop_reason = StopReason::Converged;
            return out;
        }
    }
    out.stop_reason = StopReason::MaxEpochs;
    return out;
}

TrainOutcome multi_restart_train(const NetworkConfig& config, const SupervisedSet& train_data,
                                 const SupervisedSet& val_data, const TrainConfig& tc) {
    tc.validate();
    TrainOutcome best;
    bool have_best = false;
    for (int k = 0; k < tc.n_restarts; ++k) {
        TrainOutcome outcome = train(config, train_data, val_data, tc, tc.base_seed + k);
        if (!have_best || outcome.validation_nrmse < best.validation_nrmse) {
            best = std::move(outcome);
            have_best = true;
        }
    }
    return best;
}

void write_history(std::ostream& out, const std::vector<EpochRecord>& history) {
    for (const EpochRecord& rec : history) {
        out << rec.epoch << '\t' << rec.sse << '\t' << rec.mu << '\t' << rec.val_nrmse << '\t'
            << rec.fail_count << '\n';
    }
}

} // namespace htf
