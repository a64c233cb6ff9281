#pragma once

#include <cstdint>
#include <iosfwd>
#include <vector>

#include <Eigen/Dense>

#include "htf/errors.hpp"
#include "htf/network.hpp"

namespace htf {

/// Levenberg-Marquardt training knobs. Defaults follow the common LM
/// schedule; max_fail and n_restarts carry the experimental protocol
/// (3 consecutive validation fails, best of six random restarts).
struct TrainConfig {
    int max_epochs = 1000;
    double mu_init = 1e-3;
    double mu_increase = 10.0;
    double mu_decrease = 0.1;
    double mu_max = 1e10;
    int max_fail = 3;
    int n_restarts = 6;
    double validation_fraction = 0.15;
    std::uint64_t base_seed = 0;

    /// @throws InvalidArgument on out-of-range fields
    void validate() const;
};

/// Supervised batch: one input row per sample plus a scalar target each.
struct SupervisedSet {
    Eigen::MatrixXd inputs;
    Eigen::VectorXd targets;

    Eigen::Index size() const noexcept { return targets.size(); }
};

enum class StopReason { MaxEpochs, EarlyStop, MuCeiling, Converged };

const char* to_string(StopReason reason);

/// One accepted epoch in the training history. Epoch 0 records the initial
/// state before any update.
struct EpochRecord {
    int epoch = 0;
    double sse = 0.0;
    double mu = 0.0;
    double val_nrmse = 0.0;
    int fail_count = 0;
};

struct TrainOutcome {
    Parameters params;          ///< the best-validation snapshot, not the last epoch
    double train_sse = 0.0;     ///< training SSE of the returned parameters
    double validation_nrmse = 0.0;
    int epochs_run = 0;
    StopReason stop_reason = StopReason::MaxEpochs;
    std::uint64_t seed = 0;
    std::vector<EpochRecord> history;
};

/// One damped Gauss-Newton update: solves (J'J + mu I) delta = J'r for the
/// step to add to the flat parameter vector, where r = targets - outputs.
/// @throws SingularSystem when the factorization fails (caller raises mu)
Eigen::VectorXd lm_step(const Eigen::MatrixXd& jacobian, const Eigen::VectorXd& residuals,
                        double mu);

/// Levenberg-Marquardt training of one network from a seeded random start.
///
/// Each epoch recomputes the Jacobian, then retries the damped step with
/// growing mu until the training SSE decreases. After every accepted epoch
/// the validation score is evaluated; a score above the best seen is a fail,
/// and max_fail consecutive fails stop the run. The returned parameters are
/// the snapshot with the best validation score.
///
/// The validation score is nRMSE against |mean| of the validation targets,
/// falling back to plain RMSE when that mean is degenerate (the two orderings
/// agree, the fallback only keeps near-zero-mean target sets well defined).
/// @throws EmptyDataset, DimensionMismatch
TrainOutcome train(const NetworkConfig& config, const SupervisedSet& train_data,
                   const SupervisedSet& val_data, const TrainConfig& tc, std::uint64_t seed);

/// Best of tc.n_restarts independent trainings with seeds
/// tc.base_seed + 0 ... + n_restarts - 1; ties go to the lowest seed offset.
TrainOutcome multi_restart_train(const NetworkConfig& config, const SupervisedSet& train_data,
                                 const SupervisedSet& val_data, const TrainConfig& tc);

/// Tab-separated history log: epoch, SSE, mu, validation score, fail counter.
void write_history(std::ostream& out, const std::vector<EpochRecord>& history);

} // namespace htf
