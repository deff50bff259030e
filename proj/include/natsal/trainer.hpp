#pragma once

#include <span>
#include <vector>

#include "natsal/frames.hpp"
#include "natsal/nat.hpp"

namespace natsal {

// RMSprop with a per-parameter running mean square.
struct OptimizerState {
    double learning_rate = 1e-3;
    double decay_rho = 0.9;
    double epsilon = 1e-8;
    std::vector<double> mean_square; // sized on first step

    static OptimizerState defaults() { return {}; }
};

// acc <- rho acc + (1 - rho) g^2;  theta <- theta - lr g / (sqrt(acc) + eps).
void rmsprop_step(OptimizerState& state, std::span<double> params, std::span<const double> grads);

enum class LossMode { tt, nat };

const char* loss_mode_name(LossMode mode);

struct ExperimentConfig {
    int frames = 10;
    int videos = 1;
    int observers = 3;
    double sigma = 2.0;
    GridShape shape{64, 64};
    Discrepancy d = Discrepancy::KLD();
    LossMode mode = LossMode::tt;
    int bootstrap_m = 10;
    OptimizerState optimizer = OptimizerState::defaults();
    int max_iterations = 2000;
    int record_interval = 50;
    std::uint64_t seed = 0;
    int threads = 1;
    int eval_fixations = 500;
    double mean_perturbation = 2.0;
    int suite_min_components = 1;
    int suite_max_components = 4;

    void validate() const;
};

struct HistoryRow {
    int iteration = 0;
    double train_loss = 0.0;
    double truth_kld = 0.0;    // mean KLD(truth || predicted); NaN without truths
    double measured_kld = 0.0; // mean KLD(measured || predicted)
};

struct TrainRun {
    std::vector<HistoryRow> history;
    std::vector<PredictedMap> predictors; // one per frame, frame order
    std::vector<double> final_d_values;   // d(predicted, measured) per frame
};

// Full-batch joint optimization of one logit grid per frame. NAT mode
// requires frame.stats cached under config.d.
TrainRun train(const std::vector<Frame>& frames, const ExperimentConfig& config);

struct ComparisonRow {
    int v = 0;
    int n = 0;
    LossMode mode = LossMode::tt;
    double kld_truth = 0.0;
    double cc_truth = 0.0;
    double sim_truth = 0.0;
    double nss_truth = 0.0;
    double auc_truth = 0.0;
};

struct ComparisonReport {
    std::vector<ComparisonRow> rows;
};

// For each (v, n): builds a synthetic dataset, estimates noise stats, trains
// TT and NAT from identical data and initialization, and reports truth-side
// metrics averaged over frames.
ComparisonReport run_comparison(const std::vector<GmmSpec>& suite, std::span<const int> n_values,
                                std::span<const int> v_values, const ExperimentConfig& config);

struct CurveRow {
    int iteration = 0;
    LossMode mode = LossMode::tt;
    double train_loss = 0.0;
    double truth_kld = 0.0;
};

struct OverfitReport {
    std::vector<CurveRow> rows;
    bool tt_overfitting = false; // truth-side minimum early and final >= 5% above it
    bool nat_stable = false;     // final truth-side value within 5% of its minimum
};

// Runs TT and NAT on the same frames and flags the truth-side curves.
OverfitReport overfitting_study(const std::vector<Frame>& frames, const ExperimentConfig& config);

} // namespace natsal
