#include "natsal/trainer.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "natsal/parallel.hpp"

namespace natsal {

void rmsprop_step(OptimizerState& state, std::span<double> params, std::span<const double> grads) {
    if (params.size() != grads.size()) fail(Errc::length_mismatch, "parameter and gradient sizes differ");
    if (state.mean_square.empty()) state.mean_square.assign(params.size(), 0.0);
    if (state.mean_square.size() != params.size())
        fail(Errc::length_mismatch, "optimizer state sized for a different parameter vector");

    const double rho = state.decay_rho;
    for (std::size_t i = 0; i < params.size(); ++i) {
        const double g = grads[i];
        double& acc = state.mean_square[i];
        acc = rho * acc + (1.0 - rho) * g * g;
        params[i] -= state.learning_rate * g / (std::sqrt(acc) + state.epsilon);
    }
}

const char* loss_mode_name(LossMode mode) { return mode == LossMode::tt ? "tt" : "nat"; }

void ExperimentConfig::validate() const {
    if (observers < 1 || videos < 1 || frames < 1) fail(Errc::bad_argument, "counts must be positive");
    if (bootstrap_m < 2) fail(Errc::too_few_realizations, "bootstrap_m must be at least 2");
    if (max_iterations < 1 || record_interval < 1) fail(Errc::bad_argument, "iteration counts must be positive");
    if (optimizer.learning_rate <= 0.0 || optimizer.epsilon <= 0.0 || optimizer.decay_rho <= 0.0 ||
        optimizer.decay_rho >= 1.0)
        fail(Errc::bad_argument, "bad optimizer settings");
}

namespace {

struct FrameWork {
    const Frame* frame = nullptr;
    PredictedMap predicted;
    double d_value = 0.0;
};

double record_eval_kld(const std::vector<FrameWork>& work, bool against_truth) {
    double acc = 0.0;
    int counted = 0;
    for (const FrameWork& fw : work) {
        if (against_truth) {
            if (!fw.frame->truth) continue;
            acc += kld(*fw.frame->truth, fw.predicted.map());
        } else {
            acc += kld(fw.frame->measured, fw.predicted.map());
        }
        ++counted;
    }
    return counted > 0 ? acc / counted : std::numeric_limits<double>::quiet_NaN();
}

} // namespace

TrainRun train(const std::vector<Frame>& frames, const ExperimentConfig& config) {
    config.validate();
    if (frames.empty()) fail(Errc::bad_argument, "no frames to train on");
    const int threads = resolve_threads(config.threads);
    const int cells = config.shape.cells();

    for (const Frame& f : frames) {
        if (!(f.measured.shape() == config.shape)) fail(Errc::shape_mismatch, "frame shape differs from config");
        if (config.mode == LossMode::nat) {
            if (!f.stats) fail(Errc::missing_stats, "NAT mode needs cached stats for frame " + std::to_string(f.frame_id));
            if (!(f.stats->discrepancy == config.d))
                fail(Errc::stats_mismatch, "stats for frame " + std::to_string(f.frame_id) +
                                               " were cached under a different discrepancy");
        }
    }

    // One logit block per frame inside a single parameter vector.
    const std::size_t dim = frames.size() * static_cast<std::size_t>(cells);
    std::vector<double> params(dim, 0.0);
    std::vector<double> grads(dim, 0.0);
    OptimizerState optimizer = config.optimizer;
    optimizer.mean_square.assign(dim, 0.0);

    std::vector<FrameWork> work;
    work.reserve(frames.size());
    for (const Frame& f : frames) work.push_back(FrameWork{&f, PredictedMap::uniform_init(config.shape), 0.0});

    const int n_frames = static_cast<int>(frames.size());
    auto refresh = [&](int i) {
        FrameWork& fw = work[static_cast<std::size_t>(i)];
        const std::size_t off = static_cast<std::size_t>(i) * cells;
        fw.predicted.set_logits(std::vector<double>(params.begin() + off, params.begin() + off + cells));
    };
    auto frame_gradient = [&](int i) {
        FrameWork& fw = work[static_cast<std::size_t>(i)];
        const Frame& f = *fw.frame;
        const NoiseStats* stats = config.mode == LossMode::nat ? &*f.stats : nullptr;
        fw.d_value = eval_discrepancy(config.d, fw.predicted.map(), f.measured, &f.fixations);
        std::vector<double> g = loss_gradient(fw.predicted, f.measured, &f.fixations, stats, config.d);
        std::copy(g.begin(), g.end(), grads.begin() + static_cast<std::size_t>(i) * cells);
    };
    auto total_loss = [&]() {
        // Sequential frame-order sum: reproducible for any thread count.
        double acc = 0.0;
        for (const FrameWork& fw : work)
            acc += config.mode == LossMode::nat ? nat_frame_loss(fw.d_value, *fw.frame->stats) : fw.d_value;
        return acc;
    };

    TrainRun run;
    auto record = [&](int iteration) {
        run.history.push_back(
            HistoryRow{iteration, total_loss(), record_eval_kld(work, true), record_eval_kld(work, false)});
    };

    parallel_for(0, n_frames, threads, [&](int i) {
        refresh(i);
        frame_gradient(i);
    });
    record(0);

    for (int iter = 1; iter <= config.max_iterations; ++iter) {
        rmsprop_step(optimizer, params, grads);
        parallel_for(0, n_frames, threads, [&](int i) {
            refresh(i);
            frame_gradient(i);
        });
        if (iter % config.record_interval == 0 || iter == config.max_iterations) record(iter);
    }

    run.predictors.reserve(work.size());
    run.final_d_values.reserve(work.size());
    for (FrameWork& fw : work) {
        run.final_d_values.push_back(fw.d_value);
        run.predictors.push_back(std::move(fw.predicted));
    }
    return run;
}

ComparisonReport run_comparison(const std::vector<GmmSpec>& suite, std::span<const int> n_values,
                                std::span<const int> v_values, const ExperimentConfig& config) {
    config.validate();
    ComparisonReport report;
    std::uint64_t combo = 0;
    for (int v : v_values) {
        if (v < 1) fail(Errc::bad_argument, "video count must be positive");
        if (static_cast<std::size_t>(v) > suite.size()) fail(Errc::bad_argument, "truth suite smaller than v");
        for (int n : n_values) {
            if (n < 1) fail(Errc::bad_argument, "observer count must be positive");
            const std::uint64_t data_seed = mix64(config.seed, combo++);

            DatasetParams params{config.frames, v, n, config.sigma, config.shape, config.mean_perturbation};
            std::vector<Frame> frames = make_synthetic_frames(suite, params, data_seed);
            attach_noise_stats(frames, config.d, config.bootstrap_m, config.sigma, data_seed,
                               resolve_threads(config.threads));

            for (LossMode mode : {LossMode::tt, LossMode::nat}) {
                ExperimentConfig run_config = config;
                run_config.mode = mode;
                run_config.videos = v;
                run_config.observers = n;
                TrainRun run = train(frames, run_config);

                ComparisonRow row;
                row.v = v;
                row.n = n;
                row.mode = mode;
                for (std::size_t i = 0; i < frames.size(); ++i) {
                    const SaliencyGrid& truth = *frames[i].truth;
                    const SaliencyGrid& predicted = run.predictors[i].map();
                    Rng eval_rng = Rng::child(mix64(config.seed, kStreamEval),
                                              static_cast<std::uint64_t>(frames[i].frame_id));
                    const FixationSet eval_fix = sample_fixations(truth, config.eval_fixations, eval_rng);
                    row.kld_truth += kld(truth, predicted);
                    row.cc_truth += cc(predicted, truth);
                    row.sim_truth += sim(predicted, truth);
                    row.nss_truth += nss(predicted, eval_fix);
                    row.auc_truth += auc_judd(predicted, eval_fix);
                }
                const double m = static_cast<double>(frames.size());
                row.kld_truth /= m;
                row.cc_truth /= m;
                row.sim_truth /= m;
                row.nss_truth /= m;
                row.auc_truth /= m;
                report.rows.push_back(row);
            }
        }
    }
    return report;
}

namespace {

struct CurveFlags {
    double min_value = 0.0;
    int min_index = 0;
    double final_value = 0.0;
};

CurveFlags curve_flags(const std::vector<HistoryRow>& history) {
    CurveFlags flags;
    flags.min_value = history[0].truth_kld;
    for (std::size_t i = 0; i < history.size(); ++i) {
        if (history[i].truth_kld < flags.min_value) {
            flags.min_value = history[i].truth_kld;
            flags.min_index = static_cast<int>(i);
        }
    }
    flags.final_value = history.back().truth_kld;
    return flags;
}

} // namespace

OverfitReport overfitting_study(const std::vector<Frame>& frames, const ExperimentConfig& config) {
    for (const Frame& f : frames)
        if (!f.truth) fail(Errc::bad_argument, "overfitting study needs synthetic truths");

    OverfitReport report;
    for (LossMode mode : {LossMode::tt, LossMode::nat}) {
        ExperimentConfig run_config = config;
        run_config.mode = mode;
        TrainRun run = train(frames, run_config);
        for (const HistoryRow& row : run.history)
            report.rows.push_back(CurveRow{row.iteration, mode, row.train_loss, row.truth_kld});

        const CurveFlags flags = curve_flags(run.history);
        const double last_iteration = static_cast<double>(run.history.back().iteration);
        const double min_iteration = static_cast<double>(run.history[static_cast<std::size_t>(flags.min_index)].iteration);
        if (mode == LossMode::tt) {
            report.tt_overfitting =
                min_iteration < 0.8 * last_iteration && flags.final_value >= 1.05 * flags.min_value;
        } else {
            report.nat_stable = flags.final_value <= 1.05 * flags.min_value;
        }
    }
    return report;
}

} // namespace natsal
