#include "natsal/frames.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>

#include "natsal/parallel.hpp"

namespace natsal {

std::map<int, FixationSet> group_fixations(std::span<const FixationRecord> records) {
    std::map<int, FixationSet> by_frame;
    for (const FixationRecord& r : records) {
        FixationSet& f = by_frame[r.frame_id];
        f.points.push_back(GridPoint{r.col, r.row});
        f.observer_ids.push_back(r.observer_id);
    }
    return by_frame;
}

std::string truth_filename(int frame_id) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "truth_%04d.sgrid", frame_id);
    return buf;
}

std::string measured_filename(int frame_id) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "measured_%04d.sgrid", frame_id);
    return buf;
}

std::string predicted_filename(int frame_id) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "predicted_%04d.sgrid", frame_id);
    return buf;
}

std::vector<Frame> assemble(const std::string& fixation_csv, const AssembleOptions& options) {
    const std::vector<FixationRecord> records = read_fixcsv(fixation_csv, options.shape);
    if (records.empty()) fail(Errc::parse_error, fixation_csv + ": no fixation rows");
    std::map<int, FixationSet> by_frame = group_fixations(records);

    std::map<int, NoiseStats> stats_by_frame;
    if (options.stats_csv) {
        for (const NoiseStatsRecord& r : read_nstats(*options.stats_csv)) {
            if (!by_frame.count(r.frame_id))
                fail(Errc::id_mismatch,
                     "stats row for frame " + std::to_string(r.frame_id) + " has no fixations");
            stats_by_frame.emplace(r.frame_id, r.stats);
        }
    }
    for (const auto& [frame_id, grid] : options.measured_override)
        if (!by_frame.count(frame_id))
            fail(Errc::id_mismatch, "measured map for frame " + std::to_string(frame_id) + " has no fixations");

    std::vector<Frame> frames;
    frames.reserve(by_frame.size());
    for (auto& [frame_id, fixations] : by_frame) {
        Frame frame;
        frame.frame_id = frame_id;
        frame.group_id = frame_id;
        frame.measured = sr_reconstruct(fixations, options.sigma, options.shape);
        frame.fixations = std::move(fixations);

        if (options.truth_dir) {
            const std::filesystem::path path = std::filesystem::path(*options.truth_dir) / truth_filename(frame_id);
            if (!std::filesystem::exists(path))
                fail(Errc::id_mismatch, "no truth file for frame " + std::to_string(frame_id));
            frame.truth = read_sgrid(path.string());
            if (!(frame.truth->shape() == options.shape))
                fail(Errc::shape_mismatch, "truth grid shape differs from the declared shape");
        }

        if (auto it = stats_by_frame.find(frame_id); it != stats_by_frame.end()) {
            if (it->second.observer_count != static_cast<int>(frame.fixations.size()))
                fail(Errc::invariant_violation,
                     "cached stats observer count differs from the frame's fixation count");
            frame.stats = it->second;
        }

        if (auto it = options.measured_override.find(frame_id); it != options.measured_override.end()) {
            if (!(it->second.shape() == options.shape))
                fail(Errc::shape_mismatch, "measured override shape differs from the declared shape");
            for (std::size_t i = 0; i < frame.measured.values().size(); ++i)
                if (std::abs(it->second[i] - frame.measured[i]) > 1e-9)
                    fail(Errc::invariant_violation,
                         "stored measured map differs from the fixation re-derivation for frame " +
                             std::to_string(frame_id));
        }

        frames.push_back(std::move(frame));
    }
    return frames; // std::map iteration already sorts by frame_id
}

std::vector<Frame> make_synthetic_frames(const std::vector<GmmSpec>& group_bases, const DatasetParams& params,
                                         std::uint64_t seed) {
    if (params.frames < 1 || params.videos < 1 || params.observers < 1)
        fail(Errc::bad_argument, "frame, video, and observer counts must be positive");
    if (static_cast<int>(group_bases.size()) < params.videos)
        fail(Errc::bad_argument, "need one base truth spec per video");

    std::vector<Frame> frames;
    frames.reserve(static_cast<std::size_t>(params.frames));
    const int per_group = (params.frames + params.videos - 1) / params.videos;
    for (int i = 0; i < params.frames; ++i) {
        const int group = std::min(i / per_group, params.videos - 1);

        Rng perturb_rng = Rng::child(mix64(seed, kStreamPerturb), static_cast<std::uint64_t>(i));
        const GmmSpec spec =
            perturb_means(group_bases[static_cast<std::size_t>(group)], params.mean_perturbation, params.shape,
                          perturb_rng);
        SaliencyGrid truth = gmm_truth(spec, params.shape);

        Rng fix_rng = Rng::child(mix64(seed, kStreamFixations), static_cast<std::uint64_t>(i));
        FixationSet fixations = sample_fixations(truth, params.observers, fix_rng);
        fixations.observer_ids.resize(fixations.points.size());
        for (std::size_t o = 0; o < fixations.observer_ids.size(); ++o)
            fixations.observer_ids[o] = static_cast<int>(o);

        Frame frame;
        frame.frame_id = i;
        frame.group_id = group;
        frame.measured = sr_reconstruct(fixations, params.sigma, params.shape);
        frame.fixations = std::move(fixations);
        frame.truth = std::move(truth);
        frames.push_back(std::move(frame));
    }
    return frames;
}

void attach_noise_stats(std::vector<Frame>& frames, const Discrepancy& d, int m, double sigma, std::uint64_t seed,
                        int threads) {
    parallel_for(0, static_cast<int>(frames.size()), threads, [&](int i) {
        Frame& frame = frames[static_cast<std::size_t>(i)];
        Rng rng = Rng::child(mix64(seed, kStreamStats), static_cast<std::uint64_t>(frame.frame_id));
        frame.stats = estimate_noise_stats(frame.measured, static_cast<int>(frame.fixations.size()), sigma, d, m, rng);
    });
}

} // namespace natsal
