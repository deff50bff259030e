#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "natsal/io.hpp"
#include "natsal/noise_stats.hpp"
#include "natsal/synth.hpp"

namespace natsal {

// Per-frame association of truth (when synthetic), fixations, the measured
// map re-derived from them, and cached noise statistics.
struct Frame {
    int frame_id = 0;
    int group_id = 0; // emulated video
    std::optional<SaliencyGrid> truth;
    FixationSet fixations;
    SaliencyGrid measured;
    std::optional<NoiseStats> stats;
};

std::map<int, FixationSet> group_fixations(std::span<const FixationRecord> records);

struct AssembleOptions {
    GridShape shape;
    double sigma = 2.0;
    // Directory containing truth_<frame_id %04d>.sgrid files.
    std::optional<std::string> truth_dir;
    std::optional<std::string> stats_csv;
    // When given, each frame's measured map must match the re-derivation
    // within 1e-9 per cell.
    std::map<int, SaliencyGrid> measured_override;
};

// Builds frames from a fixation CSV, sorted by frame_id. Measured maps are
// re-derived from the fixations; stats and truths are matched by frame_id.
std::vector<Frame> assemble(const std::string& fixation_csv, const AssembleOptions& options);

std::string truth_filename(int frame_id);
std::string measured_filename(int frame_id);
std::string predicted_filename(int frame_id);

struct DatasetParams {
    int frames = 1;
    int videos = 1;
    int observers = 1; // fixations per frame, one per synthetic observer
    double sigma = 2.0;
    GridShape shape{64, 64};
    double mean_perturbation = 2.0; // cells, per frame within a video
};

// Synthetic dataset glue: frames are split into contiguous groups of
// (nearly) equal size, one base truth spec per group, per-frame perturbed.
std::vector<Frame> make_synthetic_frames(const std::vector<GmmSpec>& group_bases, const DatasetParams& params,
                                         std::uint64_t seed);

// Computes and caches bootstrap stats for every frame, in parallel streams
// derived per frame_id.
void attach_noise_stats(std::vector<Frame>& frames, const Discrepancy& d, int m, double sigma, std::uint64_t seed,
                        int threads);

} // namespace natsal
