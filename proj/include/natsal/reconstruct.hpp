#pragma once

#include <span>
#include <vector>

#include "natsal/grid.hpp"
#include "natsal/rng.hpp"

namespace natsal {

// Discrete gaze samples for one frame. observer_ids is either empty or
// parallel to points.
struct FixationSet {
    std::vector<GridPoint> points;
    std::vector<int> observer_ids;

    std::size_t size() const { return points.size(); }
    bool empty() const { return points.empty(); }
};

struct GoldStandardParams {
    double bandwidth = 1.0; // Gaussian KDE bandwidth, grid cells
    double mix_eps = 0.0;   // weight of the uniform regularizer
};

// n independent draws from the categorical distribution over grid cells.
// Inverse-CDF over the flattened grid; deterministic given the rng state.
FixationSet sample_fixations(const SaliencyGrid& pdf, int n, Rng& rng);

// Reconstruction half of the SR operator: accumulate a delta per fixation,
// blur with the given sigma, normalize.
SaliencyGrid sr_reconstruct(const FixationSet& fixations, double sigma, GridShape shape);

struct Resample {
    FixationSet fixations;
    SaliencyGrid map;
};

// One bootstrap realization: sample n fixations from the measured map and
// reconstruct with the same sigma. The fixation set is kept for
// fixation-based discrepancies.
Resample resample_with_fixations(const SaliencyGrid& measured, int n, double sigma, Rng& rng);
SaliencyGrid resample_once(const SaliencyGrid& measured, int n, double sigma, Rng& rng);

// Gaussian KDE with a uniform regularizer.
SaliencyGrid kde_reconstruct(const FixationSet& fixations, const GoldStandardParams& params, GridShape shape);

// Default candidate grids for fit_gold_standard.
std::span<const double> default_bandwidth_candidates();
std::span<const double> default_eps_candidates();

// Leave-one-observer-out grid search: picks the (bandwidth, eps) pair that
// maximizes the summed log-probability of each observer's fixations under
// the KDE built from the remaining observers. Candidates are visited
// bandwidth-major in the given order and ties keep the earlier pair.
// Zero-density cells score log(1e-12).
GoldStandardParams fit_gold_standard(const std::vector<FixationSet>& per_observer, GridShape shape,
                                     std::span<const double> bandwidths = default_bandwidth_candidates(),
                                     std::span<const double> eps_candidates = default_eps_candidates());

// Splits a frame's fixations into per-observer sets, ordered by observer id.
std::vector<FixationSet> split_by_observer(const FixationSet& fixations);

} // namespace natsal
