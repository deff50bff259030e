#pragma once

#include <span>
#include <vector>

#include "natsal/metrics.hpp"

namespace natsal {

// Per-frame bootstrap statistics of the discrepancy between a map and its
// sample-and-reconstruct realizations.
struct NoiseStats {
    double mean = 0.0;
    double variance = 0.0;
    int realizations = 0;   // bootstrap sample count m
    int observer_count = 0; // fixations per realization n
    Discrepancy discrepancy;
};

// Draws m realizations x'' = SR(measured; n) and returns the sample mean and
// unbiased variance of d(measured, x''). The realization map fills the
// reference slot of the discrepancy (it is the sampled, data-like side) and
// its own fixations serve as the fixation argument for NSS-bearing d.
NoiseStats estimate_noise_stats(const SaliencyGrid& measured, int n, double sigma, const Discrepancy& d, int m,
                                Rng& rng);

// Same computation against a known ground-truth map; validation only.
NoiseStats estimate_ideal_stats(const SaliencyGrid& truth, int n, double sigma, const Discrepancy& d, int m,
                                Rng& rng);

struct MapeRow {
    int n = 0;
    double mape_mean = 0.0;     // |approx - ideal| / ideal for the mean, averaged over truths
    double mape_variance = 0.0; // same for the variance
    double mean_skewness = 0.0; // skewness of the ideal-side d samples, averaged over truths
};

// How well the bootstrap statistics (from a single measured map) track the
// ideal statistics (from the truth), per observer count.
std::vector<MapeRow> approximation_error_study(const std::vector<SaliencyGrid>& truths, std::span<const int> n_values,
                                               double sigma, const Discrepancy& d, int m, Rng& rng);

} // namespace natsal
