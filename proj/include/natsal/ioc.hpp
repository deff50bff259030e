#pragma once

#include <vector>

#include "natsal/reconstruct.hpp"

namespace natsal {

// Inter-observer consistency: NSS of a held-out observer's fixations under
// the map reconstructed from n other observers, as a function of n.
struct IocCurve {
    std::vector<int> n_values;
    std::vector<double> mean_nss;
    std::vector<double> std_nss;
    std::vector<int> skipped; // degenerate constant-map realizations per point
    int realizations = 0;
};

// per_observer is canonically ordered (sort by observer id) before subset
// draws so the curve is exactly reproducible under relabeling.
IocCurve ioc_curve(const std::vector<FixationSet>& per_observer, GridShape shape, double sigma, int realizations,
                   Rng& rng);

// Absolute slope of the last segment of the mean curve, per unit observer.
double ioc_convergence_gradient(const IocCurve& curve);

// Pointwise average over every stride-th frame, restricted to the n range
// available in all sampled frames.
IocCurve dataset_ioc(const std::vector<std::vector<FixationSet>>& frames, int stride, GridShape shape, double sigma,
                     int realizations, std::uint64_t seed);

} // namespace natsal
