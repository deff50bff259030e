#include "natsal/reconstruct.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <numeric>

namespace natsal {

namespace {

void check_points_in_shape(const FixationSet& fixations, GridShape shape) {
    for (const GridPoint& p : fixations.points)
        if (p.col < 0 || p.col >= shape.width || p.row < 0 || p.row >= shape.height)
            fail(Errc::bad_argument, "fixation outside the target grid");
}

} // namespace

FixationSet sample_fixations(const SaliencyGrid& pdf, int n, Rng& rng) {
    if (n < 1) fail(Errc::zero_count, "fixation count must be at least 1");

    const std::vector<double>& v = pdf.values();
    std::vector<double> cdf(v.size());
    double acc = 0.0;
    int last_nonzero = -1;
    for (std::size_t i = 0; i < v.size(); ++i) {
        acc += v[i];
        cdf[i] = acc;
        if (v[i] > 0.0) last_nonzero = static_cast<int>(i);
    }
    const double total = acc;

    FixationSet out;
    out.points.reserve(static_cast<std::size_t>(n));
    const int w = pdf.width();
    for (int i = 0; i < n; ++i) {
        double u = rng.uniform01() * total;
        auto it = std::upper_bound(cdf.begin(), cdf.end(), u);
        int flat = it == cdf.end() ? last_nonzero : static_cast<int>(it - cdf.begin());
        out.points.push_back(GridPoint{flat % w, flat / w});
    }
    return out;
}

SaliencyGrid sr_reconstruct(const FixationSet& fixations, double sigma, GridShape shape) {
    if (fixations.empty()) fail(Errc::empty_fixations, "cannot reconstruct from an empty fixation set");
    check_points_in_shape(fixations, shape);

    std::vector<double> hist(static_cast<std::size_t>(shape.cells()), 0.0);
    for (const GridPoint& p : fixations.points)
        hist[static_cast<std::size_t>(p.row) * shape.width + p.col] += 1.0;
    return normalize(shape, blur_raw(shape, hist, sigma));
}

Resample resample_with_fixations(const SaliencyGrid& measured, int n, double sigma, Rng& rng) {
    FixationSet fix = sample_fixations(measured, n, rng);
    SaliencyGrid map = sr_reconstruct(fix, sigma, measured.shape());
    return Resample{std::move(fix), std::move(map)};
}

SaliencyGrid resample_once(const SaliencyGrid& measured, int n, double sigma, Rng& rng) {
    return resample_with_fixations(measured, n, sigma, rng).map;
}

SaliencyGrid kde_reconstruct(const FixationSet& fixations, const GoldStandardParams& params, GridShape shape) {
    if (params.bandwidth <= 0.0) fail(Errc::bad_argument, "KDE bandwidth must be positive");
    return mix_uniform(sr_reconstruct(fixations, params.bandwidth, shape), params.mix_eps);
}

std::span<const double> default_bandwidth_candidates() {
    static const double k[] = {1.0, 2.0, 4.0, 8.0, 16.0};
    return k;
}

std::span<const double> default_eps_candidates() {
    static const double k[] = {0.0, 0.01, 0.05, 0.1, 0.2};
    return k;
}

GoldStandardParams fit_gold_standard(const std::vector<FixationSet>& per_observer, GridShape shape,
                                     std::span<const double> bandwidths, std::span<const double> eps_candidates) {
    if (per_observer.size() < 2) fail(Errc::too_few_observers, "leave-one-out fit needs at least 2 observers");
    for (const FixationSet& f : per_observer) {
        if (f.empty()) fail(Errc::too_few_observers, "every observer needs at least 1 fixation");
        check_points_in_shape(f, shape);
    }
    if (bandwidths.empty() || eps_candidates.empty()) fail(Errc::bad_argument, "empty candidate list");

    const std::size_t cells = static_cast<std::size_t>(shape.cells());
    const double log_floor = std::log(1e-12);
    const double uniform_density = 1.0 / shape.cells();

    std::vector<double> full_hist(cells, 0.0);
    std::vector<std::vector<double>> observer_hists(per_observer.size(), std::vector<double>(cells, 0.0));
    for (std::size_t o = 0; o < per_observer.size(); ++o) {
        for (const GridPoint& p : per_observer[o].points) {
            std::size_t flat = static_cast<std::size_t>(p.row) * shape.width + p.col;
            observer_hists[o][flat] += 1.0;
            full_hist[flat] += 1.0;
        }
    }

    GoldStandardParams best{};
    double best_score = -std::numeric_limits<double>::infinity();
    bool have_best = false;

    for (double bw : bandwidths) {
        // Blur is linear, so the leave-one-out density is the blurred full
        // histogram minus the blurred histogram of the held-out observer.
        std::vector<double> full_blur = blur_raw(shape, full_hist, bw);
        const double full_mass = std::accumulate(full_blur.begin(), full_blur.end(), 0.0);

        std::vector<double> loo_scores_by_eps(eps_candidates.size(), 0.0);
        for (std::size_t o = 0; o < per_observer.size(); ++o) {
            std::vector<double> obs_blur = blur_raw(shape, observer_hists[o], bw);
            const double obs_mass = std::accumulate(obs_blur.begin(), obs_blur.end(), 0.0);
            const double loo_mass = full_mass - obs_mass;

            for (std::size_t e = 0; e < eps_candidates.size(); ++e) {
                const double eps = eps_candidates[e];
                double score = 0.0;
                for (const GridPoint& p : per_observer[o].points) {
                    std::size_t flat = static_cast<std::size_t>(p.row) * shape.width + p.col;
                    double density = (full_blur[flat] - obs_blur[flat]) / loo_mass;
                    density = (1.0 - eps) * density + eps * uniform_density;
                    score += density > 1e-12 ? std::log(density) : log_floor;
                }
                loo_scores_by_eps[e] += score;
            }
        }

        for (std::size_t e = 0; e < eps_candidates.size(); ++e) {
            if (!have_best || loo_scores_by_eps[e] > best_score) {
                best_score = loo_scores_by_eps[e];
                best = GoldStandardParams{bw, eps_candidates[e]};
                have_best = true;
            }
        }
    }
    return best;
}

std::vector<FixationSet> split_by_observer(const FixationSet& fixations) {
    if (fixations.observer_ids.size() != fixations.points.size())
        fail(Errc::bad_argument, "fixation set has no per-point observer ids");
    std::map<int, FixationSet> by_id;
    for (std::size_t i = 0; i < fixations.points.size(); ++i) {
        FixationSet& f = by_id[fixations.observer_ids[i]];
        f.points.push_back(fixations.points[i]);
        f.observer_ids.push_back(fixations.observer_ids[i]);
    }
    std::vector<FixationSet> out;
    out.reserve(by_id.size());
    for (auto& [id, f] : by_id) out.push_back(std::move(f));
    return out;
}

} // namespace natsal
