#include "natsal/noise_stats.hpp"

#include <cmath>

namespace natsal {

namespace {

struct SampleMoments {
    double mean = 0.0;
    double variance = 0.0; // unbiased, m-1 denominator
    double skewness = 0.0;
};

SampleMoments moments(const std::vector<double>& samples) {
    const double m = static_cast<double>(samples.size());
    SampleMoments out;
    bool constant = true;
    for (double x : samples) constant = constant && x == samples[0];
    if (constant) {
        out.mean = samples[0];
        return out; // identical draws: zero variance by definition
    }
    for (double x : samples) out.mean += x;
    out.mean /= m;
    double m2 = 0.0, m3 = 0.0;
    for (double x : samples) {
        const double d = x - out.mean;
        m2 += d * d;
        m3 += d * d * d;
    }
    out.variance = m2 / (m - 1.0);
    const double pop_var = m2 / m;
    out.skewness = pop_var > 0.0 ? (m3 / m) / std::pow(pop_var, 1.5) : 0.0;
    return out;
}

NoiseStats bootstrap_stats(const SaliencyGrid& base, int n, double sigma, const Discrepancy& d, int m, Rng& rng) {
    if (n < 1) fail(Errc::zero_count, "observer count must be at least 1");
    if (m < 2) fail(Errc::too_few_realizations, "bootstrap needs at least 2 realizations");

    std::vector<double> samples;
    samples.reserve(static_cast<std::size_t>(m));
    for (int i = 0; i < m; ++i) {
        Resample r = resample_with_fixations(base, n, sigma, rng);
        samples.push_back(eval_discrepancy(d, base, r.map, &r.fixations));
    }
    const SampleMoments mom = moments(samples);
    return NoiseStats{mom.mean, mom.variance < 0.0 ? 0.0 : mom.variance, m, n, d};
}

} // namespace

NoiseStats estimate_noise_stats(const SaliencyGrid& measured, int n, double sigma, const Discrepancy& d, int m,
                                Rng& rng) {
    return bootstrap_stats(measured, n, sigma, d, m, rng);
}

NoiseStats estimate_ideal_stats(const SaliencyGrid& truth, int n, double sigma, const Discrepancy& d, int m,
                                Rng& rng) {
    return bootstrap_stats(truth, n, sigma, d, m, rng);
}

std::vector<MapeRow> approximation_error_study(const std::vector<SaliencyGrid>& truths, std::span<const int> n_values,
                                               double sigma, const Discrepancy& d, int m, Rng& rng) {
    for (const SaliencyGrid& t : truths)
        if (t.cells() < 1) fail(Errc::bad_argument, "invalid truth grid");
    if (truths.empty()) fail(Errc::bad_argument, "no truth grids given");

    std::vector<MapeRow> table;
    table.reserve(n_values.size());
    for (int n : n_values) {
        MapeRow row;
        row.n = n;
        for (std::size_t t = 0; t < truths.size(); ++t) {
            // Decorrelated substreams per (truth, n) for the three stages.
            const std::uint64_t tag = mix64(static_cast<std::uint64_t>(n), t);
            Rng ideal_rng = Rng::child(rng.u64(), tag);
            Rng draw_rng = Rng::child(rng.u64(), tag);
            Rng approx_rng = Rng::child(rng.u64(), tag);

            // Ideal-side skewness is worth reporting alongside, since the
            // Gaussian interpretation of d is only approximate.
            std::vector<double> ideal_samples;
            ideal_samples.reserve(static_cast<std::size_t>(m));
            for (int i = 0; i < m; ++i) {
                Resample r = resample_with_fixations(truths[t], n, sigma, ideal_rng);
                ideal_samples.push_back(eval_discrepancy(d, truths[t], r.map, &r.fixations));
            }
            const SampleMoments ideal = moments(ideal_samples);

            const SaliencyGrid measured = resample_once(truths[t], n, sigma, draw_rng);
            const NoiseStats approx = estimate_noise_stats(measured, n, sigma, d, m, approx_rng);

            row.mape_mean += ideal.mean != 0.0 ? std::abs(approx.mean - ideal.mean) / std::abs(ideal.mean) : 0.0;
            row.mape_variance +=
                ideal.variance != 0.0 ? std::abs(approx.variance - ideal.variance) / ideal.variance : 0.0;
            row.mean_skewness += ideal.skewness;
        }
        row.mape_mean /= static_cast<double>(truths.size());
        row.mape_variance /= static_cast<double>(truths.size());
        row.mean_skewness /= static_cast<double>(truths.size());
        table.push_back(row);
    }
    return table;
}

} // namespace natsal
