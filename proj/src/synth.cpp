#include "natsal/synth.hpp"

#include <algorithm>
#include <cmath>

#include "natsal/metrics.hpp"
#include "natsal/reconstruct.hpp"

namespace natsal {

SaliencyGrid gmm_truth(const GmmSpec& spec, GridShape shape) {
    if (spec.components.empty()) fail(Errc::bad_argument, "empty mixture spec");
    for (const GmmComponent& c : spec.components) {
        if (c.sigma <= 0.0) fail(Errc::bad_argument, "component sigma must be positive");
        if (c.weight <= 0.0) fail(Errc::bad_argument, "component weight must be positive");
        if (c.center_col < 0.0 || c.center_col > shape.width - 1 || c.center_row < 0.0 ||
            c.center_row > shape.height - 1)
            fail(Errc::bad_argument, "component center outside grid bounds");
    }

    std::vector<double> v(static_cast<std::size_t>(shape.cells()), 0.0);
    for (const GmmComponent& c : spec.components) {
        const double inv2s2 = 1.0 / (2.0 * c.sigma * c.sigma);
        // Normal scale per dimension; constant factors cancel in the final
        // normalization but relative component masses must stay correct.
        const double amp = c.weight / (shape.height == 1 ? c.sigma : c.sigma * c.sigma);
        for (int r = 0; r < shape.height; ++r) {
            const double dy = static_cast<double>(r) - c.center_row;
            for (int col = 0; col < shape.width; ++col) {
                const double dx = static_cast<double>(col) - c.center_col;
                v[static_cast<std::size_t>(r) * shape.width + col] += amp * std::exp(-(dx * dx + dy * dy) * inv2s2);
            }
        }
    }
    return normalize(shape, std::move(v));
}

std::vector<GmmSpec> random_gmm_suite(int count, int min_components, int max_components, GridShape shape, Rng& rng) {
    if (count < 0) fail(Errc::bad_argument, "negative suite size");
    if (min_components < 1 || max_components > 8 || min_components > max_components)
        fail(Errc::bad_argument, "component range must lie within [1, 8]");

    const double min_dim = static_cast<double>(std::min(shape.width, shape.height));
    const double sigma_lo = std::max(1.5, 0.04 * min_dim);
    const double sigma_hi = std::max(sigma_lo + 0.5, 0.10 * min_dim);

    std::vector<GmmSpec> suite;
    suite.reserve(static_cast<std::size_t>(count));
    for (int i = 0; i < count; ++i) {
        const int k = min_components + static_cast<int>(rng.below(
                                           static_cast<std::uint64_t>(max_components - min_components + 1)));
        GmmSpec spec;
        for (int c = 0; c < k; ++c) {
            GmmComponent comp;
            comp.sigma = rng.uniform(sigma_lo, sigma_hi);
            comp.weight = rng.uniform(0.2, 1.0);
            // Keep most of the component's mass inside the grid.
            const double margin_x = std::min(2.0 * comp.sigma, 0.45 * (shape.width - 1));
            const double margin_y = std::min(2.0 * comp.sigma, 0.45 * (shape.height - 1));
            for (int attempt = 0; attempt < 100; ++attempt) {
                comp.center_col = rng.uniform(margin_x, shape.width - 1 - margin_x);
                comp.center_row = shape.height == 1 ? 0.0 : rng.uniform(margin_y, shape.height - 1 - margin_y);
                bool far_enough = true;
                for (const GmmComponent& other : spec.components) {
                    const double dx = comp.center_col - other.center_col;
                    const double dy = comp.center_row - other.center_row;
                    if (std::sqrt(dx * dx + dy * dy) < 2.0 * (comp.sigma + other.sigma)) {
                        far_enough = false;
                        break;
                    }
                }
                if (far_enough) break;
            }
            spec.components.push_back(comp);
        }
        double wsum = 0.0;
        for (const GmmComponent& c : spec.components) wsum += c.weight;
        for (GmmComponent& c : spec.components) c.weight /= wsum;
        suite.push_back(std::move(spec));
    }
    return suite;
}

GmmSpec perturb_means(const GmmSpec& spec, double max_shift, GridShape shape, Rng& rng) {
    GmmSpec out = spec;
    for (GmmComponent& c : out.components) {
        c.center_col = std::clamp(c.center_col + rng.uniform(-max_shift, max_shift), 0.0,
                                  static_cast<double>(shape.width - 1));
        c.center_row = shape.height == 1 ? 0.0
                                         : std::clamp(c.center_row + rng.uniform(-max_shift, max_shift), 0.0,
                                                      static_cast<double>(shape.height - 1));
    }
    return out;
}

GmmSpec toy_unimodal_spec() {
    GmmSpec s;
    s.components.push_back(GmmComponent{50.0, 0.0, 5.0, 1.0});
    return s;
}

GmmSpec toy_bimodal_spec() {
    GmmSpec s;
    s.components.push_back(GmmComponent{25.0, 0.0, 5.0, 0.3});
    s.components.push_back(GmmComponent{75.0, 0.0, 5.0, 0.7});
    return s;
}

std::vector<ToyRow> toy_study(std::span<const int> n_values, int realizations, Rng& rng) {
    if (realizations < 2) fail(Errc::too_few_realizations, "toy study needs at least 2 realizations");

    struct Truth {
        const char* name;
        SaliencyGrid grid;
    };
    const Truth truths[] = {
        {"unimodal", gmm_truth(toy_unimodal_spec(), kToyShape)},
        {"bimodal", gmm_truth(toy_bimodal_spec(), kToyShape)},
    };

    std::vector<ToyRow> rows;
    for (const Truth& truth : truths) {
        for (int n : n_values) {
            ToyRow row;
            row.truth = truth.name;
            row.n = n;

            const std::size_t cells = truth.grid.values().size();
            std::vector<double> sum(cells, 0.0), sum_sq(cells, 0.0);
            double kld_sum = 0.0, kld_sum_sq = 0.0;
            for (int r = 0; r < realizations; ++r) {
                Resample sr = resample_with_fixations(truth.grid, n, kToyReconstructionSigma, rng);
                const double kd = eval_discrepancy(Discrepancy::KLD(), truth.grid, sr.map, &sr.fixations);
                kld_sum += kd;
                kld_sum_sq += kd * kd;
                for (std::size_t i = 0; i < cells; ++i) {
                    sum[i] += sr.map[i];
                    sum_sq[i] += sr.map[i] * sr.map[i];
                }
            }

            const double m = static_cast<double>(realizations);
            row.e_kld = kld_sum / m;
            const double var = std::max(0.0, (kld_sum_sq - m * row.e_kld * row.e_kld) / (m - 1.0));
            row.std_kld = std::sqrt(var);
            row.mean_map.resize(cells);
            row.std_map.resize(cells);
            for (std::size_t i = 0; i < cells; ++i) {
                const double mu = sum[i] / m;
                row.mean_map[i] = mu;
                row.std_map[i] = std::sqrt(std::max(0.0, (sum_sq[i] - m * mu * mu) / (m - 1.0)));
            }
            rows.push_back(std::move(row));
        }
    }
    return rows;
}

} // namespace natsal
