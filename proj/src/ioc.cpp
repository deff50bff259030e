#include "natsal/ioc.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "natsal/metrics.hpp"

namespace natsal {

IocCurve ioc_curve(const std::vector<FixationSet>& per_observer, GridShape shape, double sigma, int realizations,
                   Rng& rng) {
    const int observers = static_cast<int>(per_observer.size());
    if (observers < 3) fail(Errc::too_few_observers, "IOC curve needs at least 3 observers");
    if (realizations < 1) fail(Errc::bad_argument, "realizations must be positive");
    for (const FixationSet& f : per_observer)
        if (f.empty()) fail(Errc::too_few_observers, "every observer needs at least 1 fixation");

    IocCurve curve;
    curve.realizations = realizations;
    std::vector<int> order(static_cast<std::size_t>(observers));

    for (int n = 1; n <= observers - 1; ++n) {
        double sum = 0.0, sum_sq = 0.0;
        int used = 0, skipped = 0;
        for (int r = 0; r < realizations; ++r) {
            // Random permutation; the first n form the subset, the next one
            // is the held-out observer.
            std::iota(order.begin(), order.end(), 0);
            for (int i = observers - 1; i > 0; --i)
                std::swap(order[static_cast<std::size_t>(i)],
                          order[static_cast<std::size_t>(rng.below(static_cast<std::uint64_t>(i + 1)))]);

            FixationSet pooled;
            for (int i = 0; i < n; ++i) {
                const FixationSet& f = per_observer[static_cast<std::size_t>(order[static_cast<std::size_t>(i)])];
                pooled.points.insert(pooled.points.end(), f.points.begin(), f.points.end());
            }
            const FixationSet& held_out = per_observer[static_cast<std::size_t>(order[static_cast<std::size_t>(n)])];

            const SaliencyGrid map = sr_reconstruct(pooled, sigma, shape);
            try {
                const double score = nss(map, held_out);
                sum += score;
                sum_sq += score * score;
                ++used;
            } catch (const Error& e) {
                if (e.code() != Errc::zero_variance) throw;
                ++skipped;
            }
        }
        curve.n_values.push_back(n);
        const double mean = used > 0 ? sum / used : 0.0;
        curve.mean_nss.push_back(mean);
        curve.std_nss.push_back(used > 1 ? std::sqrt(std::max(0.0, (sum_sq - used * mean * mean) / (used - 1))) : 0.0);
        curve.skipped.push_back(skipped);
    }
    return curve;
}

double ioc_convergence_gradient(const IocCurve& curve) {
    const std::size_t k = curve.n_values.size();
    if (k < 2) fail(Errc::too_short, "curve needs at least 2 points");
    const double dn = static_cast<double>(curve.n_values[k - 1] - curve.n_values[k - 2]);
    return std::abs(curve.mean_nss[k - 1] - curve.mean_nss[k - 2]) / dn;
}

IocCurve dataset_ioc(const std::vector<std::vector<FixationSet>>& frames, int stride, GridShape shape, double sigma,
                     int realizations, std::uint64_t seed) {
    if (frames.empty()) fail(Errc::bad_argument, "no frames");
    if (stride < 1) fail(Errc::bad_argument, "stride must be positive");

    std::vector<IocCurve> curves;
    for (std::size_t i = 0; i < frames.size(); i += static_cast<std::size_t>(stride)) {
        Rng rng = Rng::child(seed, i);
        curves.push_back(ioc_curve(frames[i], shape, sigma, realizations, rng));
    }

    std::size_t common = curves[0].n_values.size();
    for (const IocCurve& c : curves) common = std::min(common, c.n_values.size());

    IocCurve avg;
    avg.realizations = realizations;
    for (std::size_t j = 0; j < common; ++j) {
        avg.n_values.push_back(curves[0].n_values[j]);
        double mean = 0.0, sd = 0.0;
        int skipped = 0;
        for (const IocCurve& c : curves) {
            mean += c.mean_nss[j];
            sd += c.std_nss[j];
            skipped += c.skipped[j];
        }
        avg.mean_nss.push_back(mean / static_cast<double>(curves.size()));
        avg.std_nss.push_back(sd / static_cast<double>(curves.size()));
        avg.skipped.push_back(skipped);
    }
    return avg;
}

} // namespace natsal
