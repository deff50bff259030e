#include "natsal/nat.hpp"

#include <algorithm>
#include <cmath>

#include <json.hpp>

namespace natsal {

namespace {

SaliencyGrid softmax_grid(GridShape shape, const std::vector<double>& logits) {
    if (logits.size() != static_cast<std::size_t>(shape.cells()))
        fail(Errc::shape_mismatch, "logit count does not match grid shape");
    double peak = logits[0];
    for (double l : logits) peak = std::max(peak, l);
    std::vector<double> v(logits.size());
    double sum = 0.0;
    for (std::size_t i = 0; i < v.size(); ++i) {
        v[i] = std::exp(logits[i] - peak);
        sum += v[i];
    }
    for (double& x : v) x /= sum;
    return normalize(shape, std::move(v));
}

// d(metric)/d(map value) for each cell; the fixation argument is required
// only for NSS-bearing discrepancies.
std::vector<double> metric_map_gradient(const Discrepancy& d, const SaliencyGrid& predicted,
                                        const SaliencyGrid& measured, const FixationSet* fixations) {
    const std::vector<double>& p = predicted.values();
    const std::vector<double>& r = measured.values();
    const std::size_t cells = p.size();
    const double k = static_cast<double>(cells);
    std::vector<double> grad(cells, 0.0);

    const bool wants_kld = d.kind == DiscrepancyKind::kld || (d.kind == DiscrepancyKind::mix && d.kld_w != 0.0);
    const bool wants_cc = d.kind == DiscrepancyKind::neg_cc || (d.kind == DiscrepancyKind::mix && d.cc_w != 0.0);
    const bool wants_nss = d.kind == DiscrepancyKind::neg_nss || (d.kind == DiscrepancyKind::mix && d.nss_w != 0.0);
    const double kld_w = d.kind == DiscrepancyKind::kld ? 1.0 : d.kld_w;
    const double cc_w = d.kind == DiscrepancyKind::neg_cc ? 1.0 : d.cc_w;
    const double nss_w = d.kind == DiscrepancyKind::neg_nss ? 1.0 : d.nss_w;

    if (wants_kld) {
        // KLD(r || p) = sum r ln(r / (p + eps)); d/dp_k = -r_k / (p_k + eps).
        for (std::size_t i = 0; i < cells; ++i)
            if (r[i] > 0.0) grad[i] += kld_w * (-r[i] / (p[i] + kKldEpsilon));
    }
    if (wants_cc) {
        if (std::all_of(p.begin(), p.end(), [&](double x) { return x == p[0]; }) ||
            std::all_of(r.begin(), r.end(), [&](double x) { return x == r[0]; }))
            fail(Errc::zero_variance, "CC gradient undefined for a constant map");
        double mp = 0.0, mr = 0.0;
        for (std::size_t i = 0; i < cells; ++i) {
            mp += p[i];
            mr += r[i];
        }
        mp /= k;
        mr /= k;
        double spr = 0.0, spp = 0.0, srr = 0.0;
        for (std::size_t i = 0; i < cells; ++i) {
            spr += (p[i] - mp) * (r[i] - mr);
            spp += (p[i] - mp) * (p[i] - mp);
            srr += (r[i] - mr) * (r[i] - mr);
        }
        if (spp == 0.0 || srr == 0.0) fail(Errc::zero_variance, "CC gradient undefined for a constant map");
        const double denom = std::sqrt(spp * srr);
        // The loss carries -cc, hence the sign flip.
        for (std::size_t i = 0; i < cells; ++i) {
            const double dcc = ((r[i] - mr) - (spr / spp) * (p[i] - mp)) / denom;
            grad[i] += -cc_w * dcc;
        }
    }
    if (wants_nss) {
        if (fixations == nullptr || fixations->empty())
            fail(Errc::missing_fixations, "NSS gradient needs fixations");
        if (std::all_of(p.begin(), p.end(), [&](double x) { return x == p[0]; }))
            fail(Errc::zero_variance, "NSS gradient undefined for a constant map");
        double mp = 0.0;
        for (double x : p) mp += x;
        mp /= k;
        double var = 0.0;
        for (double x : p) var += (x - mp) * (x - mp);
        var /= k;
        if (var == 0.0) fail(Errc::zero_variance, "NSS gradient undefined for a constant map");
        const double sd = std::sqrt(var);

        const double nf = static_cast<double>(fixations->size());
        std::vector<double> mult(cells, 0.0);
        double fix_sum = 0.0;
        for (const GridPoint& pt : fixations->points) {
            const std::size_t flat = static_cast<std::size_t>(pt.row) * predicted.width() + pt.col;
            mult[flat] += 1.0;
            fix_sum += p[flat];
        }
        const double nss_value = (fix_sum / nf - mp) / sd;
        // z statistics treated as functions of the map: full chain rule.
        for (std::size_t i = 0; i < cells; ++i) {
            const double dnss = (mult[i] / nf - 1.0 / k) / sd - nss_value * (p[i] - mp) / (k * var);
            grad[i] += -nss_w * dnss;
        }
    }
    return grad;
}

} // namespace

PredictedMap::PredictedMap(GridShape shape, std::vector<double> logits)
    : logits_(std::move(logits)), map_(softmax_grid(shape, logits_)) {}

void PredictedMap::set_logits(std::vector<double> logits) {
    GridShape shape = map_.shape();
    logits_ = std::move(logits);
    map_ = softmax_grid(shape, logits_);
}

double tt_loss(const PredictedMap& predicted, const SaliencyGrid& measured, const FixationSet* fixations,
               const Discrepancy& d) {
    return eval_discrepancy(d, predicted.map(), measured, fixations);
}

double nat_frame_loss(double d_value, const NoiseStats& stats) {
    const double gap = d_value - stats.mean;
    return gap * gap / (stats.variance + kVarianceOffset);
}

double full_nll(double d_value, const NoiseStats& stats) {
    const double var = stats.variance + kVarianceOffset;
    const double gap = d_value - stats.mean;
    return std::log(std::sqrt(2.0 * M_PI * var)) + gap * gap / (2.0 * var);
}

LossReport nat_loss(std::span<const NatFrameInput> frames, const Discrepancy& d) {
    LossReport report;
    report.frames.reserve(frames.size());
    for (const NatFrameInput& f : frames) {
        if (f.stats == nullptr) fail(Errc::missing_stats, "frame without cached noise stats");
        if (!(f.stats->discrepancy == d))
            fail(Errc::stats_mismatch, "cached stats were computed under a different discrepancy");
        const double dv = eval_discrepancy(d, f.predicted->map(), *f.measured, f.fixations);
        const double contribution = nat_frame_loss(dv, *f.stats);
        report.frames.push_back(FrameLoss{f.frame_id, dv, f.stats->mean, f.stats->variance, contribution});
        report.total += contribution;
    }
    return report;
}

std::vector<double> loss_gradient(const PredictedMap& predicted, const SaliencyGrid& measured,
                                  const FixationSet* fixations, const NoiseStats* stats, const Discrepancy& d) {
    const SaliencyGrid& map = predicted.map();
    if (!(map.shape() == measured.shape())) fail(Errc::shape_mismatch, "predicted and measured shapes differ");

    std::vector<double> map_grad = metric_map_gradient(d, map, measured, fixations);

    double outer = 1.0;
    if (stats != nullptr) {
        const double dv = eval_discrepancy(d, map, measured, fixations);
        outer = 2.0 * (dv - stats->mean) / (stats->variance + kVarianceOffset);
    }

    // Softmax chain rule: dL/dtheta_k = p_k (g_k - sum_j p_j g_j).
    const std::vector<double>& p = map.values();
    double inner = 0.0;
    for (std::size_t i = 0; i < p.size(); ++i) inner += p[i] * map_grad[i];
    std::vector<double> grad(p.size());
    for (std::size_t i = 0; i < p.size(); ++i) grad[i] = outer * p[i] * (map_grad[i] - inner);
    return grad;
}

std::string LossReport::to_json() const {
    nlohmann::json frames_json = nlohmann::json::array();
    for (const FrameLoss& f : frames) {
        frames_json.push_back({{"frame_id", f.frame_id},
                               {"d_value", f.d_value},
                               {"mean", f.mean},
                               {"variance", f.variance},
                               {"contribution", f.contribution}});
    }
    nlohmann::json j{{"total", total}, {"frames", frames_json}};
    return j.dump(2);
}

} // namespace natsal
