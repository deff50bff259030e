#include "natsal/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <set>

namespace natsal {

namespace {

void check_same_shape(const SaliencyGrid& a, const SaliencyGrid& b) {
    if (!(a.shape() == b.shape())) fail(Errc::shape_mismatch, "grids have different shapes");
}

void check_fixations(const SaliencyGrid& g, const FixationSet& fixations) {
    if (fixations.empty()) fail(Errc::empty_fixations, "metric needs at least one fixation");
    for (const GridPoint& p : fixations.points)
        if (!g.contains(p)) fail(Errc::bad_argument, "fixation outside the grid");
}

double population_mean(const std::vector<double>& v) {
    double s = 0.0;
    for (double x : v) s += x;
    return s / static_cast<double>(v.size());
}

// A constant map has zero variance by definition, even when the accumulated
// floating-point variance of its identical entries is not exactly 0.
bool is_constant(const std::vector<double>& v) {
    for (double x : v)
        if (x != v[0]) return false;
    return true;
}

} // namespace

double kld(const SaliencyGrid& reference, const SaliencyGrid& predicted) {
    check_same_shape(reference, predicted);
    const std::vector<double>& r = reference.values();
    const std::vector<double>& p = predicted.values();
    double acc = 0.0;
    for (std::size_t i = 0; i < r.size(); ++i)
        if (r[i] > 0.0) acc += r[i] * std::log(r[i] / (p[i] + kKldEpsilon));
    return acc;
}

double cc(const SaliencyGrid& a, const SaliencyGrid& b) {
    check_same_shape(a, b);
    const std::vector<double>& x = a.values();
    const std::vector<double>& y = b.values();
    if (is_constant(x) || is_constant(y)) fail(Errc::zero_variance, "correlation undefined for a constant map");
    const double mx = population_mean(x);
    const double my = population_mean(y);
    double sxy = 0.0, sxx = 0.0, syy = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        const double dx = x[i] - mx;
        const double dy = y[i] - my;
        sxy += dx * dy;
        sxx += dx * dx;
        syy += dy * dy;
    }
    if (sxx == 0.0 || syy == 0.0) fail(Errc::zero_variance, "correlation undefined for a constant map");
    return sxy / (std::sqrt(sxx) * std::sqrt(syy));
}

double sim(const SaliencyGrid& a, const SaliencyGrid& b) {
    check_same_shape(a, b);
    const std::vector<double>& x = a.values();
    const std::vector<double>& y = b.values();
    double acc = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) acc += std::min(x[i], y[i]);
    return acc;
}

double nss(const SaliencyGrid& predicted, const FixationSet& fixations) {
    check_fixations(predicted, fixations);
    const std::vector<double>& v = predicted.values();
    if (is_constant(v)) fail(Errc::zero_variance, "NSS undefined for a constant map");
    const double mean = population_mean(v);
    double var = 0.0;
    for (double x : v) var += (x - mean) * (x - mean);
    var /= static_cast<double>(v.size());
    if (var == 0.0) fail(Errc::zero_variance, "NSS undefined for a constant map");
    const double sd = std::sqrt(var);

    double acc = 0.0;
    for (const GridPoint& p : fixations.points) acc += (predicted.at(p) - mean) / sd;
    return acc / static_cast<double>(fixations.size());
}

double auc_judd(const SaliencyGrid& predicted, const FixationSet& fixations) {
    check_fixations(predicted, fixations);

    std::set<int> fixated;
    const int w = predicted.width();
    for (const GridPoint& p : fixations.points) fixated.insert(p.row * w + p.col);

    std::vector<double> pos, neg;
    pos.reserve(fixated.size());
    for (int flat = 0; flat < predicted.cells(); ++flat) {
        if (fixated.count(flat))
            pos.push_back(predicted[static_cast<std::size_t>(flat)]);
        else
            neg.push_back(predicted[static_cast<std::size_t>(flat)]);
    }
    if (neg.empty()) return 0.5; // every cell fixated: no ranking task left

    std::sort(pos.begin(), pos.end());
    std::sort(neg.begin(), neg.end());

    std::vector<double> thresholds(pos);
    thresholds.erase(std::unique(thresholds.begin(), thresholds.end()), thresholds.end());
    std::reverse(thresholds.begin(), thresholds.end());

    const double np = static_cast<double>(pos.size());
    const double nn = static_cast<double>(neg.size());
    double area = 0.0;
    double prev_tpr = 0.0, prev_fpr = 0.0;
    for (double t : thresholds) {
        const double tpr = static_cast<double>(pos.end() - std::lower_bound(pos.begin(), pos.end(), t)) / np;
        const double fpr = static_cast<double>(neg.end() - std::lower_bound(neg.begin(), neg.end(), t)) / nn;
        area += (fpr - prev_fpr) * (tpr + prev_tpr) / 2.0;
        prev_tpr = tpr;
        prev_fpr = fpr;
    }
    area += (1.0 - prev_fpr) * (1.0 + prev_tpr) / 2.0;
    return area;
}

double eval_discrepancy(const Discrepancy& d, const SaliencyGrid& predicted, const SaliencyGrid& reference,
                        const FixationSet* fixations) {
    if (d.needs_fixations() && (fixations == nullptr || fixations->empty()))
        fail(Errc::missing_fixations, "discrepancy includes NSS but no fixations were given");
    switch (d.kind) {
    case DiscrepancyKind::kld:
        return kld(reference, predicted);
    case DiscrepancyKind::neg_cc:
        return -cc(predicted, reference);
    case DiscrepancyKind::neg_nss:
        return -nss(predicted, *fixations);
    case DiscrepancyKind::mix: {
        double acc = d.kld_w * kld(reference, predicted);
        if (d.cc_w != 0.0) acc -= d.cc_w * cc(predicted, reference);
        if (d.nss_w != 0.0) acc -= d.nss_w * nss(predicted, *fixations);
        return acc;
    }
    }
    fail(Errc::bad_argument, "unknown discrepancy kind");
}

std::string Discrepancy::to_string() const {
    switch (kind) {
    case DiscrepancyKind::kld: return "kld";
    case DiscrepancyKind::neg_cc: return "neg_cc";
    case DiscrepancyKind::neg_nss: return "neg_nss";
    case DiscrepancyKind::mix: {
        char buf[96];
        std::snprintf(buf, sizeof(buf), "mix:%.17g,%.17g,%.17g", kld_w, cc_w, nss_w);
        return buf;
    }
    }
    return "kld";
}

Discrepancy Discrepancy::parse(const std::string& text) {
    if (text == "kld") return KLD();
    if (text == "neg_cc") return NegCC();
    if (text == "neg_nss") return NegNSS();
    if (text.rfind("mix:", 0) == 0) {
        double kw = 0, cw = 0, nw = 0;
        if (std::sscanf(text.c_str() + 4, "%lg,%lg,%lg", &kw, &cw, &nw) != 3)
            fail(Errc::parse_error, "bad mix discrepancy: " + text);
        return Mix(kw, cw, nw);
    }
    fail(Errc::parse_error, "unknown discrepancy: " + text);
}

} // namespace natsal
