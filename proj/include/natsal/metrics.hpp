#pragma once

#include <string>

#include "natsal/grid.hpp"
#include "natsal/reconstruct.hpp"

namespace natsal {

enum class DiscrepancyKind { kld, neg_cc, neg_nss, mix };

// Training/evaluation discrepancy d(predicted, reference). All kinds are
// oriented lower-is-better; the mix evaluates kld_w*KLD - cc_w*CC - nss_w*NSS.
// AUC is evaluation-only and deliberately not a kind here.
struct Discrepancy {
    DiscrepancyKind kind = DiscrepancyKind::kld;
    double kld_w = 0.0;
    double cc_w = 0.0;
    double nss_w = 0.0;

    static Discrepancy KLD() { return {DiscrepancyKind::kld, 0, 0, 0}; }
    static Discrepancy NegCC() { return {DiscrepancyKind::neg_cc, 0, 0, 0}; }
    static Discrepancy NegNSS() { return {DiscrepancyKind::neg_nss, 0, 0, 0}; }
    static Discrepancy Mix(double kw, double cw, double nw) { return {DiscrepancyKind::mix, kw, cw, nw}; }

    bool lower_is_better() const { return true; }
    bool needs_fixations() const {
        return kind == DiscrepancyKind::neg_nss || (kind == DiscrepancyKind::mix && nss_w != 0.0);
    }
    bool operator==(const Discrepancy&) const = default;

    std::string to_string() const;
    static Discrepancy parse(const std::string& text);
};

// KL divergence of predicted from reference: sum over cells of
// ref * ln(ref / (pred + 1e-12)); zero-reference cells contribute 0.
double kld(const SaliencyGrid& reference, const SaliencyGrid& predicted);

// Pearson correlation of the two value arrays.
double cc(const SaliencyGrid& a, const SaliencyGrid& b);

// Histogram intersection: sum of per-cell minima.
double sim(const SaliencyGrid& a, const SaliencyGrid& b);

// Mean z-scored saliency at the fixated cells (population std, repeated
// fixations count once each).
double nss(const SaliencyGrid& predicted, const FixationSet& fixations);

// ROC area with fixated cells as positives and every other cell as a
// negative; thresholds swept over the distinct saliency values at fixated
// cells, trapezoidal integration (ties earn half credit via the trapezoids).
double auc_judd(const SaliencyGrid& predicted, const FixationSet& fixations);

// Applies the discrepancy. fixations may be null unless the kind needs them.
double eval_discrepancy(const Discrepancy& d, const SaliencyGrid& predicted, const SaliencyGrid& reference,
                        const FixationSet* fixations);

inline constexpr double kKldEpsilon = 1e-12;

} // namespace natsal
