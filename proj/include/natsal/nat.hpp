#pragma once

#include <span>
#include <string>
#include <vector>

#include "natsal/metrics.hpp"
#include "natsal/noise_stats.hpp"

namespace natsal {

// Numerical-stability offset added to the bootstrap variance in every
// noise-aware denominator.
inline constexpr double kVarianceOffset = 5e-5;

// A saliency map parameterized by unconstrained per-cell logits; the map is
// softmax(logits), so the pdf invariants hold for any parameter value.
class PredictedMap {
public:
    PredictedMap(GridShape shape, std::vector<double> logits);

    static PredictedMap uniform_init(GridShape shape) {
        return PredictedMap(shape, std::vector<double>(static_cast<std::size_t>(shape.cells()), 0.0));
    }

    GridShape shape() const { return map_.shape(); }
    const std::vector<double>& logits() const { return logits_; }
    const SaliencyGrid& map() const { return map_; }

    void set_logits(std::vector<double> logits);

private:
    std::vector<double> logits_;
    SaliencyGrid map_;
};

// Traditional per-frame training loss: d(predicted, measured).
double tt_loss(const PredictedMap& predicted, const SaliencyGrid& measured, const FixationSet* fixations,
               const Discrepancy& d);

// Noise-aware per-frame loss: (d - mean)^2 / (variance + offset).
double nat_frame_loss(double d_value, const NoiseStats& stats);

// Full per-frame negative log likelihood ln(sqrt(2 pi) sigma) + (d - mean)^2 / (2 sigma^2),
// with sigma^2 = variance + offset.
double full_nll(double d_value, const NoiseStats& stats);

struct FrameLoss {
    int frame_id = 0;
    double d_value = 0.0;
    double mean = 0.0;
    double variance = 0.0;
    double contribution = 0.0;
};

struct LossReport {
    double total = 0.0;
    std::vector<FrameLoss> frames;

    std::string to_json() const;
};

struct NatFrameInput {
    int frame_id = 0;
    const PredictedMap* predicted = nullptr;
    const SaliencyGrid* measured = nullptr;
    const FixationSet* fixations = nullptr; // may be null unless d needs it
    const NoiseStats* stats = nullptr;
};

// Sum of nat_frame_loss over frames, accumulated in frame order.
LossReport nat_loss(std::span<const NatFrameInput> frames, const Discrepancy& d);

// Analytic gradient with respect to the logits, chained through the softmax.
// stats == nullptr gives the traditional-loss gradient; otherwise the
// noise-aware gradient with outer factor 2 (d - mean) / (variance + offset).
std::vector<double> loss_gradient(const PredictedMap& predicted, const SaliencyGrid& measured,
                                  const FixationSet* fixations, const NoiseStats* stats, const Discrepancy& d);

} // namespace natsal
