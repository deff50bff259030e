#include <doctest.h>

#include <cmath>

#include "natsal/nat.hpp"
#include "test_util.hpp"

using namespace natsal;
using namespace natsal::test;

namespace {

// Central finite differences over the full logit -> softmax -> loss chain.
std::vector<double> fd_gradient(const PredictedMap& predicted, const SaliencyGrid& measured,
                                const FixationSet* fixations, const NoiseStats* stats, const Discrepancy& d,
                                double step = 1e-5) {
    auto loss_at = [&](const std::vector<double>& logits) {
        PredictedMap pm(predicted.shape(), logits);
        const double dv = eval_discrepancy(d, pm.map(), measured, fixations);
        return stats != nullptr ? nat_frame_loss(dv, *stats) : dv;
    };
    std::vector<double> grad(predicted.logits().size());
    for (std::size_t i = 0; i < grad.size(); ++i) {
        std::vector<double> up = predicted.logits(), down = predicted.logits();
        up[i] += step;
        down[i] -= step;
        grad[i] = (loss_at(up) - loss_at(down)) / (2.0 * step);
    }
    return grad;
}

double max_rel_error(const std::vector<double>& a, const std::vector<double>& b) {
    double worst = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) {
        const double denom = std::max({std::abs(a[i]), std::abs(b[i]), 1e-6});
        worst = std::max(worst, std::abs(a[i] - b[i]) / denom);
    }
    return worst;
}

PredictedMap random_predictor(GridShape shape, Rng& rng) {
    std::vector<double> logits(static_cast<std::size_t>(shape.cells()));
    for (double& l : logits) l = rng.uniform(-2.0, 2.0);
    return PredictedMap(shape, logits);
}

} // namespace

TEST_SUITE_BEGIN("nat");

TEST_CASE("PredictedMap: softmax yields a valid pdf, shift-invariant") {
    Rng rng(1);
    PredictedMap pm = random_predictor({5, 4}, rng);
    CHECK(sum(pm.map().values()) == doctest::Approx(1.0).epsilon(1e-9));

    std::vector<double> shifted = pm.logits();
    for (double& l : shifted) l += 13.75;
    PredictedMap pm2({5, 4}, shifted);
    CHECK(max_abs_diff(pm.map().values(), pm2.map().values()) < 1e-12);
}

TEST_CASE("tt_loss: identity, delegation, arithmetic oracle") {
    // Logits ln(m) reproduce the measured map exactly up to normalization.
    SaliencyGrid measured = normalize({4, 1}, {0.1, 0.2, 0.3, 0.4});
    std::vector<double> logits;
    for (double v : measured.values()) logits.push_back(std::log(v));
    PredictedMap pm({4, 1}, logits);
    CHECK(tt_loss(pm, measured, nullptr, Discrepancy::KLD()) == doctest::Approx(0.0).epsilon(1e-9));

    Rng rng(2);
    PredictedMap pred = random_predictor({4, 1}, rng);
    CHECK(tt_loss(pred, measured, nullptr, Discrepancy::KLD()) ==
          eval_discrepancy(Discrepancy::KLD(), pred.map(), measured, nullptr));

    SaliencyGrid two({2, 1}, {0.25, 0.75});
    PredictedMap half({2, 1}, {0.0, 0.0});
    const double expected = 0.25 * std::log(0.5) + 0.75 * std::log(1.5);
    CHECK(tt_loss(half, two, nullptr, Discrepancy::KLD()) == doctest::Approx(expected).epsilon(1e-9));
    CHECK(tt_loss(half, two, nullptr, Discrepancy::KLD()) == doctest::Approx(0.130812).epsilon(1e-5));
}

TEST_CASE("nat_frame_loss: fixed point, arithmetic anchor, offset") {
    NoiseStats stats{0.3, 0.04, 10, 5, Discrepancy::KLD()};
    CHECK(nat_frame_loss(0.3, stats) == 0.0);
    CHECK(nat_frame_loss(0.5, stats) == doctest::Approx(0.04 / 0.04005).epsilon(1e-9));

    NoiseStats zero_var{0.3, 0.0, 10, 5, Discrepancy::KLD()};
    CHECK(nat_frame_loss(0.31, zero_var) == doctest::Approx(0.0001 / 5e-5).epsilon(1e-7));
    CHECK(nat_frame_loss(0.31, zero_var) == doctest::Approx(2.0).epsilon(1e-7));
}

TEST_CASE("nat_loss: totals, singleton reduction, variance weighting") {
    SaliencyGrid measured = normalize({4, 1}, {0.1, 0.2, 0.3, 0.4});
    Rng rng(3);
    PredictedMap pred = random_predictor({4, 1}, rng);
    const Discrepancy d = Discrepancy::KLD();
    const double dv = eval_discrepancy(d, pred.map(), measured, nullptr);

    NoiseStats stats{dv, 0.02, 10, 5, d};
    NatFrameInput self{0, &pred, &measured, nullptr, &stats};
    LossReport report = nat_loss(std::span(&self, 1), d);
    CHECK(report.total == 0.0);

    // Singleton sum reduces to nat_frame_loss.
    NoiseStats other{dv - 0.1, 0.02, 10, 5, d};
    NatFrameInput one{7, &pred, &measured, nullptr, &other};
    LossReport single = nat_loss(std::span(&one, 1), d);
    CHECK(single.total == doctest::Approx(nat_frame_loss(dv, other)).epsilon(1e-12));
    CHECK(single.frames.size() == 1);
    CHECK(single.frames[0].frame_id == 7);

    // Same d-gap, variances 0.01 and 1.0: the reliable frame dominates.
    NoiseStats tight{dv - 0.1, 0.01, 10, 5, d};
    NoiseStats loose{dv - 0.1, 1.0, 10, 5, d};
    NatFrameInput frames[2] = {{0, &pred, &measured, nullptr, &tight}, {1, &pred, &measured, nullptr, &loose}};
    LossReport both = nat_loss(frames, d);
    CHECK(both.total == doctest::Approx(both.frames[0].contribution + both.frames[1].contribution).epsilon(1e-12));
    const double ratio = both.frames[0].contribution / both.frames[1].contribution;
    CHECK(ratio == doctest::Approx((1.0 + 5e-5) / (0.01 + 5e-5)).epsilon(1e-9));
}

TEST_CASE("nat_loss: rejects stats cached under a different discrepancy") {
    SaliencyGrid measured = normalize({4, 1}, {0.1, 0.2, 0.3, 0.4});
    PredictedMap pred({4, 1}, {0.0, 0.1, 0.2, 0.3});
    NoiseStats stats{0.1, 0.02, 10, 5, Discrepancy::NegCC()};
    NatFrameInput frame{0, &pred, &measured, nullptr, &stats};
    CHECK(thrown_code([&] { nat_loss(std::span(&frame, 1), Discrepancy::KLD()); }) == Errc::stats_mismatch);
}

TEST_CASE("full_nll: value at the mean, same argmin as nat_frame_loss") {
    NoiseStats unit{0.4, 1.0 - 5e-5, 10, 5, Discrepancy::KLD()};
    CHECK(full_nll(0.4, unit) == doctest::Approx(std::log(std::sqrt(2.0 * M_PI))).epsilon(1e-12));
    CHECK(full_nll(0.4, unit) == doctest::Approx(0.918939).epsilon(1e-6));

    NoiseStats stats{0.7, 0.05, 10, 5, Discrepancy::KLD()};
    double best_nll = 1e300, best_nll_at = -1;
    double best_nat = 1e300, best_nat_at = -1;
    for (double dv = 0.0; dv <= 2.0; dv += 0.001) {
        if (full_nll(dv, stats) < best_nll) {
            best_nll = full_nll(dv, stats);
            best_nll_at = dv;
        }
        if (nat_frame_loss(dv, stats) < best_nat) {
            best_nat = nat_frame_loss(dv, stats);
            best_nat_at = dv;
        }
    }
    CHECK(best_nll_at == doctest::Approx(0.7).epsilon(1e-9));
    CHECK(best_nat_at == best_nll_at);
}

TEST_CASE("loss_gradient: zero at the TT minimum for KLD") {
    SaliencyGrid measured = gaussian_blur(SaliencyGrid::delta({8, 8}, {4, 4}), 2.0);
    std::vector<double> logits;
    for (double v : measured.values()) logits.push_back(std::log(v));
    PredictedMap pm({8, 8}, logits);
    std::vector<double> g = loss_gradient(pm, measured, nullptr, nullptr, Discrepancy::KLD());
    double norm = 0.0;
    for (double x : g) norm += x * x;
    CHECK(std::sqrt(norm) < 1e-8);
}

TEST_CASE("loss_gradient: NAT gradient vanishes exactly at d = mean") {
    SaliencyGrid measured = normalize({6, 1}, {0.1, 0.3, 0.2, 0.15, 0.15, 0.1});
    Rng rng(4);
    PredictedMap pred = random_predictor({6, 1}, rng);
    const double dv = eval_discrepancy(Discrepancy::KLD(), pred.map(), measured, nullptr);
    NoiseStats stats{dv, 0.02, 10, 3, Discrepancy::KLD()};
    std::vector<double> g = loss_gradient(pred, measured, nullptr, &stats, Discrepancy::KLD());
    for (double x : g) CHECK(x == 0.0);
}

TEST_CASE("loss_gradient: matches central finite differences on random instances") {
    Rng rng(2024);
    const Discrepancy kinds[] = {Discrepancy::KLD(), Discrepancy::NegCC(), Discrepancy::NegNSS(),
                                 Discrepancy::Mix(1.0, 0.1, 0.1)};
    for (int trial = 0; trial < 50; ++trial) {
        const int w = 5 + static_cast<int>(rng.below(16));
        const GridShape shape{w, 1};
        PredictedMap pred = random_predictor(shape, rng);
        SaliencyGrid measured = random_grid(shape, rng);
        FixationSet fix;
        const int nf = 1 + static_cast<int>(rng.below(5));
        for (int i = 0; i < nf; ++i)
            fix.points.push_back({static_cast<int>(rng.below(static_cast<std::uint64_t>(w))), 0});
        const Discrepancy& d = kinds[trial % 4];
        NoiseStats stats{rng.uniform(0.0, 1.0), rng.uniform(0.01, 0.1), 10, 3, d};

        std::vector<double> tt_analytic = loss_gradient(pred, measured, &fix, nullptr, d);
        std::vector<double> tt_numeric = fd_gradient(pred, measured, &fix, nullptr, d);
        CHECK(max_rel_error(tt_analytic, tt_numeric) < 1e-4);

        std::vector<double> nat_analytic = loss_gradient(pred, measured, &fix, &stats, d);
        std::vector<double> nat_numeric = fd_gradient(pred, measured, &fix, &stats, d);
        CHECK(max_rel_error(nat_analytic, nat_numeric) < 1e-4);
    }
}

TEST_CASE("loss_gradient: shift invariance of losses and gradients") {
    Rng rng(5);
    const GridShape shape{7, 1};
    PredictedMap pred = random_predictor(shape, rng);
    SaliencyGrid measured = random_grid(shape, rng);
    NoiseStats stats{0.2, 0.05, 10, 3, Discrepancy::KLD()};

    std::vector<double> shifted_logits = pred.logits();
    for (double& l : shifted_logits) l += 5.0;
    PredictedMap shifted(shape, shifted_logits);

    CHECK(tt_loss(pred, measured, nullptr, Discrepancy::KLD()) ==
          doctest::Approx(tt_loss(shifted, measured, nullptr, Discrepancy::KLD())).epsilon(1e-9));

    std::vector<double> g1 = loss_gradient(pred, measured, nullptr, &stats, Discrepancy::KLD());
    std::vector<double> g2 = loss_gradient(shifted, measured, nullptr, &stats, Discrepancy::KLD());
    CHECK(max_abs_diff(g1, g2) < 1e-9);
}

TEST_CASE("LossReport: JSON serialization carries totals and per-frame rows") {
    LossReport report;
    report.total = 1.5;
    report.frames.push_back(FrameLoss{3, 0.4, 0.3, 0.02, 1.5});
    const std::string json = report.to_json();
    CHECK(json.find("\"total\"") != std::string::npos);
    CHECK(json.find("\"frame_id\": 3") != std::string::npos);
    CHECK(json.find("\"contribution\"") != std::string::npos);
}

TEST_SUITE_END();
