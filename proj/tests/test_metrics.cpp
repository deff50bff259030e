#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <set>

#include "natsal/metrics.hpp"
#include "test_util.hpp"

using namespace natsal;
using namespace natsal::test;

namespace {

FixationSet fixations_at(std::initializer_list<GridPoint> pts) {
    FixationSet f;
    f.points = pts;
    return f;
}

// Exhaustive-threshold ROC oracle mirroring the documented definition:
// thresholds at the distinct fixated saliency values, inclusive counts,
// trapezoidal integration, final point (1, 1).
double auc_oracle(const SaliencyGrid& predicted, const FixationSet& fixations) {
    std::set<int> fixated;
    for (const GridPoint& p : fixations.points) fixated.insert(p.row * predicted.width() + p.col);
    std::vector<double> pos, neg;
    for (int flat = 0; flat < predicted.cells(); ++flat)
        (fixated.count(flat) ? pos : neg).push_back(predicted[static_cast<std::size_t>(flat)]);
    if (neg.empty()) return 0.5;

    std::vector<double> thresholds = pos;
    std::sort(thresholds.begin(), thresholds.end(), std::greater<>());
    thresholds.erase(std::unique(thresholds.begin(), thresholds.end()), thresholds.end());

    double area = 0.0, prev_tpr = 0.0, prev_fpr = 0.0;
    for (double t : thresholds) {
        int tp = 0, fp = 0;
        for (double v : pos) tp += v >= t;
        for (double v : neg) fp += v >= t;
        const double tpr = static_cast<double>(tp) / pos.size();
        const double fpr = static_cast<double>(fp) / neg.size();
        area += (fpr - prev_fpr) * (tpr + prev_tpr) / 2.0;
        prev_tpr = tpr;
        prev_fpr = fpr;
    }
    area += (1.0 - prev_fpr) * (1.0 + prev_tpr) / 2.0;
    return area;
}

} // namespace

TEST_SUITE_BEGIN("metrics");

TEST_CASE("kld: identity, arithmetic oracle, closed form") {
    Rng rng(1);
    SaliencyGrid p = random_grid({5, 5}, rng);
    CHECK(std::abs(kld(p, p)) < 1e-9);

    SaliencyGrid a({2, 1}, {0.5, 0.5});
    SaliencyGrid b({2, 1}, {0.25, 0.75});
    const double expected = 0.5 * std::log(2.0) + 0.5 * std::log(2.0 / 3.0);
    CHECK(kld(a, b) == doctest::Approx(expected).epsilon(1e-9));
    CHECK(kld(a, b) == doctest::Approx(0.143841).epsilon(1e-5));

    SaliencyGrid delta = SaliencyGrid::delta({10, 10}, {0, 0});
    SaliencyGrid uniform = SaliencyGrid::uniform({10, 10});
    CHECK(kld(delta, uniform) == doctest::Approx(std::log(100.0)).epsilon(1e-6));
}

TEST_CASE("kld: non-negative, zero only at equality") {
    Rng rng(2);
    for (int trial = 0; trial < 50; ++trial) {
        SaliencyGrid p = random_grid({6, 4}, rng);
        SaliencyGrid q = random_grid({6, 4}, rng);
        CHECK(kld(p, q) >= -1e-9);
        double l1 = 0.0;
        for (std::size_t i = 0; i < p.values().size(); ++i) l1 += std::abs(p[i] - q[i]);
        if (l1 > 0.01) CHECK(kld(p, q) > 1e-9);
        CHECK(std::abs(kld(p, p)) <= 1e-9);
    }
}

TEST_CASE("kld: shape mismatch rejected") {
    SaliencyGrid a = SaliencyGrid::uniform({2, 2});
    SaliencyGrid b = SaliencyGrid::uniform({4, 1});
    CHECK(thrown_code([&] { kld(a, b); }) == Errc::shape_mismatch);
}

TEST_CASE("cc: self-correlation, anti-symmetric case, degenerate input") {
    Rng rng(3);
    SaliencyGrid a = random_grid({4, 4}, rng);
    CHECK(cc(a, a) == doctest::Approx(1.0).epsilon(1e-9));

    SaliencyGrid x({2, 1}, {0.3, 0.7});
    SaliencyGrid y({2, 1}, {0.7, 0.3});
    CHECK(cc(x, y) == doctest::Approx(-1.0).epsilon(1e-12));

    SaliencyGrid ramp({4, 1}, {0.1, 0.2, 0.3, 0.4});
    SaliencyGrid flat = SaliencyGrid::uniform({4, 1});
    CHECK(thrown_code([&] { cc(ramp, flat); }) == Errc::zero_variance);
}

TEST_CASE("sim: identity, disjoint support, arithmetic oracle") {
    Rng rng(4);
    SaliencyGrid p = random_grid({3, 3}, rng);
    CHECK(sim(p, p) == doctest::Approx(1.0).epsilon(1e-12));

    CHECK(sim(SaliencyGrid::delta({4, 1}, {0, 0}), SaliencyGrid::delta({4, 1}, {2, 0})) == 0.0);

    SaliencyGrid a({2, 1}, {0.5, 0.5});
    SaliencyGrid b({2, 1}, {0.25, 0.75});
    CHECK(sim(a, b) == 0.75);
}

TEST_CASE("sim and cc are symmetric") {
    Rng rng(5);
    for (int trial = 0; trial < 20; ++trial) {
        SaliencyGrid a = random_grid({5, 3}, rng);
        SaliencyGrid b = random_grid({5, 3}, rng);
        CHECK(sim(a, b) == sim(b, a));
        CHECK(cc(a, b) == doctest::Approx(cc(b, a)).epsilon(1e-12));
    }
}

TEST_CASE("kld, cc, sim are flatten-order invariant") {
    Rng rng(6);
    SaliencyGrid a = random_grid({7, 4}, rng);
    SaliencyGrid b = random_grid({7, 4}, rng);
    SaliencyGrid at = transpose(a);
    SaliencyGrid bt = transpose(b);
    CHECK(kld(a, b) == doctest::Approx(kld(at, bt)).epsilon(1e-12));
    CHECK(cc(a, b) == doctest::Approx(cc(at, bt)).epsilon(1e-12));
    CHECK(sim(a, b) == doctest::Approx(sim(at, bt)).epsilon(1e-12));
}

TEST_CASE("nss: arithmetic oracle at the extremes of a 4-cell ramp") {
    SaliencyGrid ramp = normalize({4, 1}, {1.0, 2.0, 3.0, 4.0});
    const double expected = (4.0 - 2.5) / std::sqrt(1.25);
    CHECK(nss(ramp, fixations_at({{3, 0}})) == doctest::Approx(expected).epsilon(1e-9));
    CHECK(nss(ramp, fixations_at({{3, 0}})) == doctest::Approx(1.341641).epsilon(1e-6));
    CHECK(nss(ramp, fixations_at({{0, 0}})) == doctest::Approx(-expected).epsilon(1e-9));
}

TEST_CASE("nss: fixations covering every cell average to zero") {
    Rng rng(7);
    SaliencyGrid g = random_grid({4, 3}, rng);
    FixationSet all;
    for (int r = 0; r < 3; ++r)
        for (int c = 0; c < 4; ++c) all.points.push_back({c, r});
    CHECK(std::abs(nss(g, all)) < 1e-12);
}

TEST_CASE("nss: invariant to positive affine transforms of the map") {
    Rng rng(8);
    for (int trial = 0; trial < 20; ++trial) {
        SaliencyGrid g = random_grid({6, 6}, rng);
        FixationSet fix;
        for (int i = 0; i < 5; ++i)
            fix.points.push_back({static_cast<int>(rng.below(6)), static_cast<int>(rng.below(6))});
        // mix_uniform applies exactly a positive affine map with alpha = 1 - eps.
        for (double eps : {0.2, 0.7})
            CHECK(nss(mix_uniform(g, eps), fix) == doctest::Approx(nss(g, fix)).epsilon(1e-9));
    }
}

TEST_CASE("nss: error conditions") {
    SaliencyGrid g = SaliencyGrid::uniform({3, 3});
    CHECK(thrown_code([&] { nss(g, fixations_at({{1, 1}})); }) == Errc::zero_variance);
    Rng rng(9);
    SaliencyGrid h = random_grid({3, 3}, rng);
    CHECK(thrown_code([&] { nss(h, FixationSet{}); }) == Errc::empty_fixations);
}

TEST_CASE("auc_judd: perfect ranking and chance level") {
    SaliencyGrid ramp = normalize({4, 1}, {1.0, 2.0, 3.0, 4.0});
    CHECK(auc_judd(ramp, fixations_at({{3, 0}})) == 1.0);

    SaliencyGrid flat = SaliencyGrid::uniform({5, 2});
    CHECK(auc_judd(flat, fixations_at({{0, 0}, {3, 1}})) == 0.5);
}

TEST_CASE("auc_judd: spec example matches the exhaustive oracle") {
    SaliencyGrid g({4, 1}, {0.1, 0.4, 0.2, 0.3});
    FixationSet fix = fixations_at({{1, 0}, {3, 0}});
    CHECK(auc_judd(g, fix) == auc_oracle(g, fix));
}

TEST_CASE("auc_judd: equals the brute-force oracle on random small instances") {
    Rng rng(10);
    for (int trial = 0; trial < 100; ++trial) {
        const int w = 2 + static_cast<int>(rng.below(15));
        SaliencyGrid g = random_grid({w, 1}, rng);
        FixationSet fix;
        const int nf = 1 + static_cast<int>(rng.below(static_cast<std::uint64_t>(w)));
        for (int i = 0; i < nf; ++i) fix.points.push_back({static_cast<int>(rng.below(static_cast<std::uint64_t>(w))), 0});
        CHECK(auc_judd(g, fix) == auc_oracle(g, fix));
    }
}

TEST_CASE("auc_judd: invariant under strictly increasing transforms") {
    Rng rng(11);
    for (int trial = 0; trial < 20; ++trial) {
        SaliencyGrid g = random_grid({5, 4}, rng);
        FixationSet fix;
        for (int i = 0; i < 4; ++i)
            fix.points.push_back({static_cast<int>(rng.below(5)), static_cast<int>(rng.below(4))});

        // Rank map: exactly monotone in the original values, still a pdf.
        std::vector<double> sorted = g.values();
        std::sort(sorted.begin(), sorted.end());
        sorted.erase(std::unique(sorted.begin(), sorted.end()), sorted.end());
        std::vector<double> ranked(g.values().size());
        for (std::size_t i = 0; i < ranked.size(); ++i) {
            const auto it = std::lower_bound(sorted.begin(), sorted.end(), g[i]);
            ranked[i] = static_cast<double>(it - sorted.begin()) + 1.0;
        }
        SaliencyGrid rank_grid = normalize(g.shape(), ranked);
        CHECK(auc_judd(rank_grid, fix) == auc_judd(g, fix));
    }
}

TEST_CASE("eval_discrepancy: kinds delegate to their metrics") {
    Rng rng(12);
    SaliencyGrid pred = random_grid({4, 4}, rng);
    SaliencyGrid ref = random_grid({4, 4}, rng);
    FixationSet fix = fixations_at({{2, 2}, {0, 1}});

    CHECK(eval_discrepancy(Discrepancy::KLD(), pred, ref, nullptr) == kld(ref, pred));
    CHECK(eval_discrepancy(Discrepancy::NegCC(), pred, ref, nullptr) == -cc(pred, ref));
    CHECK(eval_discrepancy(Discrepancy::NegNSS(), pred, ref, &fix) == -nss(pred, fix));

    const Discrepancy mixed = Discrepancy::Mix(1.0, 0.1, 0.1);
    CHECK(eval_discrepancy(mixed, pred, ref, &fix) ==
          doctest::Approx(kld(ref, pred) - 0.1 * cc(pred, ref) - 0.1 * nss(pred, fix)).epsilon(1e-12));
}

TEST_CASE("eval_discrepancy: mix of identical maps with full fixation cover") {
    SaliencyGrid g = normalize({4, 1}, {1.0, 2.0, 3.0, 4.0});
    FixationSet all;
    for (int c = 0; c < 4; ++c) all.points.push_back({c, 0});
    const double v = eval_discrepancy(Discrepancy::Mix(1.0, 0.1, 0.1), g, g, &all);
    CHECK(v == doctest::Approx(-0.1).epsilon(1e-9));

    // NEG_NSS with the fixation at the maximum: sign flip of the nss oracle.
    const FixationSet at_max = fixations_at({{3, 0}});
    CHECK(eval_discrepancy(Discrepancy::NegNSS(), g, g, &at_max) == doctest::Approx(-1.341641).epsilon(1e-6));
}

TEST_CASE("eval_discrepancy: KLD ignores fixations, NSS requires them") {
    Rng rng(13);
    SaliencyGrid pred = random_grid({3, 3}, rng);
    SaliencyGrid ref = random_grid({3, 3}, rng);
    CHECK(eval_discrepancy(Discrepancy::KLD(), pred, ref, nullptr) == kld(ref, pred));
    CHECK(thrown_code([&] { eval_discrepancy(Discrepancy::NegNSS(), pred, ref, nullptr); }) ==
          Errc::missing_fixations);
    CHECK(thrown_code([&] { eval_discrepancy(Discrepancy::Mix(1, 0.1, 0.1), pred, ref, nullptr); }) ==
          Errc::missing_fixations);
    // Zero NSS weight: fixations not needed.
    CHECK(eval_discrepancy(Discrepancy::Mix(1, 0.1, 0), pred, ref, nullptr) ==
          doctest::Approx(kld(ref, pred) - 0.1 * cc(pred, ref)).epsilon(1e-12));
}

TEST_CASE("discrepancy: string round trip") {
    for (const Discrepancy& d : {Discrepancy::KLD(), Discrepancy::NegCC(), Discrepancy::NegNSS(),
                                 Discrepancy::Mix(1.0, 0.1, 0.1), Discrepancy::Mix(0.5, 0.25, 0.0)}) {
        CHECK(Discrepancy::parse(d.to_string()) == d);
    }
    CHECK(thrown_code([] { Discrepancy::parse("bogus"); }) == Errc::parse_error);
}

TEST_SUITE_END();
