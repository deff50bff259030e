#include "natsal/grid.hpp"

#include <algorithm>
#include <cmath>
#include <cstddef>

namespace natsal {

namespace {

void check_shape(GridShape shape) {
    if (shape.width < 1 || shape.height < 1)
        fail(Errc::bad_argument, "grid shape must be at least 1x1");
}

double sum_of(const std::vector<double>& v) {
    double s = 0.0;
    for (double x : v) s += x;
    return s;
}

} // namespace

SaliencyGrid::SaliencyGrid(GridShape shape, std::vector<double> values) : shape_(shape), values_(std::move(values)) {
    check_shape(shape);
    if (values_.size() != static_cast<std::size_t>(shape.cells()))
        fail(Errc::shape_mismatch, "value count does not match grid shape");
    for (double x : values_)
        if (x < 0.0) fail(Errc::negative_entry, "grid value below zero");
    double s = sum_of(values_);
    if (std::abs(s - 1.0) > 1e-9) fail(Errc::invariant_violation, "grid values do not sum to 1");
}

SaliencyGrid SaliencyGrid::delta(GridShape shape, GridPoint at) {
    check_shape(shape);
    std::vector<double> v(static_cast<std::size_t>(shape.cells()), 0.0);
    if (at.col < 0 || at.col >= shape.width || at.row < 0 || at.row >= shape.height)
        fail(Errc::bad_argument, "delta location outside grid");
    v[static_cast<std::size_t>(at.row) * shape.width + at.col] = 1.0;
    return SaliencyGrid(shape, std::move(v), unchecked_t{});
}

SaliencyGrid SaliencyGrid::uniform(GridShape shape) {
    check_shape(shape);
    std::vector<double> v(static_cast<std::size_t>(shape.cells()), 1.0 / shape.cells());
    return SaliencyGrid(shape, std::move(v), unchecked_t{});
}

SaliencyGrid normalize(GridShape shape, std::vector<double> raw) {
    check_shape(shape);
    if (raw.size() != static_cast<std::size_t>(shape.cells()))
        fail(Errc::shape_mismatch, "value count does not match grid shape");
    bool any_positive = false;
    for (double x : raw) {
        if (x < 0.0) fail(Errc::negative_entry, "cannot normalize a grid with negative entries");
        if (x > 0.0) any_positive = true;
    }
    if (!any_positive) fail(Errc::all_zero, "cannot normalize an all-zero grid");

    // Iterate the division to a bit-stable fixed point so the operation is
    // exactly idempotent: accept a division only while it shrinks |sum - 1|
    // (ties resolve to the lexicographically smaller vector, then stop).
    for (;;) {
        const double s = sum_of(raw);
        if (s == 1.0) break;
        std::vector<double> divided(raw.size());
        for (std::size_t i = 0; i < raw.size(); ++i) divided[i] = raw[i] / s;
        const double s2 = sum_of(divided);
        const double err = std::abs(s - 1.0);
        const double err2 = std::abs(s2 - 1.0);
        if (err2 < err || (err2 == err && divided < raw)) {
            raw = std::move(divided);
            continue;
        }
        break;
    }
    return SaliencyGrid(shape, std::move(raw), SaliencyGrid::unchecked_t{});
}

SaliencyGrid normalize(const SaliencyGrid& g) { return normalize(g.shape(), g.values()); }

std::vector<double> gaussian_kernel(double sigma) {
    if (sigma < 0.0) fail(Errc::bad_argument, "sigma must be non-negative");
    if (sigma == 0.0) return {1.0};
    int radius = static_cast<int>(std::ceil(3.0 * sigma));
    std::vector<double> k(static_cast<std::size_t>(2 * radius + 1));
    double s = 0.0;
    for (int i = -radius; i <= radius; ++i) {
        double w = std::exp(-0.5 * (static_cast<double>(i) * i) / (sigma * sigma));
        k[static_cast<std::size_t>(i + radius)] = w;
        s += w;
    }
    for (double& w : k) w /= s;
    return k;
}

std::vector<double> blur_raw(GridShape shape, const std::vector<double>& values, double sigma) {
    if (sigma == 0.0) return values;
    const std::vector<double> kernel = gaussian_kernel(sigma);
    const int radius = static_cast<int>(kernel.size() / 2);
    const int w = shape.width;
    const int h = shape.height;

    // Horizontal then vertical pass, zero padding at the edges.
    std::vector<double> tmp(values.size(), 0.0);
    for (int r = 0; r < h; ++r) {
        const double* in = values.data() + static_cast<std::size_t>(r) * w;
        double* out = tmp.data() + static_cast<std::size_t>(r) * w;
        for (int c = 0; c < w; ++c) {
            double acc = 0.0;
            int lo = std::max(-radius, -c);
            int hi = std::min(radius, w - 1 - c);
            for (int k = lo; k <= hi; ++k) acc += in[c + k] * kernel[static_cast<std::size_t>(k + radius)];
            out[c] = acc;
        }
    }
    std::vector<double> out(values.size(), 0.0);
    for (int c = 0; c < w; ++c) {
        for (int r = 0; r < h; ++r) {
            double acc = 0.0;
            int lo = std::max(-radius, -r);
            int hi = std::min(radius, h - 1 - r);
            for (int k = lo; k <= hi; ++k)
                acc += tmp[static_cast<std::size_t>(r + k) * w + c] * kernel[static_cast<std::size_t>(k + radius)];
            out[static_cast<std::size_t>(r) * w + c] = acc;
        }
    }
    return out;
}

SaliencyGrid gaussian_blur(const SaliencyGrid& g, double sigma) {
    if (sigma < 0.0) fail(Errc::bad_argument, "sigma must be non-negative");
    if (sigma == 0.0) return g;
    return normalize(g.shape(), blur_raw(g.shape(), g.values(), sigma));
}

SaliencyGrid mix_uniform(const SaliencyGrid& g, double eps) {
    if (eps < 0.0 || eps > 1.0) fail(Errc::bad_coefficient, "mixing coefficient outside [0, 1]");
    if (eps == 0.0) return g;
    std::vector<double> v = g.values();
    const double u = eps / g.cells();
    for (double& x : v) x = (1.0 - eps) * x + u;
    return normalize(g.shape(), std::move(v));
}

SaliencyGrid transpose(const SaliencyGrid& g) {
    GridShape t{g.height(), g.width()};
    std::vector<double> v(g.values().size());
    for (int r = 0; r < g.height(); ++r)
        for (int c = 0; c < g.width(); ++c)
            v[static_cast<std::size_t>(c) * t.width + r] = g.at(c, r);
    return SaliencyGrid(t, std::move(v));
}

} // namespace natsal
