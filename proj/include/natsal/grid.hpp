#pragma once

#include <vector>

#include "natsal/errors.hpp"

namespace natsal {

struct GridShape {
    int width = 0;
    int height = 0;

    int cells() const { return width * height; }
    bool operator==(const GridShape&) const = default;
};

// 0-based discrete cell coordinate. col indexes the fast (row-major) axis.
struct GridPoint {
    int col = 0;
    int row = 0;

    bool operator==(const GridPoint&) const = default;
};

// Dense probability map over a 2D grid (height = 1 gives the 1D case).
// Values are non-negative doubles summing to 1; immutable after construction.
class SaliencyGrid {
public:
    // Trivial 1x1 map; keeps aggregates default-constructible.
    SaliencyGrid() : shape_{1, 1}, values_{1.0} {}

    // Validates the pdf invariants: non-negative entries, sum within 1e-9 of 1.
    SaliencyGrid(GridShape shape, std::vector<double> values);

    static SaliencyGrid delta(GridShape shape, GridPoint at);
    static SaliencyGrid uniform(GridShape shape);

    int width() const { return shape_.width; }
    int height() const { return shape_.height; }
    GridShape shape() const { return shape_; }
    int cells() const { return shape_.cells(); }

    const std::vector<double>& values() const { return values_; }
    double operator[](std::size_t flat) const { return values_[flat]; }
    double at(int col, int row) const { return values_[static_cast<std::size_t>(row) * shape_.width + col]; }
    double at(GridPoint p) const { return at(p.col, p.row); }

    bool contains(GridPoint p) const {
        return p.col >= 0 && p.col < shape_.width && p.row >= 0 && p.row < shape_.height;
    }

    bool operator==(const SaliencyGrid&) const = default;

private:
    struct unchecked_t {};
    SaliencyGrid(GridShape shape, std::vector<double> values, unchecked_t)
        : shape_(shape), values_(std::move(values)) {}

    GridShape shape_;
    std::vector<double> values_;

    friend SaliencyGrid normalize(GridShape, std::vector<double>);
};

// Scales a non-negative array to sum exactly to a fixed point of itself
// (repeated division until the sum is bit-stable), so normalize is idempotent.
SaliencyGrid normalize(GridShape shape, std::vector<double> raw);
SaliencyGrid normalize(const SaliencyGrid& g);

// Separable discrete Gaussian blur, kernel truncated at radius ceil(3*sigma)
// and at the grid edge (zero padding); total mass renormalized afterwards.
// sigma = 0 returns the input unchanged.
SaliencyGrid gaussian_blur(const SaliencyGrid& g, double sigma);

// (1-eps)*g + eps*uniform.
SaliencyGrid mix_uniform(const SaliencyGrid& g, double eps);

SaliencyGrid transpose(const SaliencyGrid& g);

// Blur on raw (not necessarily normalized) values; building block for
// gaussian_blur and for fixation-histogram reconstruction.
std::vector<double> blur_raw(GridShape shape, const std::vector<double>& values, double sigma);

// The truncated 1D kernel exp(-k^2 / (2 sigma^2)) for k in [-r, r], r = ceil(3 sigma),
// scaled to sum 1. Exposed for oracle-style recomputation in tests.
std::vector<double> gaussian_kernel(double sigma);

} // namespace natsal
