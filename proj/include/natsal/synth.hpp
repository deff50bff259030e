#pragma once

#include <span>
#include <string>
#include <vector>

#include "natsal/grid.hpp"
#include "natsal/rng.hpp"

namespace natsal {

struct GmmComponent {
    double center_col = 0.0;
    double center_row = 0.0;
    double sigma = 1.0;  // isotropic, grid cells
    double weight = 1.0; // positive; a common scale factor is absorbed by normalization
};

struct GmmSpec {
    std::vector<GmmComponent> components;
};

// Evaluates the mixture density at cell centers and normalizes.
SaliencyGrid gmm_truth(const GmmSpec& spec, GridShape shape);

// Reproducible random truth suite. Component centers are pushed at least
// 2*(sigma_i + sigma_j) apart by rejection (100 attempts, then accept).
std::vector<GmmSpec> random_gmm_suite(int count, int min_components, int max_components, GridShape shape, Rng& rng);

// Shifts every component mean by an independent uniform offset in
// [-max_shift, max_shift] per axis, clamped to the grid. Used to emulate
// frames of one video sharing a slowly varying truth.
GmmSpec perturb_means(const GmmSpec& spec, double max_shift, GridShape shape, Rng& rng);

// The two fixed 1D reference truths on 100 cells: a single Gaussian at
// cell 50 with sigma 5, and a two-component mixture at cells 25 and 75 with
// weights 0.3/0.7 and sigma 5.
GmmSpec toy_unimodal_spec();
GmmSpec toy_bimodal_spec();
inline constexpr GridShape kToyShape{100, 1};
inline constexpr double kToyReconstructionSigma = 5.0;

struct ToyRow {
    std::string truth; // "unimodal" or "bimodal"
    int n = 0;
    double e_kld = 0.0;
    double std_kld = 0.0;
    std::vector<double> mean_map; // pointwise E[x~]
    std::vector<double> std_map;  // pointwise Std[x~]
};

// Monte-Carlo study of KLD(x, x~) for the two reference truths.
std::vector<ToyRow> toy_study(std::span<const int> n_values, int realizations, Rng& rng);

} // namespace natsal
