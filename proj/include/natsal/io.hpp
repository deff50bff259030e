#pragma once

#include <span>
#include <string>
#include <vector>

#include "natsal/grid.hpp"
#include "natsal/noise_stats.hpp"
#include "natsal/reconstruct.hpp"

namespace natsal {

// --- SGRID v1 ---------------------------------------------------------
// Header line "SGRID 1 <width> <height>" followed by width*height
// whitespace-separated decimal reals in row-major order.

void write_sgrid(const std::string& path, const SaliencyGrid& grid);

// Strict probability-map reader: rejects negative values and files whose
// sum deviates from 1 by more than 1e-6.
SaliencyGrid read_sgrid(const std::string& path);

// Container-level access for non-pdf arrays (e.g. pointwise std maps).
void write_sgrid_array(const std::string& path, GridShape shape, std::span<const double> values);
std::pair<GridShape, std::vector<double>> read_sgrid_array(const std::string& path);

// --- FIXCSV v1 --------------------------------------------------------
// CSV with header "frame_id,observer_id,col,row", one row per fixation.

struct FixationRecord {
    int frame_id = 0;
    int observer_id = 0;
    int col = 0;
    int row = 0;
};

void write_fixcsv(const std::string& path, std::span<const FixationRecord> records);

// Rejects coordinates outside the declared grid shape.
std::vector<FixationRecord> read_fixcsv(const std::string& path, GridShape shape);

// --- NSTATS v1 --------------------------------------------------------
// CSV with header "frame_id,n,discrepancy,mean,variance,m".

struct NoiseStatsRecord {
    int frame_id = 0;
    NoiseStats stats;
};

void write_nstats(const std::string& path, std::span<const NoiseStatsRecord> records);
std::vector<NoiseStatsRecord> read_nstats(const std::string& path);

// Shared formatting helper: shortest decimal that round-trips a double.
std::string format_double(double x);

} // namespace natsal
