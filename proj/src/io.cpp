#include "natsal/io.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

namespace natsal {

namespace {

std::ifstream open_in(const std::string& path) {
    std::ifstream in(path);
    if (!in) fail(Errc::io_error, "cannot open " + path);
    return in;
}

std::ofstream open_out(const std::string& path) {
    std::ofstream out(path);
    if (!out) fail(Errc::io_error, "cannot write " + path);
    return out;
}

std::pair<GridShape, std::vector<double>> parse_sgrid(const std::string& path) {
    std::ifstream in = open_in(path);
    std::string magic;
    int version = 0;
    GridShape shape;
    if (!(in >> magic >> version >> shape.width >> shape.height) || magic != "SGRID" || version != 1)
        fail(Errc::parse_error, path + ": not an SGRID 1 file");
    if (shape.width < 1 || shape.height < 1) fail(Errc::parse_error, path + ": bad grid shape");
    std::vector<double> values(static_cast<std::size_t>(shape.cells()));
    for (double& v : values)
        if (!(in >> v)) fail(Errc::parse_error, path + ": truncated value section");
    return {shape, std::move(values)};
}

int parse_int_field(const std::string& field, const std::string& path, int line_no) {
    std::size_t pos = 0;
    int value = 0;
    try {
        value = std::stoi(field, &pos);
    } catch (const std::exception&) {
        fail(Errc::parse_error, path + ": bad integer on line " + std::to_string(line_no));
    }
    if (pos != field.size()) fail(Errc::parse_error, path + ": bad integer on line " + std::to_string(line_no));
    return value;
}

std::vector<std::string> split_csv_line(const std::string& line) {
    std::vector<std::string> fields;
    std::string field;
    std::istringstream ss(line);
    while (std::getline(ss, field, ',')) fields.push_back(field);
    if (!line.empty() && line.back() == ',') fields.push_back("");
    return fields;
}

} // namespace

std::string format_double(double x) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", x);
    // Prefer the shortest representation that still round-trips.
    for (int prec = 1; prec < 17; ++prec) {
        char probe[40];
        std::snprintf(probe, sizeof(probe), "%.*g", prec, x);
        double back = 0.0;
        std::sscanf(probe, "%lg", &back);
        if (back == x) return probe;
    }
    return buf;
}

void write_sgrid_array(const std::string& path, GridShape shape, std::span<const double> values) {
    if (values.size() != static_cast<std::size_t>(shape.cells()))
        fail(Errc::shape_mismatch, "value count does not match grid shape");
    std::ofstream out = open_out(path);
    out << "SGRID 1 " << shape.width << ' ' << shape.height << '\n';
    for (int r = 0; r < shape.height; ++r) {
        for (int c = 0; c < shape.width; ++c) {
            if (c) out << ' ';
            out << format_double(values[static_cast<std::size_t>(r) * shape.width + c]);
        }
        out << '\n';
    }
    if (!out) fail(Errc::io_error, "write failed: " + path);
}

void write_sgrid(const std::string& path, const SaliencyGrid& grid) {
    write_sgrid_array(path, grid.shape(), grid.values());
}

std::pair<GridShape, std::vector<double>> read_sgrid_array(const std::string& path) { return parse_sgrid(path); }

SaliencyGrid read_sgrid(const std::string& path) {
    auto [shape, values] = parse_sgrid(path);
    double sum = 0.0;
    for (double v : values) {
        if (v < 0.0) fail(Errc::parse_error, path + ": negative value");
        sum += v;
    }
    if (std::abs(sum - 1.0) > 1e-6) fail(Errc::parse_error, path + ": values do not sum to 1");
    return normalize(shape, std::move(values));
}

void write_fixcsv(const std::string& path, std::span<const FixationRecord> records) {
    std::ofstream out = open_out(path);
    out << "frame_id,observer_id,col,row\n";
    for (const FixationRecord& r : records)
        out << r.frame_id << ',' << r.observer_id << ',' << r.col << ',' << r.row << '\n';
    if (!out) fail(Errc::io_error, "write failed: " + path);
}

std::vector<FixationRecord> read_fixcsv(const std::string& path, GridShape shape) {
    std::ifstream in = open_in(path);
    std::string line;
    if (!std::getline(in, line) || line != "frame_id,observer_id,col,row")
        fail(Errc::parse_error, path + ": missing FIXCSV header");
    std::vector<FixationRecord> records;
    int line_no = 1;
    while (std::getline(in, line)) {
        ++line_no;
        if (line.empty()) continue;
        std::vector<std::string> fields = split_csv_line(line);
        if (fields.size() != 4) fail(Errc::parse_error, path + ": wrong field count on line " + std::to_string(line_no));
        FixationRecord r;
        r.frame_id = parse_int_field(fields[0], path, line_no);
        r.observer_id = parse_int_field(fields[1], path, line_no);
        r.col = parse_int_field(fields[2], path, line_no);
        r.row = parse_int_field(fields[3], path, line_no);
        if (r.col < 0 || r.col >= shape.width || r.row < 0 || r.row >= shape.height)
            fail(Errc::parse_error, path + ": fixation outside the declared grid on line " + std::to_string(line_no));
        records.push_back(r);
    }
    return records;
}

void write_nstats(const std::string& path, std::span<const NoiseStatsRecord> records) {
    std::ofstream out = open_out(path);
    out << "frame_id,n,discrepancy,mean,variance,m\n";
    for (const NoiseStatsRecord& r : records) {
        out << r.frame_id << ',' << r.stats.observer_count << ',' << r.stats.discrepancy.to_string() << ','
            << format_double(r.stats.mean) << ',' << format_double(r.stats.variance) << ',' << r.stats.realizations
            << '\n';
    }
    if (!out) fail(Errc::io_error, "write failed: " + path);
}

std::vector<NoiseStatsRecord> read_nstats(const std::string& path) {
    std::ifstream in = open_in(path);
    std::string line;
    if (!std::getline(in, line) || line != "frame_id,n,discrepancy,mean,variance,m")
        fail(Errc::parse_error, path + ": missing NSTATS header");
    std::vector<NoiseStatsRecord> records;
    int line_no = 1;
    while (std::getline(in, line)) {
        ++line_no;
        if (line.empty()) continue;
        std::vector<std::string> fields = split_csv_line(line);
        if (fields.size() != 6) fail(Errc::parse_error, path + ": wrong field count on line " + std::to_string(line_no));
        NoiseStatsRecord r;
        r.frame_id = parse_int_field(fields[0], path, line_no);
        r.stats.observer_count = parse_int_field(fields[1], path, line_no);
        r.stats.discrepancy = Discrepancy::parse(fields[2]);
        try {
            r.stats.mean = std::stod(fields[3]);
            r.stats.variance = std::stod(fields[4]);
        } catch (const std::exception&) {
            fail(Errc::parse_error, path + ": bad real on line " + std::to_string(line_no));
        }
        r.stats.realizations = parse_int_field(fields[5], path, line_no);
        if (r.stats.variance < 0.0) fail(Errc::parse_error, path + ": negative variance");
        records.push_back(r);
    }
    return records;
}

} // namespace natsal
