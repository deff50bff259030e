#pragma once

#include <stdexcept>
#include <string>

namespace natsal {

enum class Errc {
    all_zero,
    negative_entry,
    bad_coefficient,
    shape_mismatch,
    zero_variance,
    empty_fixations,
    zero_count,
    too_few_observers,
    too_few_realizations,
    stats_mismatch,
    length_mismatch,
    missing_stats,
    missing_fixations,
    id_mismatch,
    invariant_violation,
    parse_error,
    io_error,
    bad_argument,
    too_short,
};

const char* errc_name(Errc c);

class Error : public std::runtime_error {
public:
    Error(Errc code, const std::string& what)
        : std::runtime_error(std::string(errc_name(code)) + ": " + what), code_(code) {}

    Errc code() const noexcept { return code_; }

private:
    Errc code_;
};

[[noreturn]] inline void fail(Errc code, const std::string& what) { throw Error(code, what); }

} // namespace natsal
