#include "natsal/errors.hpp"

namespace natsal {

const char* errc_name(Errc c) {
    switch (c) {
    case Errc::all_zero: return "AllZero";
    case Errc::negative_entry: return "NegativeEntry";
    case Errc::bad_coefficient: return "BadCoefficient";
    case Errc::shape_mismatch: return "ShapeMismatch";
    case Errc::zero_variance: return "ZeroVariance";
    case Errc::empty_fixations: return "EmptyFixations";
    case Errc::zero_count: return "ZeroCount";
    case Errc::too_few_observers: return "TooFewObservers";
    case Errc::too_few_realizations: return "TooFewRealizations";
    case Errc::stats_mismatch: return "StatsDiscrepancyMismatch";
    case Errc::length_mismatch: return "LengthMismatch";
    case Errc::missing_stats: return "MissingStats";
    case Errc::missing_fixations: return "MissingFixations";
    case Errc::id_mismatch: return "IdMismatch";
    case Errc::invariant_violation: return "InvariantViolation";
    case Errc::parse_error: return "ParseError";
    case Errc::io_error: return "IoError";
    case Errc::bad_argument: return "BadArgument";
    case Errc::too_short: return "TooShort";
    }
    return "UnknownError";
}

} // namespace natsal
