#pragma once

#include <stdexcept>
#include <string>

namespace leadlag {

// Failure categories. The CLI maps these onto process exit codes
// (validation -> 3, numerical/degenerate -> 4, budget -> 5).
enum class errc {
    invalid_parameter,
    non_monotone,
    duplicate_timestamp,
    out_of_window,
    empty_series,
    alpha_excluded,
    range_too_narrow,
    degenerate_denominator,
    empty_grid,
    empty_set,
    empty_diffs,
    all_scores_infinite,
    insufficient_points,
    unstable_spec,
    budget_exceeded,
    unsupported_rates,
    pole,
    oracle_unavailable,
    unknown_scenario,
    parse_error,
};

class error : public std::runtime_error {
public:
    error(errc code, const std::string& what) : std::runtime_error(what), code_(code) {}

    errc code() const noexcept { return code_; }

    // true for malformed-input failures, false for numerical/degenerate ones
    bool is_validation() const noexcept {
        switch (code_) {
        case errc::invalid_parameter:
        case errc::non_monotone:
        case errc::duplicate_timestamp:
        case errc::out_of_window:
        case errc::empty_series:
        case errc::unknown_scenario:
        case errc::parse_error:
            return true;
        default:
            return false;
        }
    }

private:
    errc code_;
};

[[noreturn]] inline void fail(errc code, const std::string& what) { throw error(code, what); }

} // namespace leadlag
