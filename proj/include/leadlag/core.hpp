#pragma once

// Event-series containers, smoothing kernels and pairwise lag enumeration
// over sorted timestamp streams.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <string>
#include <utility>
#include <vector>

#include "leadlag/errors.hpp"

namespace leadlag {

// One asset's event timestamps observed on the window (0, T].
// Times are strictly increasing (the point process is simple); an event at
// exactly 0 is rejected, an event at exactly T is kept.
class EventSeries {
public:
    EventSeries(std::vector<double> times, double window_end)
        : times_(std::move(times)), window_end_(window_end) {
        if (!std::isfinite(window_end_) || window_end_ <= 0.0)
            fail(errc::invalid_parameter, "window length T must be finite and > 0");
        std::sort(times_.begin(), times_.end());
        for (std::size_t i = 0; i < times_.size(); ++i) {
            const double t = times_[i];
            if (!std::isfinite(t))
                fail(errc::non_monotone, "non-finite timestamp at sorted index " + std::to_string(i));
            if (i > 0 && t == times_[i - 1])
                fail(errc::duplicate_timestamp,
                     "duplicate timestamp " + std::to_string(t) + " (simple process required)");
            if (t <= 0.0 || t > window_end_)
                fail(errc::out_of_window,
                     "timestamp " + std::to_string(t) + " outside (0, " + std::to_string(window_end_) + "]");
        }
    }

    const std::vector<double>& times() const noexcept { return times_; }
    double window_end() const noexcept { return window_end_; }
    std::size_t size() const noexcept { return times_.size(); }
    bool empty() const noexcept { return times_.empty(); }

    // T below 1 is legal but outside the asymptotic regime the estimators
    // assume; callers may want to surface a warning.
    bool short_window() const noexcept { return window_end_ < 1.0; }

private:
    std::vector<double> times_;
    double window_end_;
};

inline EventSeries validate_series(std::vector<double> raw_times, double window_end) {
    return EventSeries(std::move(raw_times), window_end);
}

// A pair of series sharing one observation window.
struct BivariateSample {
    EventSeries s1;
    EventSeries s2;

    BivariateSample(EventSeries a, EventSeries b) : s1(std::move(a)), s2(std::move(b)) {
        if (s1.window_end() != s2.window_end())
            fail(errc::invalid_parameter, "series must share the same window length T");
    }

    double window_end() const noexcept { return s1.window_end(); }

    void require_events(const char* who) const {
        if (s1.empty() || s2.empty())
            fail(errc::empty_series, std::string(who) + " requires at least one event in each series");
    }
};

enum class KernelKind { triangular, uniform };

// Smoothing kernel: non-negative, supported on [-1, 1], integrates to 1.
struct Kernel {
    KernelKind kind = KernelKind::triangular;

    double operator()(double x) const noexcept {
        const double a = std::abs(x);
        if (a > 1.0) return 0.0;
        return kind == KernelKind::triangular ? 1.0 - a : 0.5;
    }
};

inline double kernel_eval(Kernel k, double x) noexcept { return k(x); }

inline const char* kernel_name(KernelKind k) noexcept {
    return k == KernelKind::triangular ? "tri" : "uniform";
}

// All lag differences y - x falling in [lo, hi], sorted ascending,
// counted with multiplicity.
struct DifferenceMultiset {
    std::vector<double> diffs;
    double lo = 0.0;
    double hi = 0.0;

    std::size_t size() const noexcept { return diffs.size(); }
};

namespace detail {

// Index range [first, last) of ys with lo <= ys[i] - x <= hi. Binary search
// on x + lo / x + hi can be off by an ulp relative to the rounded difference,
// so the boundaries are fixed up against the subtracted values themselves.
inline std::pair<std::size_t, std::size_t> lag_window(const std::vector<double>& ys, double x,
                                                      double lo, double hi) {
    auto first = std::lower_bound(ys.begin(), ys.end(), x + lo);
    auto last = std::upper_bound(first, ys.end(), x + hi);
    while (first != ys.begin() && *(first - 1) - x >= lo) --first;
    while (first != ys.end() && *first - x < lo) ++first;
    while (last != ys.end() && *last - x <= hi) ++last;
    while (last != first && *(last - 1) - x > hi) --last;
    return {static_cast<std::size_t>(first - ys.begin()), static_cast<std::size_t>(last - ys.begin())};
}

} // namespace detail

// Enumerates {y - x : x in s1, y in s2, lo <= y - x <= hi} by per-x binary
// search in s2; O(n1 log n2 + P) to enumerate plus O(P log P) to sort.
inline DifferenceMultiset pair_differences(const BivariateSample& sample, double lo, double hi) {
    if (!(lo < hi)) fail(errc::invalid_parameter, "pair_differences requires lo < hi");
    const auto& xs = sample.s1.times();
    const auto& ys = sample.s2.times();
    std::vector<double> out;
    for (double x : xs) {
        auto [first, last] = detail::lag_window(ys, x, lo, hi);
        for (std::size_t j = first; j < last; ++j) out.push_back(ys[j] - x);
    }
    std::sort(out.begin(), out.end());
    return DifferenceMultiset{std::move(out), lo, hi};
}

// Rate exponent beta_alpha = max(alpha, 2*alpha - 1); alpha = 1 is excluded
// (the local power |u|^{alpha-1} degenerates to a constant there).
inline double beta_alpha(double alpha) {
    if (!(alpha > 0.0)) fail(errc::invalid_parameter, "beta_alpha requires alpha > 0");
    if (alpha == 1.0) fail(errc::alpha_excluded, "alpha = 1 is excluded");
    return std::max(alpha, 2.0 * alpha - 1.0);
}

} // namespace leadlag
