#pragma once

// Kernel estimator of the cross-pair correlation function, fast grid
// evaluation by scattering pair contributions onto nearby grid points, and
// exact maximization over the kink candidate set.

#include <algorithm>
#include <cmath>
#include <limits>
#include <span>
#include <vector>

#include "leadlag/core.hpp"
#include "leadlag/errors.hpp"

namespace leadlag {

// ghat evaluated on an ordered abscissa grid; scale = T / (n1 n2).
struct CpcfCurve {
    std::vector<double> grid;
    std::vector<double> values;
    double h = 0.0;
    double scale = 0.0;
};

// Global-maximizer locations of ghat on [-r, r]. Every point attains the
// maximum within tie_tol relative; points are ascending and nonempty.
struct MaximizerSet {
    std::vector<double> points;
    double value = 0.0;
    double tie_tol = 0.0;

    double min() const { return points.front(); }
    double max() const { return points.back(); }
    double diameter() const { return points.back() - points.front(); }

    // distance from z to the set
    double distance(double z) const {
        auto it = std::lower_bound(points.begin(), points.end(), z);
        double d = std::numeric_limits<double>::infinity();
        if (it != points.end()) d = std::min(d, *it - z);
        if (it != points.begin()) d = std::min(d, z - *(it - 1));
        return d;
    }
};

// Relative tolerance for declaring two curve values tied; exact float
// equality is brittle after reordered accumulation.
inline constexpr double kMaximizerTieTol = 1e-9;

// Point evaluation: (T / (n1 n2)) * sum over pairs with |y - x - u| <= h of
// K_h(y - x - u). Pairs are located by binary search per x.
inline double ghat_at(const BivariateSample& sample, Kernel k, double h, double u) {
    if (!(h > 0.0)) fail(errc::invalid_parameter, "bandwidth h must be > 0");
    sample.require_events("ghat_at");
    const auto& xs = sample.s1.times();
    const auto& ys = sample.s2.times();
    double acc = 0.0;
    for (double x : xs) {
        auto [first, last] = detail::lag_window(ys, x, u - h, u + h);
        for (std::size_t j = first; j < last; ++j) {
            const double d = ys[j] - x;
            if (std::abs(d - u) <= h) acc += k((d - u) / h);
        }
    }
    const double T = sample.window_end();
    const double n1 = static_cast<double>(xs.size()), n2 = static_cast<double>(ys.size());
    return acc * T / (n1 * n2 * h);
}

// Reference implementation summing over every (x, y) pair. Quadratic; kept
// as the independent slow route for equivalence checks.
inline double ghat_at_reference(const BivariateSample& sample, Kernel k, double h, double u) {
    if (!(h > 0.0)) fail(errc::invalid_parameter, "bandwidth h must be > 0");
    sample.require_events("ghat_at_reference");
    double acc = 0.0;
    for (double x : sample.s1.times())
        for (double y : sample.s2.times()) {
            const double d = y - x;
            if (std::abs(d - u) <= h) acc += k((d - u) / h);
        }
    const double T = sample.window_end();
    const double n1 = static_cast<double>(sample.s1.size()), n2 = static_cast<double>(sample.s2.size());
    return acc * T / (n1 * n2 * h);
}

// Grid evaluation: iterate relevant pairs once and scatter each kernel
// contribution onto the grid points within bandwidth reach. Accumulation
// order is fixed (x ascending, y ascending, grid ascending) so results are
// reproducible bit-for-bit. O(n1 log n2 + P (log M + M_h)).
inline CpcfCurve ghat_on_grid(const BivariateSample& sample, Kernel k, double h,
                              std::span<const double> grid) {
    if (!(h > 0.0)) fail(errc::invalid_parameter, "bandwidth h must be > 0");
    if (grid.empty()) fail(errc::empty_grid, "ghat_on_grid requires a nonempty grid");
    sample.require_events("ghat_on_grid");

    CpcfCurve curve;
    curve.grid.assign(grid.begin(), grid.end());
    curve.values.assign(grid.size(), 0.0);
    curve.h = h;

    const auto& xs = sample.s1.times();
    const auto& ys = sample.s2.times();
    const double u_min = grid.front(), u_max = grid.back();
    for (double x : xs) {
        auto [first, last] = detail::lag_window(ys, x, u_min - h, u_max + h);
        for (std::size_t j = first; j < last; ++j) {
            const double d = ys[j] - x;
            auto lo = std::lower_bound(curve.grid.begin(), curve.grid.end(), d - h);
            while (lo != curve.grid.begin() && std::abs(*(lo - 1) - d) <= h) --lo;
            for (auto it = lo; it != curve.grid.end() && *it - d <= h; ++it) {
                if (std::abs(d - *it) <= h)
                    curve.values[static_cast<std::size_t>(it - curve.grid.begin())] += k((d - *it) / h);
            }
        }
    }

    const double T = sample.window_end();
    const double n1 = static_cast<double>(xs.size()), n2 = static_cast<double>(ys.size());
    curve.scale = T / (n1 * n2);
    const double factor = curve.scale / h;
    for (double& v : curve.values) v *= factor;
    return curve;
}

// Candidate set on which a piecewise-linear ghat attains its maximum:
// {d, d - h, d + h : d a pair difference in [-r-h, r+h]} and the range
// endpoints, clipped to [-r, r], sorted, exact duplicates removed.
inline std::vector<double> kink_candidates(const BivariateSample& sample, double h, double r) {
    if (!(h > 0.0) || !(r > 0.0)) fail(errc::invalid_parameter, "kink_candidates requires h > 0 and r > 0");
    const DifferenceMultiset diffs = pair_differences(sample, -r - h, r + h);
    std::vector<double> cand;
    cand.reserve(3 * diffs.size() + 2);
    cand.push_back(-r);
    cand.push_back(r);
    for (double d : diffs.diffs)
        for (double v : {d - h, d, d + h})
            if (v >= -r && v <= r) cand.push_back(v);
    std::sort(cand.begin(), cand.end());
    cand.erase(std::unique(cand.begin(), cand.end()), cand.end());
    return cand;
}

struct ThetaHat {
    double theta = 0.0;
    MaximizerSet maximizers;
};

// Lead-lag estimate: evaluate ghat on the kink candidates, collect every
// grid maximizer within the tie tolerance, return the smallest (the
// deterministic tie-breaking rule used throughout).
inline ThetaHat theta_hat(const BivariateSample& sample, Kernel k, double h, double r) {
    sample.require_events("theta_hat");
    const std::vector<double> cand = kink_candidates(sample, h, r);
    const CpcfCurve curve = ghat_on_grid(sample, k, h, cand);

    double best = 0.0;
    for (double v : curve.values) best = std::max(best, v);

    ThetaHat out;
    out.maximizers.value = best;
    out.maximizers.tie_tol = kMaximizerTieTol;
    const double floor = best * (1.0 - kMaximizerTieTol);
    for (std::size_t i = 0; i < curve.values.size(); ++i)
        if (curve.values[i] >= floor) out.maximizers.points.push_back(curve.grid[i]);
    out.theta = out.maximizers.points.front();
    return out;
}

} // namespace leadlag
