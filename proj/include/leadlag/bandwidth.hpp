#pragma once

// Data-driven bandwidth selection: Lepski-type pairwise comparison of
// maximizer sets across a geometric bandwidth grid, and K-fold
// cross-validation with MSE-type and nearest-range losses.

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>
#include <vector>

#include "leadlag/core.hpp"
#include "leadlag/cpcf.hpp"
#include "leadlag/errors.hpp"

namespace leadlag {

struct LepskiConfig {
    double a = 10.0;        // geometric ratio of the bandwidth grid
    int j_min = 1;          // coarsest exponent
    double gamma_max = 2.0; // finest bandwidth scales as T^{-gamma_max}
    double A_T = 0.0;       // comparison threshold; <= 0 means log log T
};

inline double default_lepski_threshold(double T) { return std::log(std::log(T)); }

// Candidate bandwidths, strictly decreasing.
struct BandwidthGrid {
    std::vector<double> values;

    // {a^{-j} : j_min <= j <= ceil(log_a(T^gamma_max))}
    static BandwidthGrid geometric(const LepskiConfig& cfg, double T) {
        if (!(cfg.a > 1.0) || cfg.j_min < 1 || !(cfg.gamma_max > 0.0) || !(T >= 1.0))
            fail(errc::invalid_parameter, "bandwidth grid requires a > 1, j_min >= 1, gamma_max > 0, T >= 1");
        const double log_a = std::log(cfg.a);
        const auto j_max =
            static_cast<long>(std::ceil(cfg.gamma_max * std::log(T) / log_a - 1e-9));
        if (cfg.j_min > j_max)
            fail(errc::empty_grid, "empty bandwidth grid: j_min = " + std::to_string(cfg.j_min) +
                                       " > ceil(log_a(T^gamma_max)) = " + std::to_string(j_max));
        BandwidthGrid grid;
        for (long j = cfg.j_min; j <= j_max; ++j)
            grid.values.push_back(std::pow(cfg.a, -static_cast<double>(j)));
        return grid;
    }

    static BandwidthGrid from_values(std::vector<double> values) {
        if (values.empty()) fail(errc::empty_grid, "empty bandwidth grid");
        for (std::size_t i = 0; i < values.size(); ++i) {
            if (!(values[i] > 0.0)) fail(errc::invalid_parameter, "bandwidths must be positive");
            if (i > 0 && !(values[i] < values[i - 1]))
                fail(errc::invalid_parameter, "bandwidth grid must be strictly decreasing");
        }
        return BandwidthGrid{std::move(values)};
    }
};

// sup |x - y| over x in M, y in M2; for sorted sets this is attained at the
// extreme elements.
inline double dbar(const MaximizerSet& m, const MaximizerSet& m2) {
    if (m.points.empty() || m2.points.empty())
        fail(errc::empty_set, "dbar requires nonempty maximizer sets");
    return std::max(m.max() - m2.min(), m2.max() - m.min());
}

struct LepskiResult {
    double h_hat = 0.0;
    double theta = 0.0;
    bool fallback = false; // no admissible bandwidth; largest grid value returned
    std::vector<double> grid;
    std::vector<MaximizerSet> maximizers;
    std::vector<std::vector<double>> dbar_matrix; // dbar(M_i, M_j) for all grid pairs
    std::vector<bool> admissible;
};

// Selection step on precomputed maximizer sets: smallest h whose maximizer
// set stays within A_T h' of every coarser bandwidth's maximizer set
// (h' >= h, including h' = h, which bounds the set's own diameter). With no
// admissible h, falls back to the largest grid value and sets the flag
// rather than erroring.
inline LepskiResult lepski_choose(std::vector<double> grid, std::vector<MaximizerSet> maximizers,
                                  double A_T) {
    if (grid.empty()) fail(errc::empty_grid, "lepski_choose requires a nonempty grid");
    if (grid.size() != maximizers.size())
        fail(errc::invalid_parameter, "one maximizer set per grid value required");
    if (!(A_T > 0.0)) fail(errc::invalid_parameter, "A_T must be > 0");

    LepskiResult res;
    res.grid = std::move(grid);
    res.maximizers = std::move(maximizers);

    const std::size_t m = res.grid.size();
    res.dbar_matrix.assign(m, std::vector<double>(m, 0.0));
    for (std::size_t i = 0; i < m; ++i)
        for (std::size_t j = 0; j < m; ++j)
            res.dbar_matrix[i][j] = dbar(res.maximizers[i], res.maximizers[j]);

    res.admissible.assign(m, false);
    std::size_t chosen = m;
    for (std::size_t i = 0; i < m; ++i) {
        bool ok = true;
        for (std::size_t j = 0; j <= i && ok; ++j)
            ok = res.dbar_matrix[i][j] <= A_T * res.grid[j];
        res.admissible[i] = ok;
        if (ok) chosen = i; // grid is descending: the last admissible index is the smallest h
    }
    if (chosen == m) {
        res.fallback = true;
        chosen = 0;
    }
    res.h_hat = res.grid[chosen];
    res.theta = res.maximizers[chosen].min();
    return res;
}

inline std::vector<MaximizerSet> maximizers_per_bandwidth(const BivariateSample& sample, Kernel k,
                                                          const BandwidthGrid& grid, double r) {
    std::vector<MaximizerSet> out;
    out.reserve(grid.values.size());
    for (double h : grid.values) out.push_back(theta_hat(sample, k, h, r).maximizers);
    return out;
}

inline LepskiResult lepski_select(const BivariateSample& sample, Kernel k, const BandwidthGrid& grid,
                                  double A_T, double r) {
    if (grid.values.empty()) fail(errc::empty_grid, "lepski_select requires a nonempty grid");
    return lepski_choose(grid.values, maximizers_per_bandwidth(sample, k, grid, r), A_T);
}

enum class CvLoss { mse, nearest };

struct CvConfig {
    int folds = 5;
    CvLoss loss = CvLoss::nearest;
    double tau = 0.05; // trimming fraction in (0, 1]
    int n_min = 5;     // minimum covered count
    double r = 1.0;    // search half-range

    void validate() const {
        if (folds < 2) fail(errc::invalid_parameter, "cross-validation requires at least 2 folds");
        if (!(tau > 0.0) || tau > 1.0) fail(errc::invalid_parameter, "tau must lie in (0, 1]");
        if (n_min < 1) fail(errc::invalid_parameter, "n_min must be >= 1");
        if (!(r > 0.0)) fail(errc::invalid_parameter, "r must be > 0");
    }
};

struct CvFold {
    BivariateSample train;        // events outside the test interval, gap compacted
    DifferenceMultiset test_diffs; // within-fold lag differences in [-r, r]
};

namespace detail {

inline std::vector<double> compact_fold(const std::vector<double>& times, double lo, double hi) {
    std::vector<double> out;
    out.reserve(times.size());
    const double gap = hi - lo;
    for (double t : times) {
        if (t <= lo)
            out.push_back(t);
        else if (t > hi)
            out.push_back(t - gap);
    }
    return out;
}

inline std::vector<double> slice(const std::vector<double>& times, double lo, double hi) {
    auto first = std::lower_bound(times.begin(), times.end(), lo);
    while (first != times.end() && *first <= lo) ++first;
    auto last = std::upper_bound(first, times.end(), hi);
    return std::vector<double>(first, last);
}

} // namespace detail

// Splits (0, T] into `folds` equal test intervals I_j. The training sample
// keeps events outside I_j, shifting post-gap events left so the window is
// contiguous with length T - |I_j|; differences straddling the gap are the
// documented approximation of this construction.
inline std::vector<CvFold> cv_folds(const BivariateSample& sample, int folds, double r) {
    if (folds < 2) fail(errc::invalid_parameter, "cv_folds requires at least 2 folds");
    if (!(r > 0.0)) fail(errc::invalid_parameter, "cv_folds requires r > 0");
    const double T = sample.window_end();
    std::vector<CvFold> out;
    out.reserve(folds);
    for (int j = 0; j < folds; ++j) {
        const double lo = T * (static_cast<double>(j) / folds);
        const double hi = (j + 1 == folds) ? T : T * (static_cast<double>(j + 1) / folds);
        EventSeries train1(detail::compact_fold(sample.s1.times(), lo, hi), T - (hi - lo));
        EventSeries train2(detail::compact_fold(sample.s2.times(), lo, hi), T - (hi - lo));

        std::vector<double> t1 = detail::slice(sample.s1.times(), lo, hi);
        std::vector<double> t2 = detail::slice(sample.s2.times(), lo, hi);
        std::vector<double> diffs;
        for (double x : t1) {
            auto [first, last] = detail::lag_window(t2, x, -r, r);
            for (std::size_t i = first; i < last; ++i) diffs.push_back(t2[i] - x);
        }
        std::sort(diffs.begin(), diffs.end());
        out.push_back(CvFold{BivariateSample(std::move(train1), std::move(train2)),
                             DifferenceMultiset{std::move(diffs), -r, r}});
    }
    return out;
}

// MSE-type loss: (|M|^2 / n_j) * sum of squared distances from the test
// differences to the maximizer set.
inline double loss_mse(const MaximizerSet& m, const DifferenceMultiset& diffs) {
    if (diffs.diffs.empty()) fail(errc::empty_diffs, "loss_mse requires a nonempty test multiset");
    const double card = static_cast<double>(m.points.size());
    double acc = 0.0;
    for (double d : diffs.diffs) {
        const double dist = m.distance(d);
        acc += dist * dist;
    }
    return card * card * acc / static_cast<double>(diffs.size());
}

// Nearest-range loss: length of the smallest symmetric neighborhood of M
// covering the k_j-th order statistic of the distances, where
// k_j = max(ceil(tau n_j), n_min); +infinity when the fold is too small.
inline double loss_nearest(const MaximizerSet& m, const DifferenceMultiset& diffs, double tau,
                           int n_min) {
    const auto n = static_cast<std::int64_t>(diffs.size());
    const auto k = std::max<std::int64_t>(
        static_cast<std::int64_t>(std::ceil(tau * static_cast<double>(n) - 1e-9)), n_min);
    if (n < k) return std::numeric_limits<double>::infinity();

    std::vector<double> dist;
    dist.reserve(diffs.size());
    for (double d : diffs.diffs) dist.push_back(m.distance(d));
    std::nth_element(dist.begin(), dist.begin() + (k - 1), dist.end());
    const double eps = dist[static_cast<std::size_t>(k - 1)];

    // total length of the union of [p - eps, p + eps] over maximizer points
    double total = 0.0;
    double cur_lo = m.points.front() - eps, cur_hi = m.points.front() + eps;
    for (std::size_t i = 1; i < m.points.size(); ++i) {
        const double lo = m.points[i] - eps, hi = m.points[i] + eps;
        if (lo > cur_hi) {
            total += cur_hi - cur_lo;
            cur_lo = lo;
        }
        cur_hi = hi;
    }
    total += cur_hi - cur_lo;
    return total;
}

struct CvResult {
    double h_hat = 0.0;
    double theta = 0.0;
    std::vector<double> scores; // CV(h) per grid value
    MaximizerSet maximizers;    // from the full-sample refit at h_hat
};

// CV(h) = mean fold loss over folds with at least one test difference; the
// smallest h among minimizers wins. Folds where the training fit fails
// contribute +infinity.
inline CvResult cv_select(const BivariateSample& sample, Kernel k, const BandwidthGrid& grid,
                          const CvConfig& cfg) {
    cfg.validate();
    if (grid.values.empty()) fail(errc::empty_grid, "cv_select requires a nonempty grid");
    const std::vector<CvFold> folds = cv_folds(sample, cfg.folds, cfg.r);

    std::vector<std::size_t> active;
    for (std::size_t j = 0; j < folds.size(); ++j)
        if (!folds[j].test_diffs.diffs.empty()) active.push_back(j);
    if (active.empty()) fail(errc::all_scores_infinite, "no fold contains a test lag difference");

    CvResult res;
    res.scores.reserve(grid.values.size());
    std::size_t best = grid.values.size();
    for (std::size_t i = 0; i < grid.values.size(); ++i) {
        const double h = grid.values[i];
        double acc = 0.0;
        for (std::size_t j : active) {
            double loss;
            try {
                const MaximizerSet m = theta_hat(folds[j].train, k, h, cfg.r).maximizers;
                loss = cfg.loss == CvLoss::mse ? loss_mse(m, folds[j].test_diffs)
                                               : loss_nearest(m, folds[j].test_diffs, cfg.tau, cfg.n_min);
            } catch (const error&) {
                loss = std::numeric_limits<double>::infinity();
            }
            acc += loss;
        }
        const double score = acc / static_cast<double>(active.size());
        res.scores.push_back(score);
        if (std::isfinite(score) && (best == grid.values.size() || score <= res.scores[best]))
            best = i; // <= prefers later (smaller) h on ties
    }
    if (best == grid.values.size())
        fail(errc::all_scores_infinite, "every bandwidth has an infinite CV score");

    res.h_hat = grid.values[best];
    const ThetaHat fit = theta_hat(sample, k, res.h_hat, cfg.r);
    res.theta = fit.theta;
    res.maximizers = fit.maximizers;
    return res;
}

} // namespace leadlag
