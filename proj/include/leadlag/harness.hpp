#pragma once

// Monte Carlo experiment runner: seeded replicate sweeps over the built-in
// scenarios, RMSE aggregation, log-log rate fits, and the bucket-measure /
// kernel-estimator correspondence diagnostic.

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdint>
#include <functional>
#include <sstream>
#include <string>
#include <thread>
#include <variant>
#include <vector>

#include "leadlag/bandwidth.hpp"
#include "leadlag/core.hpp"
#include "leadlag/cpcf.hpp"
#include "leadlag/ds.hpp"
#include "leadlag/errors.hpp"
#include "leadlag/models.hpp"
#include "leadlag/quadrature.hpp"

namespace leadlag {

struct DsEstimatorSpec {
    double h = 0.01;
    double r = 1.0;
};

struct KernelEstimatorSpec {
    double h = 0.001;
    double r = 1.0;
    KernelKind kernel = KernelKind::triangular;
};

struct LepskiEstimatorSpec {
    std::vector<double> grid;  // explicit descending bandwidths
    double at_factor = 1.0;    // A_T = at_factor * log log T
    double r = 1.0;
    KernelKind kernel = KernelKind::triangular;
};

struct CvEstimatorSpec {
    std::vector<double> grid;
    CvConfig cfg;
    KernelKind kernel = KernelKind::triangular;
};

using EstimatorSpec = std::variant<DsEstimatorSpec, KernelEstimatorSpec, LepskiEstimatorSpec, CvEstimatorSpec>;

namespace detail {

inline std::string format_grid(const std::vector<double>& grid) {
    std::ostringstream os;
    for (std::size_t i = 0; i < grid.size(); ++i) {
        if (i) os << ':';
        os << grid[i];
    }
    return os.str();
}

} // namespace detail

inline std::string estimator_name(const EstimatorSpec& spec) {
    return std::visit(
        [](const auto& s) -> std::string {
            using S = std::decay_t<decltype(s)>;
            if constexpr (std::is_same_v<S, DsEstimatorSpec>) return "ds";
            else if constexpr (std::is_same_v<S, KernelEstimatorSpec>) return "kernel";
            else if constexpr (std::is_same_v<S, LepskiEstimatorSpec>) return "lepski";
            else return "cv";
        },
        spec);
}

inline std::string estimator_params(const EstimatorSpec& spec) {
    std::ostringstream os;
    std::visit(
        [&os](const auto& s) {
            using S = std::decay_t<decltype(s)>;
            if constexpr (std::is_same_v<S, DsEstimatorSpec>) {
                os << "h=" << s.h << " r=" << s.r;
            } else if constexpr (std::is_same_v<S, KernelEstimatorSpec>) {
                os << "h=" << s.h << " r=" << s.r << " kernel=" << kernel_name(s.kernel);
            } else if constexpr (std::is_same_v<S, LepskiEstimatorSpec>) {
                os << "grid=" << detail::format_grid(s.grid) << " at=" << s.at_factor
                   << "*loglogT r=" << s.r << " kernel=" << kernel_name(s.kernel);
            } else {
                os << "grid=" << detail::format_grid(s.grid)
                   << " loss=" << (s.cfg.loss == CvLoss::mse ? "mse" : "nearest") << " tau=" << s.cfg.tau
                   << " nmin=" << s.cfg.n_min << " folds=" << s.cfg.folds << " r=" << s.cfg.r
                   << " kernel=" << kernel_name(s.kernel);
            }
        },
        spec);
    return os.str();
}

// Applies one estimator to a sample; throws on degenerate input.
inline double estimate_theta(const EstimatorSpec& spec, const BivariateSample& sample) {
    return std::visit(
        [&sample](const auto& s) -> double {
            using S = std::decay_t<decltype(s)>;
            if constexpr (std::is_same_v<S, DsEstimatorSpec>) {
                return ds_estimate(sample, DsConfig{s.h, s.r}).theta;
            } else if constexpr (std::is_same_v<S, KernelEstimatorSpec>) {
                return theta_hat(sample, Kernel{s.kernel}, s.h, s.r).theta;
            } else if constexpr (std::is_same_v<S, LepskiEstimatorSpec>) {
                const double at = s.at_factor * default_lepski_threshold(sample.window_end());
                return lepski_select(sample, Kernel{s.kernel}, BandwidthGrid::from_values(s.grid), at, s.r)
                    .theta;
            } else {
                return cv_select(sample, Kernel{s.kernel}, BandwidthGrid::from_values(s.grid), s.cfg).theta;
            }
        },
        spec);
}

// Law of the true lead-lag value drawn per replicate.
struct ThetaLaw {
    bool is_fixed = true;
    double value = 0.0;
    double lo = -0.1, hi = 0.1;

    static ThetaLaw fixed(double v) { return ThetaLaw{true, v, 0.0, 0.0}; }
    static ThetaLaw uniform(double lo, double hi) { return ThetaLaw{false, 0.0, lo, hi}; }

    double draw(std::mt19937_64& rng) const {
        if (is_fixed) return value;
        std::uniform_real_distribution<double> u(lo, hi);
        return u(rng);
    }
};

struct ExperimentConfig {
    std::string scenario;
    std::vector<double> T_list;
    int replicates = 200;
    std::vector<EstimatorSpec> estimators;
    ThetaLaw theta_law = ThetaLaw::uniform(-0.1, 0.1);
    std::uint64_t master_seed = 1;
    int threads = 0; // 0 = hardware concurrency

    void validate() const {
        if (scenario.empty()) fail(errc::invalid_parameter, "experiment needs a scenario");
        if (T_list.empty()) fail(errc::invalid_parameter, "experiment needs at least one T");
        for (double T : T_list)
            if (!(T >= 1.0)) fail(errc::invalid_parameter, "window lengths must be >= 1");
        if (replicates < 1) fail(errc::invalid_parameter, "replicates must be >= 1");
        if (estimators.empty()) fail(errc::invalid_parameter, "experiment needs at least one estimator");
    }
};

struct RmseRow {
    std::string scenario;
    std::string estimator;
    std::string params;
    double T = 0.0;
    int replicates = 0;
    double rmse = 0.0;
    double mean_abs_error = 0.0;
    int failures = 0;
};

struct RmseTable {
    std::vector<RmseRow> rows;
};

namespace detail {

// Runs fn(i) for i in [0, n) across up to `threads` workers; each index is
// processed exactly once and output slots are disjoint, so the result does
// not depend on scheduling.
inline void parallel_for(std::size_t n, int threads, const std::function<void(std::size_t)>& fn) {
    unsigned int workers = threads > 0 ? static_cast<unsigned int>(threads)
                                       : std::max(1u, std::thread::hardware_concurrency());
    workers = std::min<unsigned int>(workers, n == 0 ? 1 : static_cast<unsigned int>(n));
    if (workers <= 1) {
        for (std::size_t i = 0; i < n; ++i) fn(i);
        return;
    }
    std::atomic<std::size_t> next{0};
    std::vector<std::thread> pool;
    pool.reserve(workers);
    for (unsigned int w = 0; w < workers; ++w)
        pool.emplace_back([&] {
            for (std::size_t i = next.fetch_add(1); i < n; i = next.fetch_add(1)) fn(i);
        });
    for (auto& t : pool) t.join();
}

} // namespace detail

// Monte Carlo RMSE sweep. Every (T, replicate) pair gets a seed derived from
// the master seed and a global replicate counter; the sample and the drawn
// theta* are shared by all estimators within a replicate (paired design).
// Estimator failures are counted and excluded from the aggregates.
inline RmseTable run_rmse_experiment(const ExperimentConfig& cfg) {
    cfg.validate();
    const Scenario& scenario = find_scenario(cfg.scenario);

    RmseTable table;
    for (std::size_t ti = 0; ti < cfg.T_list.size(); ++ti) {
        const double T = cfg.T_list[ti];
        const std::size_t n_rep = static_cast<std::size_t>(cfg.replicates);
        const std::size_t n_est = cfg.estimators.size();
        std::vector<double> abs_err(n_rep * n_est, 0.0);
        std::vector<char> failed(n_rep * n_est, 0);

        detail::parallel_for(n_rep, cfg.threads, [&](std::size_t rep) {
            const std::uint64_t rep_index = static_cast<std::uint64_t>(ti) * n_rep + rep;
            std::mt19937_64 rng(derive_seed(cfg.master_seed, rep_index));
            const double theta_star = cfg.theta_law.draw(rng);
            const std::uint64_t sim_seed = rng();
            BivariateSample sample = simulate(with_theta(scenario.spec, theta_star), T, sim_seed);
            for (std::size_t e = 0; e < n_est; ++e) {
                try {
                    const double theta = estimate_theta(cfg.estimators[e], sample);
                    abs_err[rep * n_est + e] = std::abs(theta - theta_star);
                } catch (const error&) {
                    failed[rep * n_est + e] = 1;
                }
            }
        });

        for (std::size_t e = 0; e < n_est; ++e) {
            RmseRow row;
            row.scenario = cfg.scenario;
            row.estimator = estimator_name(cfg.estimators[e]);
            row.params = estimator_params(cfg.estimators[e]);
            row.T = T;
            row.replicates = cfg.replicates;
            double sq = 0.0, ab = 0.0;
            int ok = 0;
            for (std::size_t rep = 0; rep < n_rep; ++rep) {
                if (failed[rep * n_est + e]) {
                    ++row.failures;
                    continue;
                }
                const double err = abs_err[rep * n_est + e];
                sq += err * err;
                ab += err;
                ++ok;
            }
            row.rmse = ok > 0 ? std::sqrt(sq / ok) : std::numeric_limits<double>::quiet_NaN();
            row.mean_abs_error = ok > 0 ? ab / ok : std::numeric_limits<double>::quiet_NaN();
            table.rows.push_back(std::move(row));
        }
    }
    return table;
}

struct SlopeFit {
    double slope = 0.0;
    double stderr_slope = 0.0;
    int points = 0;
};

// Least-squares slope of log(rmse) against log(T) for one
// (scenario, estimator, params) family of rows.
inline SlopeFit fit_loglog_slope(const RmseTable& table, std::string_view scenario,
                                 std::string_view estimator, std::string_view params = {}) {
    std::vector<double> xs, ys;
    for (const RmseRow& row : table.rows) {
        if (row.scenario != scenario || row.estimator != estimator) continue;
        if (!params.empty() && row.params != params) continue;
        if (!(row.rmse > 0.0) || !std::isfinite(row.rmse)) continue;
        xs.push_back(std::log(row.T));
        ys.push_back(std::log(row.rmse));
    }
    if (xs.size() < 3) fail(errc::insufficient_points, "log-log fit needs at least 3 positive RMSE points");

    const double n = static_cast<double>(xs.size());
    double sx = 0.0, sy = 0.0;
    for (std::size_t i = 0; i < xs.size(); ++i) {
        sx += xs[i];
        sy += ys[i];
    }
    const double mx = sx / n, my = sy / n;
    double sxx = 0.0, sxy = 0.0;
    for (std::size_t i = 0; i < xs.size(); ++i) {
        sxx += (xs[i] - mx) * (xs[i] - mx);
        sxy += (xs[i] - mx) * (ys[i] - my);
    }
    if (sxx == 0.0) fail(errc::insufficient_points, "log-log fit needs at least 3 distinct T values");
    SlopeFit fit;
    fit.slope = sxy / sxx;
    fit.points = static_cast<int>(xs.size());
    double rss = 0.0;
    for (std::size_t i = 0; i < xs.size(); ++i) {
        const double resid = ys[i] - my - fit.slope * (xs[i] - mx);
        rss += resid * resid;
    }
    fit.stderr_slope = xs.size() > 2 ? std::sqrt(rss / (n - 2.0) / sxx) : 0.0;
    return fit;
}

struct CorrespondenceReport {
    std::vector<std::int64_t> offsets;
    std::vector<double> measured; // X^rel(ell) / h
    std::vector<double> oracle;   // (lambda1 v lambda2) (K^tri_h * g)(ell h)
    double max_discrepancy = 0.0;
};

// Compares the normalized relative cross-market activity with the smoothed
// analytic CPCF: max over the offset grid of
// |X^rel(ell)/h - (lambda1 v lambda2) int K^tri_h(u - ell h) g(u) du|.
inline CorrespondenceReport ds_kernel_correspondence(const BivariateSample& sample, double h,
                                                     const ModelSpec& spec, double r) {
    sample.require_events("ds_kernel_correspondence");
    const std::function<double(double)> g = cpcf_oracle(spec);
    const auto [lam1, lam2] = intensities(spec);
    const double lam_max = std::max(lam1, lam2);
    const double pole = cpcf_pole_location(spec);

    const DsCurve curve = ds_curve(sample, DsConfig{h, r});
    const Kernel tri{KernelKind::triangular};
    CorrespondenceReport report;
    for (std::size_t i = 0; i < curve.offsets.size(); ++i) {
        if (curve.denom[i] == 0) continue;
        const double x = static_cast<double>(curve.offsets[i]) * h;
        const auto integrand = [&](double t) { return tri(t) * g(x + h * t); };
        double smoothed;
        if (std::isfinite(pole) && std::abs(pole - x) <= h) {
            const double t_star = (pole - x) / h;
            smoothed = integrate_split(integrand, -1.0, 1.0,
                                       {std::min(0.0, t_star), std::max(0.0, t_star)}, 1e-8, 1e-12, 56);
        } else {
            smoothed = integrate_split(integrand, -1.0, 1.0, {0.0}, 1e-10, 1e-13);
        }
        report.offsets.push_back(curve.offsets[i]);
        report.measured.push_back(curve.rel[i] / h);
        report.oracle.push_back(lam_max * smoothed);
        report.max_discrepancy =
            std::max(report.max_discrepancy, std::abs(report.measured.back() - report.oracle.back()));
    }
    if (report.offsets.empty())
        fail(errc::degenerate_denominator, "no offset with a usable denominator");
    return report;
}

} // namespace leadlag
