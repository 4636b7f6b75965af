#pragma once

// Data-generating processes with exact samplers and analytic intensity and
// CPCF oracles: lagged bivariate Hawkes and Neyman-Scott processes with
// gamma kernels, and the displaced-Poisson construction.

#include <array>
#include <cmath>
#include <cstdint>
#include <deque>
#include <functional>
#include <memory>
#include <random>
#include <string>
#include <string_view>
#include <utility>
#include <variant>
#include <vector>

#include "leadlag/core.hpp"
#include "leadlag/errors.hpp"
#include "leadlag/gamma_mixture.hpp"
#include "leadlag/quadrature.hpp"

namespace leadlag {

inline constexpr std::uint64_t kDefaultEventBudget = 10'000'000;

// SplitMix64 finalizer; replicate streams are derived as
// splitmix64(master + (index + 1) * golden-ratio increment).
inline std::uint64_t splitmix64(std::uint64_t z) {
    z += 0x9E3779B97F4A7C15ULL;
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
}

inline std::uint64_t derive_seed(std::uint64_t master_seed, std::uint64_t index) {
    return splitmix64(master_seed + (index + 1) * 0x9E3779B97F4A7C15ULL);
}

// Lagged bivariate Hawkes process with gamma kernels. Component indices are
// 0-based; branching[i][j] is the expected number of component-i children of
// a component-j event, their delays Gamma(shapes[i][j], rates[i][j]).
struct LbhpgSpec {
    std::array<double, 2> mu{0.2, 0.2};
    std::array<std::array<double, 2>, 2> branching{{{0.1, 0.1}, {0.1, 0.1}}};
    std::array<std::array<double, 2>, 2> rates{{{10.0, 10.0}, {10.0, 10.0}}};
    std::array<std::array<double, 2>, 2> shapes{{{1.0, 1.0}, {1.0, 1.0}}};
    double theta = 0.0;

    double spectral_radius() const {
        const double a = branching[0][0], b = branching[0][1];
        const double c = branching[1][0], d = branching[1][1];
        const double tr = a + d;
        const double disc = (a - d) * (a - d) + 4.0 * b * c; // >= 0 for nonnegative entries
        return 0.5 * (tr + std::sqrt(disc));
    }

    bool common_rate() const {
        const double b0 = rates[0][0];
        return rates[0][1] == b0 && rates[1][0] == b0 && rates[1][1] == b0;
    }

    void validate() const {
        for (int i = 0; i < 2; ++i) {
            if (!(mu[i] >= 0.0)) fail(errc::invalid_parameter, "baseline intensities must be >= 0");
            for (int j = 0; j < 2; ++j) {
                if (!(branching[i][j] >= 0.0))
                    fail(errc::invalid_parameter, "branching ratios must be >= 0");
                if (!(rates[i][j] > 0.0) || !(shapes[i][j] > 0.0))
                    fail(errc::invalid_parameter, "gamma kernel shapes and rates must be > 0");
            }
        }
        if (!(spectral_radius() < 1.0))
            fail(errc::unstable_spec, "branching matrix spectral radius must be < 1");
    }
};

// Lagged bivariate Neyman-Scott process with gamma dispersal kernels.
struct LbnspgSpec {
    double lambda = 0.1;                    // parent intensity
    std::array<double, 2> sigma{4.0, 4.0};  // mean offspring counts
    std::array<double, 2> shapes{2.0, 2.0}; // gamma dispersal shapes
    std::array<double, 2> rates{100.0, 100.0};
    double theta = 0.0;

    // the unimodal closed-form CPCF is established for symmetric parameters
    bool symmetric() const { return shapes[0] == shapes[1] && rates[0] == rates[1]; }

    void validate() const {
        if (!(lambda > 0.0)) fail(errc::invalid_parameter, "parent intensity must be > 0");
        for (int i = 0; i < 2; ++i)
            if (!(sigma[i] > 0.0) || !(shapes[i] > 0.0) || !(rates[i] > 0.0))
                fail(errc::invalid_parameter, "Neyman-Scott parameters must be > 0");
    }
};

// Unit-rate Poisson base process; the second component displaces each base
// event by an i.i.d. draw plus theta. `density` is the displacement law on
// [-1, 1] (null for laws without one, e.g. a point mass).
struct DisplacedPoissonSpec {
    std::function<double(double)> density;
    std::function<double(std::mt19937_64&)> sampler;
    double theta = 0.0;
    std::string label = "custom";

    static DisplacedPoissonSpec triangular(double width, double theta = 0.0) {
        if (!(width > 0.0) || width > 1.0)
            fail(errc::invalid_parameter, "triangular displacement width must lie in (0, 1]");
        DisplacedPoissonSpec spec;
        spec.density = [width](double x) {
            const double a = std::abs(x) / width;
            return a <= 1.0 ? (1.0 - a) / width : 0.0;
        };
        spec.sampler = [width](std::mt19937_64& rng) {
            std::uniform_real_distribution<double> u(0.0, 1.0);
            return width * (u(rng) + u(rng) - 1.0);
        };
        spec.theta = theta;
        spec.label = "triangular:" + std::to_string(width);
        return spec;
    }

    static DisplacedPoissonSpec uniform(double width, double theta = 0.0) {
        if (!(width > 0.0) || width > 1.0)
            fail(errc::invalid_parameter, "uniform displacement width must lie in (0, 1]");
        DisplacedPoissonSpec spec;
        spec.density = [width](double x) { return std::abs(x) <= width ? 0.5 / width : 0.0; };
        spec.sampler = [width](std::mt19937_64& rng) {
            std::uniform_real_distribution<double> u(-width, width);
            return u(rng);
        };
        spec.theta = theta;
        spec.label = "uniform:" + std::to_string(width);
        return spec;
    }

    static DisplacedPoissonSpec point_mass(double theta = 0.0) {
        DisplacedPoissonSpec spec;
        spec.sampler = [](std::mt19937_64&) { return 0.0; };
        spec.theta = theta;
        spec.label = "point";
        return spec;
    }
};

using ModelSpec = std::variant<LbhpgSpec, LbnspgSpec, DisplacedPoissonSpec>;

namespace detail {

inline std::vector<double> sorted_uniform_times(std::mt19937_64& rng, double lo, double hi,
                                                double intensity) {
    std::poisson_distribution<long long> count(intensity * (hi - lo));
    const long long n = count(rng);
    std::uniform_real_distribution<double> u(lo, hi);
    std::vector<double> t(static_cast<std::size_t>(n));
    for (double& v : t) v = u(rng);
    std::sort(t.begin(), t.end());
    return t;
}

// Exact float ties between sampled events have probability zero under the
// continuous model; nudge them up one ulp so the process stays simple.
inline void make_strictly_increasing(std::vector<double>& t) {
    for (std::size_t i = 1; i < t.size(); ++i)
        if (t[i] <= t[i - 1]) t[i] = std::nextafter(t[i - 1], std::numeric_limits<double>::infinity());
}

inline std::vector<double> clip_window(const std::vector<double>& t, double T) {
    std::vector<double> out;
    out.reserve(t.size());
    for (double v : t)
        if (v > 0.0 && v <= T) out.push_back(v);
    return out;
}

inline EventSeries finish_component(std::vector<double> times, double shift, double T) {
    for (double& t : times) t += shift;
    std::sort(times.begin(), times.end());
    make_strictly_increasing(times);
    return EventSeries(clip_window(times, T), T);
}

} // namespace detail

// Cluster (branching) sampler for the Hawkes process: immigrants on a
// burn-in-extended window, children generated recursively, component 2
// shifted by theta, everything clipped to (0, T]. Exact for gamma kernels
// and O(total events).
inline BivariateSample simulate_lbhpg(const LbhpgSpec& spec, double T, std::uint64_t seed,
                                      std::uint64_t max_events = kDefaultEventBudget) {
    spec.validate();
    if (!(T > 0.0)) fail(errc::invalid_parameter, "T must be > 0");
    std::mt19937_64 rng(seed);

    double mean_delay = 0.0;
    for (int i = 0; i < 2; ++i)
        for (int j = 0; j < 2; ++j) mean_delay = std::max(mean_delay, spec.shapes[i][j] / spec.rates[i][j]);
    const double rho = spec.spectral_radius();
    const double burn_in = mean_delay * (20.0 + 10.0 / (1.0 - rho));
    // quantized so the simulation window (and hence the draw sequence) does
    // not change with theta within each integer band of |theta|
    const double pad = std::max(1.0, std::ceil(std::abs(spec.theta)));
    const double lo = -burn_in - pad, hi = T + pad;

    struct Pending {
        double t;
        int comp;
    };
    std::deque<Pending> queue;
    std::array<std::vector<double>, 2> events;
    std::uint64_t total = 0;

    for (int i = 0; i < 2; ++i) {
        if (spec.mu[i] <= 0.0) continue;
        std::vector<double> immigrants = detail::sorted_uniform_times(rng, lo, hi, spec.mu[i]);
        total += immigrants.size();
        if (total > max_events) fail(errc::budget_exceeded, "event budget exceeded by immigrants");
        for (double t : immigrants) {
            events[i].push_back(t);
            queue.push_back({t, i});
        }
    }
    while (!queue.empty()) {
        const Pending ev = queue.front();
        queue.pop_front();
        for (int i = 0; i < 2; ++i) {
            const double ratio = spec.branching[i][ev.comp];
            if (ratio <= 0.0) continue;
            std::poisson_distribution<int> count(ratio);
            const int n = count(rng);
            if (n == 0) continue;
            std::gamma_distribution<double> delay(spec.shapes[i][ev.comp], 1.0 / spec.rates[i][ev.comp]);
            for (int m = 0; m < n; ++m) {
                const double child = ev.t + delay(rng);
                if (child > hi) continue; // descendants would be even later
                if (++total > max_events)
                    fail(errc::budget_exceeded, "event budget exceeded while branching");
                events[i].push_back(child);
                queue.push_back({child, i});
            }
        }
    }
    EventSeries s1 = detail::finish_component(std::move(events[0]), 0.0, T);
    EventSeries s2 = detail::finish_component(std::move(events[1]), spec.theta, T);
    return BivariateSample(std::move(s1), std::move(s2));
}

inline BivariateSample simulate_lbnspg(const LbnspgSpec& spec, double T, std::uint64_t seed,
                                       std::uint64_t max_events = kDefaultEventBudget) {
    spec.validate();
    if (!(T > 0.0)) fail(errc::invalid_parameter, "T must be > 0");
    std::mt19937_64 rng(seed);

    const double mean_offset = std::max(spec.shapes[0] / spec.rates[0], spec.shapes[1] / spec.rates[1]);
    const double burn_in = 20.0 * mean_offset + 1.0;
    const double pad = std::max(1.0, std::ceil(std::abs(spec.theta)));
    std::vector<double> parents = detail::sorted_uniform_times(rng, -burn_in - pad, T + pad, spec.lambda);

    std::array<std::vector<double>, 2> events;
    std::uint64_t total = parents.size();
    for (double c : parents) {
        for (int i = 0; i < 2; ++i) {
            std::poisson_distribution<int> count(spec.sigma[i]);
            const int n = count(rng);
            if (n == 0) continue;
            std::gamma_distribution<double> offset(spec.shapes[i], 1.0 / spec.rates[i]);
            for (int m = 0; m < n; ++m) {
                if (++total > max_events) fail(errc::budget_exceeded, "event budget exceeded");
                events[i].push_back(c + offset(rng));
            }
        }
    }
    EventSeries s1 = detail::finish_component(std::move(events[0]), 0.0, T);
    EventSeries s2 = detail::finish_component(std::move(events[1]), spec.theta, T);
    return BivariateSample(std::move(s1), std::move(s2));
}

inline BivariateSample simulate_displaced_poisson(const DisplacedPoissonSpec& spec, double T,
                                                  std::uint64_t seed) {
    if (!spec.sampler) fail(errc::invalid_parameter, "displaced-Poisson spec has no sampler");
    if (!(T > 0.0)) fail(errc::invalid_parameter, "T must be > 0");
    std::mt19937_64 rng(seed);
    std::vector<double> base = detail::sorted_uniform_times(rng, -2.0, T + 2.0, 1.0);
    std::vector<double> displaced;
    displaced.reserve(base.size());
    for (double t : base) displaced.push_back(t + spec.sampler(rng));
    EventSeries s1 = detail::finish_component(std::move(base), 0.0, T);
    EventSeries s2 = detail::finish_component(std::move(displaced), spec.theta, T);
    return BivariateSample(std::move(s1), std::move(s2));
}

inline BivariateSample simulate(const ModelSpec& spec, double T, std::uint64_t seed,
                                std::uint64_t max_events = kDefaultEventBudget) {
    return std::visit(
        [&](const auto& s) -> BivariateSample {
            using S = std::decay_t<decltype(s)>;
            if constexpr (std::is_same_v<S, LbhpgSpec>) return simulate_lbhpg(s, T, seed, max_events);
            else if constexpr (std::is_same_v<S, LbnspgSpec>) return simulate_lbnspg(s, T, seed, max_events);
            else return simulate_displaced_poisson(s, T, seed);
        },
        spec);
}

inline std::pair<double, double> intensities(const LbhpgSpec& spec) {
    spec.validate();
    const double a = 1.0 - spec.branching[0][0], b = -spec.branching[0][1];
    const double c = -spec.branching[1][0], d = 1.0 - spec.branching[1][1];
    const double det = a * d - b * c;
    return {(d * spec.mu[0] - b * spec.mu[1]) / det, (a * spec.mu[1] - c * spec.mu[0]) / det};
}

inline std::pair<double, double> intensities(const LbnspgSpec& spec) {
    spec.validate();
    return {spec.lambda * spec.sigma[0], spec.lambda * spec.sigma[1]};
}

inline std::pair<double, double> intensities(const DisplacedPoissonSpec&) { return {1.0, 1.0}; }

inline std::pair<double, double> intensities(const ModelSpec& spec) {
    return std::visit([](const auto& s) { return intensities(s); }, spec);
}

// CPCF of the lagged Neyman-Scott process: 1 + p(u - theta) / lambda with p
// the bilateral-gamma cross density of the two dispersal kernels. Symmetric
// parameters use the Bessel closed form; otherwise adaptive quadrature.
inline double cpcf_lbnspg(const LbnspgSpec& spec, double u) {
    spec.validate();
    const double v = u - spec.theta;
    if (v == 0.0 && spec.shapes[0] + spec.shapes[1] <= 1.0)
        fail(errc::pole, "CPCF has a pole at u = theta for shape sum <= 1");
    double p;
    if (spec.symmetric()) {
        p = bilateral_gamma_symmetric_density(spec.shapes[0], spec.rates[0], v);
    } else {
        GammaMixture f1(spec.rates[0]), f2(spec.rates[1]);
        f1.add(1.0, spec.shapes[0]);
        f2.add(1.0, spec.shapes[1]);
        p = gamma_mixture_cross_density(f1, f2, v);
    }
    return 1.0 + p / spec.lambda;
}

// CPCF of the displaced-Poisson model: two unit-rate Poisson components with
// one coupled pair per base event give cross-intensity 1 + g(u - theta),
// where g is the displacement density.
inline double cpcf_displaced_poisson(const DisplacedPoissonSpec& spec, double u) {
    if (!spec.density)
        fail(errc::oracle_unavailable, "displacement law has no density (" + spec.label + ")");
    return 1.0 + spec.density(u - spec.theta);
}

// Hawkes CPCF oracle for common rate parameters. The convolution powers of
// the kernel matrix are expanded over branching paths: a length-m path
// contributes weight prod alpha along the path and a gamma density whose
// shape is the sum of shapes along the path (gamma reproducibility). The
// expansion is truncated once the residual branching mass drops below tol.
class HawkesCpcfOracle {
public:
    explicit HawkesCpcfOracle(const LbhpgSpec& spec, double tol = 1e-10) : spec_(spec) {
        spec_.validate();
        if (!spec_.common_rate())
            fail(errc::unsupported_rates, "analytic Hawkes CPCF requires a common rate parameter");
        if (!(tol > 0.0)) fail(errc::invalid_parameter, "truncation tolerance must be > 0");
        std::tie(lambda1_, lambda2_) = intensities(spec_);
        const double beta = spec_.rates[0][0];
        for (auto& row : psi_)
            for (auto& m : row) m = GammaMixture(beta);
        expand(tol);
    }

    double lambda1() const noexcept { return lambda1_; }
    double lambda2() const noexcept { return lambda2_; }

    // expanded convolution-power mixture for component pair (i, j)
    const GammaMixture& psi(int i, int j) const { return psi_[i][j]; }

    // covariance density nu12 at lag v (relative to the unshifted process)
    double covariance_density(double v) const {
        double acc = lambda2_ * psi_[0][1].density(v) + lambda1_ * psi_[1][0].density(-v);
        for (int k = 0; k < 2; ++k) {
            if (psi_[0][k].empty() || psi_[1][k].empty()) continue;
            const double lam = k == 0 ? lambda1_ : lambda2_;
            acc += lam * gamma_mixture_cross_density(psi_[0][k], psi_[1][k], v);
        }
        return acc;
    }

    double operator()(double u) const {
        const double v = u - spec_.theta;
        if (v == 0.0 && has_pole())
            fail(errc::pole, "CPCF has a pole at u = theta");
        return 1.0 + covariance_density(v) / (lambda1_ * lambda2_);
    }

    bool has_pole() const {
        if (!psi_[0][1].empty() && psi_[0][1].min_shape() < 1.0) return true;
        if (!psi_[1][0].empty() && psi_[1][0].min_shape() < 1.0) return true;
        for (int k = 0; k < 2; ++k)
            if (!psi_[0][k].empty() && !psi_[1][k].empty() &&
                psi_[0][k].min_shape() + psi_[1][k].min_shape() <= 1.0)
                return true;
        return false;
    }

private:
    using Mat = std::array<std::array<double, 2>, 2>;

    static Mat matmul(const Mat& x, const Mat& y) {
        Mat z{};
        for (int i = 0; i < 2; ++i)
            for (int j = 0; j < 2; ++j) z[i][j] = x[i][0] * y[0][j] + x[i][1] * y[1][j];
        return z;
    }

    void expand(double tol) {
        const Mat alpha = spec_.branching;
        // (I - alpha)^{-1}
        const double a = 1.0 - alpha[0][0], b = -alpha[0][1], c = -alpha[1][0], d = 1.0 - alpha[1][1];
        const double det = a * d - b * c;
        const Mat resolvent{{{d / det, -b / det}, {-c / det, a / det}}};

        // per (end i, start j): map from edge-use counts to accumulated weight;
        // the shape sum is recovered from the counts in a fixed order so equal
        // paths always produce bit-identical keys
        using Counts = std::array<std::uint16_t, 4>;
        using Level = std::map<Counts, double>;
        std::array<std::array<Level, 2>, 2> level;
        for (int i = 0; i < 2; ++i)
            for (int j = 0; j < 2; ++j)
                if (alpha[i][j] > 0.0) {
                    Counts cnt{};
                    cnt[static_cast<std::size_t>(2 * i + j)] = 1;
                    level[i][j][cnt] = alpha[i][j];
                }

        Mat power = alpha;
        for (int m = 1; m <= 512; ++m) {
            bool any = false;
            for (int i = 0; i < 2; ++i)
                for (int j = 0; j < 2; ++j)
                    for (const auto& [cnt, w] : level[i][j]) {
                        const double shape = cnt[0] * spec_.shapes[0][0] + cnt[1] * spec_.shapes[0][1] +
                                             cnt[2] * spec_.shapes[1][0] + cnt[3] * spec_.shapes[1][1];
                        psi_[i][j].add(w, shape);
                        any = true;
                    }
            const Mat tail = matmul(matmul(power, alpha), resolvent);
            double residual = 0.0;
            for (int i = 0; i < 2; ++i)
                for (int j = 0; j < 2; ++j) residual = std::max(residual, tail[i][j]);
            if (residual < tol || !any) break;
            power = matmul(power, alpha);

            std::array<std::array<Level, 2>, 2> next;
            for (int i = 0; i < 2; ++i)
                for (int j = 0; j < 2; ++j)
                    for (const auto& [cnt, w] : level[i][j])
                        for (int i2 = 0; i2 < 2; ++i2) {
                            if (alpha[i2][i] <= 0.0) continue;
                            Counts c2 = cnt;
                            ++c2[static_cast<std::size_t>(2 * i2 + i)];
                            next[i2][j][c2] += alpha[i2][i] * w;
                        }
            level = std::move(next);
        }
    }

    LbhpgSpec spec_;
    double lambda1_ = 0.0, lambda2_ = 0.0;
    std::array<std::array<GammaMixture, 2>, 2> psi_;
};

inline double cpcf_lbhpg(const LbhpgSpec& spec, double u, double tol = 1e-10) {
    return HawkesCpcfOracle(spec, tol)(u);
}

// Analytic CPCF as a callable, or oracle_unavailable if the model has none.
inline std::function<double(double)> cpcf_oracle(const ModelSpec& spec) {
    return std::visit(
        [](const auto& s) -> std::function<double(double)> {
            using S = std::decay_t<decltype(s)>;
            if constexpr (std::is_same_v<S, LbhpgSpec>) {
                auto oracle = std::make_shared<HawkesCpcfOracle>(s);
                return [oracle](double u) { return (*oracle)(u); };
            } else if constexpr (std::is_same_v<S, LbnspgSpec>) {
                return [s](double u) { return cpcf_lbnspg(s, u); };
            } else {
                if (!s.density)
                    fail(errc::oracle_unavailable, "displacement law has no density (" + s.label + ")");
                return [s](double u) { return cpcf_displaced_poisson(s, u); };
            }
        },
        spec);
}

// Location of the CPCF pole, if the model has one (NaN otherwise).
inline double cpcf_pole_location(const ModelSpec& spec) {
    const double nan = std::numeric_limits<double>::quiet_NaN();
    return std::visit(
        [nan](const auto& s) -> double {
            using S = std::decay_t<decltype(s)>;
            if constexpr (std::is_same_v<S, LbhpgSpec>) {
                if (std::min(s.shapes[0][1], s.shapes[1][0]) < 1.0) return s.theta;
                return nan;
            } else if constexpr (std::is_same_v<S, LbnspgSpec>) {
                return s.shapes[0] + s.shapes[1] <= 1.0 ? s.theta : nan;
            } else {
                return nan;
            }
        },
        spec);
}

inline double model_theta(const ModelSpec& spec) {
    return std::visit([](const auto& s) { return s.theta; }, spec);
}

inline ModelSpec with_theta(ModelSpec spec, double theta) {
    std::visit([theta](auto& s) { s.theta = theta; }, spec);
    return spec;
}

// The displacement density must integrate to 1 over its [-1, 1] support.
inline double displaced_density_mass(const DisplacedPoissonSpec& spec) {
    if (!spec.density) fail(errc::oracle_unavailable, "no density to integrate");
    return integrate_split([&](double x) { return spec.density(x); }, -1.0, 1.0, {-0.5, 0.0, 0.5},
                           1e-12, 1e-15);
}

struct Scenario {
    std::string name;
    ModelSpec spec;
    double alpha = 0.0;      // CPCF sharpness exponent
    double beta_alpha = 0.0; // rate exponent max(alpha, 2 alpha - 1)
};

inline const std::vector<Scenario>& builtin_scenarios() {
    static const std::vector<Scenario> scenarios = [] {
        std::vector<Scenario> out;
        LbhpgSpec hawkes;
        hawkes.mu = {0.2, 0.2};
        hawkes.branching = {{{0.1, 0.1}, {0.1, 0.1}}};
        hawkes.rates = {{{10.0, 10.0}, {10.0, 10.0}}};

        LbhpgSpec sym = hawkes;
        sym.shapes = {{{0.4, 0.4}, {0.4, 0.4}}};
        out.push_back({"hawkes_gamma_sym", sym, 0.4, 0.4});

        LbhpgSpec asym = hawkes;
        asym.shapes = {{{0.4, 0.4}, {0.8, 0.4}}};
        out.push_back({"hawkes_gamma_asym", asym, 0.4, 0.4});

        LbhpgSpec expo = hawkes;
        expo.shapes = {{{1.0, 1.0}, {1.0, 1.0}}};
        out.push_back({"hawkes_exp", expo, 2.0, 3.0});

        LbnspgSpec ns;
        ns.lambda = 0.1;
        ns.sigma = {4.0, 4.0};

        LbnspgSpec ns1 = ns;
        ns1.shapes = {0.4, 0.4};
        ns1.rates = {10.0, 10.0};
        out.push_back({"ns_gamma_1", ns1, 0.8, 0.8});

        LbnspgSpec ns2 = ns;
        ns2.shapes = {0.8, 0.8};
        ns2.rates = {10.0, 10.0};
        out.push_back({"ns_gamma_2", ns2, 1.6, 2.2});

        LbnspgSpec ns3 = ns;
        ns3.shapes = {2.0, 2.0};
        ns3.rates = {100.0, 100.0};
        out.push_back({"ns_gamma_3", ns3, 3.0, 5.0});
        return out;
    }();
    return scenarios;
}

inline const Scenario& find_scenario(std::string_view name) {
    for (const Scenario& s : builtin_scenarios())
        if (s.name == name) return s;
    std::string known;
    for (const Scenario& s : builtin_scenarios()) {
        if (!known.empty()) known += ", ";
        known += s.name;
    }
    fail(errc::unknown_scenario, "unknown scenario '" + std::string(name) + "' (known: " + known + ")");
}

} // namespace leadlag
