#pragma once

// Weighted mixtures of gamma densities sharing one rate, and cross densities
// of the form integral A(t) B(t + u) dt (bilateral-gamma combinations).

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <vector>

#include "leadlag/errors.hpp"
#include "leadlag/quadrature.hpp"

namespace leadlag {

// Gamma(shape, rate) density at t; +infinity at t = 0 when shape < 1. At the
// shape-1 jump the midpoint value rate/2 is used, which keeps covariance
// densities built from these kernels continuous at the origin.
inline double gamma_density(double t, double shape, double rate) {
    if (t < 0.0) return 0.0;
    if (t == 0.0) {
        if (shape < 1.0) return std::numeric_limits<double>::infinity();
        return shape == 1.0 ? 0.5 * rate : 0.0;
    }
    return std::exp(shape * std::log(rate) + (shape - 1.0) * std::log(t) - rate * t -
                    std::lgamma(shape));
}

// Nonnegative combination sum_i w_i Gamma(shape_i, rate), supported on (0, inf).
class GammaMixture {
public:
    GammaMixture() = default;
    explicit GammaMixture(double rate) : rate_(rate) {}

    void add(double weight, double shape) {
        if (weight <= 0.0) return;
        auto [it, inserted] = terms_.try_emplace(shape, weight);
        if (!inserted) it->second += weight;
    }

    double rate() const noexcept { return rate_; }
    bool empty() const noexcept { return terms_.empty(); }
    std::size_t term_count() const noexcept { return terms_.size(); }

    double total_weight() const {
        double w = 0.0;
        for (const auto& [shape, weight] : terms_) w += weight;
        return w;
    }

    double min_shape() const { return terms_.empty() ? 1.0 : terms_.begin()->first; }
    double max_shape() const { return terms_.empty() ? 1.0 : terms_.rbegin()->first; }

    double density(double t) const {
        double acc = 0.0;
        for (const auto& [shape, weight] : terms_) acc += weight * gamma_density(t, shape, rate_);
        return acc;
    }

private:
    double rate_ = 1.0;
    std::map<double, double> terms_; // shape -> accumulated weight
};

// Density of Gamma(shape, rate) - Gamma(shape, rate) (independent, equal
// parameters) at v: a symmetric bilateral gamma, in closed form via the
// modified Bessel function of the second kind.
inline double bilateral_gamma_symmetric_density(double shape, double rate, double v) {
    const double av = std::abs(v);
    if (av == 0.0) {
        if (2.0 * shape <= 1.0) return std::numeric_limits<double>::infinity();
        return rate * std::exp(std::lgamma(shape - 0.5) - std::lgamma(shape)) /
               (2.0 * std::sqrt(M_PI));
    }
    const double z = rate * av;
    const double nu = std::abs(shape - 0.5);
    const double bessel = std::cyl_bessel_k(nu, z);
    if (bessel == 0.0) return 0.0; // far tail underflowed
    const double log_pref = (shape + 0.5) * std::log(rate) + (shape - 0.5) * std::log(av) -
                            std::lgamma(shape) - 0.5 * std::log(M_PI) -
                            (shape - 0.5) * std::log(2.0);
    return std::exp(log_pref) * bessel;
}

namespace detail {

// Upper integration limit beyond which A(t) B(t + shift) is negligible.
inline double cross_tail_cutoff(const GammaMixture& a, const GammaMixture& b, double shift) {
    const double slow = 1.0 / std::min(a.rate(), b.rate());
    double t = a.max_shape() / a.rate() + b.max_shape() / b.rate() + 16.0 * slow;
    const double floor = 1e-300;
    for (int i = 0; i < 200; ++i) {
        const double v = a.density(t) * b.density(t + shift);
        if (v < floor || !std::isfinite(t)) break;
        t *= 1.5;
    }
    return t;
}

} // namespace detail

// integral over t > 0 of A(t) B(t + u) dt for u >= 0 (the density at u of
// Y - X with Y ~ B-mixture, X ~ A-mixture when both have unit mass). Negative
// u is handled by the swap identity. The t -> 0 endpoint singularity of
// order t^{p-1} is absorbed by the substitution t = q^{1/p}.
inline double gamma_mixture_cross_density(const GammaMixture& a, const GammaMixture& b, double u,
                                          double rel_tol = 1e-9) {
    if (u < 0.0) return gamma_mixture_cross_density(b, a, -u, rel_tol);
    if (a.empty() || b.empty()) return 0.0;

    double p = a.min_shape();
    if (u == 0.0) p += b.min_shape() - 1.0; // both factors singular at the origin
    if (p <= 0.0) fail(errc::pole, "cross density diverges at this lag");
    p = std::min(p, 1.0);

    const double t_max = detail::cross_tail_cutoff(a, b, u);
    const double q_max = std::pow(t_max, p);
    const double inv_p = 1.0 / p;
    const auto integrand = [&](double q) {
        const double t = std::pow(q, inv_p);
        return a.density(t) * b.density(t + u) * inv_p * std::pow(q, inv_p - 1.0);
    };
    // Split at the scale of u where B's own singularity sits after the swap
    // of variables, and at the mean scale, to seed the adaptive refinement.
    const double q_u = u > 0.0 ? std::pow(u, p) : 0.0;
    const double q_mean = std::pow((a.max_shape() + 1.0) / a.rate(), p);
    // relative-only tolerance: deep-tail values are far below any fixed
    // absolute floor but still need to be correct in relative terms
    return integrate_split(integrand, 0.0, q_max, {std::min(q_u, q_mean), std::max(q_u, q_mean)},
                           rel_tol, 1e-300, 52);
}

} // namespace leadlag
