#pragma once

// Adaptive Gauss-Kronrod (7-15) quadrature. Nodes are strictly interior, so
// integrable endpoint singularities are never evaluated directly.

#include <cmath>
#include <cstddef>

namespace leadlag {

namespace detail {

// 15-point Kronrod nodes/weights on [-1, 1] and the embedded 7-point Gauss
// weights (even-symmetric; node 0 listed once).
inline constexpr double kKronrodNodes[8] = {
    0.0,
    0.2077849550078985,
    0.4058451513773972,
    0.5860872354676911,
    0.7415311855993945,
    0.8648644233597691,
    0.9491079123427585,
    0.9914553711208126,
};
inline constexpr double kKronrodWeights[8] = {
    0.2094821410847278,
    0.2044329400752989,
    0.1903505780647854,
    0.1690047266392679,
    0.1406532597155259,
    0.1047900103222502,
    0.0630920926299786,
    0.0229353220105292,
};
// Gauss weights aligned with Kronrod nodes 0, 2, 4, 6 (others are 0).
inline constexpr double kGaussWeights[4] = {
    0.4179591836734694,
    0.3818300505051189,
    0.2797053914892767,
    0.1294849661688697,
};

template <typename F>
struct GkResult {
    double integral;
    double error;
};

template <typename F>
GkResult<F> gk15(const F& f, double a, double b) {
    const double c = 0.5 * (a + b), half = 0.5 * (b - a);
    double kron = 0.0, gauss = 0.0;
    for (int i = 0; i < 8; ++i) {
        const double dx = half * kKronrodNodes[i];
        const double fv = (i == 0) ? f(c) : f(c - dx) + f(c + dx);
        kron += kKronrodWeights[i] * fv;
        if (i % 2 == 0) gauss += kGaussWeights[i / 2] * fv;
    }
    kron *= half;
    gauss *= half;
    return {kron, std::abs(kron - gauss)};
}

template <typename F>
double gk_adaptive(const F& f, double a, double b, double abs_tol, double rel_tol, int depth) {
    const auto r = gk15(f, a, b);
    if (depth <= 0 || r.error <= abs_tol || r.error <= rel_tol * std::abs(r.integral)) return r.integral;
    const double c = 0.5 * (a + b);
    return gk_adaptive(f, a, c, 0.5 * abs_tol, rel_tol, depth - 1) +
           gk_adaptive(f, c, b, 0.5 * abs_tol, rel_tol, depth - 1);
}

} // namespace detail

// Integrates f over [a, b]. rel_tol applies per subinterval; abs_tol is the
// floor that stops refinement of negligible pieces.
template <typename F>
double integrate(const F& f, double a, double b, double rel_tol = 1e-10, double abs_tol = 1e-14,
                 int max_depth = 48) {
    if (!(a < b)) return a == b ? 0.0 : -integrate(f, b, a, rel_tol, abs_tol, max_depth);
    return detail::gk_adaptive(f, a, b, abs_tol, rel_tol, max_depth);
}

// Integrates f over [a, b] splitting at interior break points (kinks or
// integrable singularities); break points themselves are never evaluated.
template <typename F>
double integrate_split(const F& f, double a, double b, std::initializer_list<double> breaks,
                       double rel_tol = 1e-10, double abs_tol = 1e-14, int max_depth = 48) {
    double total = 0.0;
    double left = a;
    for (double s : breaks) {
        if (s > left && s < b) {
            total += integrate(f, left, s, rel_tol, abs_tol, max_depth);
            left = s;
        }
    }
    total += integrate(f, left, b, rel_tol, abs_tol, max_depth);
    return total;
}

} // namespace leadlag
