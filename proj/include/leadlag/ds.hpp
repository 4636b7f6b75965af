#pragma once

// Dobrev-Schaumburg cross-market activity measures on equi-spaced time
// buckets and the bucket-offset lead-lag estimator.

#include <bit>
#include <cmath>
#include <cstdint>
#include <limits>
#include <vector>

#include "leadlag/core.hpp"
#include "leadlag/errors.hpp"

namespace leadlag {

struct DsConfig {
    double h = 0.0; // bucket width (seconds)
    double r = 0.0; // search half-range (seconds)

    // r < h collapses the offset grid to {0}; legal, but worth a warning.
    bool degenerate_grid() const noexcept { return r < h; }
};

// Cross-market activity curve over the offset grid. Offsets where the
// occupancy denominator is zero keep their raw count and carry rel = NaN.
struct DsCurve {
    double h = 0.0;
    std::vector<std::int64_t> offsets; // ascending, symmetric around 0
    std::vector<std::int64_t> raw;     // X^raw at each offset
    std::vector<std::int64_t> denom;   // min of the two occupancy counts
    std::vector<double> rel;           // raw / denom, NaN where denom == 0
};

struct DsEstimate {
    double theta = 0.0;
    std::int64_t offset = 0;
    DsCurve curve;
};

namespace detail {

// floor with a relative guard so that quotients that are integers up to
// rounding (e.g. 1.0 / 0.1) land on the intended integer
inline std::int64_t guarded_floor_div(double num, double den) {
    return static_cast<std::int64_t>(std::floor((num / den) * (1.0 + 1e-12) + 1e-12));
}

// bucket k holds (kh, (k+1)h]; an event at exactly kh belongs to bucket k-1
inline std::int64_t bucket_index(double t, double h) {
    return static_cast<std::int64_t>(std::ceil(t / h)) - 1;
}

// Occupancy of the B = floor(T/h) buckets as a packed bitset; the residual
// tail (Bh, T] is discarded.
class BucketOccupancy {
public:
    BucketOccupancy(const EventSeries& series, double h)
        : bucket_count_(guarded_floor_div(series.window_end(), h)),
          words_(static_cast<std::size_t>((bucket_count_ + 63) / 64), 0) {
        for (double t : series.times()) {
            const std::int64_t k = bucket_index(t, h);
            if (k < 0 || k >= bucket_count_) continue;
            words_[static_cast<std::size_t>(k >> 6)] |= std::uint64_t{1} << (k & 63);
        }
    }

    std::int64_t bucket_count() const noexcept { return bucket_count_; }

    // bits [pos, pos + 64) of the bitset, zero-padded outside [0, B)
    std::uint64_t window(std::int64_t pos) const noexcept {
        const std::int64_t wi = pos >> 6;
        const int sh = static_cast<int>(pos & 63);
        const std::uint64_t lo = word(wi) >> sh;
        return sh == 0 ? lo : lo | (word(wi + 1) << (64 - sh));
    }

    // number of occupied buckets with index in [a, b]
    std::int64_t count_range(std::int64_t a, std::int64_t b) const noexcept {
        std::int64_t total = 0;
        for (std::int64_t pos = a; pos <= b; pos += 64) {
            std::uint64_t w = window(pos);
            const std::int64_t remaining = b - pos + 1;
            if (remaining < 64) w &= (std::uint64_t{1} << remaining) - 1;
            total += std::popcount(w);
        }
        return total;
    }

private:
    std::uint64_t word(std::int64_t wi) const noexcept {
        return (wi >= 0 && wi < static_cast<std::int64_t>(words_.size())) ? words_[wi] : 0;
    }

    std::int64_t bucket_count_;
    std::vector<std::uint64_t> words_;
};

// sum over k in [a, b] of occ1[k] * occ2[k + shift]
inline std::int64_t count_joint(const BucketOccupancy& occ1, const BucketOccupancy& occ2,
                                std::int64_t shift, std::int64_t a, std::int64_t b) {
    std::int64_t total = 0;
    for (std::int64_t pos = a; pos <= b; pos += 64) {
        std::uint64_t w = occ1.window(pos) & occ2.window(pos + shift);
        const std::int64_t remaining = b - pos + 1;
        if (remaining < 64) w &= (std::uint64_t{1} << remaining) - 1;
        total += std::popcount(w);
    }
    return total;
}

struct DsPoint {
    std::int64_t raw = 0;
    std::int64_t denom = 0;
};

inline DsPoint ds_point(const BucketOccupancy& occ1, const BucketOccupancy& occ2, std::int64_t ell) {
    const std::int64_t B = occ1.bucket_count();
    const std::int64_t a = std::abs(ell);
    const std::int64_t b = B - 1 - std::abs(ell);
    DsPoint p;
    p.raw = count_joint(occ1, occ2, ell, a, b);
    const std::int64_t n1 = occ1.count_range(a, b);
    const std::int64_t n2 = occ2.count_range(a + ell, b + ell);
    p.denom = std::min(n1, n2);
    return p;
}

// prefix[i] = number of occupied buckets with index < i; makes the
// per-offset occupancy sums O(1) across a whole curve
inline std::vector<std::int64_t> prefix_counts(const BucketOccupancy& occ) {
    const std::int64_t B = occ.bucket_count();
    std::vector<std::int64_t> prefix(static_cast<std::size_t>(B) + 1, 0);
    for (std::int64_t pos = 0; pos < B; pos += 64) {
        std::uint64_t w = occ.window(pos);
        const std::int64_t limit = std::min<std::int64_t>(64, B - pos);
        std::int64_t acc = prefix[static_cast<std::size_t>(pos)];
        for (std::int64_t i = 0; i < limit; ++i) {
            acc += static_cast<std::int64_t>(w & 1);
            w >>= 1;
            prefix[static_cast<std::size_t>(pos + i) + 1] = acc;
        }
    }
    return prefix;
}

} // namespace detail

// Raw cross-market activity X^raw_h(ell): the number of bucket indices k in
// [|ell|, B-1-|ell|] where series 1 occupies bucket k and series 2 occupies
// bucket k + ell. O(n1 + n2 + B/64).
inline std::int64_t cross_activity_raw(const BivariateSample& sample, double h, std::int64_t ell) {
    if (!(h > 0.0)) fail(errc::invalid_parameter, "bucket width h must be > 0");
    sample.require_events("cross_activity_raw");
    detail::BucketOccupancy occ1(sample.s1, h), occ2(sample.s2, h);
    if (occ1.bucket_count() < 2 * std::abs(ell) + 1)
        fail(errc::range_too_narrow, "offset " + std::to_string(ell) + " needs at least " +
                                         std::to_string(2 * std::abs(ell) + 1) + " buckets");
    return detail::ds_point(occ1, occ2, ell).raw;
}

// Relative cross-market activity X^rel_h(ell) = X^raw / min(occupancy sums).
// Both sums zero is an error; exactly one zero forces raw = 0 and returns 0.
inline double cross_activity_rel(const BivariateSample& sample, double h, std::int64_t ell) {
    if (!(h > 0.0)) fail(errc::invalid_parameter, "bucket width h must be > 0");
    sample.require_events("cross_activity_rel");
    detail::BucketOccupancy occ1(sample.s1, h), occ2(sample.s2, h);
    if (occ1.bucket_count() < 2 * std::abs(ell) + 1)
        fail(errc::range_too_narrow, "offset " + std::to_string(ell) + " needs at least " +
                                         std::to_string(2 * std::abs(ell) + 1) + " buckets");
    const auto p = detail::ds_point(occ1, occ2, ell);
    if (p.denom == 0) {
        const std::int64_t a = std::abs(ell), b = occ1.bucket_count() - 1 - std::abs(ell);
        if (occ1.count_range(a, b) == 0 && occ2.count_range(a + ell, b + ell) == 0)
            fail(errc::degenerate_denominator, "no occupied buckets in range at offset " + std::to_string(ell));
        return 0.0;
    }
    return static_cast<double>(p.raw) / static_cast<double>(p.denom);
}

// Full curve over G_h = {ell : |ell h| <= r}. Offsets whose k-range is empty
// (B < 2|ell|+1) are dropped; that filter is symmetric in ell, so the
// surviving grid stays symmetric around 0.
inline DsCurve ds_curve(const BivariateSample& sample, const DsConfig& cfg) {
    if (!(cfg.h > 0.0) || !(cfg.r > 0.0))
        fail(errc::invalid_parameter, "DsConfig requires h > 0 and r > 0");
    sample.require_events("ds_curve");
    detail::BucketOccupancy occ1(sample.s1, cfg.h), occ2(sample.s2, cfg.h);
    const std::int64_t B = occ1.bucket_count();
    const std::int64_t L = detail::guarded_floor_div(cfg.r, cfg.h);
    const std::vector<std::int64_t> prefix1 = detail::prefix_counts(occ1);
    const std::vector<std::int64_t> prefix2 = detail::prefix_counts(occ2);
    const auto range_count = [](const std::vector<std::int64_t>& prefix, std::int64_t a,
                                std::int64_t b) {
        const auto n = static_cast<std::int64_t>(prefix.size()) - 1;
        a = std::max<std::int64_t>(a, 0);
        b = std::min(b, n - 1);
        return a > b ? 0 : prefix[static_cast<std::size_t>(b) + 1] - prefix[static_cast<std::size_t>(a)];
    };

    DsCurve curve;
    curve.h = cfg.h;
    for (std::int64_t ell = -L; ell <= L; ++ell) {
        if (B < 2 * std::abs(ell) + 1) continue;
        const std::int64_t a = std::abs(ell), b = B - 1 - std::abs(ell);
        const std::int64_t raw = detail::count_joint(occ1, occ2, ell, a, b);
        const std::int64_t denom =
            std::min(range_count(prefix1, a, b), range_count(prefix2, a + ell, b + ell));
        curve.offsets.push_back(ell);
        curve.raw.push_back(raw);
        curve.denom.push_back(denom);
        curve.rel.push_back(denom > 0 ? static_cast<double>(raw) / static_cast<double>(denom)
                                      : std::numeric_limits<double>::quiet_NaN());
    }
    if (curve.offsets.empty())
        fail(errc::range_too_narrow, "no offset in G_h has a nonempty bucket range");
    return curve;
}

// DS estimator: theta = ell_hat * h with ell_hat maximizing X^rel over the
// surviving grid. Ties are compared exactly on the integer ratios and broken
// toward the smallest ell.
inline DsEstimate ds_estimate(const BivariateSample& sample, const DsConfig& cfg) {
    DsCurve curve = ds_curve(sample, cfg);
    std::size_t best = curve.offsets.size();
    for (std::size_t i = 0; i < curve.offsets.size(); ++i) {
        if (curve.denom[i] == 0) continue;
        if (best == curve.offsets.size()) {
            best = i;
            continue;
        }
        const auto lhs = static_cast<unsigned __int128>(curve.raw[i]) *
                         static_cast<unsigned __int128>(curve.denom[best]);
        const auto rhs = static_cast<unsigned __int128>(curve.raw[best]) *
                         static_cast<unsigned __int128>(curve.denom[i]);
        if (lhs > rhs) best = i;
    }
    if (best == curve.offsets.size())
        fail(errc::degenerate_denominator, "every offset in G_h has an empty occupancy denominator");
    DsEstimate est;
    est.offset = curve.offsets[best];
    est.theta = static_cast<double>(est.offset) * cfg.h;
    est.curve = std::move(curve);
    return est;
}

} // namespace leadlag
