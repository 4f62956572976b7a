#pragma once

#include <cmath>
#include <span>
#include <stdexcept>
#include <vector>

namespace ebs {

// Time-uniform confidence radius at a given sample count.
//   Theoretical: C_gamma(s) = 2 sqrt(log(4 s / gamma) / s)
//   Empirical:   C_gamma(s) =   sqrt(log(s / gamma) / s)
// The empirical variant is the tighter choice used in experiments. Risk
// splitting across arms (gamma/K) is the caller's responsibility.
struct RadiusScheme {
    enum class Kind { Theoretical, Empirical };
    Kind kind = Kind::Empirical;
    double gamma = 0.1;
};

inline double radius(const RadiusScheme& scheme, long count) {
    if (count < 1) throw std::invalid_argument("radius: count must be >= 1");
    if (!(scheme.gamma > 0.0 && scheme.gamma < 1.0))
        throw std::invalid_argument("radius: gamma must lie in (0,1)");
    const double s = static_cast<double>(count);
    if (scheme.kind == RadiusScheme::Kind::Theoretical)
        return 2.0 * std::sqrt(std::log(4.0 * s / scheme.gamma) / s);
    return std::sqrt(std::log(s / scheme.gamma) / s);
}

struct Interval {
    double lo, hi;
};

// Product of per-arm confidence intervals.
struct ConfidenceRegion {
    std::vector<Interval> intervals;

    int num_arms() const { return static_cast<int>(intervals.size()); }
    bool contains(std::span<const double> point) const {
        for (int a = 0; a < num_arms(); ++a)
            if (point[a] < intervals[a].lo || point[a] > intervals[a].hi) return false;
        return true;
    }
};

// Region [mu_hat_a +- C_{gamma/K}(N_a)] for every arm. Intervals are not
// clamped to [0,1] unless asked; the experimental radii routinely exit it.
inline ConfidenceRegion build_region(std::span<const double> empirical_means,
                                     std::span<const long> counts,
                                     const RadiusScheme& scheme,
                                     bool clamp_to_unit = false) {
    const int k = static_cast<int>(empirical_means.size());
    if (k < 2 || counts.size() != empirical_means.size())
        throw std::invalid_argument("build_region: need >= 2 arms with matching counts");
    RadiusScheme per_arm{scheme.kind, scheme.gamma / k};
    ConfidenceRegion region;
    region.intervals.reserve(k);
    for (int a = 0; a < k; ++a) {
        if (counts[a] < 1)
            throw std::invalid_argument("build_region: arm was never sampled");
        const double c = radius(per_arm, counts[a]);
        double lo = empirical_means[a] - c;
        double hi = empirical_means[a] + c;
        if (clamp_to_unit) {
            lo = std::min(std::max(lo, 0.0), 1.0);
            hi = std::min(std::max(hi, 0.0), 1.0);
        }
        region.intervals.push_back({lo, hi});
    }
    return region;
}

}  // namespace ebs
