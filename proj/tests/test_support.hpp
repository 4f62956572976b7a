#pragma once

#include <algorithm>
#include <random>
#include <vector>

#include "ebs/allocation.hpp"
#include "ebs/bandit.hpp"
#include "ebs/confidence.hpp"

// Shared generators and reference oracles for the test suites. Everything is
// driven by an explicit engine so failures reproduce.

namespace testsup {

// Means in [0,1] with a unique best arm (index 0) and gaps >= gap_floor.
inline ebs::BanditInstance random_instance(std::mt19937_64& rng, int k,
                                           double gap_floor = 0.05) {
    std::uniform_real_distribution<double> best_dist(0.55, 1.0);
    const double best = best_dist(rng);
    std::uniform_real_distribution<double> gap_dist(gap_floor, best);
    std::vector<double> means{best};
    for (int a = 1; a < k; ++a) means.push_back(best - gap_dist(rng));
    return ebs::BanditInstance(std::move(means));
}

inline ebs::BanditInstance random_instance_shuffled(std::mt19937_64& rng, int k,
                                                    double gap_floor = 0.05) {
    ebs::BanditInstance instance = random_instance(rng, k, gap_floor);
    std::shuffle(instance.means.begin(), instance.means.end(), rng);
    return instance;
}

inline ebs::ConfidenceRegion random_region(std::mt19937_64& rng, int k,
                                           double min_width = 0.05,
                                           double max_width = 0.4) {
    std::uniform_real_distribution<double> center(0.0, 1.0);
    std::uniform_real_distribution<double> width(min_width, max_width);
    ebs::ConfidenceRegion region;
    for (int a = 0; a < k; ++a) {
        const double c = center(rng), w = width(rng);
        region.intervals.push_back({c - w / 2.0, c + w / 2.0});
    }
    return region;
}

// Independent root oracle for phi: plain bisection, no Newton.
inline double bisect_phi_root(const ebs::GapVector& gaps, double tol = 1e-12) {
    const double dmin = *gaps.delta_min;
    double lo = (1.0 + 1e-12) / (dmin * dmin);
    double hi = lo * 2.0;
    while (ebs::phi(gaps, hi) > 0.0) hi *= 2.0;
    for (int i = 0; i < 200 && hi - lo > tol * hi; ++i) {
        const double mid = 0.5 * (lo + hi);
        (ebs::phi(gaps, mid) > 0.0 ? lo : hi) = mid;
    }
    return 0.5 * (lo + hi);
}

inline double min_weight(const std::vector<double>& w) {
    return *std::min_element(w.begin(), w.end());
}

inline double inf_norm_diff(const std::vector<double>& a, const std::vector<double>& b) {
    double m = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) m = std::max(m, std::abs(a[i] - b[i]));
    return m;
}

}  // namespace testsup
