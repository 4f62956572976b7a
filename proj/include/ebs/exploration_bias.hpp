#pragma once

#include <algorithm>
#include <cmath>
#include <vector>

#include "ebs/allocation.hpp"
#include "ebs/bandit.hpp"
#include "ebs/confidence.hpp"

namespace ebs {

// The exploration-biased bandit: the point of a product confidence region
// that maximizes the minimal optimal weight, together with its weights.
struct BiasedAllocation {
    BanditInstance biased_bandit;
    std::vector<double> weights;
    bool uniform = false;  // all intervals shared a point
};

// Search over one candidate per potentially-best arm: the candidate raises
// that arm to its upper bound and drops every other arm to
// max(lower bound, minUB). The winner is the candidate with the largest
// minimal weight; ties keep the lowest arm index (candidates are visited in
// index order and must improve strictly).
inline BiasedAllocation exploration_biased_weights(const ConfidenceRegion& region) {
    const int k = region.num_arms();
    if (k < 2) throw std::invalid_argument("exploration_biased_weights: need >= 2 arms");

    double max_lb = region.intervals[0].lo, min_ub = region.intervals[0].hi;
    for (const auto& iv : region.intervals) {
        if (iv.lo > iv.hi)
            throw std::invalid_argument("exploration_biased_weights: empty interval");
        max_lb = std::max(max_lb, iv.lo);
        min_ub = std::min(min_ub, iv.hi);
    }

    const auto uniform_output = [&](double level) {
        std::vector<double> mu(k);
        for (int a = 0; a < k; ++a)
            mu[a] = std::min(std::max(level, region.intervals[a].lo), region.intervals[a].hi);
        return BiasedAllocation{BanditInstance(std::move(mu)),
                                std::vector<double>(k, 1.0 / k), true};
    };

    if (min_ub >= max_lb) return uniform_output(min_ub);

    double best_wmin = 0.0;
    std::vector<double> best_mu, best_w;
    std::vector<double> candidate(k);
    for (int a = 0; a < k; ++a) {
        if (!(region.intervals[a].hi > max_lb)) continue;  // strict: a can be the unique best
        candidate[a] = region.intervals[a].hi;
        for (int b = 0; b < k; ++b)
            if (b != a) candidate[b] = std::max(region.intervals[b].lo, min_ub);
        const GapVector gaps = compute_gaps(BanditInstance(candidate));
        if (gaps.degenerate()) continue;  // scores w_min = 0, cannot win
        OptimalAllocation alloc = solve_allocation(gaps);
        const double wmin = *std::min_element(alloc.weights.begin(), alloc.weights.end());
        if (wmin > best_wmin) {
            best_wmin = wmin;
            best_mu = candidate;
            best_w = std::move(alloc.weights);
        }
    }

    // Unreachable for nondegenerate intervals; degenerate input can leave no
    // usable candidate, in which case the uniform convention applies.
    if (best_mu.empty()) return uniform_output(min_ub);

    return BiasedAllocation{BanditInstance(std::move(best_mu)), std::move(best_w), false};
}

}  // namespace ebs
