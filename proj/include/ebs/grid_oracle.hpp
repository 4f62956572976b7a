#pragma once

#include <algorithm>
#include <cmath>
#include <functional>
#include <stdexcept>
#include <vector>

#include "ebs/allocation.hpp"
#include "ebs/bandit.hpp"
#include "ebs/confidence.hpp"

// Exhaustive grid oracles. Both are exponential in K and exist to cross-check
// the closed-form solver and the exploration-biased search on small problems;
// they deliberately avoid the Newton path where possible.

namespace ebs {

// Maximizes g(mu, .) over the simplex grid {v : v_a = i_a * grid_step}.
// Returns the best grid point; its g value is within O(grid_step) of the
// optimum. Refuses K > 4.
inline std::vector<double> brute_force_weights(const BanditInstance& instance,
                                               double grid_step) {
    const int k = instance.num_arms();
    if (k > 4) throw std::invalid_argument("brute_force_weights: K must be <= 4");
    if (!(grid_step > 0.0 && grid_step <= 0.1))
        throw std::invalid_argument("brute_force_weights: grid_step must be in (0, 0.1]");

    const long n = std::lround(1.0 / grid_step);
    const GapVector gaps = compute_gaps(instance);
    std::vector<double> v(k), best_v(k);
    double best_g = -1.0;

    // enumerate compositions of n into k parts
    std::vector<long> counts(k, 0);
    std::function<void(int, long)> recurse = [&](int arm, long remaining) {
        if (arm == k - 1) {
            counts[arm] = remaining;
            for (int a = 0; a < k; ++a) v[a] = double(counts[a]) / double(n);
            const double g = detail::g_from_gaps(gaps, v);
            if (g > best_g) {
                best_g = g;
                best_v = v;
            }
            return;
        }
        for (long i = 0; i <= remaining; ++i) {
            counts[arm] = i;
            recurse(arm + 1, remaining - i);
        }
    };
    recurse(0, n);
    return best_v;
}

// Maximizes w_min over a grid of the product region (degenerate grid points
// score zero). Refuses K > 3.
inline BanditInstance brute_force_eb_bandit(const ConfidenceRegion& region,
                                            double grid_step) {
    const int k = region.num_arms();
    if (k > 3) throw std::invalid_argument("brute_force_eb_bandit: K must be <= 3");
    if (!(grid_step > 0.0 && grid_step <= 0.05))
        throw std::invalid_argument("brute_force_eb_bandit: grid_step must be in (0, 0.05]");

    std::vector<std::vector<double>> axes(k);
    for (int a = 0; a < k; ++a) {
        const auto& iv = region.intervals[a];
        if (iv.lo > iv.hi) throw std::invalid_argument("brute_force_eb_bandit: empty interval");
        for (double x = iv.lo; x < iv.hi; x += grid_step) axes[a].push_back(x);
        axes[a].push_back(iv.hi);
    }

    std::vector<double> point(k), best_point;
    double best_wmin = -1.0;
    std::function<void(int)> recurse = [&](int arm) {
        if (arm == k) {
            const BanditInstance candidate{point};
            const GapVector gaps = compute_gaps(candidate);
            double wmin = 0.0;
            if (!gaps.degenerate()) {
                const auto alloc = solve_allocation(gaps);
                wmin = *std::min_element(alloc.weights.begin(), alloc.weights.end());
            }
            if (wmin > best_wmin) {
                best_wmin = wmin;
                best_point = point;
            }
            return;
        }
        for (double x : axes[arm]) {
            point[arm] = x;
            recurse(arm + 1);
        }
    };
    recurse(0);
    return BanditInstance(best_point);
}

}  // namespace ebs
