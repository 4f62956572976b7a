#pragma once

#include <algorithm>
#include <cmath>
#include <optional>
#include <stdexcept>
#include <utility>
#include <vector>

namespace ebs {

// A standard Gaussian bandit: K independent arms with unit variance, known
// only through their means. Means are nominally in [0,1] but any finite
// values are accepted; everything downstream depends on the gaps only.
struct BanditInstance {
    std::vector<double> means;

    explicit BanditInstance(std::vector<double> m) : means(std::move(m)) {
        if (means.size() < 2)
            throw std::invalid_argument("BanditInstance: need at least 2 arms");
        for (double v : means)
            if (!std::isfinite(v))
                throw std::invalid_argument("BanditInstance: means must be finite");
    }

    int num_arms() const { return static_cast<int>(means.size()); }
};

// Gap structure Delta_a = mu* - mu_a. Ties for the maximum are detected by
// exact floating-point equality: any tolerance would silently change the
// optimal weights and the characteristic time.
struct GapVector {
    std::vector<double> gaps;
    std::vector<int> best_arms;             // sorted, nonempty
    std::optional<double> delta_min;        // smallest strictly positive gap
    double delta_max = 0.0;

    int num_arms() const { return static_cast<int>(gaps.size()); }
    bool degenerate() const { return best_arms.size() > 1; }
    int best() const { return best_arms.front(); }
};

inline GapVector compute_gaps(const BanditInstance& instance) {
    GapVector g;
    const int k = instance.num_arms();
    const double mu_star = *std::max_element(instance.means.begin(), instance.means.end());
    g.gaps.resize(k);
    for (int a = 0; a < k; ++a) {
        g.gaps[a] = mu_star - instance.means[a];
        if (instance.means[a] == mu_star) g.best_arms.push_back(a);
    }
    for (double d : g.gaps) {
        if (d > 0.0) {
            if (!g.delta_min || d < *g.delta_min) g.delta_min = d;
            g.delta_max = std::max(g.delta_max, d);
        }
    }
    return g;
}

}  // namespace ebs
