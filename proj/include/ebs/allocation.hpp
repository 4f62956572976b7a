#pragma once

#include <cmath>
#include <limits>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "ebs/bandit.hpp"

// Optimal sampling allocation for best-arm identification.
//
// For an instance with a unique best arm, the optimal weight vector w and the
// characteristic time T are recovered from the unique root r of
//
//     phi(r) = sum_{a != a*} 1/(r Delta_a^2 - 1)^2 - 1,   r > 1/Delta_min^2,
//
// via  w_a* = 1 / (1 + sum_a 1/(r Delta_a^2 - 1)),  w_a = w_a*/(r Delta_a^2 - 1)
// and  T = 2 r / w_a*.  phi is convex and strictly decreasing, so Newton
// iterates started below the root converge quadratically from below.

namespace ebs {

class solver_error : public std::runtime_error {
  public:
    explicit solver_error(const std::string& what) : std::runtime_error(what) {}
};

struct OptimalAllocation {
    double root = std::numeric_limits<double>::quiet_NaN();  // NaN when degenerate
    std::vector<double> weights;
    double characteristic_time = std::numeric_limits<double>::infinity();
    bool degenerate = false;
};

struct CharacteristicBounds {
    double r_lo, r_hi;
    double wmax_lo, wmax_hi;
    double T_lo, T_hi;
    double mean_sq_gap;  // average squared gap over the K-1 suboptimal arms
};

namespace detail {

// One fused evaluation of phi and phi' at r. Gaps must contain exactly the
// suboptimal gaps (all > 0) and r must exceed 1/min(gap)^2.
inline void phi_and_derivative(std::span<const double> sub_gaps, double r,
                               double& phi_out, double& dphi_out) {
    double phi = -1.0, dphi = 0.0;
    for (double d : sub_gaps) {
        const double d2 = d * d;
        const double q = 1.0 / (r * d2 - 1.0);
        phi += q * q;
        dphi += d2 * q * q * q;
    }
    phi_out = phi;
    dphi_out = -2.0 * dphi;
}

struct GapSummary {
    double dmin2;     // Delta_min^2
    double mean_sq;   // average of Delta_a^2 over suboptimal arms
    int k;            // total number of arms
};

inline GapSummary summarize(const GapVector& gaps) {
    if (gaps.degenerate())
        throw std::domain_error("instance has several best arms");
    GapSummary s{};
    s.k = gaps.num_arms();
    const double dmin = *gaps.delta_min;
    s.dmin2 = dmin * dmin;
    double acc = 0.0;
    for (double d : gaps.gaps) acc += d * d;
    s.mean_sq = acc / (s.k - 1);
    return s;
}

// Newton iteration on phi from the analytical lower bound. Returns the
// root; quadratic convergence makes the cap unreachable for sane gaps.
inline double newton_root(std::span<const double> sub_gaps, const GapSummary& s, double tol) {
    const double r0 = std::max(2.0 / s.dmin2, (1.0 + std::sqrt(double(s.k - 1))) / s.mean_sq);
    if (!std::isfinite(r0))
        throw solver_error("gaps too small to resolve in double precision");
    double r = r0;
    double phi, dphi;
    for (int iter = 0; iter < 200; ++iter) {
        phi_and_derivative(sub_gaps, r, phi, dphi);
        if (!std::isfinite(phi) || !std::isfinite(dphi))
            throw solver_error("Newton iteration produced a non-finite value");
        if (std::abs(phi) < tol) return r;
        r -= phi / dphi;
    }
    throw solver_error("Newton iteration did not converge within 200 steps");
}

// g evaluated against precomputed gaps; v indexed like the instance.
inline double g_from_gaps(const GapVector& gaps, std::span<const double> v) {
    const int astar = gaps.best();
    const double vs = v[astar];
    double best = std::numeric_limits<double>::infinity();
    for (int a = 0; a < gaps.num_arms(); ++a) {
        if (a == astar) continue;
        const double denom = vs + v[a];
        const double ratio = denom > 0.0 ? vs * v[a] / denom : 0.0;
        best = std::min(best, ratio * gaps.gaps[a] * gaps.gaps[a]);
    }
    return 0.5 * best;
}

}  // namespace detail

// phi_mu(r); domain error outside (1/Delta_min^2, inf) or for degenerate gaps.
inline double phi(const GapVector& gaps, double r) {
    if (gaps.degenerate())
        throw std::domain_error("phi: instance has several best arms");
    const double dmin = *gaps.delta_min;
    if (r <= 1.0 / (dmin * dmin))
        throw std::domain_error("phi: r outside (1/Delta_min^2, inf)");
    double acc = -1.0;
    for (int a = 0; a < gaps.num_arms(); ++a) {
        const double d = gaps.gaps[a];
        if (d == 0.0) continue;
        const double q = 1.0 / (r * d * d - 1.0);
        acc += q * q;
    }
    return acc;
}

inline OptimalAllocation solve_allocation(const GapVector& gaps, double tol = 1e-10) {
    if (tol <= 0.0) throw std::invalid_argument("solve_allocation: tol must be > 0");
    const int k = gaps.num_arms();
    OptimalAllocation out;

    if (gaps.degenerate()) {
        out.degenerate = true;
        out.weights.assign(k, 0.0);
        for (int a : gaps.best_arms) out.weights[a] = 1.0 / gaps.best_arms.size();
        return out;  // T stays +inf, root stays NaN
    }

    const int astar = gaps.best();
    if (k == 2) {
        const double d = gaps.delta_max;
        out.root = 2.0 / (d * d);  // exact root of phi at K = 2
        out.weights = {0.5, 0.5};
        out.characteristic_time = 8.0 / (d * d);
        return out;
    }

    std::vector<double> sub;
    sub.reserve(k - 1);
    for (int a = 0; a < k; ++a)
        if (a != astar) sub.push_back(gaps.gaps[a]);

    const auto s = detail::summarize(gaps);
    const double r = detail::newton_root(sub, s, tol);

    double inv_wstar = 1.0;
    for (double d : sub) inv_wstar += 1.0 / (r * d * d - 1.0);
    const double wstar = 1.0 / inv_wstar;
    if (!std::isfinite(wstar) || wstar <= 0.0)
        throw solver_error("weights are not finite");

    out.root = r;
    out.weights.assign(k, 0.0);
    out.weights[astar] = wstar;
    for (int a = 0; a < k; ++a)
        if (a != astar) out.weights[a] = wstar / (r * gaps.gaps[a] * gaps.gaps[a] - 1.0);
    out.characteristic_time = 2.0 * r / wstar;
    return out;
}

inline OptimalAllocation solve_allocation(const BanditInstance& instance, double tol = 1e-10) {
    return solve_allocation(compute_gaps(instance), tol);
}

// Value of the inner transportation problem at proportions v:
//    g(mu, v) = (1/2) min_{a != a*} v_a* v_a / (v_a* + v_a) * Delta_a^2.
// Zero whenever the instance has tied best arms. v must lie in the simplex.
inline double g_value(const BanditInstance& instance, std::span<const double> v) {
    if (static_cast<int>(v.size()) != instance.num_arms())
        throw std::invalid_argument("g_value: dimension mismatch");
    double sum = 0.0;
    for (double x : v) {
        if (x < 0.0) throw std::domain_error("g_value: negative component");
        sum += x;
    }
    if (std::abs(sum - 1.0) > 1e-9)
        throw std::domain_error("g_value: v does not sum to 1");
    return detail::g_from_gaps(compute_gaps(instance), v);
}

// Analytical bounds on r, w_max and T from the gaps alone.
inline CharacteristicBounds characteristic_bounds(const GapVector& gaps) {
    const auto s = detail::summarize(gaps);
    const double sk = std::sqrt(double(s.k - 1));
    CharacteristicBounds b{};
    b.mean_sq_gap = s.mean_sq;
    b.r_lo = std::max(2.0 / s.dmin2, (1.0 + sk) / s.mean_sq);
    b.r_hi = (1.0 + sk) / s.dmin2;
    b.wmax_lo = 1.0 / (1.0 + sk);
    b.wmax_hi = 0.5;
    b.T_lo = std::max(8.0 / s.dmin2, 4.0 * (1.0 + sk) / s.mean_sq);
    b.T_hi = 2.0 * (1.0 + sk) * (1.0 + sk) / s.dmin2;
    return b;
}

// Bernoulli KL divergence, used for the lower-bound column of reports.
inline double kl_bernoulli(double p, double q) {
    if (!(p > 0.0 && p < 1.0 && q > 0.0 && q < 1.0))
        throw std::domain_error("kl_bernoulli: arguments must lie in (0,1)");
    return p * std::log(p / q) + (1.0 - p) * std::log((1.0 - p) / (1.0 - q));
}

}  // namespace ebs
