#pragma once

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <memory>
#include <span>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "ebs/allocation.hpp"
#include "ebs/bandit.hpp"
#include "ebs/confidence.hpp"
#include "ebs/exploration_bias.hpp"

namespace ebs {

enum class TrackingMode { C, D };

// Stopping threshold beta(t, delta).
//   Theoretical: log(R t^alpha / delta), alpha in [1,2], R > 0
//   Empirical:   log((log t + 1) / delta)
struct ThresholdSpec {
    enum class Kind { Theoretical, Empirical };
    Kind kind = Kind::Empirical;
    double delta = 0.1;
    double R = 1.0;
    double alpha = 1.0;

    static ThresholdSpec empirical(double delta) {
        ThresholdSpec s;
        s.kind = Kind::Empirical;
        s.delta = check_delta(delta);
        return s;
    }
    static ThresholdSpec theoretical(double R, double alpha, double delta) {
        if (!(R > 0.0)) throw std::invalid_argument("ThresholdSpec: R must be > 0");
        if (!(alpha >= 1.0 && alpha <= 2.0))
            throw std::invalid_argument("ThresholdSpec: alpha must lie in [1,2]");
        ThresholdSpec s;
        s.kind = Kind::Theoretical;
        s.delta = check_delta(delta);
        s.R = R;
        s.alpha = alpha;
        return s;
    }

    double beta(long t) const {
        const double td = static_cast<double>(t);
        if (kind == Kind::Theoretical) return std::log(R * std::pow(td, alpha) / delta);
        return std::log((std::log(td) + 1.0) / delta);
    }

  private:
    static double check_delta(double d) {
        if (!(d > 0.0 && d < 1.0))
            throw std::invalid_argument("ThresholdSpec: delta must lie in (0,1)");
        return d;
    }
};

// Mutable per-run state shared by all strategies. Confined to one run; the
// sampling rules and helpers below never share state across runs.
struct StrategyState {
    long t = 0;
    std::vector<long> counts;
    std::vector<double> sums;
    std::vector<double> means;          // sums / counts; NaN until first sample
    std::vector<double> cum_targets;    // sum_{s < t} of recorded target vectors
    std::vector<double> last_targets;   // most recently recorded target vector
    std::vector<int> active;            // Racing only
    long round = 0;                     // Racing only

    explicit StrategyState(int k)
        : counts(k, 0),
          sums(k, 0.0),
          means(k, std::numeric_limits<double>::quiet_NaN()),
          cum_targets(k, 0.0),
          last_targets(k, 1.0 / k) {
        active.resize(k);
        for (int a = 0; a < k; ++a) active[a] = a;
    }

    int num_arms() const { return static_cast<int>(counts.size()); }

    void observe(int arm, double reward) {
        ++counts[arm];
        sums[arm] += reward;
        means[arm] = sums[arm] / counts[arm];
        ++t;
    }

    void record_targets(std::span<const double> targets) {
        for (int a = 0; a < num_arms(); ++a) {
            cum_targets[a] += targets[a];
            last_targets[a] = targets[a];
        }
    }
};

// Signed pairwise GLR statistic: antisymmetric, positive when arm a looks
// better than arm b.
inline double glr_pair(const StrategyState& st, int a, int b) {
    if (st.counts[a] < 1 || st.counts[b] < 1)
        throw std::invalid_argument("glr_pair: both arms must have been sampled");
    const double na = static_cast<double>(st.counts[a]);
    const double nb = static_cast<double>(st.counts[b]);
    const double d = st.means[a] - st.means[b];
    return 0.5 * (na * nb / (na + nb)) * d * std::abs(d);
}

// Z(t) = max_a min_{b != a} Z_{a,b}(t); equals t * g(mu_hat, N/t).
inline double glr_stat(const StrategyState& st) {
    const int k = st.num_arms();
    double best = -std::numeric_limits<double>::infinity();
    for (int a = 0; a < k; ++a) {
        if (st.counts[a] < 1)
            throw std::invalid_argument("glr_stat: all arms must have been sampled");
        double worst = std::numeric_limits<double>::infinity();
        for (int b = 0; b < k; ++b)
            if (b != a) worst = std::min(worst, glr_pair(st, a, b));
        best = std::max(best, worst);
    }
    return best;
}

inline bool should_stop(const StrategyState& st, const ThresholdSpec& threshold) {
    return glr_stat(st) > threshold.beta(st.t);
}

inline int recommend(const StrategyState& st) {
    int best = 0;
    for (int a = 1; a < st.num_arms(); ++a)
        if (st.means[a] > st.means[best]) best = a;
    return best;
}

// Tracking step: records the targets, then picks the arm lagging the most.
//   C: argmin_a N_a - cum_targets_a      (cumulative sums)
//   D: argmin_a N_a - t * targets_a      (current targets)
// Ties break to the lowest arm index.
inline int track_select(StrategyState& st, std::span<const double> targets, TrackingMode mode) {
    st.record_targets(targets);
    const int k = st.num_arms();
    int pick = 0;
    double best = std::numeric_limits<double>::infinity();
    for (int a = 0; a < k; ++a) {
        const double reference = mode == TrackingMode::C
                                     ? st.cum_targets[a]
                                     : static_cast<double>(st.t) * targets[a];
        const double deficit = static_cast<double>(st.counts[a]) - reference;
        if (deficit < best) {
            best = deficit;
            pick = a;
        }
    }
    return pick;
}

// One strategy = a sampling rule; stopping and recommendation are shared.
class SamplingRule {
  public:
    virtual ~SamplingRule() = default;
    // Appends the arm(s) to observe next (LUCB++ emits two per round).
    virtual void next_arms(StrategyState& st, std::vector<int>& out) = 0;
    // Called once after each observation (round bookkeeping).
    virtual void after_observe(StrategyState&) {}
};

namespace detail {

inline bool initial_sweep(StrategyState& st, std::vector<int>& out) {
    const int k = st.num_arms();
    if (st.t >= k) return false;
    st.record_targets(std::vector<double>(k, 1.0 / k));
    out.push_back(static_cast<int>(st.t));
    return true;
}

// Plug-in optimal weights at the empirical means, with the uniform-over-best
// convention when the empirical best is tied.
inline std::vector<double> plug_in_weights(const StrategyState& st) {
    const GapVector gaps = compute_gaps(BanditInstance(st.means));
    return solve_allocation(gaps).weights;
}

}  // namespace detail

// Exploration-Biased Sampling: track the weights of the exploration-biased
// bandit of the running confidence region.
class EbsRule : public SamplingRule {
  public:
    using RegionHook = std::function<void(const ConfidenceRegion&)>;

    EbsRule(RadiusScheme scheme, TrackingMode mode, bool clamp = false,
            RegionHook on_region = {})
        : scheme_(scheme), mode_(mode), clamp_(clamp), on_region_(std::move(on_region)) {}

    void next_arms(StrategyState& st, std::vector<int>& out) override {
        if (detail::initial_sweep(st, out)) return;
        const ConfidenceRegion region =
            build_region(st.means, st.counts, scheme_, clamp_);
        if (on_region_) on_region_(region);
        const BiasedAllocation biased = exploration_biased_weights(region);
        out.push_back(track_select(st, biased.weights, mode_));
    }

  private:
    RadiusScheme scheme_;
    TrackingMode mode_;
    bool clamp_;
    RegionHook on_region_;
};

// Track-and-Stop: track the plug-in weights, with forced exploration of any
// arm whose count falls below sqrt(t) - K/2. The plug-in targets are recorded
// on every step, forced or not, so the cumulative target sums stay at t.
class TasRule : public SamplingRule {
  public:
    explicit TasRule(TrackingMode mode) : mode_(mode) {}

    void next_arms(StrategyState& st, std::vector<int>& out) override {
        if (detail::initial_sweep(st, out)) return;
        const int k = st.num_arms();
        const double floor = std::sqrt(static_cast<double>(st.t)) - k / 2.0;
        int forced = -1;
        for (int a = 0; a < k; ++a)
            if (st.counts[a] < floor && (forced < 0 || st.counts[a] < st.counts[forced]))
                forced = a;
        const std::vector<double> targets = detail::plug_in_weights(st);
        if (forced >= 0) {
            st.record_targets(targets);
            out.push_back(forced);
            return;
        }
        out.push_back(track_select(st, targets, mode_));
    }

  private:
    TrackingMode mode_;
};

// Chernoff-Racing: cycle through an active set once per round; at the end of
// a round, test the empirically worst active arm(s) against the active best
// with Z = (r/4)(gap)^2 and eliminate on success. Elimination only shapes
// sampling; stopping stays the shared GLR rule.
class RacingRule : public SamplingRule {
  public:
    RacingRule(ThresholdSpec threshold, bool test_all_active = false)
        : threshold_(threshold), test_all_(test_all_active) {}

    void next_arms(StrategyState& st, std::vector<int>& out) override {
        st.record_targets(std::vector<double>(st.num_arms(), 1.0 / st.num_arms()));
        out.push_back(st.active[cursor_]);
    }

    void after_observe(StrategyState& st) override {
        ++cursor_;
        if (cursor_ < st.active.size()) return;
        cursor_ = 0;
        ++st.round;
        end_of_round(st);
    }

  private:
    void end_of_round(StrategyState& st) {
        if (st.active.size() < 2) return;
        int best = st.active[0];
        double worst_mean = st.means[st.active[0]];
        for (int a : st.active) {
            if (st.means[a] > st.means[best]) best = a;
            worst_mean = std::min(worst_mean, st.means[a]);
        }
        const double beta = threshold_.beta(st.t);
        std::vector<int> survivors;
        survivors.reserve(st.active.size());
        for (int b : st.active) {
            bool tested = test_all_ ? (b != best) : (b != best && st.means[b] == worst_mean);
            if (tested) {
                const double d = st.means[best] - st.means[b];
                if (0.25 * static_cast<double>(st.round) * d * d > beta) continue;
            }
            survivors.push_back(b);
        }
        st.active = std::move(survivors);
    }

    ThresholdSpec threshold_;
    bool test_all_;
    std::size_t cursor_ = 0;
};

// Upper confidence index of LUCB++. The inner log(N_a) is replaced by
// log(N_a) + 1: the paper's expression is undefined at N_a = 1.
inline double lucb_index(const StrategyState& st, int a, double delta) {
    const double n = static_cast<double>(st.counts[a]);
    const double k2 = 2.0 * st.num_arms();
    return st.means[a] +
           std::sqrt(3.0 / n * std::log((std::log(n) + 1.0) * k2 / delta));
}

// The pair sampled by one LUCB++ round: the empirical best and the highest
// upper-confidence challenger among the rest. Ties break to lowest index.
inline std::pair<int, int> lucb_pair(const StrategyState& st, double delta) {
    const int best = recommend(st);
    int challenger = -1;
    double best_index = -std::numeric_limits<double>::infinity();
    for (int a = 0; a < st.num_arms(); ++a) {
        if (a == best) continue;
        const double u = lucb_index(st, a, delta);
        if (u > best_index) {
            best_index = u;
            challenger = a;
        }
    }
    return {best, challenger};
}

class LucbRule : public SamplingRule {
  public:
    explicit LucbRule(double delta) : delta_(delta) {}

    void next_arms(StrategyState& st, std::vector<int>& out) override {
        if (detail::initial_sweep(st, out)) return;
        const std::vector<double> uniform(st.num_arms(), 1.0 / st.num_arms());
        st.record_targets(uniform);
        st.record_targets(uniform);  // two samples this round
        const auto [best, challenger] = lucb_pair(st, delta_);
        out.push_back(best);
        out.push_back(challenger);
    }

  private:
    double delta_;
};

class UniformRule : public SamplingRule {
  public:
    void next_arms(StrategyState& st, std::vector<int>& out) override {
        st.record_targets(std::vector<double>(st.num_arms(), 1.0 / st.num_arms()));
        out.push_back(static_cast<int>(st.t % st.num_arms()));
    }
};

}  // namespace ebs
