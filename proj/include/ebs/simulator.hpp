#pragma once

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdint>
#include <exception>
#include <memory>
#include <mutex>
#include <optional>
#include <stdexcept>
#include <string>
#include <thread>
#include <vector>

#include "ebs/allocation.hpp"
#include "ebs/bandit.hpp"
#include "ebs/rng.hpp"
#include "ebs/strategies.hpp"

namespace ebs {

// One of: ebs-c, ebs-d, tas-c, tas-d, racing, lucb++, uniform.
struct StrategySpec {
    std::string id = "ebs-c";
    double gamma = 0.1;                                            // region risk (EBS)
    RadiusScheme::Kind radius_kind = RadiusScheme::Kind::Empirical;
    ThresholdSpec::Kind threshold_kind = ThresholdSpec::Kind::Empirical;
    double threshold_R = 1.0;
    double threshold_alpha = 1.0;
    bool clamp_region = false;
    bool racing_test_all = false;

    static bool valid_id(const std::string& id) {
        return id == "ebs-c" || id == "ebs-d" || id == "tas-c" || id == "tas-d" ||
               id == "racing" || id == "lucb++" || id == "uniform";
    }
    bool is_ebs() const { return id == "ebs-c" || id == "ebs-d"; }
    bool is_tas() const { return id == "tas-c" || id == "tas-d"; }
    TrackingMode tracking() const {
        return id.back() == 'd' ? TrackingMode::D : TrackingMode::C;
    }
    ThresholdSpec make_threshold(double delta) const {
        return threshold_kind == ThresholdSpec::Kind::Empirical
                   ? ThresholdSpec::empirical(delta)
                   : ThresholdSpec::theoretical(threshold_R, threshold_alpha, delta);
    }
};

struct TrajectorySpec {
    long stride = 0;  // 0: every step up to t = 1200, then every 10th
};

struct SimulationConfig {
    BanditInstance instance;
    StrategySpec strategy;
    double delta = 0.1;
    int replications = 1;
    std::uint64_t master_seed = 0;
    long max_steps = 10'000'000;
    std::optional<TrajectorySpec> trajectory;
    bool check_invariants = false;
};

struct TrajectoryPoint {
    long t;
    std::vector<double> freq;     // N(t)/t
    std::vector<double> targets;  // most recent target weights
};

struct RunResult {
    long tau = 0;
    int recommended = -1;
    bool correct = false;
    bool truncated = false;
    bool truth_left_region = false;  // region-building strategies only
    std::vector<TrajectoryPoint> trajectory;
};

struct AggregateStats {
    double mean_tau = 0.0;
    double std_tau = 0.0;
    double error_rate = 0.0;
    int truncation_count = 0;
    int replications = 0;
};

class invariant_error : public std::runtime_error {
  public:
    explicit invariant_error(const std::string& what) : std::runtime_error(what) {}
};

namespace detail {

inline std::unique_ptr<SamplingRule> make_rule(const SimulationConfig& config,
                                               EbsRule::RegionHook region_hook) {
    const StrategySpec& s = config.strategy;
    if (!StrategySpec::valid_id(s.id))
        throw std::invalid_argument("unknown strategy id: " + s.id);
    if (s.is_ebs())
        return std::make_unique<EbsRule>(RadiusScheme{s.radius_kind, s.gamma}, s.tracking(),
                                         s.clamp_region, std::move(region_hook));
    if (s.is_tas()) return std::make_unique<TasRule>(s.tracking());
    if (s.id == "racing")
        return std::make_unique<RacingRule>(s.make_threshold(config.delta), s.racing_test_all);
    if (s.id == "lucb++") return std::make_unique<LucbRule>(config.delta);
    return std::make_unique<UniformRule>();
}

inline void check_run_invariants(const SimulationConfig& config, const StrategyState& st) {
    const int k = st.num_arms();
    const double t = static_cast<double>(st.t);
    if (config.strategy.is_ebs()) {
        const double floor = (2.0 / k) * std::sqrt(t) - k;
        for (int a = 0; a < k; ++a)
            if (st.counts[a] + 1e-9 < floor)
                throw invariant_error("exploration floor violated at t=" + std::to_string(st.t));
        if (config.strategy.tracking() == TrackingMode::C) {
            for (int a = 0; a < k; ++a)
                if (std::abs(st.counts[a] - st.cum_targets[a]) > k - 1 + 1e-9)
                    throw invariant_error("tracking deviation exceeded K-1 at t=" +
                                          std::to_string(st.t));
        }
    }
    if (st.t % 64 == 0) {
        bool all_sampled = true;
        for (int a = 0; a < k; ++a) all_sampled = all_sampled && st.counts[a] >= 1;
        if (all_sampled) {
            std::vector<double> freq(k);
            for (int a = 0; a < k; ++a) freq[a] = st.counts[a] / t;
            const double z = glr_stat(st);
            const double tg = t * g_value(BanditInstance(st.means), freq);
            if (std::abs(z - tg) > 1e-8 * std::max(1.0, std::abs(z)))
                throw invariant_error("GLR statistic disagrees with t*g at t=" +
                                      std::to_string(st.t));
        }
    }
}

}  // namespace detail

// A single run, fully determined by (master_seed, run_index). Rewards come
// from the pre-committed per-arm streams, so the s-th draw of an arm does
// not depend on the strategy under test.
inline RunResult run_once(const SimulationConfig& config, int run_index) {
    const int k = config.instance.num_arms();
    if (config.max_steps < k)
        throw std::invalid_argument("run_once: max_steps must be >= K");
    const ThresholdSpec threshold = config.strategy.make_threshold(config.delta);
    const RewardStreams streams(config.master_seed, static_cast<std::uint64_t>(run_index));

    RunResult result;
    EbsRule::RegionHook hook;
    if (config.strategy.is_ebs()) {
        const std::vector<double>& truth = config.instance.means;
        bool* missed = &result.truth_left_region;
        hook = [&truth, missed](const ConfidenceRegion& region) {
            if (!region.contains(truth)) *missed = true;
        };
    }
    auto rule = detail::make_rule(config, std::move(hook));

    StrategyState st(k);
    const long stride = config.trajectory ? config.trajectory->stride : 0;
    const auto capture_due = [&](long t) {
        if (!config.trajectory) return false;
        if (stride > 0) return t % stride == 0;
        return t <= 1200 || t % 10 == 0;
    };
    const auto capture = [&](long t) {
        TrajectoryPoint p;
        p.t = t;
        p.freq.resize(k);
        for (int a = 0; a < k; ++a) p.freq[a] = st.counts[a] / static_cast<double>(t);
        p.targets = st.last_targets;
        result.trajectory.push_back(std::move(p));
    };

    std::vector<int> arms;
    bool stopped = false;
    // A racing run is also over once the race is decided: with a single
    // active arm the GLR min over the (empty) challenger set is vacuously
    // infinite. Frozen eliminated arms can otherwise cap the global
    // statistic below the growing threshold forever.
    const bool racing = config.strategy.id == "racing";
    while (true) {
        if (st.t >= k &&
            ((racing && st.active.size() == 1) || should_stop(st, threshold))) {
            stopped = true;
            break;
        }
        if (st.t >= config.max_steps) break;
        arms.clear();
        rule->next_arms(st, arms);
        for (int arm : arms) {
            if (st.t >= config.max_steps) break;
            const double reward =
                streams.draw(arm, st.counts[arm], config.instance.means[arm]);
            st.observe(arm, reward);
            rule->after_observe(st);
            if (config.check_invariants) detail::check_run_invariants(config, st);
            if (capture_due(st.t)) capture(st.t);
        }
    }

    result.tau = st.t;
    result.recommended = recommend(st);
    result.truncated = !stopped;
    const GapVector truth_gaps = compute_gaps(config.instance);
    result.correct = std::find(truth_gaps.best_arms.begin(), truth_gaps.best_arms.end(),
                               result.recommended) != truth_gaps.best_arms.end();
    if (config.trajectory &&
        (result.trajectory.empty() || result.trajectory.back().t != st.t))
        capture(st.t);
    return result;
}

// All replications, executed on `threads` workers (0 = hardware default).
// Results are slotted by run index, so the outcome is identical no matter
// how the runs are scheduled.
inline std::vector<RunResult> run_all(const SimulationConfig& config, int threads = 0) {
    if (config.replications < 1)
        throw std::invalid_argument("run_all: replications must be >= 1");
    const int n = config.replications;
    std::vector<RunResult> results(n);
    int workers = threads > 0 ? threads : static_cast<int>(std::thread::hardware_concurrency());
    workers = std::max(1, std::min(workers, n));

    if (workers == 1) {
        for (int i = 0; i < n; ++i) results[i] = run_once(config, i);
        return results;
    }

    std::atomic<int> next{0};
    std::atomic<bool> failed{false};
    std::exception_ptr error;
    std::mutex error_mutex;
    auto worker = [&]() {
        try {
            while (true) {
                const int i = next.fetch_add(1);
                if (i >= n || failed.load()) return;
                results[i] = run_once(config, i);
            }
        } catch (...) {
            std::lock_guard<std::mutex> lk(error_mutex);
            if (!error) error = std::current_exception();
            failed.store(true);
        }
    };
    std::vector<std::thread> pool;
    pool.reserve(workers);
    for (int w = 0; w < workers; ++w) pool.emplace_back(worker);
    for (auto& th : pool) th.join();
    if (error) std::rethrow_exception(error);
    return results;
}

// Monte-Carlo summary. Stopping-time moments are over completed runs only;
// truncated runs are counted separately. The reduction is a fixed-order
// compensated sum over run indices, independent of scheduling.
inline AggregateStats aggregate(const std::vector<RunResult>& results) {
    AggregateStats stats;
    stats.replications = static_cast<int>(results.size());
    long completed = 0, errors = 0;
    double sum = 0.0, comp = 0.0;
    for (const RunResult& r : results) {
        if (r.truncated) {
            ++stats.truncation_count;
            continue;
        }
        ++completed;
        if (!r.correct) ++errors;
        const double y = static_cast<double>(r.tau) - comp;
        const double t = sum + y;
        comp = (t - sum) - y;
        sum = t;
    }
    if (completed == 0) return stats;
    stats.mean_tau = sum / static_cast<double>(completed);
    stats.error_rate = static_cast<double>(errors) / static_cast<double>(completed);
    if (completed >= 2) {
        double sq = 0.0, sq_comp = 0.0;
        for (const RunResult& r : results) {
            if (r.truncated) continue;
            const double d = static_cast<double>(r.tau) - stats.mean_tau;
            const double y = d * d - sq_comp;
            const double t = sq + y;
            sq_comp = (t - sq) - y;
            sq = t;
        }
        stats.std_tau = std::sqrt(sq / static_cast<double>(completed - 1));
    }
    return stats;
}

inline AggregateStats monte_carlo(const SimulationConfig& config, int threads = 0) {
    return aggregate(run_all(config, threads));
}

}  // namespace ebs
