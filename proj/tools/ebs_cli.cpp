// Command-line front end: solve instances, compute exploration-biased
// weights, run Monte-Carlo experiments and dump plot-ready trajectory CSVs.
//
// Exit codes: 0 success, 2 usage or validation error, 3 solver failure.

#include <cstdint>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "ebs/allocation.hpp"
#include "ebs/exploration_bias.hpp"
#include "ebs/experiment.hpp"
#include "ebs/simulator.hpp"

namespace {

std::string fixed6(double x) {
    if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
    std::ostringstream out;
    out << std::fixed << std::setprecision(6) << x;
    return out.str();
}

std::string join_fixed6(const std::vector<double>& xs) {
    std::string line;
    for (std::size_t i = 0; i < xs.size(); ++i) {
        if (i) line += ' ';
        line += fixed6(xs[i]);
    }
    return line;
}

void cmd_solve(const std::vector<double>& means, double tol) {
    if (means.size() < 2) throw std::invalid_argument("solve: need at least 2 means");
    const ebs::BanditInstance instance(means);
    const ebs::GapVector gaps = ebs::compute_gaps(instance);
    const ebs::OptimalAllocation alloc = ebs::solve_allocation(gaps, tol);

    std::cout << "K: " << instance.num_arms() << '\n';
    std::cout << "gaps: " << join_fixed6(gaps.gaps) << '\n';
    if (alloc.degenerate) {
        std::cout << "degenerate: uniform over best arms\n";
        std::cout << "w: " << join_fixed6(alloc.weights) << '\n';
        std::cout << "T = inf\n";
        return;
    }
    const ebs::CharacteristicBounds b = ebs::characteristic_bounds(gaps);
    std::cout << "r: " << fixed6(alloc.root) << '\n';
    std::cout << "w: " << join_fixed6(alloc.weights) << '\n';
    std::cout << "T: " << fixed6(alloc.characteristic_time) << '\n';
    std::cout << "r bounds: [" << fixed6(b.r_lo) << ", " << fixed6(b.r_hi) << "]\n";
    std::cout << "wmax bounds: [" << fixed6(b.wmax_lo) << ", " << fixed6(b.wmax_hi) << "]\n";
    std::cout << "T bounds: [" << fixed6(b.T_lo) << ", " << fixed6(b.T_hi) << "]\n";
}

ebs::Interval parse_interval(const std::string& text) {
    const auto comma = text.find(',');
    if (comma == std::string::npos)
        throw std::invalid_argument("interval must be written lo,hi: " + text);
    std::size_t lo_len = 0, hi_len = 0;
    double lo, hi;
    try {
        lo = std::stod(text.substr(0, comma), &lo_len);
        hi = std::stod(text.substr(comma + 1), &hi_len);
    } catch (const std::exception&) {
        throw std::invalid_argument("interval is not numeric: " + text);
    }
    if (lo_len != comma || comma + 1 + hi_len != text.size())
        throw std::invalid_argument("interval is not numeric: " + text);
    if (lo > hi)
        throw std::invalid_argument("interval lower bound exceeds upper bound: " + text);
    return {lo, hi};
}

void cmd_ebweights(const std::vector<std::string>& pair_texts, bool clamp) {
    if (pair_texts.size() < 2)
        throw std::invalid_argument("ebweights: need at least 2 intervals");
    ebs::ConfidenceRegion region;
    for (const std::string& text : pair_texts) {
        ebs::Interval iv = parse_interval(text);
        if (clamp) {
            iv.lo = std::min(std::max(iv.lo, 0.0), 1.0);
            iv.hi = std::min(std::max(iv.hi, 0.0), 1.0);
        }
        region.intervals.push_back(iv);
    }
    const ebs::BiasedAllocation biased = ebs::exploration_biased_weights(region);
    std::cout << "uniform: " << (biased.uniform ? "yes" : "no") << '\n';
    std::cout << "mu_tilde: " << join_fixed6(biased.biased_bandit.means) << '\n';
    std::cout << "w: " << join_fixed6(biased.weights) << '\n';
}

struct RunFlags {
    std::string out_path;
    std::optional<std::uint64_t> seed;
    std::optional<int> reps;
};

void write_output(const std::string& out_path, const std::string& content) {
    if (out_path.empty()) {
        std::cout << content;
        return;
    }
    std::ofstream out(out_path, std::ios::binary);  // binary: LF endings everywhere
    if (!out) throw std::invalid_argument("cannot open output file: " + out_path);
    out << content;
}

void cmd_simulate(const std::string& file, const RunFlags& flags) {
    ebs::Experiment exp = ebs::load_experiment(file);
    if (flags.seed) exp.seed = *flags.seed;
    if (flags.reps) exp.replications = *flags.reps;

    std::string csv =
        "strategy,delta,gamma,replications,mean_tau,std_tau,error_rate,truncated,lower_bound\n";
    for (const ebs::StrategySpec& strategy : exp.strategies) {
        for (double delta : exp.deltas) {
            const ebs::SimulationConfig config = ebs::make_config(exp, strategy, delta);
            const ebs::AggregateStats stats = ebs::monte_carlo(config);
            const ebs::OptimalAllocation alloc = ebs::solve_allocation(exp.instance);
            const double lower = alloc.degenerate
                                     ? std::numeric_limits<double>::infinity()
                                     : alloc.characteristic_time *
                                           ebs::kl_bernoulli(delta, 1.0 - delta);
            csv += strategy.id;
            csv += ',' + fixed6(delta);
            csv += ',' + fixed6(strategy.gamma);
            csv += ',' + std::to_string(stats.replications);
            csv += ',' + fixed6(stats.mean_tau);
            csv += ',' + fixed6(stats.std_tau);
            csv += ',' + fixed6(stats.error_rate);
            csv += ',' + std::to_string(stats.truncation_count);
            csv += ',' + fixed6(lower);
            csv += '\n';
        }
    }
    write_output(flags.out_path, csv);
}

void cmd_trace(const std::string& file, const RunFlags& flags) {
    ebs::Experiment exp = ebs::load_experiment(file);
    if (flags.seed) exp.seed = *flags.seed;
    if (exp.strategies.size() != 1)
        throw std::invalid_argument("trace: experiment must contain exactly one strategy");
    if (!exp.trajectory)
        throw std::invalid_argument("trace: experiment must enable trajectory capture");
    if (exp.deltas.size() != 1)
        throw std::invalid_argument("trace: experiment must use a single delta");

    const ebs::SimulationConfig config =
        ebs::make_config(exp, exp.strategies.front(), exp.deltas.front());
    const ebs::RunResult run = ebs::run_once(config, 0);

    const int k = exp.instance.num_arms();
    std::string csv = "t";
    for (int a = 1; a <= k; ++a) csv += ",freq_" + std::to_string(a);
    for (int a = 1; a <= k; ++a) csv += ",target_" + std::to_string(a);
    csv += '\n';
    for (const ebs::TrajectoryPoint& p : run.trajectory) {
        csv += std::to_string(p.t);
        for (double f : p.freq) csv += ',' + fixed6(f);
        for (double w : p.targets) csv += ',' + fixed6(w);
        csv += '\n';
    }
    write_output(flags.out_path, csv);
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Best-arm identification for unit-variance Gaussian bandits"};
    app.require_subcommand(1);

    std::vector<double> means;
    double tol = 1e-10;
    CLI::App* solve = app.add_subcommand("solve", "Optimal weights and characteristic time");
    solve->add_option("means", means, "arm means (>= 2)")->required();
    solve->add_option("--tol", tol, "Newton tolerance on |phi(r)|");

    std::vector<std::string> pairs;
    bool clamp = false;
    CLI::App* ebw = app.add_subcommand("ebweights", "Exploration-biased bandit of a region");
    ebw->add_option("intervals", pairs, "per-arm intervals, written lo,hi")->required();
    ebw->add_flag("--clamp", clamp, "intersect intervals with [0,1]");

    std::string sim_file, trace_file;
    RunFlags sim_flags, trace_flags;
    std::uint64_t seed_value = 0;
    int reps_value = 0;
    CLI::App* sim = app.add_subcommand("simulate", "Monte-Carlo experiment -> CSV");
    sim->add_option("experiment", sim_file, "experiment JSON file")->required();
    sim->add_option("--out", sim_flags.out_path, "CSV output path (default stdout)");
    CLI::Option* sim_seed = sim->add_option("--seed", seed_value, "override master seed");
    CLI::Option* sim_reps = sim->add_option("--reps", reps_value, "override replications")
                               ->check(CLI::PositiveNumber);
    CLI::App* trace = app.add_subcommand("trace", "Single-run trajectory -> CSV");
    trace->add_option("experiment", trace_file, "experiment JSON file")->required();
    trace->add_option("--out", trace_flags.out_path, "CSV output path (default stdout)");
    CLI::Option* trace_seed = trace->add_option("--seed", seed_value, "override master seed");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 2;
    }

    try {
        if (solve->parsed()) {
            cmd_solve(means, tol);
        } else if (ebw->parsed()) {
            cmd_ebweights(pairs, clamp);
        } else if (sim->parsed()) {
            if (*sim_seed) sim_flags.seed = seed_value;
            if (*sim_reps) sim_flags.reps = reps_value;
            cmd_simulate(sim_file, sim_flags);
        } else if (trace->parsed()) {
            if (*trace_seed) trace_flags.seed = seed_value;
            cmd_trace(trace_file, trace_flags);
        }
    } catch (const ebs::solver_error& e) {
        std::cerr << "solver failure: " << e.what() << '\n';
        return 3;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 2;
    }
    return 0;
}
