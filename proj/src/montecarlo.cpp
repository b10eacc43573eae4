#include "marginvote/montecarlo.hpp"

#include <algorithm>
#include <cmath>
#include <thread>

#include "marginvote/closed_form.hpp"
#include "marginvote/rng.hpp"

namespace marginvote {

WalkResult walk_single_trial(double p, long long delta, std::uint64_t seed, std::uint64_t trial) {
    SplitMix64 rng(derive_stream(seed, trial));
    long long position = 0;
    long long steps = 0;
    while (position != delta && position != -delta) {
        if (++steps > kWalkStepCap)
            throw SimulationError("walk exceeded the step cap of " + std::to_string(kWalkStepCap));
        position += rng.next_unit() < p ? 1 : -1;
    }
    return {steps, position == delta};
}

namespace {

struct Accumulator {
    long long correct = 0;
    std::map<long long, long long> histogram;

    void merge(const Accumulator& other) {
        correct += other.correct;
        for (const auto& [steps, count] : other.histogram) histogram[steps] += count;
    }
};

Accumulator run_range(double p, long long delta, std::uint64_t seed, long long begin,
                      long long end) {
    Accumulator acc;
    for (long long trial = begin; trial < end; ++trial) {
        const WalkResult r = walk_single_trial(p, delta, seed, static_cast<std::uint64_t>(trial));
        acc.correct += r.correct ? 1 : 0;
        ++acc.histogram[r.steps];
    }
    return acc;
}

} // namespace

SimReport simulate_walks(const SimConfig& config, int threads) {
    const double p = config.spec.p();
    const long long delta = config.spec.require_integer_delta();
    const long long trials = config.trials;

    Accumulator total;
    if (threads <= 1 || trials < 2 * threads) {
        total = run_range(p, delta, config.seed, 0, trials);
    } else {
        // Per-trial substreams make the partition irrelevant to the result;
        // only the merge below has to be order-insensitive (it sums counts).
        const int workers = threads;
        std::vector<Accumulator> parts(static_cast<size_t>(workers));
        std::vector<std::thread> pool;
        pool.reserve(static_cast<size_t>(workers));
        const long long chunk = (trials + workers - 1) / workers;
        for (int w = 0; w < workers; ++w) {
            const long long begin = static_cast<long long>(w) * chunk;
            const long long end = std::min(trials, begin + chunk);
            pool.emplace_back([&, w, begin, end] {
                if (begin < end)
                    parts[static_cast<size_t>(w)] = run_range(p, delta, config.seed, begin, end);
            });
        }
        for (auto& t : pool) t.join();
        for (const auto& part : parts) total.merge(part);
    }

    SimReport report;
    report.trials = trials;
    report.correct_count = total.correct;
    report.histogram = std::move(total.histogram);
    report.quality_estimate = static_cast<double>(total.correct) / static_cast<double>(trials);

    // All moments come from the merged histogram, so "histogram mean equals
    // mean_votes" holds by construction.
    unsigned __int128 step_sum = 0;
    for (const auto& [steps, count] : report.histogram)
        step_sum += static_cast<unsigned __int128>(steps) * static_cast<unsigned __int128>(count);
    report.mean_votes = static_cast<double>(step_sum) / static_cast<double>(trials);
    if (trials > 1)
        report.votes_variance_estimate =
            histogram_moment(report.histogram, 2, report.mean_votes) *
            (static_cast<double>(trials) / static_cast<double>(trials - 1));

    const double quality = report.quality_estimate;
    report.standard_error_quality =
        std::sqrt(quality * (1.0 - quality) / static_cast<double>(trials));
    report.standard_error_mean =
        std::sqrt(report.votes_variance_estimate / static_cast<double>(trials));
    return report;
}

double relative_error(double estimate, double theory) {
    if (estimate == 0.0) throw ValidationError("relative error is undefined for a zero estimate");
    return (estimate - theory) / estimate;
}

std::vector<SweepCell> error_sweep(const std::vector<double>& p_grid,
                                   const std::vector<long long>& delta_set, long long trials,
                                   std::uint64_t seed, int threads) {
    if (p_grid.empty() || delta_set.empty())
        throw ValidationError("error sweep requires non-empty grids");
    std::vector<SweepCell> table;
    table.reserve(p_grid.size() * delta_set.size());
    for (const double p : p_grid) {
        for (const long long delta : delta_set) {
            const VotingSpec spec(WorkerAccuracy(p), static_cast<double>(delta));
            const SimReport sim = simulate_walks(SimConfig(spec, trials, seed), threads);
            SweepCell cell;
            cell.p = p;
            cell.delta = delta;
            cell.q_sim = sim.quality_estimate;
            cell.e_sim = sim.mean_votes;
            cell.var_sim = sim.votes_variance_estimate;
            cell.q_th = consensus_quality(spec);
            cell.e_th = expected_votes(spec);
            cell.var_th = votes_variance(spec);
            cell.err_q = relative_error(cell.q_sim, cell.q_th);
            cell.err_e = relative_error(cell.e_sim, cell.e_th);
            // delta = 1 walks are deterministic: both variances vanish.
            cell.err_var = (cell.var_sim == 0.0 && cell.var_th == 0.0)
                               ? 0.0
                               : relative_error(cell.var_sim, cell.var_th);
            table.push_back(cell);
        }
    }
    return table;
}

double histogram_moment(const std::map<long long, long long>& histogram, int order,
                        double center) {
    long long n = 0;
    double sum = 0.0;
    for (const auto& [steps, count] : histogram) {
        n += count;
        sum += static_cast<double>(count) * std::pow(static_cast<double>(steps) - center, order);
    }
    return n > 0 ? sum / static_cast<double>(n) : 0.0;
}

} // namespace marginvote
