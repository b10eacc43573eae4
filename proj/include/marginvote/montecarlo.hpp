// Seeded random-walk simulation of delta-margin voting and the relative-error
// metrics used to compare simulation against the closed forms.
#pragma once

#include <cstdint>
#include <map>
#include <vector>

#include "marginvote/core.hpp"

namespace marginvote {

struct SimConfig {
    SimConfig(VotingSpec voting_spec, long long trial_count, std::uint64_t rng_seed)
        : spec(voting_spec), trials(trial_count), seed(rng_seed) {
        spec.require_integer_delta();
        if (trials < 1) throw ValidationError("trial count must be >= 1");
    }

    VotingSpec spec;
    long long trials;
    std::uint64_t seed;
};

// Hard per-trial cap; hitting it raises SimulationError rather than biasing
// the sample by silently dropping long walks.
inline constexpr long long kWalkStepCap = 100'000'000;

struct SimReport {
    double quality_estimate = 0.0;
    double mean_votes = 0.0;
    double votes_variance_estimate = 0.0;
    std::map<long long, long long> histogram; // step count -> trial count
    double standard_error_quality = 0.0;
    double standard_error_mean = 0.0;
    long long trials = 0;
    long long correct_count = 0;
};

// Walks one trial to absorption; exposed for substream-level tests.
struct WalkResult {
    long long steps = 0;
    bool correct = false;
};
WalkResult walk_single_trial(double p, long long delta, std::uint64_t seed, std::uint64_t trial);

SimReport simulate_walks(const SimConfig& config, int threads = 1);

// (estimate - theory) / estimate: the paper's simulation-normalized error.
double relative_error(double estimate, double theory);

struct SweepCell {
    double p = 0.0;
    long long delta = 0;
    double q_sim = 0.0, e_sim = 0.0, var_sim = 0.0;
    double q_th = 0.0, e_th = 0.0, var_th = 0.0;
    double err_q = 0.0, err_e = 0.0, err_var = 0.0;
};

// Runs simulate_walks per grid cell (same seed per cell, so one cell of a
// sweep reproduces the standalone call) and tabulates relative errors against
// the closed forms.
std::vector<SweepCell> error_sweep(const std::vector<double>& p_grid,
                                   const std::vector<long long>& delta_set, long long trials,
                                   std::uint64_t seed, int threads = 1);

// Central sample moment of order k from a step-count histogram.
double histogram_moment(const std::map<long long, long long>& histogram, int order, double center);

} // namespace marginvote
