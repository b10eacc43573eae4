// Closed-form characteristics of delta-margin voting: consensus quality,
// expected votes, vote-count variance (quarter-squares polynomial), and the
// general Gambler's Ruin quantities the derivations pass through.
#pragma once

#include <cstdint>
#include <utility>

#include "marginvote/core.hpp"

namespace marginvote {

enum class StatSource { closed_form, matrix, simulation };

inline const char* to_string(StatSource s) {
    switch (s) {
        case StatSource::closed_form: return "closed_form";
        case StatSource::matrix: return "matrix";
        case StatSource::simulation: return "simulation";
    }
    return "unknown";
}

struct ConsensusStats {
    double quality = 0.0;
    double expected_votes = 0.0;
    double votes_variance = 0.0;
    StatSource source = StatSource::closed_form;
};

// Probability that the consensus label is correct. Accepts real thresholds.
double consensus_quality(const VotingSpec& spec);

// Expected number of votes until consensus. Requires an integer threshold;
// the symmetric branch returns delta^2, degenerate accuracies return delta.
double expected_votes(const VotingSpec& spec);

// Same expression evaluated at a real threshold, parameterized by odds.
// Exists for the process-equivalence identity, where delta2 is real by
// construction; operational callers integerize first.
double expected_votes_extended(double phi, double delta);

// floor(z^2/4): the quarter-squares sequence h(z).
long long quarter_square(long long z);

// Variance of the number of votes until consensus (integer threshold).
double votes_variance(const VotingSpec& spec);

ConsensusStats closed_form_stats(const VotingSpec& spec);

// Asymmetric Gambler's Ruin: start at fortune k, absorb at 0 or N.
// The delta-margin process is the symmetric embedding k = delta, N = 2*delta.
struct GamblerSpec {
    GamblerSpec(long long start, long long target, WorkerAccuracy accuracy)
        : k(start), N(target), p(accuracy) {
        if (!(0 < start && start < target))
            throw ValidationError("gambler start must satisfy 0 < k < N");
    }

    long long k;
    long long N;
    WorkerAccuracy p;
};

// P(absorb at N before 0).
double gambler_win_probability(const GamblerSpec& g);

// E[steps to absorption], via Wald's identity for p != 1/2 and k(N-k) otherwise.
double gambler_expected_duration(const GamblerSpec& g);

// Var(steps) for the symmetric walk (p = 1/2).
double gambler_symmetric_variance(long long k, long long N);

// (E[T | absorbed at N], E[T | absorbed at 0]) for the symmetric walk.
std::pair<double, double> gambler_symmetric_conditional_durations(long long k, long long N);

} // namespace marginvote
