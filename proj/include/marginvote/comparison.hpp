// Majority-voting baselines: fixed-panel quality, the early-stopping variant,
// and cost/quality comparisons against delta-margin voting.
#pragma once

#include <vector>

#include "marginvote/core.hpp"

namespace marginvote {

struct MajoritySpec {
    MajoritySpec(int panel_size, WorkerAccuracy accuracy, bool early_stop)
        : n(panel_size), p(accuracy), early_stopping(early_stop) {
        if (n < 1) throw ValidationError("panel size must be >= 1");
        if (!early_stopping && n % 2 == 0)
            throw ValidationError("simple majority voting requires an odd panel, got n = " +
                                  std::to_string(n));
    }

    int n;
    WorkerAccuracy p;
    bool early_stopping;
};

// P(majority of n independent votes is correct), odd n.
double majority_quality(int n, double p);

struct EarlyStopResult {
    double quality = 0.0;         // P(final leader is the correct label)
    double expected_votes = 0.0;
    double tie_probability = 0.0; // nonzero only for even panels
};

// Sequential panel vote that stops once the leader cannot be overtaken by the
// remaining votes (|lead| > n - votes cast). Truncates but never changes the
// fixed-panel decision, so quality matches majority_quality for odd n.
// Exact dynamic programming over (votes cast, lead) states.
EarlyStopResult early_stop_majority(int n, double p);

// E[votes](delta-margin) / E[votes](majority baseline). Simple majority
// always casts all n votes.
double cost_ratio(const VotingSpec& spec, const MajoritySpec& mv);

struct DominanceRow {
    double p = 0.0;
    long long delta = 0;
    int n = 0;
    double q_margin = 0.0;
    double q_mv = 0.0;
    double ratio = 0.0;          // E_margin / n for the paired panel
    double e_margin = 0.0;
    double q_mv_cost_matched = 0.0; // majority quality interpolated at panel size E_margin
    bool dominant = false;          // q_margin >= q_mv_cost_matched
};

// Tabulates delta-margin vs majority voting over a grid. n_map pairs each
// delta with a panel size for the ratio column; the dominance flag compares
// against majority quality at equal expected cost, interpolating linearly
// between the two odd panel sizes that bracket E_margin.
std::vector<DominanceRow> dominance_scan(const std::vector<double>& p_grid,
                                         const std::vector<long long>& delta_set,
                                         const std::vector<std::pair<long long, int>>& n_map);

} // namespace marginvote
