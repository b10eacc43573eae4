#include "marginvote/comparison.hpp"

#include <algorithm>
#include <cmath>
#include <map>

#include "marginvote/closed_form.hpp"

namespace marginvote {

double majority_quality(int n, double p) {
    if (n < 1 || n % 2 == 0)
        throw ValidationError("majority quality is defined for odd panels, got n = " +
                              std::to_string(n));
    if (!(p >= 0.0 && p <= 1.0)) throw ValidationError("accuracy must lie in [0,1]");
    if (p == 0.0) return 0.0;
    if (p == 1.0) return 1.0;
    const double log_p = std::log(p);
    const double log_q = std::log1p(-p);
    const double log_n_fact = std::lgamma(static_cast<double>(n) + 1.0);
    double quality = 0.0;
    for (int j = n / 2 + 1; j <= n; ++j) {
        const double log_term = log_n_fact - std::lgamma(static_cast<double>(j) + 1.0) -
                                std::lgamma(static_cast<double>(n - j) + 1.0) + j * log_p +
                                (n - j) * log_q;
        quality += std::exp(log_term);
    }
    return quality;
}

EarlyStopResult early_stop_majority(int n, double p) {
    if (n < 1) throw ValidationError("panel size must be >= 1");
    if (!(p >= 0.0 && p <= 1.0)) throw ValidationError("accuracy must lie in [0,1]");
    const double q = 1.0 - p;

    EarlyStopResult result;
    // active[l + n] = P(still voting with lead l after m votes).
    std::vector<double> active(static_cast<size_t>(2 * n + 1), 0.0);
    std::vector<double> next(active.size(), 0.0);
    active[static_cast<size_t>(n)] = 1.0;

    for (int m = 1; m <= n; ++m) {
        std::fill(next.begin(), next.end(), 0.0);
        for (int l = -(m - 1); l <= m - 1; l += 2) {
            const double mass = active[static_cast<size_t>(l + n)];
            if (mass == 0.0) continue;
            next[static_cast<size_t>(l + 1 + n)] += mass * p;
            next[static_cast<size_t>(l - 1 + n)] += mass * q;
        }
        active.swap(next);
        for (int l = -m; l <= m; l += 2) {
            const double mass = active[static_cast<size_t>(l + n)];
            if (mass == 0.0) continue;
            if (std::abs(l) > n - m) {
                // Leader can no longer be overtaken: absorb here.
                if (l > 0) result.quality += mass;
                result.expected_votes += static_cast<double>(m) * mass;
                active[static_cast<size_t>(l + n)] = 0.0;
            } else if (m == n) {
                // Panel exhausted with lead 0 (even n only): a tie.
                result.tie_probability += mass;
                result.expected_votes += static_cast<double>(m) * mass;
                active[static_cast<size_t>(l + n)] = 0.0;
            }
        }
    }
    return result;
}

double cost_ratio(const VotingSpec& spec, const MajoritySpec& mv) {
    const double margin_votes = expected_votes(spec);
    const double mv_votes = mv.early_stopping
                                ? early_stop_majority(mv.n, mv.p.value()).expected_votes
                                : static_cast<double>(mv.n);
    return margin_votes / mv_votes;
}

namespace {

// Majority quality at a fractional panel size: linear interpolation between
// the two odd panels bracketing it. Simple majority casts all its votes, so
// the panel size is the expected cost.
double majority_quality_at_cost(double cost, double p) {
    long long n1 = static_cast<long long>(std::floor(cost));
    if (n1 % 2 == 0) --n1;
    if (n1 < 1) n1 = 1;
    const long long n2 = n1 + 2;
    const double q1 = majority_quality(static_cast<int>(n1), p);
    if (cost <= static_cast<double>(n1)) return q1;
    const double q2 = majority_quality(static_cast<int>(n2), p);
    const double w = (cost - static_cast<double>(n1)) / 2.0;
    return q1 + w * (q2 - q1);
}

} // namespace

std::vector<DominanceRow> dominance_scan(const std::vector<double>& p_grid,
                                         const std::vector<long long>& delta_set,
                                         const std::vector<std::pair<long long, int>>& n_map) {
    if (p_grid.empty() || delta_set.empty())
        throw ValidationError("dominance scan requires non-empty grids");
    std::map<long long, int> panel;
    for (const auto& [delta, n] : n_map) panel[delta] = n;

    std::vector<DominanceRow> rows;
    rows.reserve(p_grid.size() * delta_set.size());
    for (const double p : p_grid) {
        for (const long long delta : delta_set) {
            const auto it = panel.find(delta);
            if (it == panel.end())
                throw ValidationError("no panel size mapped for delta = " + std::to_string(delta));
            const VotingSpec spec(WorkerAccuracy(p), static_cast<double>(delta));
            DominanceRow row;
            row.p = p;
            row.delta = delta;
            row.n = it->second;
            row.q_margin = consensus_quality(spec);
            row.e_margin = expected_votes(spec);
            row.q_mv = majority_quality(row.n, p);
            row.ratio = row.e_margin / static_cast<double>(row.n);
            row.q_mv_cost_matched = majority_quality_at_cost(row.e_margin, p);
            row.dominant = row.q_margin >= row.q_mv_cost_matched;
            rows.push_back(row);
        }
    }
    return rows;
}

} // namespace marginvote
