#include "oracles.hpp"

#include <cmath>
#include <random>
#include <stdexcept>
#include <vector>

namespace oracle {

std::pair<double, double> termination_pmf_by_paths(double p, int delta, int m) {
    if (m > 26) throw std::invalid_argument("path enumeration capped at 2^26 sequences");
    double f_incorrect = 0.0;
    double f_correct = 0.0;
    const double q = 1.0 - p;
    for (std::uint32_t bits = 0; bits < (1u << m); ++bits) {
        int lead = 0;
        bool absorbed_early = false;
        for (int step = 0; step < m - 1; ++step) {
            lead += (bits >> step) & 1u ? 1 : -1;
            if (lead == delta || lead == -delta) {
                absorbed_early = true;
                break;
            }
        }
        if (absorbed_early) continue;
        const int ones_before = [&] {
            int c = 0;
            for (int step = 0; step < m - 1; ++step) c += (bits >> step) & 1u;
            return c;
        }();
        lead = 2 * ones_before - (m - 1);
        const bool last_up = (bits >> (m - 1)) & 1u;
        lead += last_up ? 1 : -1;
        if (lead != delta && lead != -delta) continue;
        const int ones = ones_before + (last_up ? 1 : 0);
        const double prob = std::pow(p, ones) * std::pow(q, m - ones);
        if (lead == delta)
            f_correct += prob;
        else
            f_incorrect += prob;
    }
    return {f_incorrect, f_correct};
}

double win_probability_by_dp(double p, int k, int N, double tol, int max_steps) {
    std::vector<double> mass(static_cast<size_t>(N) + 1, 0.0);
    std::vector<double> next(mass.size(), 0.0);
    mass[static_cast<size_t>(k)] = 1.0;
    double won = 0.0;
    for (int step = 0; step < max_steps; ++step) {
        double alive = 0.0;
        std::fill(next.begin(), next.end(), 0.0);
        for (int pos = 1; pos < N; ++pos) {
            const double m = mass[static_cast<size_t>(pos)];
            if (m == 0.0) continue;
            next[static_cast<size_t>(pos + 1)] += m * p;
            next[static_cast<size_t>(pos - 1)] += m * (1.0 - p);
        }
        won += next[static_cast<size_t>(N)];
        next[static_cast<size_t>(N)] = 0.0;
        next[0] = 0.0;
        mass.swap(next);
        for (int pos = 1; pos < N; ++pos) alive += mass[static_cast<size_t>(pos)];
        if (alive < tol) return won;
    }
    return won;
}

MvEnumeration enumerate_majority(int n, double p) {
    if (n > 20) throw std::invalid_argument("sequence enumeration capped at 2^20");
    MvEnumeration out;
    const double q = 1.0 - p;
    for (std::uint32_t bits = 0; bits < (1u << n); ++bits) {
        int ones = 0;
        for (int v = 0; v < n; ++v) ones += (bits >> v) & 1u;
        const double prob = std::pow(p, ones) * std::pow(q, n - ones);
        const bool panel_correct = 2 * ones > n;

        int lead = 0;
        int stop_at = 0;
        for (int v = 0; v < n; ++v) {
            lead += (bits >> v) & 1u ? 1 : -1;
            if (std::abs(lead) > n - (v + 1)) {
                stop_at = v + 1;
                break;
            }
        }
        if (stop_at == 0) { // even n, final lead 0
            out.tie_probability += prob;
            out.expected_votes_early += n * prob;
        } else {
            const bool early_correct = lead > 0;
            if (early_correct != panel_correct && n % 2 == 1) out.decisions_match = false;
            out.expected_votes_early += stop_at * prob;
            if (early_correct) out.quality_early += prob;
        }
        if (panel_correct) out.quality_panel += prob;
    }
    return out;
}

WalkStats simulate_gambler_reference(int k, int N, double p, long long trials,
                                     std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    std::vector<double> steps_taken(static_cast<size_t>(trials));
    std::vector<bool> won(static_cast<size_t>(trials));
    long long wins = 0;
    double sum = 0.0, sum_win = 0.0, sum_loss = 0.0;
    for (long long t = 0; t < trials; ++t) {
        int pos = k;
        long long steps = 0;
        while (pos != 0 && pos != N) {
            pos += unit(rng) < p ? 1 : -1;
            ++steps;
        }
        const double s = static_cast<double>(steps);
        steps_taken[static_cast<size_t>(t)] = s;
        won[static_cast<size_t>(t)] = pos == N;
        sum += s;
        if (pos == N) {
            ++wins;
            sum_win += s;
        } else {
            sum_loss += s;
        }
    }

    WalkStats stats;
    stats.trials = trials;
    stats.wins = wins;
    const double n = static_cast<double>(trials);
    stats.mean = sum / n;
    stats.win_rate = static_cast<double>(wins) / n;
    stats.mean_given_win = wins > 0 ? sum_win / static_cast<double>(wins) : 0.0;
    stats.mean_given_loss =
        trials - wins > 0 ? sum_loss / static_cast<double>(trials - wins) : 0.0;

    double m2 = 0.0, m4 = 0.0, m2_win = 0.0, m2_loss = 0.0;
    for (long long t = 0; t < trials; ++t) {
        const double d = steps_taken[static_cast<size_t>(t)] - stats.mean;
        m2 += d * d;
        m4 += d * d * d * d;
        if (won[static_cast<size_t>(t)]) {
            const double dw = steps_taken[static_cast<size_t>(t)] - stats.mean_given_win;
            m2_win += dw * dw;
        } else {
            const double dl = steps_taken[static_cast<size_t>(t)] - stats.mean_given_loss;
            m2_loss += dl * dl;
        }
    }
    stats.variance = trials > 1 ? m2 / (n - 1.0) : 0.0;
    stats.fourth_central_moment = m4 / n;
    stats.var_given_win = wins > 1 ? m2_win / static_cast<double>(wins - 1) : 0.0;
    stats.var_given_loss =
        trials - wins > 1 ? m2_loss / static_cast<double>(trials - wins - 1) : 0.0;
    return stats;
}

double table1_variance(int delta, double phi) {
    const auto poly = [phi](std::initializer_list<double> coeffs_high_to_low) {
        double acc = 0.0;
        for (const double c : coeffs_high_to_low) acc = acc * phi + c;
        return acc;
    };
    const auto prefactor = [phi](double scale, int power) {
        const double ratio = (phi + 1.0) / (std::pow(phi, power) + 1.0);
        return scale * phi * ratio * ratio;
    };
    switch (delta) {
        case 2: return prefactor(8.0, 2);
        case 3: return prefactor(12.0, 3) * poly({1, 2, 1});
        case 4: return prefactor(16.0, 4) * poly({1, 2, 4, 2, 1});
        case 5: return prefactor(20.0, 5) * poly({1, 2, 4, 6, 4, 2, 1});
        case 6: return prefactor(24.0, 6) * poly({1, 2, 4, 6, 9, 6, 4, 2, 1});
        case 7: return prefactor(28.0, 7) * poly({1, 2, 4, 6, 9, 12, 9, 6, 4, 2, 1});
        default: throw std::invalid_argument("table covers delta in 2..7");
    }
}

} // namespace oracle
