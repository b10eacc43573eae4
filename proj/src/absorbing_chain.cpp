#include "marginvote/absorbing_chain.hpp"

#include <cmath>
#include <numeric>

namespace marginvote {

ChainModel build_chain(const VotingSpec& spec) { return ChainModel(spec); }

std::vector<double> solve_transient_system(const ChainModel& chain, std::vector<double> rhs) {
    // (I - T_tr) has constant diagonal 1, superdiagonal -p, subdiagonal -q.
    // Weakly diagonally dominant and irreducible for p in (0,1), so the
    // elimination never meets a vanishing pivot.
    const long long n = chain.transient_count();
    if (static_cast<long long>(rhs.size()) != n)
        throw ValidationError("rhs size does not match the transient state count");
    const double p = chain.p();
    const double q = chain.q();

    std::vector<double> upper(static_cast<size_t>(n), 0.0);
    double pivot = 1.0;
    upper[0] = -p / pivot;
    rhs[0] /= pivot;
    for (long long i = 1; i < n; ++i) {
        pivot = 1.0 - (-q) * upper[static_cast<size_t>(i - 1)];
        upper[static_cast<size_t>(i)] = -p / pivot;
        rhs[static_cast<size_t>(i)] =
            (rhs[static_cast<size_t>(i)] + q * rhs[static_cast<size_t>(i - 1)]) / pivot;
    }
    for (long long i = n - 2; i >= 0; --i)
        rhs[static_cast<size_t>(i)] -=
            upper[static_cast<size_t>(i)] * rhs[static_cast<size_t>(i + 1)];
    return rhs;
}

std::vector<double> expected_steps_vector(const ChainModel& chain) {
    const size_t n = static_cast<size_t>(chain.transient_count());
    if (chain.is_degenerate()) {
        // Deterministic drift: |target difference - current| steps.
        std::vector<double> t(n);
        for (size_t i = 0; i < n; ++i) {
            const long long diff = chain.state_difference(static_cast<long long>(i));
            t[i] = static_cast<double>(chain.p() == 1.0 ? chain.delta() - diff
                                                        : chain.delta() + diff);
        }
        return t;
    }
    return solve_transient_system(chain, std::vector<double>(n, 1.0));
}

std::vector<double> steps_variance_vector(const ChainModel& chain) {
    const size_t n = static_cast<size_t>(chain.transient_count());
    if (chain.is_degenerate()) return std::vector<double>(n, 0.0);
    const std::vector<double> t = expected_steps_vector(chain);
    // (2N - I)t - t_sq, assembled from a second solve instead of forming N.
    std::vector<double> nt = solve_transient_system(chain, t);
    std::vector<double> v(n);
    for (size_t i = 0; i < n; ++i) v[i] = 2.0 * nt[i] - t[i] - t[i] * t[i];
    return v;
}

std::vector<AbsorptionRow> absorption_split(const ChainModel& chain) {
    const size_t n = static_cast<size_t>(chain.transient_count());
    std::vector<AbsorptionRow> rows(n);
    if (chain.is_degenerate()) {
        for (auto& r : rows) (chain.p() == 1.0 ? r.correct : r.incorrect) = 1.0;
        return rows;
    }
    std::vector<double> col_incorrect(n, 0.0);
    std::vector<double> col_correct(n, 0.0);
    col_incorrect[0] = chain.q();
    col_correct[n - 1] = chain.p();
    col_incorrect = solve_transient_system(chain, std::move(col_incorrect));
    col_correct = solve_transient_system(chain, std::move(col_correct));
    for (size_t i = 0; i < n; ++i) rows[i] = {col_incorrect[i], col_correct[i]};
    return rows;
}

namespace {

// One transition of the transient mass vector: w <- w * T_tr.
void advance_mass(std::vector<double>& w, std::vector<double>& scratch, double p, double q) {
    const size_t n = w.size();
    for (size_t j = 0; j < n; ++j) {
        double m = 0.0;
        if (j > 0) m += w[j - 1] * p;
        if (j + 1 < n) m += w[j + 1] * q;
        scratch[j] = m;
    }
    w.swap(scratch);
}

} // namespace

std::pair<double, double> termination_pmf_at(const ChainModel& chain, long long steps) {
    if (steps < 1) throw ValidationError("pmf step count must be >= 1");
    if (chain.is_degenerate())
        return steps == chain.delta()
                   ? std::pair<double, double>{chain.p() == 0.0 ? 1.0 : 0.0,
                                               chain.p() == 1.0 ? 1.0 : 0.0}
                   : std::pair<double, double>{0.0, 0.0};
    const size_t n = static_cast<size_t>(chain.transient_count());
    std::vector<double> w(n, 0.0);
    std::vector<double> scratch(n);
    w[static_cast<size_t>(chain.start_index())] = 1.0;
    for (long long s = 1; s < steps; ++s) advance_mass(w, scratch, chain.p(), chain.q());
    return {w.front() * chain.q(), w.back() * chain.p()};
}

TerminationDistribution termination_distribution(const ChainModel& chain, double tail_tol,
                                                 long long max_steps) {
    if (!(tail_tol > 0.0 && tail_tol < 1.0))
        throw ValidationError("tail tolerance must lie in (0,1)");
    TerminationDistribution dist;
    dist.delta = chain.delta();
    dist.p = chain.p();

    if (chain.is_degenerate()) {
        dist.entries.push_back({chain.delta(), chain.p() == 0.0 ? 1.0 : 0.0,
                                chain.p() == 1.0 ? 1.0 : 0.0});
        dist.truncation_mass = 0.0;
        return dist;
    }

    const size_t n = static_cast<size_t>(chain.transient_count());
    std::vector<double> w(n, 0.0);
    std::vector<double> scratch(n);
    w[static_cast<size_t>(chain.start_index())] = 1.0;

    double transient_mass = 1.0;
    for (long long m = 1; m <= max_steps; ++m) {
        const double f_incorrect = w.front() * chain.q();
        const double f_correct = w.back() * chain.p();
        advance_mass(w, scratch, chain.p(), chain.q());
        // Absorption can only happen on steps with m >= delta, m = delta (mod 2);
        // recording just those keeps the table dense in its support.
        if (m >= chain.delta() && ((m - chain.delta()) % 2 == 0))
            dist.entries.push_back({m, f_incorrect, f_correct});
        transient_mass = std::accumulate(w.begin(), w.end(), 0.0);
        if (transient_mass <= tail_tol) break;
        if (m == max_steps) dist.truncated = true;
    }
    dist.truncation_mass = transient_mass;
    return dist;
}

double TerminationDistribution::correct_mass() const {
    double s = 0.0;
    for (const auto& e : entries) s += e.f_correct;
    return s;
}

double TerminationDistribution::incorrect_mass() const {
    double s = 0.0;
    for (const auto& e : entries) s += e.f_incorrect;
    return s;
}

double TerminationDistribution::mean() const {
    double s = 0.0;
    for (const auto& e : entries) s += static_cast<double>(e.steps) * (e.f_incorrect + e.f_correct);
    return s;
}

double TerminationDistribution::variance() const {
    const double mu = mean();
    double s = 0.0;
    for (const auto& e : entries) {
        const double d = static_cast<double>(e.steps) - mu;
        s += d * d * (e.f_incorrect + e.f_correct);
    }
    return s;
}

ConsensusStats matrix_stats(const VotingSpec& spec) {
    const ChainModel chain(spec);
    const size_t start = static_cast<size_t>(chain.start_index());
    if (chain.is_degenerate())
        return ConsensusStats{chain.p(), static_cast<double>(chain.delta()), 0.0,
                              StatSource::matrix};
    return ConsensusStats{absorption_split(chain)[start].correct,
                          expected_steps_vector(chain)[start],
                          steps_variance_vector(chain)[start], StatSource::matrix};
}

} // namespace marginvote
