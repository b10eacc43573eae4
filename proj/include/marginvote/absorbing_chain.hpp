// Matrix-route oracle for delta-margin voting: canonical-form absorbing chain,
// fundamental-matrix quantities via tridiagonal solves, and the discrete
// phase-type distribution of time to consensus.
#pragma once

#include <cstdint>
#include <vector>

#include "marginvote/closed_form.hpp"
#include "marginvote/core.hpp"

namespace marginvote {

// Canonical-form blocks of the voting chain. Transient states are indexed
// 0..2*delta-2; index i corresponds to vote difference i - (delta - 1), so the
// start state (difference 0) sits at index delta - 1. Absorbing column 0 is
// the incorrect consensus (difference -delta), column 1 the correct one.
// The blocks are tridiagonal/sparse and are exposed by element accessors;
// nothing here materializes a dense matrix.
class ChainModel {
public:
    explicit ChainModel(const VotingSpec& spec)
        : delta_(spec.require_integer_delta()), p_(spec.p()) {
        if (delta_ < 1) throw ValidationError("chain threshold must be >= 1");
    }

    long long delta() const { return delta_; }
    double p() const { return p_; }
    double q() const { return 1.0 - p_; }

    long long transient_count() const { return 2 * delta_ - 1; }
    long long start_index() const { return delta_ - 1; }
    long long state_difference(long long index) const { return index - (delta_ - 1); }

    bool is_degenerate() const { return p_ == 0.0 || p_ == 1.0; }

    // T_tr element: superdiagonal p, subdiagonal q, zero elsewhere.
    double transient(long long i, long long j) const {
        if (j == i + 1) return p_;
        if (j == i - 1) return 1.0 - p_;
        return 0.0;
    }

    // T_A element: column 0 (incorrect) reached only from index 0 with
    // probability q; column 1 (correct) only from the top index with p.
    double absorption(long long i, int column) const {
        if (column == 0) return i == 0 ? 1.0 - p_ : 0.0;
        return i == transient_count() - 1 ? p_ : 0.0;
    }

    double start_vector(long long i) const { return i == start_index() ? 1.0 : 0.0; }

    VotingSpec spec() const { return VotingSpec(WorkerAccuracy(p_), static_cast<double>(delta_)); }

private:
    long long delta_;
    double p_;
};

ChainModel build_chain(const VotingSpec& spec);

// Solves (I - T_tr) x = rhs with the Thomas algorithm; O(n) per call.
std::vector<double> solve_transient_system(const ChainModel& chain, std::vector<double> rhs);

// t = N*1: expected steps to absorption from each transient state.
std::vector<double> expected_steps_vector(const ChainModel& chain);

// (2N - I)t - t_sq: variance of steps to absorption from each transient state.
std::vector<double> steps_variance_vector(const ChainModel& chain);

struct AbsorptionRow {
    double incorrect = 0.0;
    double correct = 0.0;
};

// B = N * T_A: per-start-state absorption probabilities; rows sum to 1.
std::vector<AbsorptionRow> absorption_split(const ChainModel& chain);

// f(T = m) = z * T_tr^(m-1) * T_A, split by absorbing state. Computed by
// iterated vector-matrix products; matrix powers are never formed.
std::pair<double, double> termination_pmf_at(const ChainModel& chain, long long steps);

struct TerminationEntry {
    long long steps = 0;
    double f_incorrect = 0.0;
    double f_correct = 0.0;
};

struct TerminationDistribution {
    std::vector<TerminationEntry> entries; // only parity steps m = d, d+2, ...
    double truncation_mass = 0.0;          // transient mass left past the last entry
    bool truncated = false;                // true if the step cap stopped iteration
    long long delta = 0;
    double p = 0.0;

    double correct_mass() const;
    double incorrect_mass() const;
    double mean() const;
    double variance() const;
};

TerminationDistribution termination_distribution(const ChainModel& chain,
                                                 double tail_tol = 1e-12,
                                                 long long max_steps = 10'000'000);

// Q/E/Var read off the chain at the start state; the matrix-route counterpart
// of closed_form_stats.
ConsensusStats matrix_stats(const VotingSpec& spec);

} // namespace marginvote
