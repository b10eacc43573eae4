#include <cmath>

#include "doctest.h"
#include "marginvote/absorbing_chain.hpp"
#include "marginvote/closed_form.hpp"
#include "oracles.hpp"

using namespace marginvote;

namespace {
ChainModel chain_of(double p, double delta) {
    return ChainModel(VotingSpec(WorkerAccuracy(p), delta));
}
} // namespace

TEST_CASE("canonical blocks: delta=1 collapses to a single transient state") {
    const ChainModel c = chain_of(0.7, 1);
    CHECK(c.transient_count() == 1);
    CHECK(c.transient(0, 0) == 0.0);
    CHECK(c.absorption(0, 0) == doctest::Approx(0.3));
    CHECK(c.absorption(0, 1) == doctest::Approx(0.7));
    CHECK(c.start_index() == 0);
}

TEST_CASE("canonical blocks: delta=2 tridiagonal pattern") {
    const ChainModel c = chain_of(0.75, 2);
    const double expected[3][3] = {{0, 0.75, 0}, {0.25, 0, 0.75}, {0, 0.25, 0}};
    for (long long i = 0; i < 3; ++i)
        for (long long j = 0; j < 3; ++j)
            CHECK(c.transient(i, j) == doctest::Approx(expected[i][j]));
    CHECK(c.start_vector(1) == 1.0);
    CHECK(c.start_vector(0) == 0.0);
    CHECK(c.state_difference(0) == -1);
    CHECK(c.state_difference(2) == 1);
}

TEST_CASE("every row of [T_tr | T_A] sums to one") {
    const ChainModel c = chain_of(0.6, 5);
    for (long long i = 0; i < c.transient_count(); ++i) {
        double row = c.absorption(i, 0) + c.absorption(i, 1);
        for (long long j = 0; j < c.transient_count(); ++j) row += c.transient(i, j);
        CHECK(row == doctest::Approx(1.0).epsilon(1e-15));
    }
}

TEST_CASE("chain construction rejects bad thresholds") {
    CHECK_THROWS_AS(chain_of(0.6, 2.5), NonIntegerDeltaError);
    CHECK_THROWS_AS(VotingSpec(WorkerAccuracy(0.6), 0.0), ValidationError);
}

TEST_CASE("expected steps vector") {
    CHECK(expected_steps_vector(chain_of(0.75, 2))[1] == doctest::Approx(3.2).epsilon(1e-12));
    CHECK(expected_steps_vector(chain_of(0.5, 3))[2] == doctest::Approx(9.0).epsilon(1e-12));
    const auto t1 = expected_steps_vector(chain_of(0.3, 1));
    REQUIRE(t1.size() == 1);
    CHECK(t1[0] == doctest::Approx(1.0));
}

TEST_CASE("steps variance vector") {
    CHECK(steps_variance_vector(chain_of(0.5, 2))[1] == doctest::Approx(8.0).epsilon(1e-12));
    const double closed = votes_variance(VotingSpec(WorkerAccuracy(0.8), 4.0));
    CHECK(std::fabs(steps_variance_vector(chain_of(0.8, 4))[3] - closed) <= 1e-9 * closed);
    const auto v1 = steps_variance_vector(chain_of(0.6, 1));
    REQUIRE(v1.size() == 1);
    CHECK(std::fabs(v1[0]) < 1e-12);
}

TEST_CASE("absorption split: middle row and full per-state table") {
    const auto rows = absorption_split(chain_of(0.75, 2));
    CHECK(rows[1].incorrect == doctest::Approx(0.1).epsilon(1e-12));
    CHECK(rows[1].correct == doctest::Approx(0.9).epsilon(1e-12));

    // Symmetric walk: row i wins with probability k/N, k = i+1, N = 2*delta.
    const auto sym = absorption_split(chain_of(0.5, 3));
    for (size_t i = 0; i < sym.size(); ++i) {
        CHECK(sym[i].correct == doctest::Approx((i + 1) / 6.0).epsilon(1e-12));
        CHECK(sym[i].incorrect + sym[i].correct == doctest::Approx(1.0).epsilon(1e-12));
    }

    const auto sure = absorption_split(chain_of(1.0, 4));
    CHECK(sure[3].incorrect == 0.0);
    CHECK(sure[3].correct == 1.0);
}

TEST_CASE("per-state win probabilities equal the gambler formula") {
    for (const double p : {0.55, 0.7, 0.9}) {
        for (int delta = 1; delta <= 6; ++delta) {
            const auto rows = absorption_split(chain_of(p, delta));
            for (size_t i = 0; i < rows.size(); ++i) {
                const double win = gambler_win_probability(
                    {static_cast<long long>(i) + 1, 2LL * delta, WorkerAccuracy(p)});
                CHECK(std::fabs(rows[i].correct - win) <= 1e-9 * win);
            }
        }
    }
}

TEST_CASE("termination pmf against literal path enumeration") {
    const ChainModel c = chain_of(0.6, 2);
    const auto [i2, c2] = termination_pmf_at(c, 2);
    CHECK(i2 == doctest::Approx(0.16).epsilon(1e-12));
    CHECK(c2 == doctest::Approx(0.36).epsilon(1e-12));

    const auto [i3, c3] = termination_pmf_at(c, 3);
    CHECK(i3 == 0.0);
    CHECK(c3 == 0.0);

    const auto [i4, c4] = termination_pmf_at(c, 4);
    CHECK(i4 == doctest::Approx(0.0768).epsilon(1e-12));
    CHECK(c4 == doctest::Approx(0.1728).epsilon(1e-12));

    for (const int m : {2, 4, 6, 8, 10}) {
        const auto [oi, oc] = oracle::termination_pmf_by_paths(0.6, 2, m);
        const auto [fi, fc] = termination_pmf_at(c, m);
        CHECK(fi == doctest::Approx(oi).epsilon(1e-12));
        CHECK(fc == doctest::Approx(oc).epsilon(1e-12));
    }
    for (const int m : {3, 5, 7, 9, 11}) {
        const auto [oi, oc] = oracle::termination_pmf_by_paths(0.65, 3, m);
        const auto [fi, fc] = termination_pmf_at(chain_of(0.65, 3), m);
        CHECK(fi == doctest::Approx(oi).epsilon(1e-12));
        CHECK(fc == doctest::Approx(oc).epsilon(1e-12));
    }
}

TEST_CASE("pmf parity is exact") {
    const ChainModel c = chain_of(0.7, 3);
    for (int m = 1; m <= 20; ++m) {
        const auto [fi, fc] = termination_pmf_at(c, m);
        if (m < 3 || (m - 3) % 2 != 0) {
            CHECK(fi == 0.0);
            CHECK(fc == 0.0);
        }
    }
}

TEST_CASE("termination distribution: single entry for delta=1") {
    const auto dist = termination_distribution(chain_of(0.7, 1));
    REQUIRE(dist.entries.size() == 1);
    CHECK(dist.entries[0].steps == 1);
    CHECK(dist.entries[0].f_incorrect == doctest::Approx(0.3));
    CHECK(dist.entries[0].f_correct == doctest::Approx(0.7));
    CHECK(dist.truncation_mass < 1e-12);
    CHECK_FALSE(dist.truncated);
}

TEST_CASE("termination distribution: normalization and split masses") {
    for (const double p : {0.55, 0.7, 0.9}) {
        for (int delta = 1; delta <= 8; ++delta) {
            const VotingSpec s(WorkerAccuracy(p), delta);
            const auto dist = termination_distribution(ChainModel(s));
            double total = dist.truncation_mass;
            for (const auto& e : dist.entries) total += e.f_incorrect + e.f_correct;
            CHECK(std::fabs(total - 1.0) < 1e-12);
            CHECK(std::fabs(dist.correct_mass() - consensus_quality(s)) < 10e-12);
        }
    }
}

TEST_CASE("termination distribution moments match the closed forms") {
    for (const double p : {0.51, 0.6, 0.75}) {
        for (int delta = 2; delta <= 6; ++delta) {
            const VotingSpec s(WorkerAccuracy(p), delta);
            const auto dist = termination_distribution(ChainModel(s));
            const double last_m = static_cast<double>(dist.entries.back().steps);
            const double e_closed = expected_votes(s);
            const double v_closed = votes_variance(s);
            CHECK(std::fabs(dist.mean() - e_closed) <=
                  1e-9 * e_closed + 10.0 * dist.truncation_mass * last_m);
            CHECK(std::fabs(dist.variance() - v_closed) <=
                  1e-8 * v_closed + 10.0 * dist.truncation_mass * last_m * last_m);
        }
    }
    const auto d37 = termination_distribution(chain_of(0.7, 3));
    CHECK(std::fabs(d37.mean() - expected_votes(VotingSpec(WorkerAccuracy(0.7), 3.0))) < 1e-8);
}

TEST_CASE("pmf is monotone decreasing past its mode for phi >= 1.5") {
    for (const double phi : {1.5, 2.0, 3.0}) {
        const double p = phi / (1.0 + phi);
        const auto dist = termination_distribution(chain_of(p, 4), 1e-10);
        size_t mode = 0;
        double best = 0.0;
        for (size_t i = 0; i < dist.entries.size(); ++i) {
            const double f = dist.entries[i].f_incorrect + dist.entries[i].f_correct;
            if (f > best) {
                best = f;
                mode = i;
            }
        }
        for (size_t i = mode + 1; i < dist.entries.size(); ++i) {
            const double prev =
                dist.entries[i - 1].f_incorrect + dist.entries[i - 1].f_correct;
            const double cur = dist.entries[i].f_incorrect + dist.entries[i].f_correct;
            CHECK(cur <= prev + 1e-15);
        }
    }
}

TEST_CASE("step cap sets the truncation flag instead of spinning") {
    const auto dist = termination_distribution(chain_of(0.501, 6), 1e-12, 50);
    CHECK(dist.truncated);
    CHECK(dist.truncation_mass > 1e-12);
    double total = dist.truncation_mass;
    for (const auto& e : dist.entries) total += e.f_incorrect + e.f_correct;
    CHECK(std::fabs(total - 1.0) < 1e-12);
}

TEST_CASE("degenerate accuracies yield a point mass at delta") {
    const auto sure = termination_distribution(chain_of(1.0, 5));
    REQUIRE(sure.entries.size() == 1);
    CHECK(sure.entries[0].steps == 5);
    CHECK(sure.entries[0].f_correct == 1.0);
    CHECK(sure.entries[0].f_incorrect == 0.0);

    const auto never = termination_distribution(chain_of(0.0, 5));
    REQUIRE(never.entries.size() == 1);
    CHECK(never.entries[0].f_incorrect == 1.0);
}

TEST_CASE("matrix stats bundles the start-state quantities") {
    const ConsensusStats stats = matrix_stats(VotingSpec(WorkerAccuracy(0.75), 2.0));
    CHECK(stats.quality == doctest::Approx(0.9).epsilon(1e-12));
    CHECK(stats.expected_votes == doctest::Approx(3.2).epsilon(1e-12));
    CHECK(stats.votes_variance == doctest::Approx(3.84).epsilon(1e-9));
    CHECK(stats.source == StatSource::matrix);
}
