#include "marginvote/closed_form.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <vector>

namespace marginvote {

namespace {

void require_positive_delta(double delta) {
    if (!(delta > 0.0))
        throw ValidationError("consensus threshold must be positive, got " + std::to_string(delta));
}

// ln(1 + e^x) without overflow.
double softplus(double x) {
    if (x > 0.0) return x + std::log1p(std::exp(-x));
    return std::log1p(std::exp(x));
}

// Coefficients of the bracketed polynomial in the variance formula, lowest
// degree first: exponents 0..2*delta-4 carry h(2), h(3), ..., h(delta), ...,
// h(3), h(2) — the pyramidal quarter-squares pattern. Empty for delta == 1.
std::vector<double> variance_bracket_coefficients(long long delta) {
    if (delta < 2) return {};
    const long long degree = 2 * delta - 4;
    std::vector<double> coeff(static_cast<size_t>(degree) + 1);
    for (long long m = 0; m <= degree; ++m)
        coeff[static_cast<size_t>(m)] =
            static_cast<double>(quarter_square(delta - std::llabs(m - (delta - 2))));
    return coeff;
}

double horner(const std::vector<double>& coeff, double x) {
    double acc = 0.0;
    for (auto it = coeff.rbegin(); it != coeff.rend(); ++it) acc = acc * x + *it;
    return acc;
}

} // namespace

double consensus_quality(const VotingSpec& spec) {
    require_positive_delta(spec.delta());
    if (spec.is_symmetric()) return 0.5;
    const double p = spec.p();
    if (p == 0.0) return 0.0;
    if (p == 1.0) return 1.0;
    // Q = phi^d / (1 + phi^d) = logistic(d * ln(phi)); saturates to 1 cleanly
    // once d*ln(phi) exceeds the exp() range.
    return 1.0 / (1.0 + std::exp(-spec.delta() * spec.log_odds()));
}

double expected_votes(const VotingSpec& spec) {
    require_positive_delta(spec.delta());
    const double delta = static_cast<double>(spec.require_integer_delta());
    if (spec.is_degenerate()) return delta;
    if (spec.is_symmetric()) return delta * delta;
    // d * (phi+1)/(phi-1) * (phi^d-1)/(phi^d+1), with (phi+1)/(phi-1) = 1/(2p-1)
    // and the last factor written as tanh to avoid the overflow/cancellation pair.
    const double half_log_odds = 0.5 * spec.log_odds();
    return delta * std::tanh(delta * half_log_odds) / (2.0 * spec.p() - 1.0);
}

double expected_votes_extended(double phi, double delta) {
    require_positive_delta(delta);
    if (!(phi > 0.0) || std::isinf(phi))
        throw ValidationError("odds must be positive and finite, got " + std::to_string(phi));
    const double log_odds = std::log(phi);
    if (std::fabs(log_odds) < kSymmetricEpsilon) return delta * delta;
    return delta * ((phi + 1.0) / (phi - 1.0)) * std::tanh(0.5 * delta * log_odds);
}

long long quarter_square(long long z) {
    if (z < 0) throw ValidationError("quarter_square requires z >= 0");
    return z * z / 4;
}

double votes_variance(const VotingSpec& spec) {
    require_positive_delta(spec.delta());
    const long long delta = spec.require_integer_delta();
    if (spec.is_degenerate()) return 0.0;
    if (spec.is_symmetric()) {
        const double d2 = static_cast<double>(delta) * static_cast<double>(delta);
        return (2.0 / 3.0) * d2 * (d2 - 1.0);
    }
    if (delta == 1) return 0.0;

    const std::vector<double> coeff = variance_bracket_coefficients(delta);
    const double log_odds = spec.log_odds();
    const double phi = spec.odds();
    const double d = static_cast<double>(delta);

    if (d * std::fabs(log_odds) <= 300.0) {
        const double phi_d = std::exp(d * log_odds);
        const double scale = (phi + 1.0) / (phi_d + 1.0);
        return 4.0 * d * phi * scale * scale * horner(coeff, phi);
    }

    // Extreme odds: phi^delta overflows, so assemble the expression in log
    // space. ln Var = ln(4 d phi) + 2 ln(phi+1) - 2 ln(phi^d + 1) + ln(bracket).
    double max_term = -std::numeric_limits<double>::infinity();
    std::vector<double> log_terms;
    log_terms.reserve(coeff.size());
    for (size_t m = 0; m < coeff.size(); ++m) {
        if (coeff[m] == 0.0) continue;
        const double t = std::log(coeff[m]) + static_cast<double>(m) * log_odds;
        log_terms.push_back(t);
        max_term = std::max(max_term, t);
    }
    double sum = 0.0;
    for (double t : log_terms) sum += std::exp(t - max_term);
    const double log_bracket = max_term + std::log(sum);
    const double log_var = std::log(4.0 * d * phi) + 2.0 * softplus(log_odds) -
                           2.0 * softplus(d * log_odds) + log_bracket;
    return std::exp(log_var);
}

ConsensusStats closed_form_stats(const VotingSpec& spec) {
    return ConsensusStats{consensus_quality(spec), expected_votes(spec), votes_variance(spec),
                          StatSource::closed_form};
}

double gambler_win_probability(const GamblerSpec& g) {
    const double p = g.p.value();
    const double k = static_cast<double>(g.k);
    const double N = static_cast<double>(g.N);
    if (p == 0.0) return 0.0;
    if (p == 1.0) return 1.0;
    if (g.p.is_symmetric()) return k / N;
    // (S^k - 1)/(S^N - 1) with S = q/p = exp(-L).
    const double log_odds = std::log1p((2.0 * p - 1.0) / (1.0 - p));
    if (-N * log_odds > 700.0)
        // S^N overflows (p < 1/2, deep target): same ratio rearranged.
        return std::exp((N - k) * log_odds) * (-std::expm1(k * log_odds));
    return std::expm1(-k * log_odds) / std::expm1(-N * log_odds);
}

double gambler_expected_duration(const GamblerSpec& g) {
    const double p = g.p.value();
    const double k = static_cast<double>(g.k);
    const double N = static_cast<double>(g.N);
    if (g.p.is_symmetric()) return k * (N - k);
    return (N * gambler_win_probability(g) - k) / (2.0 * p - 1.0);
}

double gambler_symmetric_variance(long long k, long long N) {
    if (!(0 < k && k < N)) throw ValidationError("gambler start must satisfy 0 < k < N");
    const double kd = static_cast<double>(k);
    const double Nd = static_cast<double>(N);
    return (kd * (Nd - kd) / 3.0) * (2.0 * kd * kd - 2.0 * kd * Nd + Nd * Nd - 2.0);
}

std::pair<double, double> gambler_symmetric_conditional_durations(long long k, long long N) {
    if (!(0 < k && k < N)) throw ValidationError("gambler start must satisfy 0 < k < N");
    const double kd = static_cast<double>(k);
    const double Nd = static_cast<double>(N);
    return {(Nd * Nd - kd * kd) / 3.0, kd * (2.0 * Nd - kd) / 3.0};
}

} // namespace marginvote
