#include "marginvote/planning.hpp"

#include <cmath>

#include "marginvote/closed_form.hpp"

namespace marginvote {

namespace {

void require_above_random(double phi, const char* name) {
    if (!(phi > 1.0) || std::isinf(phi))
        throw ValidationError(std::string(name) +
                              " must exceed 1 (pool better than random), got " +
                              std::to_string(phi));
}

VotingSpec spec_from_odds(double phi, double delta) {
    return VotingSpec(accuracy_from_odds(OddsRatio(phi)), delta);
}

} // namespace

double equivalent_threshold(double phi1, double delta1, double phi2) {
    require_above_random(phi1, "phi1");
    require_above_random(phi2, "phi2");
    if (!(delta1 > 0.0)) throw ValidationError("delta1 must be positive");
    return delta1 * std::log(phi1) / std::log(phi2);
}

IntegerizedThreshold integerize_threshold(double delta2, double phi2) {
    if (!(delta2 > 0.0)) throw ValidationError("delta2 must be positive");
    require_above_random(phi2, "phi2");
    IntegerizedThreshold out;
    out.floor_delta = std::max<long long>(1, static_cast<long long>(std::floor(delta2)));
    out.ceil_delta = std::max<long long>(1, static_cast<long long>(std::ceil(delta2)));
    out.floor_quality =
        consensus_quality(spec_from_odds(phi2, static_cast<double>(out.floor_delta)));
    out.ceil_quality =
        consensus_quality(spec_from_odds(phi2, static_cast<double>(out.ceil_delta)));
    return out;
}

double expected_cost(double pay, double phi, long long delta) {
    if (!(pay >= 0.0)) throw ValidationError("pay must be nonnegative");
    return pay * expected_votes(spec_from_odds(phi, static_cast<double>(delta)));
}

double equivalent_pay_ratio(double phi1, double phi2) {
    require_above_random(phi1, "phi1");
    require_above_random(phi2, "phi2");
    return (std::log(phi1) / std::log(phi2)) * ((phi2 + 1.0) / (phi1 + 1.0)) *
           ((phi1 - 1.0) / (phi2 - 1.0));
}

double iso_effort(double phi, double c) {
    require_above_random(phi, "phi");
    if (!(c > 0.0)) throw ValidationError("iso-curve constant c must be positive");
    return c * std::log(phi) * (phi - 1.0) / (phi + 1.0);
}

double quality_variance(double q) {
    if (!(q >= 0.0 && q <= 1.0)) throw ValidationError("quality must lie in [0,1]");
    return q * (1.0 - q);
}

UtilityPay utility_pay_ratio(double phi1, long long delta1, double pay1, double phi2,
                             double lambda) {
    if (!(pay1 >= 0.0)) throw ValidationError("pay1 must be nonnegative");
    if (!(lambda >= 0.0)) throw ValidationError("risk aversion lambda must be >= 0");
    const double delta2 = equivalent_threshold(phi1, static_cast<double>(delta1), phi2);
    const double rounded = std::round(delta2);
    if (!(std::fabs(delta2 - rounded) < 1e-9) || rounded < 1.0)
        throw NonIntegerDeltaError(
            "matched threshold " + std::to_string(delta2) +
            " is not an integer; choose a side with integerize_threshold first");

    const VotingSpec spec1 = spec_from_odds(phi1, static_cast<double>(delta1));
    const VotingSpec spec2 = spec_from_odds(phi2, rounded);
    const double numer = expected_votes(spec1) + lambda * std::sqrt(votes_variance(spec1));
    const double denom = expected_votes(spec2) + lambda * std::sqrt(votes_variance(spec2));
    return {rounded, pay1 * numer / denom};
}

PaymentPlan make_payment_plan(double phi1, long long delta1, double pay1, double phi2,
                              double lambda) {
    const UtilityPay up = utility_pay_ratio(phi1, delta1, pay1, phi2, lambda);
    PaymentPlan plan;
    plan.pay1 = pay1;
    plan.pay2 = up.pay2;
    plan.delta2 = up.delta2;
    plan.quality = consensus_quality(spec_from_odds(phi1, static_cast<double>(delta1)));
    plan.expected_cost1 = expected_cost(pay1, phi1, delta1);
    plan.expected_cost2 =
        expected_cost(up.pay2, phi2, static_cast<long long>(up.delta2));
    return plan;
}

} // namespace marginvote
