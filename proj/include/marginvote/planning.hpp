// Process equivalence and payment design across worker pools: matched
// thresholds, fair pay ratios, iso-payment effort curves, and risk-averse
// utility-equalizing payments.
#pragma once

#include "marginvote/core.hpp"

namespace marginvote {

// delta2 = delta1 * ln(phi1) / ln(phi2); the resulting process has exactly
// the quality of (phi1, delta1). Both pools must beat random (phi > 1).
double equivalent_threshold(double phi1, double delta1, double phi2);

struct IntegerizedThreshold {
    long long floor_delta = 0;
    long long ceil_delta = 0;
    double floor_quality = 0.0;
    double ceil_quality = 0.0;
};

// Both integer candidates around a real equivalent threshold, with their
// qualities, so callers pick a side of the target. Candidates below 1 are
// clamped to the smallest valid threshold.
IntegerizedThreshold integerize_threshold(double delta2, double phi2);

// pay * E[votes]: the expected money spent per item.
double expected_cost(double pay, double phi, long long delta);

// pay1/pay2 that equalizes expected cost at matched quality.
double equivalent_pay_ratio(double phi1, double phi2);

// Effort level at which pay per unit effort is constant in accuracy:
// psi = c * ln(phi) * (phi-1)/(phi+1).
double iso_effort(double phi, double c);

// Var of the consensus-correctness indicator: Q(1-Q).
double quality_variance(double q);

struct UtilityPay {
    double delta2 = 0.0;
    double pay2 = 0.0;
};

// Risk-averse pay for pool 2 at matched quality:
// pay2 = pay1 * (E1 + lambda*sqrt(Var1)) / (E2 + lambda*sqrt(Var2)).
// The matched threshold must come out integral; otherwise callers are
// directed to integerize_threshold to make the rounding explicit.
UtilityPay utility_pay_ratio(double phi1, long long delta1, double pay1, double phi2,
                             double lambda);

struct PaymentPlan {
    double pay1 = 0.0;
    double pay2 = 0.0;
    double delta2 = 0.0;
    double quality = 0.0;
    double expected_cost1 = 0.0;
    double expected_cost2 = 0.0;
};

// Bundles the full plan for a pool pair at a given risk aversion; the CLI's
// `plan` payload.
PaymentPlan make_payment_plan(double phi1, long long delta1, double pay1, double phi2,
                              double lambda);

} // namespace marginvote
