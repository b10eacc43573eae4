// Shared domain types for delta-margin voting: worker accuracy, odds,
// and the (accuracy, threshold) pair every other module consumes.
#pragma once

#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>

namespace marginvote {

// Parameter validation failure. CLI maps this family to exit code 2.
class ValidationError : public std::invalid_argument {
public:
    explicit ValidationError(const std::string& msg) : std::invalid_argument(msg) {}
};

// A consumer required an integer threshold but was given a fractional one.
class NonIntegerDeltaError : public ValidationError {
public:
    explicit NonIntegerDeltaError(const std::string& msg) : ValidationError(msg) {}
};

// Runtime failure (step caps and the like). CLI maps this family to exit code 3.
class SimulationError : public std::runtime_error {
public:
    explicit SimulationError(const std::string& msg) : std::runtime_error(msg) {}
};

// Malformed input file; carries the offending line number in the message.
class ParseError : public ValidationError {
public:
    explicit ParseError(const std::string& msg) : ValidationError(msg) {}
};

// Specs with |2p-1| below this are treated as the symmetric (p = 1/2) case;
// the general closed forms are 0/0 there.
inline constexpr double kSymmetricEpsilon = 1e-12;

class WorkerAccuracy {
public:
    explicit WorkerAccuracy(double p) : p_(p) {
        if (!(p >= 0.0 && p <= 1.0))
            throw ValidationError("worker accuracy must lie in [0,1], got " + std::to_string(p));
    }

    double value() const { return p_; }

    bool is_symmetric() const { return std::fabs(2.0 * p_ - 1.0) < kSymmetricEpsilon; }

private:
    double p_;
};

class OddsRatio {
public:
    explicit OddsRatio(double phi) : phi_(phi) {
        if (std::isnan(phi) || phi < 0.0)
            throw ValidationError("odds ratio must be nonnegative, got " + std::to_string(phi));
    }

    double value() const { return phi_; }
    bool is_infinite() const { return std::isinf(phi_); }

private:
    double phi_;
};

inline OddsRatio odds_from_accuracy(WorkerAccuracy accuracy) {
    const double p = accuracy.value();
    if (p == 1.0) return OddsRatio(std::numeric_limits<double>::infinity());
    return OddsRatio(p / (1.0 - p));
}

inline WorkerAccuracy accuracy_from_odds(OddsRatio odds) {
    if (odds.is_infinite()) return WorkerAccuracy(1.0);
    const double phi = odds.value();
    // phi/(1+phi) drifts for huge phi; the reciprocal form does not.
    return WorkerAccuracy(1.0 / (1.0 + 1.0 / phi));
}

// Worker accuracy plus consensus threshold. The threshold is stored as a real
// because process equivalence produces fractional values; consumers that count
// discrete votes call require_integer_delta() at their own boundary.
class VotingSpec {
public:
    VotingSpec(WorkerAccuracy accuracy, double threshold)
        : accuracy_(accuracy), delta_(threshold) {
        if (!(threshold > 0.0) || std::isinf(threshold))
            throw ValidationError("consensus threshold must be a positive finite real, got " +
                                  std::to_string(threshold));
    }

    WorkerAccuracy accuracy() const { return accuracy_; }
    double p() const { return accuracy_.value(); }
    double q() const { return 1.0 - accuracy_.value(); }
    double delta() const { return delta_; }

    bool is_symmetric() const { return accuracy_.is_symmetric(); }
    bool is_degenerate() const { return p() == 0.0 || p() == 1.0; }

    double odds() const { return odds_from_accuracy(accuracy_).value(); }

    // ln(p/(1-p)), computed as log1p((2p-1)/(1-p)) so that values near the
    // symmetric point keep full relative accuracy.
    double log_odds() const {
        const double p = accuracy_.value();
        if (p == 0.0) return -std::numeric_limits<double>::infinity();
        if (p == 1.0) return std::numeric_limits<double>::infinity();
        return std::log1p((2.0 * p - 1.0) / (1.0 - p));
    }

    bool has_integer_delta() const {
        return delta_ <= 1e15 && std::floor(delta_) == delta_;
    }

    long long require_integer_delta() const {
        if (!has_integer_delta())
            throw NonIntegerDeltaError("operation requires an integer consensus threshold, got " +
                                       std::to_string(delta_));
        return static_cast<long long>(delta_);
    }

private:
    WorkerAccuracy accuracy_;
    double delta_;
};

} // namespace marginvote
