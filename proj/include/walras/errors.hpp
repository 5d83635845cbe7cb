#pragma once

#include <stdexcept>
#include <string>

namespace walras {

/// Some commodity with positive weight has price zero while the agent has money to spend.
class UnboundedDemand : public std::domain_error {
public:
    using std::domain_error::domain_error;
};

/// Demand at the queried prices is a correspondence, not a single bundle.
class MultiValuedDemand : public std::domain_error {
public:
    using std::domain_error::domain_error;
};

class DimensionMismatch : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

/// Positivity of endowments or strong competitiveness does not hold.
class AssumptionViolation : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

class KindMismatch : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

/// A numeric parameter lies outside its admissible range.
class OutOfRange : public std::out_of_range {
public:
    using std::out_of_range::out_of_range;
};

class NoConvergence : public std::runtime_error {
public:
    NoConvergence(const std::string& what, double best_residual)
        : std::runtime_error(what), best_residual_(best_residual) {}

    double best_residual() const noexcept { return best_residual_; }

private:
    double best_residual_;
};

}  // namespace walras
