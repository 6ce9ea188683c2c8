#pragma once

#include <limits>
#include <stdexcept>
#include <string>

namespace tsr {

/// Correlation matrix not positive definite at some range value.
/// `phi` is NaN when the failing range is unknown to the thrower.
struct IllConditionedError : std::runtime_error {
    explicit IllConditionedError(const std::string& msg,
                                 double phi_ = std::numeric_limits<double>::quiet_NaN())
        : std::runtime_error(msg), phi(phi_) {}
    double phi;
};

/// Design matrix problems (rank deficiency, shape mismatch).
struct DesignError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// Parameter outside the support required by a formula (e.g. nu <= 4).
struct SupportError : std::domain_error {
    using std::domain_error::domain_error;
};

/// Bad configuration (unknown family, inconsistent prior settings, ...).
struct ConfigError : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

/// Malformed input data (CSV shape, length mismatches, degenerate response).
struct DataError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// Simulation study aborted (too many replicate-level failures).
struct StudyError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// Numerical integration failed to reach the requested accuracy.
struct IntegrationError : std::runtime_error {
    IntegrationError(const std::string& msg, double estimate_, double error_)
        : std::runtime_error(msg), estimate(estimate_), error(error_) {}
    double estimate;
    double error;
};

}  // namespace tsr
