#pragma once

#include <stdexcept>
#include <string>

namespace ergokit {

// Bad input: dimension mismatches, violated preconditions, malformed specs.
class validation_error : public std::invalid_argument {
public:
    explicit validation_error(const std::string& msg) : std::invalid_argument(msg) {}
};

// A numerical procedure failed (eigensolver did not converge, Newton stalled, ...).
class numerical_error : public std::runtime_error {
public:
    explicit numerical_error(const std::string& msg) : std::runtime_error(msg) {}
};

// A trajectory left the representable range (blow-up, overflow of q^{2k}).
class trajectory_diverged : public numerical_error {
public:
    explicit trajectory_diverged(const std::string& msg) : numerical_error(msg) {}
};

// Quadratic form is not positive definite.
class not_coercive : public numerical_error {
public:
    explicit not_coercive(const std::string& msg) : numerical_error(msg) {}
};

// Iteration budget exhausted before reaching tolerance.
class non_convergence : public numerical_error {
public:
    non_convergence(const std::string& msg, double last_residual)
        : numerical_error(msg), residual(last_residual) {}
    double residual;
};

} // namespace ergokit
