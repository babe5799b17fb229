#pragma once

#include <stdexcept>
#include <string>
#include <vector>

namespace tsam {

/// Aggregated invariant violations from input validation. `issues` holds one
/// human-readable entry per violated constraint, each naming the field.
class ValidationError : public std::runtime_error {
public:
    explicit ValidationError(std::vector<std::string> issues_)
        : std::runtime_error(join(issues_)), issues(std::move(issues_)) {}

    std::vector<std::string> issues;

private:
    static std::string join(const std::vector<std::string>& v) {
        std::string s = "validation failed:";
        for (const auto& e : v) {
            s += "\n  - ";
            s += e;
        }
        return s;
    }
};

/// Adaptive quadrature failed to reach the requested tolerance. Carries the
/// best value obtained and the achieved error estimate so callers can report
/// exactly how far off the computation was.
class QuadratureError : public std::runtime_error {
public:
    QuadratureError(const std::string& what, double value_, double error_estimate_)
        : std::runtime_error(what), value(value_), error_estimate(error_estimate_) {}

    double value;
    double error_estimate;
};

/// A numeric identity that must hold analytically was violated beyond
/// tolerance (e.g. a probability mass function failing to sum to one).
class NumericalError : public std::runtime_error {
    using std::runtime_error::runtime_error;
};

} // namespace tsam
