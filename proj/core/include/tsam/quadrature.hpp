#pragma once

#include <functional>

namespace tsam {

/// Tolerances for the adaptive integrator. `tail_cutoff_mass` bounds the
/// mass discarded when a semi-infinite integral is truncated; the truncation
/// bound is folded into the reported error estimate.
struct QuadratureSettings {
    double rel_tol = 1e-8;
    double abs_tol = 1e-12;
    int max_subdivisions = 200;
    double tail_cutoff_mass = 1e-10;
};

/// Checks the QuadratureSettings invariants (positive tolerances,
/// max_subdivisions >= 10); throws std::invalid_argument otherwise.
void check_settings(const QuadratureSettings& settings);

/// A quadrature value together with its accumulated error estimate.
struct IntegralResult {
    double value = 0.0;
    double error_estimate = 0.0;
};

/// Adaptive Gauss-Kronrod (7,15) integration of f over the finite interval
/// [a, b]. Bisects the interval with the largest embedded-rule discrepancy
/// until the total estimate satisfies max(abs_tol, rel_tol*|I|), throwing
/// QuadratureError (with the achieved estimate) if max_subdivisions is
/// exhausted first.
IntegralResult integrate_adaptive(const std::function<double(double)>& f,
                                  double a, double b,
                                  const QuadratureSettings& settings);

} // namespace tsam
