#include "tsam/quadrature.hpp"

#include <algorithm>
#include <cmath>
#include <queue>
#include <stdexcept>
#include <string>

#include "tsam/errors.hpp"

namespace tsam {

namespace {

// Gauss-Kronrod (7,15) nodes and weights on [-1,1], positive half.
constexpr double kKronrodNodes[8] = {
    0.991455371120812639206854697526329,
    0.949107912342758524526189684047851,
    0.864864423359769072789712788640926,
    0.741531185599394439863864773280788,
    0.586087235467691130294144838258730,
    0.405845151377397166906606412076961,
    0.207784955007898467600689403773245,
    0.000000000000000000000000000000000,
};

constexpr double kKronrodWeights[8] = {
    0.022935322010529224963732008058970,
    0.063092092629978553290700663189204,
    0.104790010322250183839876322541518,
    0.140653259715525918745189590510238,
    0.169004726639267902826583426598550,
    0.190350578064785409913256402421014,
    0.204432940075298892414161999234649,
    0.209482141084727828012999174891714,
};

// Embedded 7-point Gauss weights; nodes are kKronrodNodes[1,3,5,7].
constexpr double kGaussWeights[4] = {
    0.129484966168869693270611432679082,
    0.279705391489276667901467771423780,
    0.381830050505118944950369775488975,
    0.417959183673469387755102040816327,
};

struct Segment {
    double a, b;
    double value;
    double error;

    bool operator<(const Segment& o) const { return error < o.error; }
};

Segment evaluate(const std::function<double(double)>& f, double a, double b) {
    const double center = 0.5 * (a + b);
    const double half = 0.5 * (b - a);

    double kronrod = 0.0;
    double gauss = 0.0;
    for (int j = 0; j < 8; ++j) {
        const double offset = half * kKronrodNodes[j];
        double fsum;
        if (j == 7) {
            fsum = f(center);
        } else {
            fsum = f(center - offset) + f(center + offset);
        }
        kronrod += kKronrodWeights[j] * fsum;
        if (j % 2 == 1) {
            gauss += kGaussWeights[j / 2] * fsum;
        }
    }
    kronrod *= half;
    gauss *= half;
    // |K15 - G7| bounds the Gauss error and is a conservative bound for the
    // Kronrod value we return.
    return Segment{a, b, kronrod, std::abs(kronrod - gauss)};
}

} // namespace

void check_settings(const QuadratureSettings& s) {
    if (!(s.rel_tol > 0.0) || !(s.abs_tol > 0.0) || !(s.tail_cutoff_mass > 0.0)) {
        throw std::invalid_argument("quadrature settings: tolerances must be positive");
    }
    if (s.max_subdivisions < 10) {
        throw std::invalid_argument("quadrature settings: max_subdivisions must be >= 10");
    }
}

IntegralResult integrate_adaptive(const std::function<double(double)>& f,
                                  double a, double b,
                                  const QuadratureSettings& settings) {
    check_settings(settings);
    if (!(a <= b)) {
        throw std::invalid_argument("integrate_adaptive: requires a <= b");
    }
    if (a == b) return IntegralResult{0.0, 0.0};

    std::priority_queue<Segment> segments;
    segments.push(evaluate(f, a, b));
    double total_value = segments.top().value;
    double total_error = segments.top().error;

    for (int used = 0; used < settings.max_subdivisions; ++used) {
        if (total_error <= std::max(settings.abs_tol, settings.rel_tol * std::abs(total_value))) {
            return IntegralResult{total_value, total_error};
        }
        Segment worst = segments.top();
        segments.pop();
        const double mid = 0.5 * (worst.a + worst.b);
        Segment left = evaluate(f, worst.a, mid);
        Segment right = evaluate(f, mid, worst.b);
        total_value += left.value + right.value - worst.value;
        total_error += left.error + right.error - worst.error;
        segments.push(left);
        segments.push(right);
    }
    if (total_error <= std::max(settings.abs_tol, settings.rel_tol * std::abs(total_value))) {
        return IntegralResult{total_value, total_error};
    }
    throw QuadratureError(
        "adaptive quadrature did not converge after " +
            std::to_string(settings.max_subdivisions) +
            " subdivisions (value " + std::to_string(total_value) +
            ", achieved error estimate " + std::to_string(total_error) + ")",
        total_value, total_error);
}

} // namespace tsam
