#include "tsam/analysis.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>
#include <string>

#include "tsam/errors.hpp"

namespace tsam {

namespace {

// Tight internal settings for the Beta integrals; their contracts promise
// more accuracy than callers request for the distance integral.
const QuadratureSettings kBetaQuad{1e-12, 1e-16, 200, 1e-16};

double check_beta_args(double x, double y) {
    if (!(x > 0.0) || !(y > 0.0)) {
        throw std::invalid_argument("beta: arguments must be positive (x=" +
                                    std::to_string(x) + ", y=" + std::to_string(y) + ")");
    }
    return 0.0;
}

} // namespace

double beta_complete(double x, double y) {
    check_beta_args(x, y);
    return std::exp(std::lgamma(x) + std::lgamma(y) - std::lgamma(x + y));
}

double beta_upper(double x, double y, double z) {
    check_beta_args(x, y);
    if (z < 0.0 || z > 1.0) {
        throw std::invalid_argument("beta_upper: z must lie in [0,1] (z=" +
                                    std::to_string(z) + ")");
    }
    if (z >= 1.0) return 0.0;

    const double mid = std::max(z, 0.5);
    double total = 0.0;

    // Upper piece [mid, 1]: for y < 1 the substitution v = (1-u)^y removes
    // the endpoint singularity at u = 1.
    if (y < 1.0) {
        const double vmax = std::pow(1.0 - mid, y);
        auto g = [x, y](double v) {
            const double u = 1.0 - std::pow(v, 1.0 / y);
            return std::pow(u, x - 1.0);
        };
        total += integrate_adaptive(g, 0.0, vmax, kBetaQuad).value / y;
    } else {
        auto g = [x, y](double u) {
            return std::pow(u, x - 1.0) * std::pow(1.0 - u, y - 1.0);
        };
        total += integrate_adaptive(g, mid, 1.0, kBetaQuad).value;
    }

    // Lower piece [z, mid): only present when z < 0.5. The u -> 0 endpoint
    // is singular only when the range actually reaches 0 with x < 1; then
    // w = u^x removes it.
    if (z < mid) {
        if (z == 0.0 && x < 1.0) {
            const double wmax = std::pow(mid, x);
            auto g = [x, y](double w) {
                const double u = std::pow(w, 1.0 / x);
                return std::pow(1.0 - u, y - 1.0);
            };
            total += integrate_adaptive(g, 0.0, wmax, kBetaQuad).value / x;
        } else {
            auto g = [x, y](double u) {
                return std::pow(u, x - 1.0) * std::pow(1.0 - u, y - 1.0);
            };
            total += integrate_adaptive(g, z, mid, kBetaQuad).value;
        }
    }
    return total;
}

double load_weight(int m, const Popularity& pop, const CacheDesign& design,
                   const NetworkConfig& net, std::int64_t t_period) {
    const double t_m = design.hit.at(static_cast<std::size_t>(m));
    if (!(t_m > 0.0)) {
        throw std::invalid_argument("load_weight: file " + std::to_string(m + 1) +
                                    " is never cached (hit probability 0)");
    }
    const double a_m = pop.a.at(static_cast<std::size_t>(m));
    const double req_density =
        net.lambda_u * (1.0 - std::pow(1.0 - a_m, static_cast<double>(t_period)));
    return 1.0 + req_density / (kCellShape * t_m * net.lambda_b);
}

LoadPmf load_pmf_from_idle_probs(int n, const CacheDesign& design,
                                 const std::function<double(int)>& idle_prob) {
    const int cache_size = design.cache_size();
    const double t_n = design.hit.at(static_cast<std::size_t>(n));
    if (!(t_n > 0.0)) {
        throw std::invalid_argument("load_pmf: file " + std::to_string(n + 1) +
                                    " is never cached (hit probability 0)");
    }

    // Memoized per-file idle probabilities; only files sharing a positive
    // probability combination with n are ever touched.
    std::vector<double> idle(static_cast<std::size_t>(design.n_files()), -1.0);
    auto idle_of = [&](int m) {
        double& v = idle[static_cast<std::size_t>(m)];
        if (v < 0.0) v = idle_prob(m);
        return v;
    };

    std::vector<double> g(static_cast<std::size_t>(cache_size), 0.0);
    std::vector<double> poly(static_cast<std::size_t>(cache_size), 0.0);
    for (std::size_t i = 0; i < design.combos.size(); ++i) {
        if (design.p[i] == 0.0) continue;
        const auto& members = design.combos.combos[i];
        if (std::find(members.begin(), members.end(), n) == members.end()) continue;

        // Distribution of how many of the other cached files are requested:
        // a sum of independent non-identical Bernoulli draws, built by
        // convolving one file at a time.
        std::fill(poly.begin(), poly.end(), 0.0);
        poly[0] = 1.0;
        int count = 0;
        for (int m : members) {
            if (m == n) continue;
            const double q = idle_of(m);
            const double s = 1.0 - q;
            for (int j = count + 1; j >= 1; --j) {
                poly[j] = poly[j] * q + poly[j - 1] * s;
            }
            poly[0] *= q;
            ++count;
        }
        const double scale = design.p[i] / t_n;
        for (int k = 0; k <= count; ++k) {
            g[static_cast<std::size_t>(k)] += scale * poly[static_cast<std::size_t>(k)];
        }
    }

    double sum = 0.0;
    for (double v : g) sum += v;
    if (std::abs(sum - 1.0) > 1e-9) {
        throw NumericalError("load p.m.f. sums to " + std::to_string(sum) +
                             ", violating normalization beyond 1e-9");
    }
    return LoadPmf{std::move(g)};
}

LoadPmf load_pmf(int n, const Popularity& pop, const CacheDesign& design,
                 const NetworkConfig& net, std::int64_t t_period) {
    return load_pmf_from_idle_probs(n, design, [&](int m) {
        return std::pow(load_weight(m, pop, design, net, t_period), -kCellTailExponent);
    });
}

IntegralResult sinr_ccdf(double eta, double t_n, const NetworkConfig& net,
                         std::int64_t t_period, const QuadratureSettings& quad) {
    check_settings(quad);
    if (!(eta >= 0.0)) {
        throw std::invalid_argument("sinr_ccdf: eta must be >= 0");
    }
    if (!(t_n > 0.0) || t_n > 1.0) {
        throw std::invalid_argument("sinr_ccdf: t_n must lie in (0,1]");
    }
    if (!(net.alpha > 2.0)) {
        throw std::invalid_argument("sinr_ccdf: alpha must exceed 2");
    }
    if (std::isinf(eta)) return IntegralResult{0.0, 0.0};

    const double alpha = net.alpha;
    const double half_alpha = 0.5 * alpha;
    const double two_over_alpha = 2.0 / alpha;

    // After s = pi*lambda_b*t_n*d^2 the integrand becomes
    // exp(-beta*s^(alpha/2) - (1+rho)*s): beta carries the noise, rho the
    // two interference populations (same-tier BSs caching the file, which
    // are excluded within the serving distance, and same-tier BSs that do
    // not cache it, which are unrestricted).
    double rho = 0.0;
    double eta_pow = 0.0;
    if (eta > 0.0) {
        eta_pow = std::pow(eta, two_over_alpha);
        const double excluded = beta_upper(two_over_alpha, 1.0 - two_over_alpha,
                                           1.0 / (1.0 + eta));
        const double unrestricted = beta_complete(two_over_alpha, 1.0 - two_over_alpha);
        rho = (2.0 / (alpha * static_cast<double>(t_period))) * eta_pow *
              (excluded + (1.0 - t_n) / t_n * unrestricted);
    }
    const double beta = eta / net.snr_ratio *
                        std::pow(std::numbers::pi * net.lambda_b * t_n, -half_alpha);

    IntegralResult r = detail::truncated_exp_integral(beta, half_alpha, 1.0 + rho, quad);
    r.value = std::clamp(r.value, 0.0, 1.0);
    return r;
}

namespace detail {

IntegralResult truncated_exp_integral(double beta, double p, double decay,
                                      const QuadratureSettings& quad) {
    // Truncate where the exponential envelope certifies the remaining mass:
    // the tail beyond s_max is at most exp(-decay*s_max)/decay.
    double s_max = std::log(1.0 / (quad.tail_cutoff_mass * decay)) / decay;
    s_max = std::max(s_max, 1.0);
    const double tail_bound =
        std::exp(-beta * std::pow(s_max, p) - decay * s_max) / decay;

    auto integrand = [beta, decay, p](double s) {
        return std::exp(-beta * std::pow(s, p) - decay * s);
    };
    IntegralResult r = integrate_adaptive(integrand, 0.0, s_max, quad);
    r.error_estimate += tail_bound;
    return r;
}

} // namespace detail

IntegralResult success_prob_file(int n, const Popularity& pop, const CacheDesign& design,
                                 const NetworkConfig& net, const SchemeConfig& scheme,
                                 const QuadratureSettings& quad) {
    const double t_n = design.hit.at(static_cast<std::size_t>(n));
    const LoadPmf pmf = load_pmf(n, pop, design, net, scheme.period_t);
    IntegralResult out{0.0, 0.0};
    for (int k = 1; k <= pmf.max_load(); ++k) {
        const double weight = pmf.prob(k);
        if (weight == 0.0) continue;
        const double eta =
            std::exp2(static_cast<double>(k) * scheme.rate_theta / net.bandwidth_w) - 1.0;
        const IntegralResult f = sinr_ccdf(eta, t_n, net, scheme.period_t, quad);
        out.value += weight * f.value;
        out.error_estimate += weight * f.error_estimate;
    }
    return out;
}

IntegralResult success_prob(const Popularity& pop, const CacheDesign& design,
                            const NetworkConfig& net, const SchemeConfig& scheme,
                            const QuadratureSettings& quad) {
    IntegralResult out{0.0, 0.0};
    for (int n = 0; n < pop.n_files(); ++n) {
        const IntegralResult qn = success_prob_file(n, pop, design, net, scheme, quad);
        out.value += pop.a[static_cast<std::size_t>(n)] * qn.value;
        out.error_estimate += pop.a[static_cast<std::size_t>(n)] * qn.error_estimate;
    }
    return out;
}

double expected_load(int n, const Popularity& pop, const CacheDesign& design,
                     const NetworkConfig& net, std::int64_t t_period) {
    const LoadPmf pmf = load_pmf(n, pop, design, net, t_period);
    double mean = 0.0;
    for (int k = 1; k <= pmf.max_load(); ++k) {
        mean += static_cast<double>(k) * pmf.prob(k);
    }
    return mean;
}

} // namespace tsam
