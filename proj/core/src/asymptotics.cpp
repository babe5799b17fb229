#include "tsam/asymptotics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <stdexcept>
#include <string>

namespace tsam {

LoadPmf load_pmf_limit_t(int n, const Popularity& pop, const CacheDesign& design,
                         const NetworkConfig& net) {
    return load_pmf_from_idle_probs(n, design, [&](int m) {
        const double t_m = design.hit.at(static_cast<std::size_t>(m));
        if (!(t_m > 0.0)) {
            throw std::invalid_argument("load_pmf_limit_t: file " + std::to_string(m + 1) +
                                        " is never cached (hit probability 0)");
        }
        const double w = 1.0 + net.lambda_u / (kCellShape * t_m * net.lambda_b);
        return std::pow(w, -kCellTailExponent);
    });
}

IntegralResult sinr_ccdf_no_interference(double eta, double t_n, const NetworkConfig& net,
                                         const QuadratureSettings& quad) {
    check_settings(quad);
    if (!(eta >= 0.0)) {
        throw std::invalid_argument("sinr_ccdf_no_interference: eta must be >= 0");
    }
    if (!(t_n > 0.0) || t_n > 1.0) {
        throw std::invalid_argument("sinr_ccdf_no_interference: t_n must lie in (0,1]");
    }
    if (!(net.alpha > 2.0)) {
        throw std::invalid_argument("sinr_ccdf_no_interference: alpha must exceed 2");
    }
    if (std::isinf(eta)) return IntegralResult{0.0, 0.0};

    const double half_alpha = 0.5 * net.alpha;
    const double beta = eta / net.snr_ratio *
                        std::pow(std::numbers::pi * net.lambda_b * t_n, -half_alpha);
    IntegralResult r = detail::truncated_exp_integral(beta, half_alpha, 1.0, quad);
    r.value = std::clamp(r.value, 0.0, 1.0);
    return r;
}

IntegralResult q_limit_large_t(const Popularity& pop, const CacheDesign& design,
                               const NetworkConfig& net, double theta,
                               const QuadratureSettings& quad) {
    if (!(theta >= 0.0)) {
        throw std::invalid_argument("q_limit_large_t: theta must be >= 0");
    }
    IntegralResult out{0.0, 0.0};
    for (int n = 0; n < pop.n_files(); ++n) {
        const double t_n = design.hit.at(static_cast<std::size_t>(n));
        const LoadPmf pmf = load_pmf_limit_t(n, pop, design, net);
        IntegralResult qn{0.0, 0.0};
        for (int k = 1; k <= pmf.max_load(); ++k) {
            const double weight = pmf.prob(k);
            if (weight == 0.0) continue;
            const double eta =
                std::exp2(static_cast<double>(k) * theta / net.bandwidth_w) - 1.0;
            const IntegralResult f = sinr_ccdf_no_interference(eta, t_n, net, quad);
            qn.value += weight * f.value;
            qn.error_estimate += weight * f.error_estimate;
        }
        out.value += pop.a[static_cast<std::size_t>(n)] * qn.value;
        out.error_estimate += pop.a[static_cast<std::size_t>(n)] * qn.error_estimate;
    }
    return out;
}

namespace {

IntegralResult q_pinned_load(const Popularity& pop, const CacheDesign& design,
                             const NetworkConfig& net, const SchemeConfig& scheme,
                             const QuadratureSettings& quad, int load) {
    const double eta =
        std::exp2(static_cast<double>(load) * scheme.rate_theta / net.bandwidth_w) - 1.0;
    IntegralResult out{0.0, 0.0};
    for (int n = 0; n < pop.n_files(); ++n) {
        const double t_n = design.hit.at(static_cast<std::size_t>(n));
        const IntegralResult f = std::isfinite(eta)
                                     ? sinr_ccdf(eta, t_n, net, scheme.period_t, quad)
                                     : IntegralResult{0.0, 0.0};
        out.value += pop.a[static_cast<std::size_t>(n)] * f.value;
        out.error_estimate += pop.a[static_cast<std::size_t>(n)] * f.error_estimate;
    }
    return out;
}

} // namespace

IntegralResult q_limit_dense(const Popularity& pop, const CacheDesign& design,
                             const NetworkConfig& net, const SchemeConfig& scheme,
                             const QuadratureSettings& quad) {
    return q_pinned_load(pop, design, net, scheme, quad, design.cache_size());
}

IntegralResult q_limit_sparse(const Popularity& pop, const CacheDesign& design,
                              const NetworkConfig& net, const SchemeConfig& scheme,
                              const QuadratureSettings& quad) {
    return q_pinned_load(pop, design, net, scheme, quad, 1);
}

ConvergenceReport probe_convergence(const std::function<double(double)>& quantity,
                                    const std::function<double()>& limit,
                                    const std::vector<double>& schedule,
                                    double noise_floor) {
    if (schedule.empty()) {
        throw std::invalid_argument("probe_convergence: schedule is empty");
    }
    if (noise_floor < 0.0) {
        throw std::invalid_argument("probe_convergence: noise_floor must be >= 0");
    }
    for (std::size_t i = 1; i < schedule.size(); ++i) {
        const bool up = schedule[1] > schedule[0];
        if ((up && schedule[i] <= schedule[i - 1]) ||
            (!up && schedule[i] >= schedule[i - 1])) {
            throw std::invalid_argument("probe_convergence: schedule must be strictly monotone");
        }
    }

    constexpr double nan = std::numeric_limits<double>::quiet_NaN();
    ConvergenceReport report;
    report.params = schedule;
    report.limit_value = limit();
    for (double x : schedule) {
        const double q = quantity(x);
        report.values.push_back(q);
        report.errors.push_back(std::abs(q - report.limit_value));
    }
    for (std::size_t i = 0; i + 1 < report.errors.size(); ++i) {
        const bool defined = report.errors[i] > noise_floor &&
                             report.errors[i + 1] > noise_floor &&
                             report.errors[i] > 0.0;
        report.ratios.push_back(defined ? report.errors[i + 1] / report.errors[i] : nan);
    }

    // Least-squares slope of ln e against ln x over the points that clear
    // the noise floor; fewer than two such points leave the order open.
    double sx = 0.0, sy = 0.0, sxx = 0.0, sxy = 0.0;
    int count = 0;
    for (std::size_t i = 0; i < report.errors.size(); ++i) {
        if (!(report.errors[i] > noise_floor) || !(report.params[i] > 0.0)) continue;
        const double lx = std::log(report.params[i]);
        const double ly = std::log(report.errors[i]);
        sx += lx;
        sy += ly;
        sxx += lx * lx;
        sxy += lx * ly;
        ++count;
    }
    const double denom = count * sxx - sx * sx;
    if (count >= 2 && std::abs(denom) > 0.0) {
        report.fitted_order = std::abs((count * sxy - sx * sy) / denom);
        report.determinate = true;
    } else {
        report.fitted_order = nan;
        report.determinate = false;
    }
    return report;
}

} // namespace tsam
