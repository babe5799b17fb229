#pragma once

#include <functional>
#include <vector>

#include "tsam/analysis.hpp"
#include "tsam/model.hpp"
#include "tsam/quadrature.hpp"

namespace tsam {

/// Empirical convergence study of a quantity against its claimed limit:
/// the parameter schedule, the general-region values, the limit value, the
/// absolute errors, successive error ratios, and a log-log fitted order.
/// Ratios and the order are reported as NaN when the errors involved do
/// not clear the noise floor; `determinate` is false when fewer than two
/// points do, so no order can honestly be fitted.
struct ConvergenceReport {
    std::vector<double> params;
    std::vector<double> values;
    double limit_value = 0.0;
    std::vector<double> errors;
    std::vector<double> ratios;
    double fitted_order = 0.0;
    bool determinate = false;
};

/// Load p.m.f. of file n in the limit of an unbounded on/off period: every
/// user requests every file eventually, so the request-density factor
/// 1 - (1-a_m)^T saturates at 1.
LoadPmf load_pmf_limit_t(int n, const Popularity& pop, const CacheDesign& design,
                         const NetworkConfig& net);

/// SINR c.c.d.f. with interference fully thinned away (unbounded on/off
/// period): only noise and the serving distance remain.
IntegralResult sinr_ccdf_no_interference(double eta, double t_n, const NetworkConfig& net,
                                         const QuadratureSettings& quad);

/// Success probability in the large-period limit: the limit load p.m.f.
/// combined with the interference-free SINR c.c.d.f.
IntegralResult q_limit_large_t(const Popularity& pop, const CacheDesign& design,
                               const NetworkConfig& net, double theta,
                               const QuadratureSettings& quad);

/// Success probability in the dense-user limit: every cached file is
/// requested in every window, pinning the load at the cache size.
IntegralResult q_limit_dense(const Popularity& pop, const CacheDesign& design,
                             const NetworkConfig& net, const SchemeConfig& scheme,
                             const QuadratureSettings& quad);

/// Success probability in the sparse-user limit: the typical user's own
/// request is the only one, pinning the load at 1.
IntegralResult q_limit_sparse(const Popularity& pop, const CacheDesign& design,
                              const NetworkConfig& net, const SchemeConfig& scheme,
                              const QuadratureSettings& quad);

/// Probe how fast `quantity` approaches `limit` along `schedule`, which
/// must be strictly monotone. `noise_floor` is the error magnitude below
/// which values are treated as numerically indistinguishable from the
/// limit rather than evidence of an order.
ConvergenceReport probe_convergence(const std::function<double(double)>& quantity,
                                    const std::function<double()>& limit,
                                    const std::vector<double>& schedule,
                                    double noise_floor = 0.0);

} // namespace tsam
