#pragma once

#include <cstdint>
#include <functional>
#include <vector>

#include "tsam/model.hpp"
#include "tsam/quadrature.hpp"

namespace tsam {

// Moment-matched Voronoi cell-load model constants: cell areas follow a
// gamma law of shape 3.5, and the size-biased cell of a serving BS raises
// the tail exponent to 4.5. Model constants, not tunables.
inline constexpr double kCellShape = 3.5;
inline constexpr double kCellTailExponent = 4.5;

/// Distribution of the serving BS's file load over k = 1..K.
/// probs[k-1] = Pr[load = k].
struct LoadPmf {
    std::vector<double> probs;

    double prob(int k) const { return probs.at(static_cast<std::size_t>(k - 1)); }
    int max_load() const { return static_cast<int>(probs.size()); }
};

/// Complete Beta integral B(x,y) for x, y > 0.
double beta_complete(double x, double y);

/// Upper-tail incomplete Beta integral over [z, 1] for x, y > 0 and
/// z in [0,1]. Endpoint singularities (u -> 1 for y < 1, u -> 0 for x < 1
/// with z = 0) are removed analytically by power substitutions before the
/// adaptive integrator runs.
double beta_upper(double x, double y, double z);

/// Mean-load weight of file m at the serving BS: 1 plus the ratio of the
/// density of users requesting m within a period window to the density of
/// BSs caching m, scaled by the cell-shape constant. Throws if file m has
/// zero hit probability.
double load_weight(int m, const Popularity& pop, const CacheDesign& design,
                   const NetworkConfig& net, std::int64_t t_period);

/// File-load p.m.f. assembled from caller-supplied per-file idle
/// probabilities, where idle_prob(m) is the chance that cached file m
/// contributes no request to the serving BS's window. Combinations with
/// zero caching probability are skipped. Throws NumericalError if the
/// result fails to sum to 1 within 1e-9.
LoadPmf load_pmf_from_idle_probs(int n, const CacheDesign& design,
                                 const std::function<double(int)>& idle_prob);

/// File-load p.m.f. for file n under on/off period t_period.
LoadPmf load_pmf(int n, const Popularity& pop, const CacheDesign& design,
                 const NetworkConfig& net, std::int64_t t_period);

/// Complementary c.d.f. of the typical user's SINR at threshold eta, for a
/// file with hit probability t_n under on/off period t_period. Evaluated by
/// adaptive quadrature after substituting s = pi*lambda_b*t_n*d^2, which
/// turns the Gaussian-in-distance tail into an exponential one; the
/// truncation bound is added to the reported error estimate.
IntegralResult sinr_ccdf(double eta, double t_n, const NetworkConfig& net,
                         std::int64_t t_period, const QuadratureSettings& quad);

/// Success probability of a request for file n: the load p.m.f. combined
/// with the SINR c.c.d.f. at thresholds 2^(k*theta/W) - 1.
IntegralResult success_prob_file(int n, const Popularity& pop, const CacheDesign& design,
                                 const NetworkConfig& net, const SchemeConfig& scheme,
                                 const QuadratureSettings& quad);

/// Overall success probability: popularity-weighted sum over files.
IntegralResult success_prob(const Popularity& pop, const CacheDesign& design,
                            const NetworkConfig& net, const SchemeConfig& scheme,
                            const QuadratureSettings& quad);

/// Mean file load of the serving BS for file n; lies in [1, K].
double expected_load(int n, const Popularity& pop, const CacheDesign& design,
                     const NetworkConfig& net, std::int64_t t_period);

namespace detail {

/// Certified evaluation of the integral of exp(-beta*s^p - decay*s) over
/// [0, inf) for beta >= 0, p > 1, decay > 0. Adaptive quadrature runs on a
/// truncated range chosen from the exponential envelope; the analytic tail
/// bound is folded into the error estimate.
IntegralResult truncated_exp_integral(double beta, double p, double decay,
                                      const QuadratureSettings& quad);

} // namespace detail

} // namespace tsam
