#pragma once

#include <vector>

#include "tsam/model.hpp"

// Reference parameter set used across the suite: lambda_b=0.01, lambda_u=0.1,
// alpha=4, W=1e7, P/N0=30 dB, N=5, K=4, gamma=2, caching distribution
// (0.7, 0.2, 0.06, 0.02, 0.02) over the five 4-subsets, so the per-file hit
// probabilities come out (0.98, 0.98, 0.94, 0.80, 0.30).
namespace ref {

inline tsam::NetworkConfig net() {
    tsam::NetworkConfig n;
    n.lambda_b = 0.01;
    n.lambda_u = 0.1;
    n.alpha = 4.0;
    n.bandwidth_w = 1e7;
    n.snr_ratio = 1e3;
    return n;
}

inline tsam::Popularity pop() { return tsam::zipf_popularity(5, 2.0); }

inline tsam::CacheDesign design() {
    return tsam::make_cache_design(tsam::enumerate_combinations(5, 4),
                                   {0.7, 0.2, 0.06, 0.02, 0.02});
}

// Two files, both cached everywhere: a single combination with probability 1.
inline tsam::CacheDesign pair_design() {
    return tsam::make_cache_design(tsam::enumerate_combinations(2, 2), {1.0});
}

inline tsam::Popularity pair_pop() {
    tsam::Popularity p;
    p.a = {0.8, 0.2};
    return p;
}

} // namespace ref
