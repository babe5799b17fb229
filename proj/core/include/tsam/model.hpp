#pragma once

#include <cstddef>
#include <cstdint>
#include <string>
#include <vector>

namespace tsam {

/// Physical-layer and density parameters. `snr_ratio` is the linear transmit
/// power to noise ratio P/N0; the two never enter any formula separately.
struct NetworkConfig {
    double lambda_b = 0.01;   // BS density per unit area
    double lambda_u = 0.1;    // user density per unit area
    double alpha = 4.0;       // pathloss exponent, must exceed 2
    double bandwidth_w = 1e7; // total bandwidth in Hz
    double snr_ratio = 1e3;   // P/N0, linear
};

/// File request probabilities, sorted non-increasing. Files are indexed
/// 0..N-1 internally; configuration files use 1-based indices.
struct Popularity {
    std::vector<double> a;

    int n_files() const { return static_cast<int>(a.size()); }
};

/// An ordered list of distinct K-subsets of {0..N-1}, each sorted ascending.
/// `enumerate_combinations` produces the full lexicographic family; sparse
/// cache designs carry only the subsets that have positive probability.
struct CombinationSet {
    int n_files = 0;
    int cache_size = 0;
    std::vector<std::vector<int>> combos;

    std::size_t size() const { return combos.size(); }
};

/// A random caching design: the combination support, one probability per
/// combination, and the derived per-file hit probabilities.
struct CacheDesign {
    CombinationSet combos;
    std::vector<double> p;
    std::vector<double> hit; // hit[n] = probability file n is cached at a BS

    int n_files() const { return combos.n_files; }
    int cache_size() const { return combos.cache_size; }
};

/// Multicast scheme parameters: BS on/off period (in slots) and target rate.
struct SchemeConfig {
    std::int64_t period_t = 1; // tier count / on-off period, >= 1
    double rate_theta = 0.0;   // multicast rate, bits/second, >= 0
};

struct ModelBundle {
    NetworkConfig net;
    Popularity pop;
    CacheDesign design;
    SchemeConfig scheme;
};

/// Zipf-like popularity: a_n proportional to (n+1)^{-gamma}, normalized.
/// gamma = 0 gives the uniform distribution. Throws on n_files < 1 or
/// negative gamma.
Popularity zipf_popularity(int n_files, double gamma);

inline constexpr std::size_t kDefaultCombinationCap = 100000;

/// All K-subsets of {0..N-1} in lexicographic order. Throws if K is out of
/// range or if C(N,K) exceeds `cap` (sparse designs are the escape hatch for
/// combination families too large to enumerate).
CombinationSet enumerate_combinations(int n_files, int cache_size,
                                      std::size_t cap = kDefaultCombinationCap);

/// Exact binomial coefficient, saturating at SIZE_MAX on overflow.
std::size_t binomial(int n, int k);

/// Per-file hit probabilities: hit[n] = sum of p_i over combinations
/// containing n. Their total equals the cache size K for any distribution
/// on K-subsets.
std::vector<double> hit_probabilities(const CombinationSet& combos,
                                      const std::vector<double>& p);

/// Builds a design over the full lexicographic combination family with one
/// probability per combination (dense form).
CacheDesign make_cache_design(CombinationSet combos, std::vector<double> p);

/// One support entry of a sparse caching distribution; members are 0-based.
struct SparseCombo {
    std::vector<int> members;
    double probability = 0.0;
};

/// Builds a design from an explicit support list; combinations are sorted
/// lexicographically and must be distinct.
CacheDesign make_cache_design_sparse(int n_files, int cache_size,
                                     std::vector<SparseCombo> entries);

/// All invariant violations in the bundle, one message per violation, each
/// naming the offending field. Empty means the bundle is valid.
std::vector<std::string> validation_issues(const NetworkConfig& net,
                                           const Popularity& pop,
                                           const CacheDesign& design,
                                           const SchemeConfig& scheme);

/// Returns the bundle if every invariant holds, otherwise throws
/// ValidationError carrying the full list of violations.
ModelBundle validate_inputs(const NetworkConfig& net, const Popularity& pop,
                            const CacheDesign& design, const SchemeConfig& scheme);

} // namespace tsam
