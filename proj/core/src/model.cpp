#include "tsam/model.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <set>
#include <sstream>
#include <stdexcept>

#include "tsam/errors.hpp"

namespace tsam {

namespace {

std::string fmt(double v) {
    std::ostringstream os;
    os.precision(12);
    os << v;
    return os.str();
}

} // namespace

Popularity zipf_popularity(int n_files, double gamma) {
    if (n_files < 1) {
        throw std::invalid_argument("zipf_popularity: n_files must be >= 1");
    }
    if (gamma < 0.0) {
        throw std::invalid_argument("zipf_popularity: gamma must be >= 0");
    }
    std::vector<double> w(static_cast<std::size_t>(n_files));
    double total = 0.0;
    for (int n = 0; n < n_files; ++n) {
        w[n] = std::pow(static_cast<double>(n + 1), -gamma);
        total += w[n];
    }
    for (auto& v : w) v /= total;
    return Popularity{std::move(w)};
}

std::size_t binomial(int n, int k) {
    if (k < 0 || k > n) return 0;
    if (k > n - k) k = n - k;
    std::size_t result = 1;
    for (int i = 1; i <= k; ++i) {
        std::size_t num = static_cast<std::size_t>(n - k + i);
        // result * num / i is exact at every step; saturate instead of wrapping
        if (result > std::numeric_limits<std::size_t>::max() / num) {
            return std::numeric_limits<std::size_t>::max();
        }
        result = result * num / static_cast<std::size_t>(i);
    }
    return result;
}

CombinationSet enumerate_combinations(int n_files, int cache_size, std::size_t cap) {
    if (n_files < 1) {
        throw std::invalid_argument("enumerate_combinations: n_files must be >= 1");
    }
    if (cache_size < 1 || cache_size > n_files) {
        throw std::invalid_argument(
            "enumerate_combinations: cache_size must satisfy 1 <= K <= N (K=" +
            std::to_string(cache_size) + ", N=" + std::to_string(n_files) + ")");
    }
    const std::size_t count = binomial(n_files, cache_size);
    if (count > cap) {
        throw std::invalid_argument(
            "enumerate_combinations: C(" + std::to_string(n_files) + "," +
            std::to_string(cache_size) + ") = " + std::to_string(count) +
            " exceeds the enumeration cap of " + std::to_string(cap) +
            "; list the support sparsely instead");
    }

    CombinationSet set;
    set.n_files = n_files;
    set.cache_size = cache_size;
    set.combos.reserve(count);

    std::vector<int> cur(static_cast<std::size_t>(cache_size));
    for (int i = 0; i < cache_size; ++i) cur[i] = i;
    while (true) {
        set.combos.push_back(cur);
        // advance to the next combination in lexicographic order
        int pos = cache_size - 1;
        while (pos >= 0 && cur[pos] == n_files - cache_size + pos) --pos;
        if (pos < 0) break;
        ++cur[pos];
        for (int j = pos + 1; j < cache_size; ++j) cur[j] = cur[j - 1] + 1;
    }
    return set;
}

std::vector<double> hit_probabilities(const CombinationSet& combos,
                                      const std::vector<double>& p) {
    if (p.size() != combos.size()) {
        throw std::invalid_argument(
            "hit_probabilities: probability vector length " + std::to_string(p.size()) +
            " does not match combination count " + std::to_string(combos.size()));
    }
    std::vector<double> hit(static_cast<std::size_t>(combos.n_files), 0.0);
    for (std::size_t i = 0; i < combos.size(); ++i) {
        for (int m : combos.combos[i]) {
            hit[static_cast<std::size_t>(m)] += p[i];
        }
    }
    return hit;
}

CacheDesign make_cache_design(CombinationSet combos, std::vector<double> p) {
    CacheDesign design;
    design.hit = hit_probabilities(combos, p);
    design.combos = std::move(combos);
    design.p = std::move(p);
    return design;
}

CacheDesign make_cache_design_sparse(int n_files, int cache_size,
                                     std::vector<SparseCombo> entries) {
    if (entries.empty()) {
        throw std::invalid_argument("sparse cache design: support list is empty");
    }
    for (auto& e : entries) {
        std::sort(e.members.begin(), e.members.end());
        if (static_cast<int>(e.members.size()) != cache_size) {
            throw std::invalid_argument(
                "sparse cache design: a combination has " +
                std::to_string(e.members.size()) + " members, expected " +
                std::to_string(cache_size));
        }
        if (std::adjacent_find(e.members.begin(), e.members.end()) != e.members.end()) {
            throw std::invalid_argument("sparse cache design: repeated member in a combination");
        }
        if (e.members.front() < 0 || e.members.back() >= n_files) {
            throw std::invalid_argument("sparse cache design: member index out of range");
        }
    }
    std::sort(entries.begin(), entries.end(),
              [](const SparseCombo& a, const SparseCombo& b) { return a.members < b.members; });
    for (std::size_t i = 1; i < entries.size(); ++i) {
        if (entries[i].members == entries[i - 1].members) {
            throw std::invalid_argument("sparse cache design: duplicate combination in support");
        }
    }

    CombinationSet set;
    set.n_files = n_files;
    set.cache_size = cache_size;
    std::vector<double> p;
    set.combos.reserve(entries.size());
    p.reserve(entries.size());
    for (auto& e : entries) {
        set.combos.push_back(std::move(e.members));
        p.push_back(e.probability);
    }
    return make_cache_design(std::move(set), std::move(p));
}

std::vector<std::string> validation_issues(const NetworkConfig& net,
                                           const Popularity& pop,
                                           const CacheDesign& design,
                                           const SchemeConfig& scheme) {
    std::vector<std::string> issues;
    auto bad = [&issues](const std::string& msg) { issues.push_back(msg); };

    if (!(net.lambda_b > 0.0)) bad("lambda_b must be > 0 (got " + fmt(net.lambda_b) + ")");
    if (!(net.lambda_u > 0.0)) bad("lambda_u must be > 0 (got " + fmt(net.lambda_u) + ")");
    if (!(net.alpha > 2.0)) bad("alpha > 2 violated (got " + fmt(net.alpha) + ")");
    if (!(net.bandwidth_w > 0.0)) bad("bandwidth_w must be > 0 (got " + fmt(net.bandwidth_w) + ")");
    if (!(net.snr_ratio > 0.0)) bad("snr_ratio must be > 0 (got " + fmt(net.snr_ratio) + ")");

    const int n = pop.n_files();
    if (n < 1) {
        bad("popularity: at least one file is required");
    } else {
        double sum = 0.0;
        bool in_range = true;
        bool sorted = true;
        for (int i = 0; i < n; ++i) {
            const double v = pop.a[i];
            sum += v;
            if (!(v > 0.0) || v > 1.0) in_range = false;
            if (i > 0 && pop.a[i] > pop.a[i - 1]) sorted = false;
        }
        if (!in_range) bad("popularity: every a_n must lie in (0,1]");
        if (std::abs(sum - 1.0) > 1e-12) {
            bad("popularity: probabilities must sum to 1 within 1e-12 (sum = " + fmt(sum) + ")");
        }
        if (!sorted) bad("popularity: a_n must be non-increasing in n");
    }

    const auto& combos = design.combos;
    if (combos.n_files != n) {
        bad("cache design: n_files " + std::to_string(combos.n_files) +
            " does not match popularity length " + std::to_string(n));
    }
    if (combos.cache_size < 1 || combos.cache_size > combos.n_files) {
        bad("cache design: cache_size must satisfy 1 <= K <= N");
    }
    if (combos.size() == 0) bad("cache design: combination support is empty");
    if (design.p.size() != combos.size()) {
        bad("cache design: probability vector length does not match combination count");
    }

    bool combos_ok = true;
    for (const auto& c : combos.combos) {
        if (static_cast<int>(c.size()) != combos.cache_size ||
            !std::is_sorted(c.begin(), c.end()) ||
            std::adjacent_find(c.begin(), c.end()) != c.end() ||
            (!c.empty() && (c.front() < 0 || c.back() >= combos.n_files))) {
            combos_ok = false;
            break;
        }
    }
    if (!combos_ok) {
        bad("cache design: every combination must be a sorted set of cache_size distinct in-range files");
    }
    if (combos_ok) {
        std::set<std::vector<int>> seen(combos.combos.begin(), combos.combos.end());
        if (seen.size() != combos.size()) bad("cache design: combinations must be distinct");
    }

    if (design.p.size() == combos.size()) {
        double psum = 0.0;
        bool p_range = true;
        for (double v : design.p) {
            psum += v;
            if (v < 0.0 || v > 1.0) p_range = false;
        }
        if (!p_range) bad("caching distribution: every p_i must lie in [0,1]");
        if (std::abs(psum - 1.0) > 1e-12) {
            bad("caching distribution: p must sum to 1 within 1e-12 (sum = " + fmt(psum) + ")");
        }
    }

    if (combos_ok && design.p.size() == combos.size() && combos.n_files == n && n >= 1) {
        const auto hit = hit_probabilities(combos, design.p);
        double hsum = 0.0;
        for (double v : hit) hsum += v;
        if (std::abs(hsum - static_cast<double>(combos.cache_size)) > 1e-12) {
            bad("cache design: hit probabilities must sum to cache_size (sum = " + fmt(hsum) + ")");
        }
        for (int m = 0; m < n; ++m) {
            if (!(hit[m] > 0.0)) {
                bad("cache design: file " + std::to_string(m + 1) +
                    " is never cached (hit probability 0), so no serving BS can exist for it");
            }
        }
    }

    if (scheme.period_t < 1) {
        bad("period_t must be >= 1 (got " + std::to_string(scheme.period_t) + ")");
    }
    if (!(scheme.rate_theta >= 0.0)) {
        bad("rate_theta must be >= 0 (got " + fmt(scheme.rate_theta) + ")");
    }

    return issues;
}

ModelBundle validate_inputs(const NetworkConfig& net, const Popularity& pop,
                            const CacheDesign& design, const SchemeConfig& scheme) {
    auto issues = validation_issues(net, pop, design, scheme);
    if (!issues.empty()) throw ValidationError(std::move(issues));
    return ModelBundle{net, pop, design, scheme};
}

} // namespace tsam
