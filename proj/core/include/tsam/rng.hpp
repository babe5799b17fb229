#pragma once

#include <cmath>
#include <cstdint>
#include <vector>

namespace tsam {

/// SplitMix64 step; used for seed expansion and stream derivation only.
inline std::uint64_t splitmix64(std::uint64_t& state) {
    std::uint64_t z = (state += 0x9e3779b97f4a7c15ULL);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

/// xoshiro256++ generator. Small, fast, and portable: results do not
/// depend on the standard library's distribution implementations.
class Xoshiro256pp {
public:
    using result_type = std::uint64_t;

    explicit Xoshiro256pp(std::uint64_t seed) {
        std::uint64_t sm = seed;
        for (auto& word : s_) word = splitmix64(sm);
        if ((s_[0] | s_[1] | s_[2] | s_[3]) == 0) s_[3] = 0x9e3779b97f4a7c15ULL;
    }

    static constexpr result_type min() { return 0; }
    static constexpr result_type max() { return ~result_type{0}; }

    result_type operator()() {
        const std::uint64_t result = rotl(s_[0] + s_[3], 23) + s_[0];
        const std::uint64_t t = s_[1] << 17;
        s_[2] ^= s_[0];
        s_[3] ^= s_[1];
        s_[1] ^= s_[2];
        s_[0] ^= s_[3];
        s_[2] ^= t;
        s_[3] = rotl(s_[3], 45);
        return result;
    }

private:
    static std::uint64_t rotl(std::uint64_t x, int k) {
        return (x << k) | (x >> (64 - k));
    }

    std::uint64_t s_[4];
};

/// Private substream for one trial, a pure function of (master seed,
/// trial index): trials can run in any order on any number of threads and
/// always see the same draws.
inline Xoshiro256pp trial_stream(std::uint64_t master_seed, std::uint64_t trial_index) {
    return Xoshiro256pp{master_seed ^ (0x9e3779b97f4a7c15ULL * (trial_index + 1))};
}

/// Uniform draw in [0, 1) with 53 random bits.
inline double uniform_unit(Xoshiro256pp& rng) {
    return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

/// Unit-mean (or rate-parameterized) exponential draw.
inline double exponential(Xoshiro256pp& rng, double rate = 1.0) {
    return -std::log1p(-uniform_unit(rng)) / rate;
}

/// Poisson draw by counting unit-rate exponential arrivals in [0, mean];
/// the running sum stays O(mean), so large means never underflow.
inline std::int64_t poisson(Xoshiro256pp& rng, double mean) {
    std::int64_t count = 0;
    double arrival = exponential(rng);
    while (arrival <= mean) {
        ++count;
        arrival += exponential(rng);
    }
    return count;
}

/// Cumulative distribution over probs; the last entry is forced to 1 so a
/// uniform draw in [0,1) always lands inside the table.
inline std::vector<double> cumulative(const std::vector<double>& probs) {
    std::vector<double> cdf(probs.size());
    double acc = 0.0;
    for (std::size_t i = 0; i < probs.size(); ++i) {
        acc += probs[i];
        cdf[i] = acc;
    }
    if (!cdf.empty()) cdf.back() = 1.0;
    return cdf;
}

/// Categorical draw by binary search on a cumulative table.
inline int categorical(Xoshiro256pp& rng, const std::vector<double>& cdf) {
    const double u = uniform_unit(rng);
    int lo = 0;
    int hi = static_cast<int>(cdf.size()) - 1;
    while (lo < hi) {
        const int mid = lo + (hi - lo) / 2;
        if (u < cdf[static_cast<std::size_t>(mid)]) {
            hi = mid;
        } else {
            lo = mid + 1;
        }
    }
    return lo;
}

} // namespace tsam
