#include "tsam/simulator.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <numbers>
#include <stdexcept>
#include <string>
#include <thread>

namespace tsam {

namespace {

constexpr double kZ95 = 1.959963984540054;

struct SamplingTables {
    std::vector<double> pop_cdf;
    std::vector<double> combo_cdf;
    std::vector<std::uint64_t> combo_mask;
};

SamplingTables make_tables(const Popularity& pop, const CacheDesign& design) {
    if (design.n_files() > 64) {
        throw std::invalid_argument(
            "simulator: cache masks are 64-bit, so at most 64 files are supported (got " +
            std::to_string(design.n_files()) + ")");
    }
    SamplingTables t;
    t.pop_cdf = cumulative(pop.a);
    t.combo_cdf = cumulative(design.p);
    t.combo_mask.reserve(design.combos.size());
    for (const auto& members : design.combos.combos) {
        std::uint64_t mask = 0;
        for (int m : members) mask |= std::uint64_t{1} << m;
        t.combo_mask.push_back(mask);
    }
    return t;
}

double dist2(double ax, double ay, double bx, double by) {
    const double dx = ax - bx;
    const double dy = ay - by;
    return dx * dx + dy * dy;
}

ScenarioSnapshot sample_scenario_impl(const NetworkConfig& net, const SchemeConfig& scheme,
                                      const SamplingTables& tables, double radius,
                                      Xoshiro256pp& rng) {
    ScenarioSnapshot snap;
    snap.radius = radius;
    snap.period_t = scheme.period_t;
    const double area = std::numbers::pi * radius * radius;

    const std::int64_t n_bs = poisson(rng, net.lambda_b * area);
    snap.bs_x.reserve(static_cast<std::size_t>(n_bs));
    snap.bs_y.reserve(static_cast<std::size_t>(n_bs));
    snap.bs_tier.reserve(static_cast<std::size_t>(n_bs));
    snap.bs_combo.reserve(static_cast<std::size_t>(n_bs));
    snap.bs_cache.reserve(static_cast<std::size_t>(n_bs));
    for (std::int64_t b = 0; b < n_bs; ++b) {
        const double r = radius * std::sqrt(uniform_unit(rng));
        const double phi = 2.0 * std::numbers::pi * uniform_unit(rng);
        snap.bs_x.push_back(r * std::cos(phi));
        snap.bs_y.push_back(r * std::sin(phi));
        snap.bs_tier.push_back(
            1 + static_cast<int>(uniform_unit(rng) * static_cast<double>(scheme.period_t)));
        const int combo = categorical(rng, tables.combo_cdf);
        snap.bs_combo.push_back(combo);
        snap.bs_cache.push_back(tables.combo_mask[static_cast<std::size_t>(combo)]);
    }

    const std::int64_t n_users = poisson(rng, net.lambda_u * area);
    snap.user_x.reserve(static_cast<std::size_t>(n_users));
    snap.user_y.reserve(static_cast<std::size_t>(n_users));
    for (std::int64_t u = 0; u < n_users; ++u) {
        const double r = radius * std::sqrt(uniform_unit(rng));
        const double phi = 2.0 * std::numbers::pi * uniform_unit(rng);
        snap.user_x.push_back(r * std::cos(phi));
        snap.user_y.push_back(r * std::sin(phi));
    }

    snap.requests.resize(static_cast<std::size_t>(n_users) *
                         static_cast<std::size_t>(scheme.period_t));
    for (std::size_t i = 0; i < snap.requests.size(); ++i) {
        snap.requests[i] = categorical(rng, tables.pop_cdf);
    }
    return snap;
}

/// Load of BS b0 for file n: a user's request for file m reaches b0 when
/// no closer BS caches m, and only files in b0's cache count.
int window_load_impl(const ScenarioSnapshot& snap, int b0, int file_n) {
    const std::uint64_t target = snap.bs_cache[static_cast<std::size_t>(b0)];
    std::uint64_t got = std::uint64_t{1} << file_n;
    if (got == target) return 1;

    const int n_bs = snap.n_bs();
    const double b0x = snap.bs_x[static_cast<std::size_t>(b0)];
    const double b0y = snap.bs_y[static_cast<std::size_t>(b0)];
    for (int u = 0; u < snap.n_users(); ++u) {
        std::uint64_t want = 0;
        for (std::int64_t t = 0; t < snap.period_t; ++t) {
            want |= std::uint64_t{1} << snap.request(u, static_cast<int>(t));
        }
        want &= target & ~got;
        if (want == 0) continue;

        const double ux = snap.user_x[static_cast<std::size_t>(u)];
        const double uy = snap.user_y[static_cast<std::size_t>(u)];
        const double d0 = dist2(ux, uy, b0x, b0y);
        std::uint64_t beaten = 0;
        for (int l = 0; l < n_bs && want != 0; ++l) {
            if (l == b0) continue;
            const double d = dist2(ux, uy, snap.bs_x[static_cast<std::size_t>(l)],
                                   snap.bs_y[static_cast<std::size_t>(l)]);
            if (d < d0 || (d == d0 && l < b0)) {
                beaten |= snap.bs_cache[static_cast<std::size_t>(l)];
                want &= ~beaten;
            }
        }
        got |= want;
        if (got == target) break;
    }
    return std::popcount(got);
}

/// Marks BSs that received at least one request during the window under
/// cache-aware routing; only consulted behind the realism flag.
std::vector<char> active_bs_mask(const ScenarioSnapshot& snap) {
    std::vector<char> active(static_cast<std::size_t>(snap.n_bs()), 0);
    for (int u = 0; u < snap.n_users(); ++u) {
        std::uint64_t seen = 0;
        for (std::int64_t t = 0; t < snap.period_t; ++t) {
            const int m = snap.request(u, static_cast<int>(t));
            if (seen & (std::uint64_t{1} << m)) continue;
            seen |= std::uint64_t{1} << m;
            const auto bs = serving_bs(snap, snap.user_x[static_cast<std::size_t>(u)],
                                       snap.user_y[static_cast<std::size_t>(u)], m);
            if (bs) active[static_cast<std::size_t>(*bs)] = 1;
        }
    }
    return active;
}

TrialOutcome run_trial_impl(const NetworkConfig& net, const SchemeConfig& scheme,
                            const SamplingTables& tables, double radius,
                            Xoshiro256pp& rng, Variant variant,
                            bool active_only_interferers) {
    SchemeConfig effective = scheme;
    if (variant == Variant::baseline_continuous) effective.period_t = 1;

    TrialOutcome out;
    out.file_n = categorical(rng, tables.pop_cdf);
    const ScenarioSnapshot snap = sample_scenario_impl(net, effective, tables, radius, rng);

    const auto found = serving_bs(snap, 0.0, 0.0, out.file_n);
    if (!found) return out;
    const int b0 = *found;
    out.served = true;
    out.distance = std::sqrt(dist2(0.0, 0.0, snap.bs_x[static_cast<std::size_t>(b0)],
                                   snap.bs_y[static_cast<std::size_t>(b0)]));
    out.tier = snap.bs_tier[static_cast<std::size_t>(b0)];
    out.beyond_half_radius = out.distance > 0.5 * radius;
    out.load = window_load_impl(snap, b0, out.file_n);

    // Under the temporal baseline every BS batches on the same slots, so the
    // decoding slot sees the whole process transmitting rather than one tier.
    const int tau0 = variant == Variant::baseline_temporal ? 0 : out.tier;
    out.sinr = sinr_sample(snap, b0, tau0, net, rng, active_only_interferers);
    out.success = net.bandwidth_w / static_cast<double>(out.load) *
                      std::log2(1.0 + out.sinr) >=
                  effective.rate_theta;
    return out;
}

} // namespace

std::string_view variant_name(Variant v) {
    switch (v) {
        case Variant::proposed: return "proposed";
        case Variant::baseline_temporal: return "baseline-temporal";
        case Variant::baseline_continuous: return "baseline-continuous";
    }
    return "unknown";
}

std::optional<Variant> parse_variant(std::string_view name) {
    if (name == "proposed") return Variant::proposed;
    if (name == "baseline-temporal") return Variant::baseline_temporal;
    if (name == "baseline-continuous") return Variant::baseline_continuous;
    return std::nullopt;
}

double default_region_radius(const NetworkConfig& net, const CacheDesign& design) {
    const double min_hit = *std::min_element(design.hit.begin(), design.hit.end());
    if (!(min_hit > 0.0)) {
        throw std::invalid_argument("default_region_radius: all files need positive hit probability");
    }
    return 5.0 / std::sqrt(std::numbers::pi * net.lambda_b * min_hit);
}

ScenarioSnapshot sample_scenario(const NetworkConfig& net, const Popularity& pop,
                                 const CacheDesign& design, const SchemeConfig& scheme,
                                 double radius, Xoshiro256pp& rng) {
    if (!(radius > 0.0)) {
        throw std::invalid_argument("sample_scenario: radius must be positive");
    }
    return sample_scenario_impl(net, scheme, make_tables(pop, design), radius, rng);
}

std::optional<int> serving_bs(const ScenarioSnapshot& snap, double x, double y,
                              int file_n) {
    int best = -1;
    double best_d = 0.0;
    for (int l = 0; l < snap.n_bs(); ++l) {
        if (!(snap.bs_cache[static_cast<std::size_t>(l)] >> file_n & 1)) continue;
        const double d = dist2(x, y, snap.bs_x[static_cast<std::size_t>(l)],
                               snap.bs_y[static_cast<std::size_t>(l)]);
        if (best < 0 || d < best_d) {
            best = l;
            best_d = d;
        }
    }
    if (best < 0) return std::nullopt;
    return best;
}

std::int64_t serving_slot(std::int64_t t0, int tau0, std::int64_t t_period) {
    if (t_period < 1 || tau0 < 1 || tau0 > t_period) {
        throw std::invalid_argument("serving_slot: tier must lie in {1..T}");
    }
    if (t0 < t_period) {
        throw std::invalid_argument("serving_slot: t0 must be at least T");
    }
    const std::int64_t num = t0 - tau0;
    const std::int64_t ceil_div = num >= 0 ? (num + t_period - 1) / t_period
                                           : num / t_period;
    return t_period * ceil_div + tau0;
}

int window_load(const ScenarioSnapshot& snap, int bs, int file_n) {
    if (bs < 0 || bs >= snap.n_bs() ||
        !(snap.bs_cache[static_cast<std::size_t>(bs)] >> file_n & 1)) {
        throw std::invalid_argument("window_load: bs must exist and cache file n");
    }
    return window_load_impl(snap, bs, file_n);
}

double sinr_sample(const ScenarioSnapshot& snap, int bs, int tau0,
                   const NetworkConfig& net, Xoshiro256pp& rng,
                   bool active_only_interferers) {
    if (bs < 0 || bs >= snap.n_bs()) {
        throw std::invalid_argument("sinr_sample: bs must exist in the snapshot");
    }
    std::vector<char> active;
    if (active_only_interferers) active = active_bs_mask(snap);

    const double half_alpha = 0.5 * net.alpha;
    double signal = 0.0;
    double interference = 0.0;
    for (int l = 0; l < snap.n_bs(); ++l) {
        if (tau0 != 0 && snap.bs_tier[static_cast<std::size_t>(l)] != tau0) continue;
        const double h = exponential(rng);
        const double d2 = dist2(0.0, 0.0, snap.bs_x[static_cast<std::size_t>(l)],
                                snap.bs_y[static_cast<std::size_t>(l)]);
        const double power = h * std::pow(d2, -half_alpha);
        if (l == bs) {
            signal = power;
        } else if (!active_only_interferers || active[static_cast<std::size_t>(l)]) {
            interference += power;
        }
    }
    return signal / (interference + 1.0 / net.snr_ratio);
}

TrialOutcome run_trial(const NetworkConfig& net, const Popularity& pop,
                       const CacheDesign& design, const SchemeConfig& scheme,
                       double radius, Xoshiro256pp& rng, Variant variant,
                       bool active_only_interferers) {
    if (!(radius > 0.0)) {
        throw std::invalid_argument("run_trial: radius must be positive");
    }
    return run_trial_impl(net, scheme, make_tables(pop, design), radius, rng, variant,
                          active_only_interferers);
}

std::vector<ScenarioSnapshot> trial_snapshots(const NetworkConfig& net,
                                              const Popularity& pop,
                                              const CacheDesign& design,
                                              const SchemeConfig& scheme,
                                              std::uint64_t master_seed, Variant variant,
                                              int count, double region_radius) {
    const SamplingTables tables = make_tables(pop, design);
    const double radius = region_radius > 0.0 ? region_radius
                                              : default_region_radius(net, design);
    SchemeConfig effective = scheme;
    if (variant == Variant::baseline_continuous) effective.period_t = 1;
    std::vector<ScenarioSnapshot> out;
    out.reserve(static_cast<std::size_t>(std::max(count, 0)));
    for (int t = 0; t < count; ++t) {
        Xoshiro256pp rng = trial_stream(master_seed, static_cast<std::uint64_t>(t));
        // The typical file draw precedes the scenario in every trial stream.
        (void)categorical(rng, tables.pop_cdf);
        out.push_back(sample_scenario_impl(net, effective, tables, radius, rng));
    }
    return out;
}

EstimateResult estimate(const NetworkConfig& net, const Popularity& pop,
                        const CacheDesign& design, const SchemeConfig& scheme,
                        std::int64_t trials, std::uint64_t master_seed,
                        int threads_hint, Variant variant,
                        const SimOptions& options) {
    if (trials < 1) {
        throw std::invalid_argument("estimate: trials must be at least 1");
    }
    const SamplingTables tables = make_tables(pop, design);
    const double radius = options.region_radius > 0.0
                              ? options.region_radius
                              : default_region_radius(net, design);
    const int n_files = pop.n_files();

    struct Tally {
        std::vector<std::int64_t> file_trials;
        std::vector<std::int64_t> file_successes;
        std::int64_t no_serving = 0;
        std::int64_t beyond_half = 0;
    };

    auto run_range = [&](std::int64_t lo, std::int64_t hi, Tally& tally) {
        tally.file_trials.assign(static_cast<std::size_t>(n_files), 0);
        tally.file_successes.assign(static_cast<std::size_t>(n_files), 0);
        for (std::int64_t t = lo; t < hi; ++t) {
            Xoshiro256pp rng = trial_stream(master_seed, static_cast<std::uint64_t>(t));
            const TrialOutcome out = run_trial_impl(net, scheme, tables, radius, rng,
                                                    variant, options.active_only_interferers);
            ++tally.file_trials[static_cast<std::size_t>(out.file_n)];
            if (out.success) ++tally.file_successes[static_cast<std::size_t>(out.file_n)];
            if (!out.served) ++tally.no_serving;
            if (out.beyond_half_radius) ++tally.beyond_half;
        }
    };

    const int threads = static_cast<int>(
        std::clamp<std::int64_t>(threads_hint, 1, trials));
    std::vector<Tally> tallies(static_cast<std::size_t>(threads));
    if (threads == 1) {
        run_range(0, trials, tallies[0]);
    } else {
        std::vector<std::thread> pool;
        pool.reserve(static_cast<std::size_t>(threads));
        const std::int64_t chunk = (trials + threads - 1) / threads;
        for (int w = 0; w < threads; ++w) {
            const std::int64_t lo = w * chunk;
            const std::int64_t hi = std::min<std::int64_t>(lo + chunk, trials);
            pool.emplace_back(run_range, lo, hi, std::ref(tallies[static_cast<std::size_t>(w)]));
        }
        for (auto& th : pool) th.join();
    }

    EstimateResult result;
    result.trials = trials;
    result.master_seed = master_seed;
    result.variant = variant;
    result.region_radius = radius;
    result.file_trials.assign(static_cast<std::size_t>(n_files), 0);
    result.file_successes.assign(static_cast<std::size_t>(n_files), 0);
    std::int64_t successes = 0;
    std::int64_t no_serving = 0;
    std::int64_t beyond_half = 0;
    for (const Tally& tally : tallies) {
        for (int n = 0; n < n_files; ++n) {
            result.file_trials[static_cast<std::size_t>(n)] +=
                tally.file_trials[static_cast<std::size_t>(n)];
            result.file_successes[static_cast<std::size_t>(n)] +=
                tally.file_successes[static_cast<std::size_t>(n)];
        }
        no_serving += tally.no_serving;
        beyond_half += tally.beyond_half;
    }
    for (int n = 0; n < n_files; ++n) successes += result.file_successes[static_cast<std::size_t>(n)];

    result.q_file.assign(static_cast<std::size_t>(n_files), 0.0);
    for (int n = 0; n < n_files; ++n) {
        const auto idx = static_cast<std::size_t>(n);
        if (result.file_trials[idx] > 0) {
            result.q_file[idx] = static_cast<double>(result.file_successes[idx]) /
                                 static_cast<double>(result.file_trials[idx]);
        }
    }
    result.q_hat = static_cast<double>(successes) / static_cast<double>(trials);
    result.ci95 = kZ95 * std::sqrt(result.q_hat * (1.0 - result.q_hat) /
                                   static_cast<double>(trials));
    result.no_serving_freq = static_cast<double>(no_serving) / static_cast<double>(trials);
    result.edge_freq = static_cast<double>(beyond_half) / static_cast<double>(trials);
    return result;
}

} // namespace tsam
