#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "tsam/model.hpp"
#include "tsam/rng.hpp"

namespace tsam {

/// Multicasting scheme realized by a trial. baseline_temporal batches the
/// same T-slot aggregation window but synchronizes every BS on the same
/// serving slots, so the decoding slot sees the full BS process as
/// interference instead of one tier; baseline_continuous is the proposed
/// scheme run at period 1 (the same code path, not a fork).
enum class Variant { proposed, baseline_temporal, baseline_continuous };

std::string_view variant_name(Variant v);
std::optional<Variant> parse_variant(std::string_view name);

/// One sampled network realization: BSs and users scattered uniformly in a
/// disc of the given radius around the typical user at the origin, plus
/// each user's requested file for every slot of the aggregation window.
/// Layout is column-wise for the per-trial geometry scans.
struct ScenarioSnapshot {
    double radius = 0.0;
    std::int64_t period_t = 1;
    std::vector<double> bs_x;
    std::vector<double> bs_y;
    std::vector<int> bs_tier;
    std::vector<int> bs_combo;
    std::vector<std::uint64_t> bs_cache;
    std::vector<double> user_x;
    std::vector<double> user_y;
    std::vector<int> requests;

    int n_bs() const { return static_cast<int>(bs_x.size()); }
    int n_users() const { return static_cast<int>(user_x.size()); }
    int request(int user, int slot) const {
        return requests[static_cast<std::size_t>(user) *
                            static_cast<std::size_t>(period_t) +
                        static_cast<std::size_t>(slot)];
    }
};

/// Outcome of one trial. When served is false no BS in the disc caches the
/// requested file (counted as a failure and tallied separately) and the
/// remaining fields are left at zero.
struct TrialOutcome {
    int file_n = 0;
    bool served = false;
    double distance = 0.0;
    int tier = 0;
    int load = 0;
    double sinr = 0.0;
    bool success = false;
    bool beyond_half_radius = false;
};

/// Aggregated Monte Carlo estimate. q_file[n] is successes over trials
/// whose typical request was file n (0 when that file was never drawn);
/// ci95 is the normal-approximation half-width for q_hat.
struct EstimateResult {
    std::int64_t trials = 0;
    double q_hat = 0.0;
    double ci95 = 0.0;
    std::vector<std::int64_t> file_trials;
    std::vector<std::int64_t> file_successes;
    std::vector<double> q_file;
    double no_serving_freq = 0.0;
    double edge_freq = 0.0;
    std::uint64_t master_seed = 0;
    Variant variant = Variant::proposed;
    double region_radius = 0.0;
};

/// Estimate-level knobs that are not part of the analyzed model. A
/// non-positive region_radius selects the default rule. The realism flag
/// silences same-tier BSs whose aggregation window holds no request; it is
/// off by default so the simulator matches the analyzed always-on model.
struct SimOptions {
    double region_radius = 0.0;
    bool active_only_interferers = false;
};

/// Default disc radius: 5 / sqrt(pi * lambda_b * min_n T_n), which keeps
/// the chance of the serving BS falling beyond R/2 negligible even for the
/// least-cached file.
double default_region_radius(const NetworkConfig& net, const CacheDesign& design);

ScenarioSnapshot sample_scenario(const NetworkConfig& net, const Popularity& pop,
                                 const CacheDesign& design, const SchemeConfig& scheme,
                                 double radius, Xoshiro256pp& rng);

/// Nearest BS whose cache holds file n, ties broken by lowest index;
/// nullopt when no BS in the snapshot caches the file.
std::optional<int> serving_bs(const ScenarioSnapshot& snap, double x, double y,
                              int file_n);

/// Earliest slot t' >= t0 in which tier tau0 is active, with tier T mapped
/// to residue 0: t' = T * ceil((t0 - tau0) / T) + tau0.
std::int64_t serving_slot(std::int64_t t0, int tau0, std::int64_t t_period);

/// Number of distinct files the serving BS must multicast in its window:
/// file n itself plus every other cached file some user requested during
/// the window and routes to this BS. Requires bs to cache file n.
int window_load(const ScenarioSnapshot& snap, int bs, int file_n);

/// SINR of the typical user when bs transmits in tier tau0's slot, with
/// unit-mean exponential fading drawn per tier-tau0 BS in index order.
/// tau0 = 0 means a synchronized slot in which every BS transmits.
double sinr_sample(const ScenarioSnapshot& snap, int bs, int tau0,
                   const NetworkConfig& net, Xoshiro256pp& rng,
                   bool active_only_interferers = false);

TrialOutcome run_trial(const NetworkConfig& net, const Popularity& pop,
                       const CacheDesign& design, const SchemeConfig& scheme,
                       double radius, Xoshiro256pp& rng, Variant variant,
                       bool active_only_interferers = false);

/// Monte Carlo estimate over independent trials. Bit-identical for a fixed
/// master seed regardless of threads_hint: every trial owns a substream
/// derived from (master_seed, trial index) and aggregation is integer
/// counting.
EstimateResult estimate(const NetworkConfig& net, const Popularity& pop,
                        const CacheDesign& design, const SchemeConfig& scheme,
                        std::int64_t trials, std::uint64_t master_seed,
                        int threads_hint, Variant variant,
                        const SimOptions& options = {});

/// The first `count` per-trial snapshots exactly as estimate() samples
/// them (same substreams, same draw order); for scenario dumps and
/// regression fixtures.
std::vector<ScenarioSnapshot> trial_snapshots(const NetworkConfig& net,
                                              const Popularity& pop,
                                              const CacheDesign& design,
                                              const SchemeConfig& scheme,
                                              std::uint64_t master_seed, Variant variant,
                                              int count, double region_radius = 0.0);

} // namespace tsam
