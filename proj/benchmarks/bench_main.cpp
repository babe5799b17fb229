#include <benchmark/benchmark.h>

#include <cstdint>

#include "tsam/analysis.hpp"
#include "tsam/model.hpp"
#include "tsam/rng.hpp"
#include "tsam/simulator.hpp"

using namespace tsam;

namespace {

NetworkConfig bench_net() {
    NetworkConfig net;
    net.lambda_b = 0.01;
    net.lambda_u = 0.1;
    net.alpha = 4.0;
    net.bandwidth_w = 1e7;
    net.snr_ratio = 1e3;
    return net;
}

Popularity bench_pop() { return zipf_popularity(5, 2.0); }

CacheDesign bench_design() {
    return make_cache_design(enumerate_combinations(5, 4),
                             {0.7, 0.2, 0.06, 0.02, 0.02});
}

void bm_beta_upper(benchmark::State& state) {
    double z = 0.1;
    for (auto _ : state) {
        benchmark::DoNotOptimize(beta_upper(0.5, 0.5, z));
        z = z < 0.9 ? z + 0.1 : 0.1;
    }
}
BENCHMARK(bm_beta_upper);

void bm_load_pmf(benchmark::State& state) {
    const NetworkConfig net = bench_net();
    const Popularity pop = bench_pop();
    const CacheDesign design = bench_design();
    const std::int64_t period = state.range(0);
    for (auto _ : state) {
        benchmark::DoNotOptimize(load_pmf(0, pop, design, net, period));
    }
}
BENCHMARK(bm_load_pmf)->Arg(1)->Arg(8);

void bm_sinr_ccdf(benchmark::State& state) {
    const NetworkConfig net = bench_net();
    const std::int64_t period = state.range(0);
    for (auto _ : state) {
        benchmark::DoNotOptimize(sinr_ccdf(1.0, 0.98, net, period, {}));
    }
}
BENCHMARK(bm_sinr_ccdf)->Arg(1)->Arg(8);

void bm_success_prob(benchmark::State& state) {
    const NetworkConfig net = bench_net();
    const Popularity pop = bench_pop();
    const CacheDesign design = bench_design();
    SchemeConfig scheme;
    scheme.period_t = state.range(0);
    scheme.rate_theta = 1e6;
    for (auto _ : state) {
        benchmark::DoNotOptimize(success_prob(pop, design, net, scheme, {}));
    }
}
BENCHMARK(bm_success_prob)->Arg(1)->Arg(2)->Arg(8);

void bm_sample_scenario(benchmark::State& state) {
    const NetworkConfig net = bench_net();
    const Popularity pop = bench_pop();
    const CacheDesign design = bench_design();
    SchemeConfig scheme;
    scheme.period_t = state.range(0);
    const double radius = default_region_radius(net, design);
    Xoshiro256pp rng(1);
    for (auto _ : state) {
        benchmark::DoNotOptimize(sample_scenario(net, pop, design, scheme, radius, rng));
    }
}
BENCHMARK(bm_sample_scenario)->Arg(1)->Arg(8);

void bm_run_trial(benchmark::State& state) {
    const NetworkConfig net = bench_net();
    const Popularity pop = bench_pop();
    const CacheDesign design = bench_design();
    SchemeConfig scheme;
    scheme.period_t = state.range(0);
    scheme.rate_theta = 2e6;
    const double radius = default_region_radius(net, design);
    std::uint64_t trial = 0;
    for (auto _ : state) {
        Xoshiro256pp rng = trial_stream(1, trial++);
        benchmark::DoNotOptimize(
            run_trial(net, pop, design, scheme, radius, rng, Variant::proposed));
    }
}
BENCHMARK(bm_run_trial)->Arg(1)->Arg(2)->Arg(8);

} // namespace

BENCHMARK_MAIN();
