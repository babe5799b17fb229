// Acceptance gate: each criterion below is exercised by `acceptance cN` and
// prints exactly one [PASS]/[FAIL] line. A failing criterion exits 1.
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <numbers>
#include <numeric>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include <sys/wait.h>

#include <json.hpp>

#include "tsam/analysis.hpp"
#include "tsam/asymptotics.hpp"
#include "tsam/commands.hpp"
#include "tsam/model.hpp"
#include "tsam/run_config.hpp"
#include "tsam/simulator.hpp"

#include "../helpers.hpp"

using namespace tsam;
namespace fs = std::filesystem;

namespace {

// Frozen outcome of the c9 golden run (reference set, theta=2e6, 4000
// trials, seed 31): the simulated q at period 4 exceeded the one at
// period 2. Recorded once from that seed and pinned.
constexpr bool kC9FourBeatsTwo = true;

std::vector<double> log_grid(double start, double stop, int points) {
    std::vector<double> grid;
    const double lo = std::log(start);
    const double hi = std::log(stop);
    for (int i = 0; i < points; ++i) {
        grid.push_back(std::exp(lo + (hi - lo) * i / (points - 1)));
    }
    grid.front() = start;
    grid.back() = stop;
    return grid;
}

SchemeConfig scheme_at(std::int64_t period, double theta) {
    SchemeConfig s;
    s.period_t = period;
    s.rate_theta = theta;
    return s;
}

// c1: structural identities on randomized inputs. Hit probabilities sum to
// the cache size, every load p.m.f. sums to one, and the SINR c.c.d.f. is
// one at threshold zero.
bool c1(std::ostringstream& detail) {
    std::mt19937_64 rng(101);
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    double worst_hit = 0.0, worst_pmf = 0.0, worst_ccdf = 0.0;

    for (int c = 0; c < 200; ++c) {
        const int n_files = 1 + static_cast<int>(unit(rng) * 8.0);
        const int k = 1 + static_cast<int>(unit(rng) * n_files) % n_files;
        const std::int64_t period = 1 + static_cast<std::int64_t>(unit(rng) * 16.0) % 16;

        CombinationSet combos = enumerate_combinations(n_files, k);
        std::vector<double> p(combos.size());
        double sum = 0.0;
        for (double& x : p) sum += x = -std::log1p(-unit(rng));
        for (double& x : p) x /= sum;

        const CacheDesign design = make_cache_design(std::move(combos), std::move(p));
        const Popularity pop = zipf_popularity(n_files, 4.0 * unit(rng));
        NetworkConfig net;
        net.lambda_b = 0.001 + 0.049 * unit(rng);
        net.lambda_u = 0.01 + 0.99 * unit(rng);
        net.alpha = 2.1 + 3.9 * unit(rng);
        net.bandwidth_w = 1e7;
        net.snr_ratio = 1e3;

        const double hit_sum = std::accumulate(design.hit.begin(), design.hit.end(), 0.0);
        worst_hit = std::max(worst_hit, std::fabs(hit_sum - k));

        const int file = static_cast<int>(unit(rng) * n_files) % n_files;
        const LoadPmf pmf = load_pmf(file, pop, design, net, period);
        const double pmf_sum =
            std::accumulate(pmf.probs.begin(), pmf.probs.end(), 0.0);
        worst_pmf = std::max(worst_pmf, std::fabs(pmf_sum - 1.0));

        const double f0 = sinr_ccdf(0.0, design.hit[static_cast<std::size_t>(file)],
                                    net, period, {})
                              .value;
        worst_ccdf = std::max(worst_ccdf, std::fabs(f0 - 1.0));
    }

    detail << "200 cases: max |sum(T_n)-K| = " << worst_hit
           << ", max |sum(g)-1| = " << worst_pmf << ", max |f(0)-1| = " << worst_ccdf;
    return worst_hit <= 1e-12 && worst_pmf <= 1e-9 && worst_ccdf <= 1e-6;
}

// c2: single-file interference-limited coverage at alpha=4 against the
// closed form 1/(1 + pi/4), analytically and by simulation.
bool c2(std::ostringstream& detail) {
    const double oracle = 1.0 / (1.0 + std::numbers::pi / 4.0);

    NetworkConfig net;
    net.lambda_b = 0.01;
    net.lambda_u = 1e-4;
    net.alpha = 4.0;
    net.bandwidth_w = 1e7;
    net.snr_ratio = 1e12;

    const double analytic = sinr_ccdf(1.0, 1.0, net, 1, {}).value;

    const Popularity pop = zipf_popularity(1, 0.0);
    const CacheDesign design = make_cache_design(enumerate_combinations(1, 1), {1.0});
    // The oracle describes an unbounded network; quadrupling the region
    // radius pushes the interference-truncation bias (about
    // 0.35/(pi*lambda_b*R^2) at threshold 1) well below the CI.
    const double radius = 4.0 * default_region_radius(net, design);
    const EstimateResult est = estimate(net, pop, design, scheme_at(1, 1e7), 100000,
                                        4242, 1, Variant::proposed,
                                        SimOptions{radius, false});

    detail << "analytic " << analytic << " vs oracle " << oracle << " (|diff| "
           << std::fabs(analytic - oracle) << "); simulated " << est.q_hat << " +- "
           << est.ci95;
    return std::fabs(analytic - oracle) <= 1e-3 &&
           std::fabs(est.q_hat - oracle) <= est.ci95;
}

// c3: coverage improves strictly with the period and the expected load
// never decreases with it.
bool c3(std::ostringstream& detail) {
    const NetworkConfig net = ref::net();
    const Popularity pop = ref::pop();
    const CacheDesign design = ref::design();

    bool ok = true;
    for (const double t_n : {0.30, 0.98}) {
        for (const double eta : {0.5, 1.0, 2.0}) {
            double prev = 0.0;
            for (const std::int64_t t : {1, 2, 4, 8}) {
                const double f = sinr_ccdf(eta, t_n, net, t, {}).value;
                if (!(f > prev)) ok = false;
                prev = f;
            }
        }
    }
    double load_gap = 1e9;
    for (const int file : {0, 4}) {
        double prev = 0.0;
        for (const std::int64_t t : {1, 2, 4, 8}) {
            const double load = expected_load(file, pop, design, net, t);
            load_gap = std::min(load_gap, load - prev);
            if (load < prev) ok = false;
            prev = load;
        }
    }
    detail << "f(T) strictly increasing over T in {1,2,4,8} for 6 (t_n, eta) pairs; "
              "min E[load] step "
           << load_gap;
    return ok;
}

// c4: analytical q and simulated q agree within 0.03 on the reference set
// across periods 1 and 2 and five log-spaced rates.
bool c4(std::ostringstream& detail) {
    const NetworkConfig net = ref::net();
    const Popularity pop = ref::pop();
    const CacheDesign design = ref::design();

    double worst = 0.0;
    int idx = 0;
    for (const std::int64_t period : {1, 2}) {
        for (const double theta : log_grid(1e5, 1e7, 5)) {
            const SchemeConfig scheme = scheme_at(period, theta);
            const double q_ana = success_prob(pop, design, net, scheme, {}).value;
            const EstimateResult est = estimate(net, pop, design, scheme, 20000,
                                                7000 + idx, 1, Variant::proposed);
            worst = std::max(worst, std::fabs(est.q_hat - q_ana));
            ++idx;
        }
    }
    detail << "max |q_sim - q_analysis| = " << worst << " over 10 points";
    return worst <= 0.03;
}

// c5: the error against the large-period limit shrinks like 1/T and q
// increases toward it.
bool c5(std::ostringstream& detail) {
    const NetworkConfig net = ref::net();
    const Popularity pop = ref::pop();
    const CacheDesign design = ref::design();
    const double theta = 1e6;

    const double limit = q_limit_large_t(pop, design, net, theta, {}).value;
    std::vector<double> errors;
    double prev_q = 0.0;
    bool increasing = true;
    for (const std::int64_t t : {8, 16, 32, 64}) {
        const double q = success_prob(pop, design, net, scheme_at(t, theta), {}).value;
        if (!(q > prev_q)) increasing = false;
        prev_q = q;
        errors.push_back(std::fabs(q - limit));
    }
    bool ratios_ok = true;
    detail << "e(T) ratios:";
    for (std::size_t i = 1; i < errors.size(); ++i) {
        const double ratio = errors[i] / errors[i - 1];
        detail << " " << ratio;
        if (!(ratio >= 0.3 && ratio <= 0.7)) ratios_ok = false;
    }
    detail << "; q increasing: " << (increasing ? "yes" : "no");
    return ratios_ok && increasing;
}

// c6: the dense-user error decreases as lambda_u doubles and the
// sparse-user error scales linearly in lambda_u.
bool c6(std::ostringstream& detail) {
    const Popularity pop = ref::pop();
    const CacheDesign design = ref::design();
    const SchemeConfig scheme = scheme_at(2, 1e6);
    QuadratureSettings quad;
    quad.rel_tol = 1e-10;

    auto q_at = [&](double lambda_u) {
        NetworkConfig net = ref::net();
        net.lambda_u = lambda_u;
        return success_prob(pop, design, net, scheme, quad).value;
    };

    const double dense_limit = q_limit_dense(pop, design, ref::net(), scheme, quad).value;
    std::vector<double> dense_err;
    for (const double lu : {1.0, 2.0, 4.0}) {
        dense_err.push_back(std::fabs(q_at(lu) - dense_limit));
    }
    const bool dense_ok = dense_err[0] > dense_err[1] && dense_err[1] > dense_err[2];

    const double sparse_limit =
        q_limit_sparse(pop, design, ref::net(), scheme, quad).value;
    std::vector<double> sparse_err;
    for (const double lu : {4e-3, 2e-3, 1e-3}) {
        sparse_err.push_back(std::fabs(q_at(lu) - sparse_limit));
    }
    bool sparse_ok = true;
    detail << "dense errors " << dense_err[0] << " > " << dense_err[1] << " > "
           << dense_err[2] << "; sparse ratios:";
    for (std::size_t i = 1; i < sparse_err.size(); ++i) {
        const double ratio = sparse_err[i] / sparse_err[i - 1];
        detail << " " << ratio;
        if (!(ratio >= 0.35 && ratio <= 0.65)) sparse_ok = false;
    }
    return dense_ok && sparse_ok;
}

// c7: the continuous baseline is exactly the unit-period scheme, and at
// high rates the proposed scheme is no worse than either baseline beyond
// simulation noise.
bool c7(std::ostringstream& detail) {
    const NetworkConfig net = ref::net();
    const Popularity pop = ref::pop();
    const CacheDesign design = ref::design();

    const SchemeConfig unit = scheme_at(1, 2e6);
    const EstimateResult a =
        estimate(net, pop, design, unit, 5000, 90, 1, Variant::proposed);
    const EstimateResult b =
        estimate(net, pop, design, unit, 5000, 90, 1, Variant::baseline_continuous);
    const bool identical = a.q_hat == b.q_hat && a.ci95 == b.ci95 &&
                           a.q_file == b.q_file &&
                           a.no_serving_freq == b.no_serving_freq;

    const std::vector<double> grid = log_grid(1e5, 1e7, 8);
    bool dominates = true;
    double worst_margin = 1e9;
    for (std::size_t i = 4; i < grid.size(); ++i) {
        const SchemeConfig scheme = scheme_at(2, grid[i]);
        const std::uint64_t seed = 900 + i;
        const EstimateResult prop =
            estimate(net, pop, design, scheme, 10000, seed, 1, Variant::proposed);
        for (const Variant baseline :
             {Variant::baseline_temporal, Variant::baseline_continuous}) {
            const EstimateResult base =
                estimate(net, pop, design, scheme, 10000, seed, 1, baseline);
            const double margin = prop.q_hat - (base.q_hat - base.ci95);
            worst_margin = std::min(worst_margin, margin);
            if (margin < 0.0) dominates = false;
        }
    }
    detail << "unit-period estimates identical: " << (identical ? "yes" : "no")
           << "; min high-rate margin over baselines = " << worst_margin;
    return identical && dominates;
}

// c8: the CLI simulator is bit-identical across thread counts.
bool c8(std::ostringstream& detail) {
    const fs::path dir = fs::current_path() / "acceptance_scratch";
    fs::create_directories(dir);

    nlohmann::json cfg;
    cfg["lambda_b"] = 0.01;
    cfg["lambda_u"] = 0.1;
    cfg["alpha"] = 4.0;
    cfg["bandwidth_w"] = 1e7;
    cfg["snr_ratio"] = 1000.0;
    cfg["n_files"] = 5;
    cfg["cache_size"] = 4;
    cfg["gamma"] = 2.0;
    cfg["caching"] = nlohmann::json::array({0.7, 0.2, 0.06, 0.02, 0.02});
    cfg["period_t"] = 2;
    cfg["rate_theta"] = 2e6;
    cfg["simulation"] = {{"trials", 10000}, {"seed", 77}, {"threads", 1}};
    const fs::path cfg_path = dir / "c8.json";
    {
        std::ofstream out(cfg_path);
        out << cfg.dump(2) << "\n";
    }

    std::vector<std::string> outputs;
    for (const int threads : {1, 4, 8}) {
        const fs::path out_path = dir / ("c8_threads_" + std::to_string(threads) + ".csv");
        const std::string cmd = std::string("\"") + TSAM_CLI_PATH + "\" --config " +
                                cfg_path.string() + " simulate --threads " +
                                std::to_string(threads) + " --out " + out_path.string();
        const int status = std::system(cmd.c_str());
        if (!WIFEXITED(status) || WEXITSTATUS(status) != 0) {
            detail << "cli exited with " << status << " for --threads " << threads;
            return false;
        }
        std::ifstream in(out_path);
        std::ostringstream buf;
        buf << in.rdbuf();
        outputs.push_back(buf.str());
    }
    const bool identical = outputs[0] == outputs[1] && outputs[1] == outputs[2];
    detail << "outputs for --threads 1/4/8 " << (identical ? "identical" : "DIFFER")
           << " (" << outputs[0].size() << " bytes)";
    return identical && !outputs[0].empty();
}

// c9: a period sweep completes with no failed rows and reproduces the
// frozen ordering of q between periods 2 and 4.
bool c9(std::ostringstream& detail) {
    RunConfig config;
    config.model.net = ref::net();
    config.model.pop = ref::pop();
    config.model.design = ref::design();
    config.model.scheme = scheme_at(1, 2e6);
    SweepSpec spec;
    spec.axis = SweepAxis::period_t;
    spec.start = 1.0;
    spec.stop = 8.0;
    spec.points = 8;
    spec.log_spaced = false;
    spec.engines = Engines::both;
    config.sweep = spec;
    config.sim.trials = 4000;
    config.sim.seed = 31;
    config.sim.threads = 1;

    const std::vector<ResultRow> rows = cmd_sweep(config);
    if (rows.size() != 8) {
        detail << "expected 8 rows, got " << rows.size();
        return false;
    }
    double q2 = -1.0, q4 = -1.0;
    bool clean = true;
    for (std::size_t i = 0; i < rows.size(); ++i) {
        if (rows[i].failed) clean = false;
        if (rows[i].sweep_value != static_cast<double>(i + 1)) clean = false;
        if (rows[i].sweep_value == 2.0) q2 = rows[i].q_sim;
        if (rows[i].sweep_value == 4.0) q4 = rows[i].q_sim;
    }
    const bool ordering = (q4 > q2) == kC9FourBeatsTwo;
    detail << "8 rows, none failed: " << (clean ? "yes" : "no") << "; q(T=2) = " << q2
           << ", q(T=4) = " << q4 << ", frozen ordering holds: "
           << (ordering ? "yes" : "no");
    return clean && ordering && q2 >= 0.0 && q4 >= 0.0;
}

} // namespace

int main(int argc, char** argv) {
    if (argc != 2) {
        std::fprintf(stderr, "usage: acceptance c1..c9\n");
        return 2;
    }
    const std::string which = argv[1];
    std::ostringstream detail;
    bool ok = false;
    if (which == "c1") {
        ok = c1(detail);
    } else if (which == "c2") {
        ok = c2(detail);
    } else if (which == "c3") {
        ok = c3(detail);
    } else if (which == "c4") {
        ok = c4(detail);
    } else if (which == "c5") {
        ok = c5(detail);
    } else if (which == "c6") {
        ok = c6(detail);
    } else if (which == "c7") {
        ok = c7(detail);
    } else if (which == "c8") {
        ok = c8(detail);
    } else if (which == "c9") {
        ok = c9(detail);
    } else {
        std::fprintf(stderr, "unknown criterion \"%s\"\n", which.c_str());
        return 2;
    }
    std::printf("[%s] %s %s\n", ok ? "PASS" : "FAIL", which.c_str(),
                detail.str().c_str());
    return ok ? 0 : 1;
}
