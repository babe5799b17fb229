#include "tsam/commands.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <limits>
#include <stdexcept>
#include <string>

#include "tsam/analysis.hpp"
#include "tsam/asymptotics.hpp"
#include "tsam/errors.hpp"
#include "tsam/simulator.hpp"

namespace tsam {

namespace {

constexpr double kNan = std::numeric_limits<double>::quiet_NaN();

struct AnalysisPoint {
    double q = 0.0;
    std::vector<double> q_file;
};

AnalysisPoint analyze_point(const ModelBundle& model, const QuadratureSettings& quad) {
    AnalysisPoint out;
    for (int n = 0; n < model.pop.n_files(); ++n) {
        const IntegralResult r =
            success_prob_file(n, model.pop, model.design, model.net, model.scheme, quad);
        out.q_file.push_back(r.value);
        out.q += model.pop.a[static_cast<std::size_t>(n)] * r.value;
    }
    return out;
}

ResultRow blank_row(const RunConfig& config) {
    ResultRow row;
    row.q_analysis = kNan;
    row.q_sim = kNan;
    row.ci95 = kNan;
    row.no_serving_freq = kNan;
    row.seed = config.sim.seed;
    return row;
}

void fill_estimate(ResultRow& row, const EstimateResult& est) {
    row.q_sim = est.q_hat;
    row.ci95 = est.ci95;
    row.no_serving_freq = est.no_serving_freq;
    row.variant = variant_name(est.variant);
    if (row.q_file.empty()) row.q_file = est.q_file;
}

EstimateResult run_estimate(const RunConfig& config, const ModelBundle& model,
                            Variant variant) {
    SimOptions options;
    options.region_radius = config.sim.radius;
    options.active_only_interferers = config.sim.active_only_interferers;
    return estimate(model.net, model.pop, model.design, model.scheme, config.sim.trials,
                    config.sim.seed, config.sim.threads, variant, options);
}

ModelBundle at_grid_point(const ModelBundle& base, SweepAxis axis, double value) {
    ModelBundle model = base;
    switch (axis) {
        case SweepAxis::theta:
            model.scheme.rate_theta = value;
            break;
        case SweepAxis::period_t:
            model.scheme.period_t = std::llround(value);
            break;
        case SweepAxis::lambda_u:
            model.net.lambda_u = value;
            break;
    }
    return model;
}

void sort_rows(std::vector<ResultRow>& rows) {
    std::stable_sort(rows.begin(), rows.end(), [](const ResultRow& a, const ResultRow& b) {
        return a.sweep_value < b.sweep_value;
    });
}

} // namespace

std::vector<ResultRow> cmd_analyze(const RunConfig& config) {
    const AnalysisPoint point = analyze_point(config.model, config.quad);
    ResultRow row = blank_row(config);
    row.q_analysis = point.q;
    row.q_file = point.q_file;
    return {row};
}

std::vector<ResultRow> cmd_simulate(const RunConfig& config) {
    ResultRow row = blank_row(config);
    fill_estimate(row, run_estimate(config, config.model, config.sim.variant));
    return {row};
}

std::vector<ResultRow> cmd_sweep(const RunConfig& config) {
    if (!config.sweep) {
        throw ValidationError({"sweep: config has no \"sweep\" section and no --sweep flag"});
    }
    const SweepSpec& spec = *config.sweep;
    const bool want_analysis = spec.engines != Engines::simulation;
    const bool want_sim = spec.engines != Engines::analysis;

    std::vector<ResultRow> rows;
    for (const double value : sweep_grid(spec)) {
        const ModelBundle model = at_grid_point(config.model, spec.axis, value);
        ResultRow row = blank_row(config);
        row.sweep_var = sweep_axis_name(spec.axis);
        row.sweep_value = spec.axis == SweepAxis::period_t
                              ? static_cast<double>(model.scheme.period_t)
                              : value;
        row.variant = want_sim ? std::string(variant_name(config.sim.variant))
                               : "proposed";
        if (want_analysis) {
            try {
                const AnalysisPoint point = analyze_point(model, config.quad);
                row.q_analysis = point.q;
                row.q_file = point.q_file;
            } catch (const std::exception& e) {
                row.failed = true;
                row.note = std::string("analysis: ") + e.what();
            }
        }
        if (want_sim) {
            try {
                fill_estimate(row, run_estimate(config, model, config.sim.variant));
            } catch (const std::exception& e) {
                row.failed = true;
                if (!row.note.empty()) row.note += "; ";
                row.note += std::string("simulation: ") + e.what();
            }
        }
        rows.push_back(std::move(row));
    }
    sort_rows(rows);
    return rows;
}

std::vector<ResultRow> cmd_compare(const RunConfig& config) {
    std::vector<double> grid;
    SweepAxis axis = SweepAxis::theta;
    if (config.sweep) {
        grid = sweep_grid(*config.sweep);
        axis = config.sweep->axis;
    } else {
        grid.push_back(config.model.scheme.rate_theta);
    }

    std::vector<ResultRow> rows;
    for (const double value : grid) {
        const ModelBundle model = at_grid_point(config.model, axis, value);
        for (const Variant variant : {Variant::proposed, Variant::baseline_temporal,
                                      Variant::baseline_continuous}) {
            ResultRow row = blank_row(config);
            row.sweep_var = sweep_axis_name(axis);
            row.sweep_value = axis == SweepAxis::period_t
                                  ? static_cast<double>(model.scheme.period_t)
                                  : value;
            try {
                fill_estimate(row, run_estimate(config, model, variant));
                if (variant == Variant::proposed) {
                    row.q_analysis = analyze_point(model, config.quad).q;
                }
            } catch (const std::exception& e) {
                row.variant = variant_name(variant);
                row.failed = true;
                row.note = e.what();
            }
            rows.push_back(std::move(row));
        }
    }
    sort_rows(rows);
    return rows;
}

ConvergenceReport cmd_asymptotic(const RunConfig& config) {
    const AsymptoticSpec& spec = config.asymptotic;
    const ModelBundle& model = config.model;
    const QuadratureSettings& quad = config.quad;

    if (spec.regime == AsymptoticSpec::Regime::large_t) {
        std::vector<std::int64_t> periods;
        for (double x : spec.schedule) {
            const std::int64_t t = std::llround(x);
            if (t < 1 || (!periods.empty() && t == periods.back())) {
                throw ValidationError(
                    {"asymptotic: large_t schedule must round to distinct periods >= 1"});
            }
            periods.push_back(t);
        }
        auto quantity = [&](double x) {
            SchemeConfig scheme = model.scheme;
            scheme.period_t = std::llround(x);
            return success_prob(model.pop, model.design, model.net, scheme, quad).value;
        };
        auto limit = [&]() {
            return q_limit_large_t(model.pop, model.design, model.net,
                                   model.scheme.rate_theta, quad)
                .value;
        };
        return probe_convergence(quantity, limit, spec.schedule, spec.noise_floor);
    }

    auto quantity = [&](double lambda_u) {
        NetworkConfig net = model.net;
        net.lambda_u = lambda_u;
        return success_prob(model.pop, model.design, net, model.scheme, quad).value;
    };
    if (spec.regime == AsymptoticSpec::Regime::dense) {
        auto limit = [&]() {
            return q_limit_dense(model.pop, model.design, model.net, model.scheme, quad)
                .value;
        };
        return probe_convergence(quantity, limit, spec.schedule, spec.noise_floor);
    }
    auto limit = [&]() {
        return q_limit_sparse(model.pop, model.design, model.net, model.scheme, quad)
            .value;
    };
    return probe_convergence(quantity, limit, spec.schedule, spec.noise_floor);
}

void dump_scenarios(const RunConfig& config, const std::string& path, int count) {
    std::ofstream out(path);
    if (!out) {
        throw ValidationError({"dump: cannot open \"" + path + "\" for writing"});
    }
    const auto snaps =
        trial_snapshots(config.model.net, config.model.pop, config.model.design,
                        config.model.scheme, config.sim.seed, config.sim.variant, count,
                        config.sim.radius);
    for (const ScenarioSnapshot& snap : snaps) {
        out << snapshot_json(snap) << "\n";
    }
}

bool any_failed(const std::vector<ResultRow>& rows) {
    return std::any_of(rows.begin(), rows.end(),
                       [](const ResultRow& r) { return r.failed; });
}

} // namespace tsam
