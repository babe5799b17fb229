#include "tsam/run_config.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <utility>

#include <json.hpp>

#include "tsam/errors.hpp"

namespace tsam {

namespace {

using nlohmann::json;

void check_keys(const json& j, const char* where,
                std::initializer_list<const char*> known,
                std::vector<std::string>& issues) {
    for (const auto& item : j.items()) {
        const bool ok = std::any_of(known.begin(), known.end(), [&](const char* k) {
            return item.key() == k;
        });
        if (!ok) {
            issues.push_back(std::string("config: unknown key \"") + where +
                             item.key() + "\"");
        }
    }
}

double num_field(const json& j, const char* key, double fallback,
                 std::vector<std::string>& issues) {
    if (!j.contains(key)) return fallback;
    if (!j[key].is_number()) {
        issues.push_back(std::string("config: \"") + key + "\" must be a number");
        return fallback;
    }
    return j[key].get<double>();
}

std::int64_t int_field(const json& j, const char* key, std::int64_t fallback,
                       std::vector<std::string>& issues) {
    if (!j.contains(key)) return fallback;
    if (!j[key].is_number_integer()) {
        issues.push_back(std::string("config: \"") + key + "\" must be an integer");
        return fallback;
    }
    return j[key].get<std::int64_t>();
}

bool bool_field(const json& j, const char* key, bool fallback,
                std::vector<std::string>& issues) {
    if (!j.contains(key)) return fallback;
    if (!j[key].is_boolean()) {
        issues.push_back(std::string("config: \"") + key + "\" must be a boolean");
        return fallback;
    }
    return j[key].get<bool>();
}

std::string str_field(const json& j, const char* key, const std::string& fallback,
                      std::vector<std::string>& issues) {
    if (!j.contains(key)) return fallback;
    if (!j[key].is_string()) {
        issues.push_back(std::string("config: \"") + key + "\" must be a string");
        return fallback;
    }
    return j[key].get<std::string>();
}

Popularity load_popularity(const json& j, int n_files,
                           std::vector<std::string>& issues) {
    if (j.contains("popularity") && j.contains("gamma")) {
        issues.push_back("config: give either \"gamma\" or \"popularity\", not both");
    }
    if (j.contains("popularity")) {
        const json& arr = j["popularity"];
        if (!arr.is_array() || !std::all_of(arr.begin(), arr.end(), [](const json& v) {
                return v.is_number();
            })) {
            issues.push_back("config: \"popularity\" must be an array of numbers");
            return Popularity{};
        }
        Popularity pop;
        pop.a = arr.get<std::vector<double>>();
        if (pop.n_files() != n_files) {
            issues.push_back("config: \"popularity\" length must equal \"n_files\"");
        }
        return pop;
    }
    const double gamma = num_field(j, "gamma", 2.0, issues);
    try {
        return zipf_popularity(n_files, gamma);
    } catch (const std::invalid_argument& e) {
        issues.push_back(std::string("config: ") + e.what());
        return Popularity{};
    }
}

CacheDesign load_caching(const json& j, int n_files, int cache_size,
                         std::vector<std::string>& issues) {
    try {
        if (!j.contains("caching")) {
            CombinationSet combos = enumerate_combinations(n_files, cache_size);
            std::vector<double> p(combos.size(), 1.0 / static_cast<double>(combos.size()));
            return make_cache_design(std::move(combos), std::move(p));
        }
        const json& arr = j["caching"];
        if (arr.is_array() && !arr.empty() && arr.front().is_number()) {
            if (!std::all_of(arr.begin(), arr.end(), [](const json& v) {
                    return v.is_number();
                })) {
                issues.push_back("config: dense \"caching\" must contain only numbers");
                return CacheDesign{};
            }
            CombinationSet combos = enumerate_combinations(n_files, cache_size);
            auto p = arr.get<std::vector<double>>();
            if (p.size() != combos.size()) {
                issues.push_back("config: dense \"caching\" needs one entry per combination (" +
                                 std::to_string(combos.size()) + " for these n_files/cache_size)");
                return CacheDesign{};
            }
            return make_cache_design(std::move(combos), std::move(p));
        }
        if (arr.is_array()) {
            std::vector<SparseCombo> entries;
            for (const json& e : arr) {
                if (!e.is_object() || !e.contains("members") || !e.contains("probability") ||
                    !e["members"].is_array() || !e["probability"].is_number()) {
                    issues.push_back("config: sparse \"caching\" entries need "
                                     "\"members\" (array) and \"probability\" (number)");
                    return CacheDesign{};
                }
                SparseCombo sc;
                sc.probability = e["probability"].get<double>();
                for (const json& m : e["members"]) {
                    if (!m.is_number_integer()) {
                        issues.push_back("config: \"members\" must hold 1-based file indices");
                        return CacheDesign{};
                    }
                    sc.members.push_back(m.get<int>() - 1);
                }
                entries.push_back(std::move(sc));
            }
            return make_cache_design_sparse(n_files, cache_size, std::move(entries));
        }
        issues.push_back("config: \"caching\" must be a dense probability array "
                         "or a list of {members, probability} objects");
    } catch (const std::exception& e) {
        issues.push_back(std::string("config: ") + e.what());
    }
    return CacheDesign{};
}

/// Shortest exact decimal for a double; NaN spelled out for CSV cells.
std::string fmt(double v) {
    if (std::isnan(v)) return "nan";
    return json(v).dump();
}

json number_or_null(double v) {
    if (std::isnan(v)) return nullptr;
    return v;
}

} // namespace

RunConfig load_config_text(const std::string& json_text) {
    json j;
    try {
        j = json::parse(json_text);
    } catch (const json::parse_error& e) {
        throw ValidationError({std::string("config: ") + e.what()});
    }
    std::vector<std::string> issues;
    if (!j.is_object()) {
        throw ValidationError({"config: top level must be a JSON object"});
    }
    check_keys(j, "",
               {"lambda_b", "lambda_u", "alpha", "bandwidth_w", "snr_ratio",
                "snr_ratio_db", "n_files", "cache_size", "gamma", "popularity",
                "caching", "period_t", "rate_theta", "quadrature", "simulation",
                "sweep", "asymptotic", "output"},
               issues);

    RunConfig cfg;
    cfg.model.net.lambda_b = num_field(j, "lambda_b", cfg.model.net.lambda_b, issues);
    cfg.model.net.lambda_u = num_field(j, "lambda_u", cfg.model.net.lambda_u, issues);
    cfg.model.net.alpha = num_field(j, "alpha", cfg.model.net.alpha, issues);
    cfg.model.net.bandwidth_w = num_field(j, "bandwidth_w", cfg.model.net.bandwidth_w, issues);
    if (j.contains("snr_ratio") && j.contains("snr_ratio_db")) {
        issues.push_back("config: give either \"snr_ratio\" or \"snr_ratio_db\", not both");
    } else if (j.contains("snr_ratio_db")) {
        cfg.model.net.snr_ratio =
            std::pow(10.0, num_field(j, "snr_ratio_db", 30.0, issues) / 10.0);
    } else {
        cfg.model.net.snr_ratio = num_field(j, "snr_ratio", cfg.model.net.snr_ratio, issues);
    }

    const auto n_files = static_cast<int>(int_field(j, "n_files", 0, issues));
    const auto cache_size = static_cast<int>(int_field(j, "cache_size", 0, issues));
    if (!j.contains("n_files")) issues.push_back("config: \"n_files\" is required");
    if (!j.contains("cache_size")) issues.push_back("config: \"cache_size\" is required");

    if (issues.empty()) {
        cfg.model.pop = load_popularity(j, n_files, issues);
        cfg.model.design = load_caching(j, n_files, cache_size, issues);
    }

    cfg.model.scheme.period_t = int_field(j, "period_t", 1, issues);
    cfg.model.scheme.rate_theta = num_field(j, "rate_theta", 0.0, issues);

    if (j.contains("quadrature")) {
        const json& q = j["quadrature"];
        if (!q.is_object()) {
            issues.push_back("config: \"quadrature\" must be an object");
        } else {
            check_keys(q, "quadrature.",
                       {"rel_tol", "abs_tol", "max_subdivisions", "tail_cutoff_mass"},
                       issues);
            cfg.quad.rel_tol = num_field(q, "rel_tol", cfg.quad.rel_tol, issues);
            cfg.quad.abs_tol = num_field(q, "abs_tol", cfg.quad.abs_tol, issues);
            cfg.quad.max_subdivisions = static_cast<int>(
                int_field(q, "max_subdivisions", cfg.quad.max_subdivisions, issues));
            cfg.quad.tail_cutoff_mass =
                num_field(q, "tail_cutoff_mass", cfg.quad.tail_cutoff_mass, issues);
            try {
                check_settings(cfg.quad);
            } catch (const std::invalid_argument& e) {
                issues.push_back(std::string("config: quadrature: ") + e.what());
            }
        }
    }

    if (j.contains("simulation")) {
        const json& s = j["simulation"];
        if (!s.is_object()) {
            issues.push_back("config: \"simulation\" must be an object");
        } else {
            check_keys(s, "simulation.",
                       {"trials", "seed", "threads", "variant", "radius",
                        "active_only_interferers"},
                       issues);
            cfg.sim.trials = int_field(s, "trials", cfg.sim.trials, issues);
            if (s.contains("seed") && s["seed"].is_number_unsigned()) {
                cfg.sim.seed = s["seed"].get<std::uint64_t>();
            } else {
                cfg.sim.seed = static_cast<std::uint64_t>(
                    int_field(s, "seed", static_cast<std::int64_t>(cfg.sim.seed), issues));
            }
            cfg.sim.threads = static_cast<int>(int_field(s, "threads", cfg.sim.threads, issues));
            const std::string vname =
                str_field(s, "variant", std::string(variant_name(cfg.sim.variant)), issues);
            if (const auto v = parse_variant(vname)) {
                cfg.sim.variant = *v;
            } else {
                issues.push_back("config: simulation.variant must be one of "
                                 "proposed, baseline-temporal, baseline-continuous");
            }
            cfg.sim.radius = num_field(s, "radius", cfg.sim.radius, issues);
            cfg.sim.active_only_interferers =
                bool_field(s, "active_only_interferers",
                           cfg.sim.active_only_interferers, issues);
            if (cfg.sim.trials < 1) issues.push_back("config: simulation.trials must be >= 1");
            if (cfg.sim.threads < 1) issues.push_back("config: simulation.threads must be >= 1");
        }
    }

    if (j.contains("sweep")) {
        const json& s = j["sweep"];
        if (!s.is_object()) {
            issues.push_back("config: \"sweep\" must be an object");
        } else {
            check_keys(s, "sweep.", {"axis", "start", "stop", "points", "log", "engines"},
                       issues);
            SweepSpec spec;
            const std::string axis = str_field(s, "axis", "theta", issues);
            if (axis == "theta") {
                spec.axis = SweepAxis::theta;
            } else if (axis == "period_t") {
                spec.axis = SweepAxis::period_t;
            } else if (axis == "lambda_u") {
                spec.axis = SweepAxis::lambda_u;
            } else {
                issues.push_back("config: sweep.axis must be theta, period_t, or lambda_u");
            }
            spec.start = num_field(s, "start", spec.start, issues);
            spec.stop = num_field(s, "stop", spec.stop, issues);
            spec.points = static_cast<int>(int_field(s, "points", spec.points, issues));
            spec.log_spaced = bool_field(s, "log", spec.log_spaced, issues);
            const std::string engines = str_field(s, "engines", "both", issues);
            if (engines == "analysis") {
                spec.engines = Engines::analysis;
            } else if (engines == "simulation") {
                spec.engines = Engines::simulation;
            } else if (engines == "both") {
                spec.engines = Engines::both;
            } else {
                issues.push_back("config: sweep.engines must be analysis, simulation, or both");
            }
            if (spec.points < 1) {
                issues.push_back("config: sweep.points must be >= 1");
            } else if (spec.points > 1 && spec.start == spec.stop) {
                issues.push_back("config: sweep grid must be strictly monotone "
                                 "(start == stop with points > 1)");
            }
            if (spec.log_spaced && (!(spec.start > 0.0) || !(spec.stop > 0.0))) {
                issues.push_back("config: log-spaced sweep needs positive start and stop");
            }
            if (spec.axis == SweepAxis::lambda_u &&
                (!(spec.start > 0.0) || !(spec.stop > 0.0))) {
                issues.push_back("config: lambda_u sweep needs positive start and stop");
            }
            if (spec.axis == SweepAxis::theta && (spec.start < 0.0 || spec.stop < 0.0)) {
                issues.push_back("config: theta sweep needs non-negative start and stop");
            }
            if (spec.axis == SweepAxis::period_t && issues.empty()) {
                const auto grid = sweep_grid(spec);
                std::vector<std::int64_t> rounded;
                for (double g : grid) rounded.push_back(std::llround(g));
                for (std::size_t i = 0; i < rounded.size(); ++i) {
                    if (rounded[i] < 1) {
                        issues.push_back("config: period_t sweep values must round to >= 1");
                        break;
                    }
                    if (i > 0 && rounded[i] == rounded[i - 1]) {
                        issues.push_back("config: period_t sweep rounds to duplicate periods; "
                                         "use fewer points or a wider range");
                        break;
                    }
                }
            }
            cfg.sweep = spec;
        }
    }

    if (j.contains("asymptotic")) {
        const json& a = j["asymptotic"];
        if (!a.is_object()) {
            issues.push_back("config: \"asymptotic\" must be an object");
        } else {
            check_keys(a, "asymptotic.", {"regime", "schedule", "noise_floor"}, issues);
            const std::string regime = str_field(a, "regime", "large_t", issues);
            if (regime == "large_t") {
                cfg.asymptotic.regime = AsymptoticSpec::Regime::large_t;
            } else if (regime == "dense") {
                cfg.asymptotic.regime = AsymptoticSpec::Regime::dense;
            } else if (regime == "sparse") {
                cfg.asymptotic.regime = AsymptoticSpec::Regime::sparse;
            } else {
                issues.push_back("config: asymptotic.regime must be large_t, dense, or sparse");
            }
            if (a.contains("schedule")) {
                if (!a["schedule"].is_array() ||
                    !std::all_of(a["schedule"].begin(), a["schedule"].end(),
                                 [](const json& v) { return v.is_number(); })) {
                    issues.push_back("config: asymptotic.schedule must be an array of numbers");
                } else {
                    cfg.asymptotic.schedule = a["schedule"].get<std::vector<double>>();
                }
            }
            cfg.asymptotic.noise_floor =
                num_field(a, "noise_floor", cfg.asymptotic.noise_floor, issues);
            if (cfg.asymptotic.noise_floor < 0.0) {
                issues.push_back("config: asymptotic.noise_floor must be >= 0");
            }
        }
    }
    if (cfg.asymptotic.schedule.empty()) {
        switch (cfg.asymptotic.regime) {
            case AsymptoticSpec::Regime::large_t:
                cfg.asymptotic.schedule = {8.0, 16.0, 32.0, 64.0};
                break;
            case AsymptoticSpec::Regime::dense:
                cfg.asymptotic.schedule = {1.0, 2.0, 4.0};
                break;
            case AsymptoticSpec::Regime::sparse:
                cfg.asymptotic.schedule = {4e-3, 2e-3, 1e-3};
                break;
        }
    }

    if (j.contains("output")) {
        const json& o = j["output"];
        if (!o.is_object()) {
            issues.push_back("config: \"output\" must be an object");
        } else {
            check_keys(o, "output.", {"path", "format"}, issues);
            cfg.out_path = str_field(o, "path", cfg.out_path, issues);
            cfg.format = str_field(o, "format", cfg.format, issues);
        }
    }
    if (cfg.format != "csv" && cfg.format != "json") {
        issues.push_back("config: output.format must be csv or json");
    }

    if (issues.empty()) {
        issues = validation_issues(cfg.model.net, cfg.model.pop, cfg.model.design,
                                   cfg.model.scheme);
    }
    if (!issues.empty()) throw ValidationError(std::move(issues));
    return cfg;
}

RunConfig load_config_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) {
        throw ValidationError({"config: cannot open \"" + path + "\""});
    }
    std::ostringstream buf;
    buf << in.rdbuf();
    return load_config_text(buf.str());
}

std::string save_config(const RunConfig& config) {
    json j;
    j["lambda_b"] = config.model.net.lambda_b;
    j["lambda_u"] = config.model.net.lambda_u;
    j["alpha"] = config.model.net.alpha;
    j["bandwidth_w"] = config.model.net.bandwidth_w;
    j["snr_ratio"] = config.model.net.snr_ratio;
    j["n_files"] = config.model.design.n_files();
    j["cache_size"] = config.model.design.cache_size();
    j["popularity"] = config.model.pop.a;
    const std::size_t full = binomial(config.model.design.n_files(),
                                      config.model.design.cache_size());
    if (config.model.design.combos.size() == full) {
        j["caching"] = config.model.design.p;
    } else {
        json entries = json::array();
        for (std::size_t i = 0; i < config.model.design.combos.size(); ++i) {
            json e;
            std::vector<int> members = config.model.design.combos.combos[i];
            for (int& m : members) ++m;
            e["members"] = members;
            e["probability"] = config.model.design.p[i];
            entries.push_back(std::move(e));
        }
        j["caching"] = std::move(entries);
    }
    j["period_t"] = config.model.scheme.period_t;
    j["rate_theta"] = config.model.scheme.rate_theta;
    j["quadrature"] = {{"rel_tol", config.quad.rel_tol},
                       {"abs_tol", config.quad.abs_tol},
                       {"max_subdivisions", config.quad.max_subdivisions},
                       {"tail_cutoff_mass", config.quad.tail_cutoff_mass}};
    j["simulation"] = {{"trials", config.sim.trials},
                       {"seed", config.sim.seed},
                       {"threads", config.sim.threads},
                       {"variant", std::string(variant_name(config.sim.variant))},
                       {"radius", config.sim.radius},
                       {"active_only_interferers", config.sim.active_only_interferers}};
    if (config.sweep) {
        const char* engines = config.sweep->engines == Engines::analysis ? "analysis"
                              : config.sweep->engines == Engines::simulation
                                  ? "simulation"
                                  : "both";
        j["sweep"] = {{"axis", sweep_axis_name(config.sweep->axis)},
                      {"start", config.sweep->start},
                      {"stop", config.sweep->stop},
                      {"points", config.sweep->points},
                      {"log", config.sweep->log_spaced},
                      {"engines", engines}};
    }
    j["asymptotic"] = {{"regime", regime_name(config.asymptotic.regime)},
                       {"schedule", config.asymptotic.schedule},
                       {"noise_floor", config.asymptotic.noise_floor}};
    if (!config.out_path.empty() || config.format != "csv") {
        j["output"] = {{"path", config.out_path}, {"format", config.format}};
    }
    return j.dump(2) + "\n";
}

const char* sweep_axis_name(SweepAxis axis) {
    switch (axis) {
        case SweepAxis::theta: return "theta";
        case SweepAxis::period_t: return "period_t";
        case SweepAxis::lambda_u: return "lambda_u";
    }
    return "unknown";
}

const char* regime_name(AsymptoticSpec::Regime regime) {
    switch (regime) {
        case AsymptoticSpec::Regime::large_t: return "large_t";
        case AsymptoticSpec::Regime::dense: return "dense";
        case AsymptoticSpec::Regime::sparse: return "sparse";
    }
    return "unknown";
}

std::vector<double> sweep_grid(const SweepSpec& spec) {
    std::vector<double> grid;
    grid.reserve(static_cast<std::size_t>(spec.points));
    if (spec.points == 1) {
        grid.push_back(spec.start);
        return grid;
    }
    if (spec.log_spaced) {
        const double lo = std::log(spec.start);
        const double hi = std::log(spec.stop);
        for (int i = 0; i < spec.points; ++i) {
            grid.push_back(std::exp(lo + (hi - lo) * i / (spec.points - 1)));
        }
    } else {
        for (int i = 0; i < spec.points; ++i) {
            grid.push_back(spec.start +
                           (spec.stop - spec.start) * i / (spec.points - 1));
        }
    }
    grid.front() = spec.start;
    grid.back() = spec.stop;
    return grid;
}

std::string render_rows_csv(const std::vector<ResultRow>& rows, int n_files) {
    std::string out = "sweep_var,sweep_value,variant,q_analysis,q_sim,ci95,"
                      "no_serving_freq,seed";
    for (int n = 1; n <= n_files; ++n) out += ",q_" + std::to_string(n);
    out += "\n";
    for (const ResultRow& row : rows) {
        out += row.sweep_var + "," + fmt(row.sweep_value) + "," + row.variant + "," +
               fmt(row.q_analysis) + "," + fmt(row.q_sim) + "," + fmt(row.ci95) + "," +
               fmt(row.no_serving_freq) + "," + std::to_string(row.seed);
        for (int n = 0; n < n_files; ++n) {
            const double v = n < static_cast<int>(row.q_file.size())
                                 ? row.q_file[static_cast<std::size_t>(n)]
                                 : std::nan("");
            out += "," + fmt(v);
        }
        out += "\n";
    }
    return out;
}

std::string render_rows_json(const std::vector<ResultRow>& rows, int n_files) {
    json arr = json::array();
    for (const ResultRow& row : rows) {
        json r;
        r["sweep_var"] = row.sweep_var;
        r["sweep_value"] = number_or_null(row.sweep_value);
        r["variant"] = row.variant;
        r["q_analysis"] = number_or_null(row.q_analysis);
        r["q_sim"] = number_or_null(row.q_sim);
        r["ci95"] = number_or_null(row.ci95);
        r["no_serving_freq"] = number_or_null(row.no_serving_freq);
        r["seed"] = row.seed;
        json files = json::array();
        for (int n = 0; n < n_files; ++n) {
            const double v = n < static_cast<int>(row.q_file.size())
                                 ? row.q_file[static_cast<std::size_t>(n)]
                                 : std::nan("");
            files.push_back(number_or_null(v));
        }
        r["q_file"] = std::move(files);
        if (row.failed) r["note"] = row.note;
        arr.push_back(std::move(r));
    }
    return arr.dump(2) + "\n";
}

std::string render_report_csv(const ConvergenceReport& report) {
    std::string out = "param,value,limit,error,ratio,fitted_order,determinate\n";
    for (std::size_t i = 0; i < report.params.size(); ++i) {
        const double ratio = i > 0 && i - 1 < report.ratios.size()
                                 ? report.ratios[i - 1]
                                 : std::nan("");
        out += fmt(report.params[i]) + "," + fmt(report.values[i]) + "," +
               fmt(report.limit_value) + "," + fmt(report.errors[i]) + "," + fmt(ratio) +
               "," + fmt(report.fitted_order) + "," +
               (report.determinate ? "true" : "false") + "\n";
    }
    return out;
}

std::string snapshot_json(const ScenarioSnapshot& snap) {
    json j;
    j["radius"] = snap.radius;
    j["period_t"] = snap.period_t;
    json bs = json::array();
    for (int b = 0; b < snap.n_bs(); ++b) {
        const auto i = static_cast<std::size_t>(b);
        bs.push_back({{"x", snap.bs_x[i]},
                      {"y", snap.bs_y[i]},
                      {"tier", snap.bs_tier[i]},
                      {"combo", snap.bs_combo[i]}});
    }
    j["bs"] = std::move(bs);
    json users = json::array();
    for (int u = 0; u < snap.n_users(); ++u) {
        const auto i = static_cast<std::size_t>(u);
        users.push_back({{"x", snap.user_x[i]}, {"y", snap.user_y[i]}});
    }
    j["users"] = std::move(users);
    json requests = json::array();
    for (int u = 0; u < snap.n_users(); ++u) {
        json window = json::array();
        for (std::int64_t t = 0; t < snap.period_t; ++t) {
            window.push_back(snap.request(u, static_cast<int>(t)) + 1);
        }
        requests.push_back(std::move(window));
    }
    j["requests"] = std::move(requests);
    return j.dump();
}

std::string render_report_json(const ConvergenceReport& report,
                               AsymptoticSpec::Regime regime) {
    json j;
    j["regime"] = regime_name(regime);
    j["limit_value"] = number_or_null(report.limit_value);
    j["fitted_order"] = number_or_null(report.fitted_order);
    j["determinate"] = report.determinate;
    j["params"] = report.params;
    j["values"] = report.values;
    json errors = json::array();
    for (double e : report.errors) errors.push_back(number_or_null(e));
    j["errors"] = std::move(errors);
    json ratios = json::array();
    for (double r : report.ratios) ratios.push_back(number_or_null(r));
    j["ratios"] = std::move(ratios);
    return j.dump(2) + "\n";
}

} // namespace tsam
