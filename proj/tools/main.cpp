#include <cstdint>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "tsam/commands.hpp"
#include "tsam/errors.hpp"
#include "tsam/run_config.hpp"

namespace {

std::vector<std::string> split(const std::string& text, char sep) {
    std::vector<std::string> parts;
    std::size_t start = 0;
    while (true) {
        const std::size_t pos = text.find(sep, start);
        if (pos == std::string::npos) {
            parts.push_back(text.substr(start));
            return parts;
        }
        parts.push_back(text.substr(start, pos - start));
        start = pos + 1;
    }
}

/// Parses AXIS:START:STOP:POINTS[:log]. Semantic checks (monotonicity,
/// positivity per axis) happen during config revalidation.
tsam::SweepSpec parse_sweep_flag(const std::string& text,
                                 const std::optional<tsam::SweepSpec>& existing) {
    const auto parts = split(text, ':');
    if (parts.size() != 4 && parts.size() != 5) {
        throw tsam::ValidationError({"--sweep expects AXIS:START:STOP:POINTS[:log]"});
    }
    tsam::SweepSpec spec;
    if (existing) spec.engines = existing->engines;
    if (parts[0] == "theta") {
        spec.axis = tsam::SweepAxis::theta;
    } else if (parts[0] == "period_t") {
        spec.axis = tsam::SweepAxis::period_t;
    } else if (parts[0] == "lambda_u") {
        spec.axis = tsam::SweepAxis::lambda_u;
    } else {
        throw tsam::ValidationError({"--sweep axis must be theta, period_t, or lambda_u"});
    }
    try {
        spec.start = std::stod(parts[1]);
        spec.stop = std::stod(parts[2]);
        spec.points = std::stoi(parts[3]);
    } catch (const std::exception&) {
        throw tsam::ValidationError({"--sweep start/stop/points must be numeric"});
    }
    if (parts.size() == 5) {
        if (parts[4] != "log") {
            throw tsam::ValidationError({"--sweep trailing token must be \"log\""});
        }
        spec.log_spaced = true;
    } else {
        spec.log_spaced = false;
    }
    return spec;
}

void write_text(const std::string& path, const std::string& text) {
    if (path.empty()) {
        std::cout << text;
        return;
    }
    std::ofstream out(path);
    if (!out) {
        throw tsam::ValidationError({"output: cannot open \"" + path + "\" for writing"});
    }
    out << text;
}

int emit_rows(const tsam::RunConfig& config, const std::vector<tsam::ResultRow>& rows) {
    const int n_files = config.model.pop.n_files();
    write_text(config.out_path, config.format == "csv"
                                    ? tsam::render_rows_csv(rows, n_files)
                                    : tsam::render_rows_json(rows, n_files));
    bool partial = false;
    for (const auto& row : rows) {
        if (!row.failed) continue;
        partial = true;
        std::cerr << "row " << row.sweep_var << "=" << row.sweep_value << " ["
                  << row.variant << "]: " << row.note << "\n";
    }
    return partial ? 4 : 0;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Temporal-spatial aggregation multicasting: analytical evaluator, "
                 "Monte Carlo simulator, and sweep harness"};
    app.require_subcommand(1);

    std::string config_path;
    std::optional<std::string> out_flag;
    std::optional<std::string> format_flag;
    std::optional<std::string> variant_flag;
    std::optional<std::string> sweep_flag;
    std::optional<std::int64_t> trials_flag;
    std::optional<std::uint64_t> seed_flag;
    std::optional<int> threads_flag;
    std::string dump_path;
    int dump_count = 1;

    app.add_option("--config", config_path, "Path to the JSON run configuration")
        ->required();
    app.add_option("--out", out_flag, "Output path (default: stdout)");
    app.add_option("--format", format_flag, "Output format: csv or json");
    app.add_option("--trials", trials_flag, "Monte Carlo trials");
    app.add_option("--seed", seed_flag, "Master seed");
    app.add_option("--threads", threads_flag, "Worker threads (never changes results)");
    app.add_option("--variant", variant_flag,
                   "Scheme: proposed, baseline-temporal, or baseline-continuous");
    app.add_option("--sweep", sweep_flag, "Sweep grid AXIS:START:STOP:POINTS[:log]");

    auto* analyze = app.add_subcommand("analyze", "Evaluate q analytically");
    auto* simulate = app.add_subcommand("simulate", "Estimate q by Monte Carlo");
    simulate->add_option("--dump-scenarios", dump_path,
                         "Also write sampled scenarios to this path as JSON lines");
    simulate->add_option("--dump-count", dump_count, "Scenarios to dump (default 1)");
    auto* sweep = app.add_subcommand("sweep", "Evaluate along the configured sweep grid");
    auto* compare = app.add_subcommand("compare", "Compare scheme variants by simulation");
    auto* asymptotic =
        app.add_subcommand("asymptotic", "Probe convergence toward a theoretical limit");
    for (auto* sub : {analyze, simulate, sweep, compare, asymptotic}) sub->fallthrough();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 2;
    }

    try {
        tsam::RunConfig config = tsam::load_config_file(config_path);
        if (trials_flag) config.sim.trials = *trials_flag;
        if (seed_flag) config.sim.seed = *seed_flag;
        if (threads_flag) config.sim.threads = *threads_flag;
        if (out_flag) config.out_path = *out_flag;
        if (format_flag) config.format = *format_flag;
        if (variant_flag) {
            const auto v = tsam::parse_variant(*variant_flag);
            if (!v) {
                throw tsam::ValidationError({"--variant must be proposed, "
                                             "baseline-temporal, or baseline-continuous"});
            }
            config.sim.variant = *v;
        }
        if (sweep_flag) config.sweep = parse_sweep_flag(*sweep_flag, config.sweep);
        // Revalidate the merged configuration through the same path as a
        // loaded file so flag overrides obey every config invariant.
        config = tsam::load_config_text(tsam::save_config(config));

        if (app.got_subcommand(analyze)) return emit_rows(config, tsam::cmd_analyze(config));
        if (app.got_subcommand(simulate)) {
            if (!dump_path.empty()) tsam::dump_scenarios(config, dump_path, dump_count);
            return emit_rows(config, tsam::cmd_simulate(config));
        }
        if (app.got_subcommand(sweep)) return emit_rows(config, tsam::cmd_sweep(config));
        if (app.got_subcommand(compare)) return emit_rows(config, tsam::cmd_compare(config));
        const tsam::ConvergenceReport report = tsam::cmd_asymptotic(config);
        write_text(config.out_path,
                   config.format == "csv"
                       ? tsam::render_report_csv(report)
                       : tsam::render_report_json(report, config.asymptotic.regime));
        return 0;
    } catch (const tsam::ValidationError& e) {
        std::cerr << e.what() << "\n";
        return 2;
    } catch (const tsam::QuadratureError& e) {
        std::cerr << "numerical: " << e.what() << "\n";
        return 3;
    } catch (const tsam::NumericalError& e) {
        std::cerr << "numerical: " << e.what() << "\n";
        return 3;
    } catch (const std::invalid_argument& e) {
        std::cerr << "validation: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
}
