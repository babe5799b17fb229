#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "tsam/asymptotics.hpp"
#include "tsam/model.hpp"
#include "tsam/quadrature.hpp"
#include "tsam/simulator.hpp"

namespace tsam {

struct SimSettings {
    std::int64_t trials = 10000;
    std::uint64_t seed = 1;
    int threads = 1;
    Variant variant = Variant::proposed;
    double radius = 0.0;
    bool active_only_interferers = false;
};

enum class SweepAxis { theta, period_t, lambda_u };
enum class Engines { analysis, simulation, both };

struct SweepSpec {
    SweepAxis axis = SweepAxis::theta;
    double start = 1e5;
    double stop = 1e7;
    int points = 20;
    bool log_spaced = true;
    Engines engines = Engines::both;
};

struct AsymptoticSpec {
    enum class Regime { large_t, dense, sparse };
    Regime regime = Regime::large_t;
    std::vector<double> schedule;
    double noise_floor = 1e-7;
};

/// Everything one invocation needs: the model bundle, numeric settings,
/// simulation settings, and the optional sweep / asymptotic-probe
/// sections. Loading validates aggressively and reports every issue at
/// once; a loaded config serialized with save_config reloads to identical
/// results.
struct RunConfig {
    ModelBundle model;
    QuadratureSettings quad;
    SimSettings sim;
    std::optional<SweepSpec> sweep;
    AsymptoticSpec asymptotic;
    std::string out_path;
    std::string format = "csv";
};

/// One output row. Cells that an invocation does not produce stay NaN;
/// a row that failed mid-sweep keeps its sweep coordinates, sets `failed`,
/// and carries the reason in `note` (JSON output and stderr only, so the
/// CSV column set never changes).
struct ResultRow {
    std::string sweep_var = "none";
    double sweep_value = 0.0;
    std::string variant = "proposed";
    double q_analysis = 0.0;
    double q_sim = 0.0;
    double ci95 = 0.0;
    double no_serving_freq = 0.0;
    std::uint64_t seed = 0;
    std::vector<double> q_file;
    bool failed = false;
    std::string note;
};

RunConfig load_config_text(const std::string& json_text);
RunConfig load_config_file(const std::string& path);
std::string save_config(const RunConfig& config);

const char* sweep_axis_name(SweepAxis axis);
const char* regime_name(AsymptoticSpec::Regime regime);

/// Grid points for a sweep, linear or log spaced, strictly monotone.
std::vector<double> sweep_grid(const SweepSpec& spec);

std::string render_rows_csv(const std::vector<ResultRow>& rows, int n_files);
std::string render_rows_json(const std::vector<ResultRow>& rows, int n_files);
std::string render_report_csv(const ConvergenceReport& report);
std::string render_report_json(const ConvergenceReport& report,
                               AsymptoticSpec::Regime regime);

/// One snapshot as a JSON document (positions, tiers, combination indices,
/// request table); file indices are 1-based like everything user-facing.
std::string snapshot_json(const ScenarioSnapshot& snap);

} // namespace tsam
