#pragma once

#include <string>
#include <vector>

#include "tsam/run_config.hpp"

namespace tsam {

/// Analytical evaluation at the configured point: q and per-file q_n.
std::vector<ResultRow> cmd_analyze(const RunConfig& config);

/// Monte Carlo estimate at the configured point.
std::vector<ResultRow> cmd_simulate(const RunConfig& config);

/// One row per grid point along the configured sweep axis, ascending.
/// Rows whose evaluation fails are annotated and kept, never dropped;
/// callers surface them through `any_failed`.
std::vector<ResultRow> cmd_sweep(const RunConfig& config);

/// Simulated comparison of all three scheme variants at matched seeds,
/// over the sweep grid when one is configured, else the single point.
/// Rows for the proposed variant also carry the analytical value.
std::vector<ResultRow> cmd_compare(const RunConfig& config);

/// Convergence probe of the configured asymptotic regime.
ConvergenceReport cmd_asymptotic(const RunConfig& config);

/// Writes the first `count` trial snapshots of the configured simulation
/// as JSON lines.
void dump_scenarios(const RunConfig& config, const std::string& path, int count);

bool any_failed(const std::vector<ResultRow>& rows);

} // namespace tsam
