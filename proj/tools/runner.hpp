#pragma once

#include <filesystem>
#include <string>

#include <json.hpp>

#include "config.hpp"
#include "svg.hpp"

namespace mathieu::cli {

/// Metrics and plot for one empirical-vs-analytic comparison.
struct ComparePanel {
    nlohmann::json metrics;
    PlotSpec plot;
};

/// Runs the averaged-system batch for `config.params`, writes histogram,
/// curve and comparison CSVs to `dir`, and returns the metrics.
ComparePanel run_compare(const ExperimentConfig& config, const std::filesystem::path& dir);

/// Executes the configured mode. Writes config.json, summary.json and
/// timings.json plus the mode's artifacts under config.outputs.dir. Returns
/// the summary document.
nlohmann::json run(const ExperimentConfig& config);

/// Model quantities for the summary; null members where the regime is
/// invalid (e.g. sigma_alpha = 0).
nlohmann::json model_summary(const ExperimentConfig& config);

/// Machine-readable error record for a failed run.
nlohmann::json error_record(const std::exception& e);

}  // namespace mathieu::cli
