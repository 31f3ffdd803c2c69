#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include <json.hpp>

#include "mathieu/analytic.hpp"
#include "mathieu/montecarlo.hpp"
#include "mathieu/sde.hpp"
#include "mathieu/stability.hpp"

namespace mathieu::cli {

enum class Mode {
    SimulateFull,
    SimulateAveraged,
    AnalyticPdf,
    StabilityDiagram,
    GpSample,
    Compare,
    ReproduceFig3,
};

Mode parse_mode(const std::string& name);
std::string mode_name(Mode m);

struct BinningConfig {
    /// Core half-width in units of the background std (rho).
    double core_std = 4.0;
    int core_bins = 20;
    double ratio = 1.15;
};

struct OutputConfig {
    std::filesystem::path dir = "out";
    bool svg = false;
    /// Keep every n-th sample in trajectory exports.
    long trajectory_stride = 100;
};

struct GpConfig {
    long n_points = 20001;
};

struct ReproduceConfig {
    std::vector<double> sigma_alphas{0.178, 0.229, 0.267};
    std::vector<double> ell_alphas{2.5, 5.0, 10.0};
};

struct ExperimentConfig {
    Mode mode = Mode::AnalyticPdf;
    sde::SystemParams params;
    sde::SimConfig sim;
    sde::System system = sde::System::Averaged;
    unsigned threads = 0;
    BinningConfig binning;
    analytic::QuadSettings quad;
    int curve_core_points = 161;
    int curve_log_points = 120;
    stability::DiagramSpec diagram;
    GpConfig gp;
    ReproduceConfig reproduce;
    OutputConfig outputs;
};

/// The full default document. Every accepted key appears here.
nlohmann::json default_config_json();

/// Overlays `patch` onto `base`. Keys absent from `base` are ConfigErrors,
/// as are type mismatches; `where` prefixes messages.
void merge_strict(nlohmann::json& base, const nlohmann::json& patch, const std::string& where = "");

/// Sets a dotted path ("params.sigma_alpha") to `value`, parsed as JSON when
/// possible and as a string otherwise.
void apply_override(nlohmann::json& doc, const std::string& dotted, const std::string& value);

/// Desk-scale preset: 300 realizations on [0, 2500].
void apply_desk_scale(nlohmann::json& doc);

ExperimentConfig from_json(const nlohmann::json& doc);
nlohmann::json to_json(const ExperimentConfig& c);

nlohmann::json load_json_file(const std::filesystem::path& file);

}  // namespace mathieu::cli
