#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include "mathieu/analytic.hpp"
#include "mathieu/realization.hpp"
#include "mathieu/stability.hpp"
#include "mathieu/stats.hpp"

namespace mathieu::io {

/// Shortest decimal form that round-trips the double.
std::string format(double v);

/// Columns: t followed by `channels` (all channels if empty); every
/// `stride`-th sample.
void write_trajectory_csv(const std::filesystem::path& file, const ProcessRealization& path,
                          const std::vector<std::string>& channels = {}, Eigen::Index stride = 1);

/// Columns: bin_left, bin_right, density, count.
void write_histogram_csv(const std::filesystem::path& file, const stats::EmpiricalDensity& d);

/// Columns: x, pdf_total, pdf_background_weighted, pdf_rare_weighted.
void write_curve_csv(const std::filesystem::path& file, const std::vector<analytic::CurvePoint>& curve);

/// Columns: delta, alpha, unstable (1 unstable, 0 stable, -1 undetermined).
void write_diagram_csv(const std::filesystem::path& file, const stability::StabilityDiagram& d);

/// Columns: tongue, segment, delta, alpha.
void write_boundary_csv(const std::filesystem::path& file, const stability::StabilityDiagram& d);

void write_text(const std::filesystem::path& file, const std::string& content);

}  // namespace mathieu::io
