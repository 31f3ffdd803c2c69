#include "mathieu/io.hpp"

#include <charconv>
#include <fstream>
#include <sstream>

namespace mathieu::io {

namespace {

std::ofstream open(const std::filesystem::path& file) {
    if (file.has_parent_path()) std::filesystem::create_directories(file.parent_path());
    std::ofstream out(file, std::ios::binary | std::ios::trunc);
    if (!out) throw Error("cannot open " + file.string() + " for writing");
    return out;
}

}  // namespace

std::string format(double v) {
    char buf[32];
    auto [end, ec] = std::to_chars(buf, buf + sizeof(buf), v);
    if (ec != std::errc()) throw Error("format: conversion failed");
    return std::string(buf, end);
}

void write_trajectory_csv(const std::filesystem::path& file, const ProcessRealization& path,
                          const std::vector<std::string>& channels, Eigen::Index stride) {
    require(stride >= 1, "write_trajectory_csv: stride must be >= 1");
    const std::vector<std::string> names = channels.empty() ? path.channel_names() : channels;
    std::vector<const Eigen::VectorXd*> columns;
    for (const auto& n : names) columns.push_back(&path.channel(n));

    auto out = open(file);
    out << "t";
    for (const auto& n : names) out << ',' << n;
    out << '\n';
    for (Eigen::Index i = 0; i < path.size(); i += stride) {
        out << format(path.time(i));
        for (const auto* c : columns) out << ',' << format((*c)(i));
        out << '\n';
    }
}

void write_histogram_csv(const std::filesystem::path& file, const stats::EmpiricalDensity& d) {
    auto out = open(file);
    out << "bin_left,bin_right,density,count\n";
    for (Eigen::Index i = 0; i < d.n_bins(); ++i)
        out << format(d.edges(i)) << ',' << format(d.edges(i + 1)) << ',' << format(d.density(i)) << ','
            << d.count[static_cast<std::size_t>(i)] << '\n';
}

void write_curve_csv(const std::filesystem::path& file, const std::vector<analytic::CurvePoint>& curve) {
    auto out = open(file);
    out << "x,pdf_total,pdf_background_weighted,pdf_rare_weighted\n";
    for (const auto& p : curve)
        out << format(p.x) << ',' << format(p.total) << ',' << format(p.background_weighted) << ','
            << format(p.rare_weighted) << '\n';
}

void write_diagram_csv(const std::filesystem::path& file, const stability::StabilityDiagram& d) {
    auto out = open(file);
    out << "delta,alpha,unstable\n";
    for (Eigen::Index i = 0; i < d.delta_grid.size(); ++i)
        for (Eigen::Index j = 0; j < d.alpha_grid.size(); ++j)
            out << format(d.delta_grid(i)) << ',' << format(d.alpha_grid(j)) << ','
                << static_cast<int>(d.classification(i, j)) << '\n';
}

void write_boundary_csv(const std::filesystem::path& file, const stability::StabilityDiagram& d) {
    auto out = open(file);
    out << "tongue,segment,delta,alpha\n";
    for (std::size_t s = 0; s < d.boundaries.size(); ++s) {
        const auto& b = d.boundaries[s];
        for (std::size_t k = 0; k < b.delta.size(); ++k)
            out << b.tongue << ',' << s << ',' << format(b.delta[k]) << ',' << format(b.alpha[k]) << '\n';
    }
}

void write_text(const std::filesystem::path& file, const std::string& content) {
    auto out = open(file);
    out << content;
}

}  // namespace mathieu::io
