#include "runner.hpp"

#include <chrono>
#include <cmath>
#include <numbers>

#include "mathieu/errors.hpp"
#include "mathieu/gp.hpp"
#include "mathieu/io.hpp"
#include "mathieu/montecarlo.hpp"

namespace mathieu::cli {

using nlohmann::json;
namespace fs = std::filesystem;

namespace {

class Timings {
public:
    template <typename F>
    auto time(const std::string& name, F&& f) {
        const auto start = std::chrono::steady_clock::now();
        struct Record {
            Timings& self;
            std::string name;
            std::chrono::steady_clock::time_point start;
            ~Record() {
                self.doc_[name] = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
            }
        } record{*this, name, start};
        return f();
    }
    const json& doc() const { return doc_; }

private:
    json doc_ = json::object();
};

std::string dump(const json& j) { return j.dump(2) + "\n"; }

/// JSON has no infinities; keep them as null rather than failing the dump.
json number(double v) { return std::isfinite(v) ? json(v) : json(nullptr); }

sde::BatchOptions batch_options(const ExperimentConfig& c, double background_std, bool keep_first_path) {
    sde::BatchOptions o;
    o.system = c.system;
    o.observable = sde::Observable::Response;
    o.binning = {c.binning.core_std * background_std, c.binning.core_bins, c.binning.ratio};
    o.keep_first_path = keep_first_path;
    o.threads = c.threads;
    return o;
}

Series density_steps(const stats::EmpiricalDensity& d, const std::string& label, const std::string& color) {
    Series s{label, {}, {}, color, false, Series::Kind::Steps};
    for (Eigen::Index i = 0; i < d.n_bins(); ++i) {
        s.x.push_back(d.edges(i));
        s.y.push_back(d.density(i));
    }
    s.x.push_back(d.edges(d.n_bins()));
    s.y.push_back(d.n_bins() > 0 ? d.density(d.n_bins() - 1) : 0.0);
    return s;
}

/// log10 of the Gaussian density averaged over bin i. Falls back to the
/// density at the inner edge (an upper bound in the tail) on underflow.
double log10_gaussian_bin(const stats::EmpiricalDensity& d, const Eigen::VectorXd& gauss, Eigen::Index i,
                          double std_dev) {
    if (gauss(i) > 0.0) return std::log10(gauss(i));
    const double inner = std::min(std::abs(d.edges(i)), std::abs(d.edges(i + 1)));
    return (-0.5 * inner * inner / (std_dev * std_dev)) / std::numbers::ln10 -
           std::log10(std_dev * std::sqrt(2.0 * std::numbers::pi));
}

std::string panel_title(const sde::SystemParams& p) {
    return "sigma_alpha = " + io::format(p.acf.sigma_alpha) + ", ell_alpha = " + io::format(p.acf.ell_alpha);
}

json run_simulate(const ExperimentConfig& c, Timings& timings) {
    const auto background = analytic::build_model(c.params, c.quad, false);
    const auto batch = timings.time("simulate", [&] {
        return sde::run_batch(c.params, c.sim, batch_options(c, background.background_std(), true));
    });
    const auto density = batch.histogram.to_density();
    const fs::path& dir = c.outputs.dir;
    io::write_histogram_csv(dir / "histogram.csv", density);
    if (batch.first_path) io::write_trajectory_csv(dir / "trajectory.csv", *batch.first_path, {}, c.outputs.trajectory_stride);

    const double std_dev = std::sqrt(batch.moments.variance());
    if (c.outputs.svg) {
        PlotSpec hist{"Response density, " + panel_title(c.params), "x", "pdf", true};
        hist.series.push_back(density_steps(density, "simulation", "#1f77b4"));
        if (std_dev > 0.0) {
            const auto gauss = stats::gaussian_bin_density(density.edges, batch.moments.mean, std_dev);
            Series g{"variance-matched Gaussian", {}, {}, "#7f7f7f", true};
            for (Eigen::Index i = 0; i < density.n_bins(); ++i) {
                g.x.push_back(density.center(i));
                g.y.push_back(gauss(i));
            }
            hist.series.push_back(std::move(g));
        }
        io::write_text(dir / "histogram.svg", emit_svg(hist));
        if (batch.first_path) {
            const auto& path = *batch.first_path;
            PlotSpec traj{"First realization", "t", "x"};
            Series s{"x", {}, {}, "#1f77b4"};
            const auto& x = path.channel("x");
            for (Eigen::Index i = 0; i < x.size(); i += c.outputs.trajectory_stride) {
                s.x.push_back(path.time(i));
                s.y.push_back(x(i));
            }
            traj.series.push_back(std::move(s));
            io::write_text(dir / "trajectory.svg", emit_svg(traj));
        }
    }
    return {{"realizations", batch.realizations},
            {"samples", batch.moments.n},
            {"mean", batch.moments.mean},
            {"variance", batch.moments.variance()},
            {"ou_variance", background.sigma_f2 / (2.0 * c.params.zeta * c.params.omega0)}};
}

json run_analytic(const ExperimentConfig& c, Timings& timings) {
    const auto model = analytic::build_model(c.params, c.quad);
    const auto curve = timings.time("curve", [&] {
        return analytic::analytic_curve(model, analytic::default_curve_grid(model, c.curve_core_points, c.curve_log_points));
    });
    io::write_curve_csv(c.outputs.dir / "curve.csv", curve);
    if (c.outputs.svg) {
        PlotSpec plot{"Response pdf, " + panel_title(c.params), "x", "pdf", true};
        plot.log_floor = 1e-12;
        Series total{"total", {}, {}, "#000000"};
        Series background{"background (weighted)", {}, {}, "#1f77b4", true};
        Series rare{"rare events (weighted)", {}, {}, "#d62728"};
        for (const auto& p : curve) {
            total.x.push_back(p.x);
            total.y.push_back(p.total);
            background.x.push_back(p.x);
            background.y.push_back(p.background_weighted);
            rare.x.push_back(p.x);
            rare.y.push_back(p.rare_weighted);
        }
        plot.series = {total, background, rare};
        io::write_text(c.outputs.dir / "pdf.svg", emit_svg(plot));
    }
    return {{"curve_points", curve.size()}, {"x_max", curve.back().x}};
}

json run_stability(const ExperimentConfig& c, Timings& timings) {
    const auto diagram = timings.time("diagram", [&] { return stability::build_diagram(c.diagram); });
    io::write_diagram_csv(c.outputs.dir / "diagram.csv", diagram);
    io::write_boundary_csv(c.outputs.dir / "boundaries.csv", diagram);
    if (c.outputs.svg) {
        PlotSpec plot{"Stability diagram, zeta = " + io::format(diagram.zeta), "delta", "alpha"};
        const char* colors[] = {"#d62728", "#2ca02c"};
        bool labelled[2] = {false, false};
        for (const auto& b : diagram.boundaries) {
            if (b.delta.size() < 2) continue;
            const int t = std::clamp(b.tongue, 1, 2) - 1;
            Polygon poly{labelled[t] ? "" : "unstable, n = " + std::to_string(b.tongue), b.delta, b.alpha, colors[t]};
            labelled[t] = true;
            poly.x.push_back(b.delta.back());
            poly.y.push_back(c.diagram.alpha_max);
            poly.x.push_back(b.delta.front());
            poly.y.push_back(c.diagram.alpha_max);
            plot.polygons.push_back(std::move(poly));
        }
        Series unstable{"unstable grid points", {}, {}, "#000000", false, Series::Kind::Markers};
        for (Eigen::Index i = 0; i < diagram.delta_grid.size(); ++i)
            for (Eigen::Index j = 0; j < diagram.alpha_grid.size(); ++j)
                if (diagram.cell(i, j) == stability::Cell::Unstable) {
                    unstable.x.push_back(diagram.delta_grid(i));
                    unstable.y.push_back(diagram.alpha_grid(j));
                }
        // Frame the full grid even when nothing is unstable.
        Series frame{"", {c.diagram.delta_min, c.diagram.delta_max}, {c.diagram.alpha_min, c.diagram.alpha_max},
                     "none", false, Series::Kind::Markers};
        plot.series = {unstable, frame};
        io::write_text(c.outputs.dir / "diagram.svg", emit_svg(plot));
    }
    return {{"unstable", diagram.count(stability::Cell::Unstable)},
            {"stable", diagram.count(stability::Cell::Stable)},
            {"undetermined", diagram.count(stability::Cell::Undetermined)},
            {"boundary_segments", diagram.boundaries.size()},
            {"leading_order_alpha_crit_quarter", stability::leading_order_alpha_crit(0.25, diagram.zeta)}};
}

json run_gp(const ExperimentConfig& c, Timings& timings) {
    const auto path = timings.time("sample", [&] {
        return gp::sample_gp(c.params.acf, static_cast<Eigen::Index>(c.gp.n_points), c.sim.dt, c.sim.master_seed);
    });
    io::write_trajectory_csv(c.outputs.dir / "gp_sample.csv", path);
    const auto& a = path.channel("alpha");
    stats::Moments m;
    for (double v : a) m.add(v);
    if (c.outputs.svg) {
        PlotSpec plot{"Excitation sample, " + panel_title(c.params), "t", "alpha"};
        Series s{"alpha", {}, {}, "#1f77b4"};
        const Eigen::Index stride = std::max<Eigen::Index>(1, a.size() / 4000);
        for (Eigen::Index i = 0; i < a.size(); i += stride) {
            s.x.push_back(path.time(i));
            s.y.push_back(a(i));
        }
        plot.series.push_back(std::move(s));
        io::write_text(c.outputs.dir / "gp_sample.svg", emit_svg(plot));
    }
    return {{"n_points", a.size()},
            {"sample_mean", m.mean},
            {"sample_variance", m.variance()},
            {"acf_zero", gp::acf(0.0, c.params.acf)}};
}

}  // namespace

json model_summary(const ExperimentConfig& config) {
    json s = {{"P_r", nullptr}, {"eta", nullptr}, {"T_bar", nullptr}, {"gamma_pos", nullptr},
              {"gamma_neg", nullptr}, {"upsilon", nullptr}, {"rho", nullptr}};
    try {
        const auto m = analytic::build_model(config.params, config.quad);
        s = {{"P_r", m.P_r},         {"eta", m.eta},         {"T_bar", m.T_bar}, {"gamma_pos", m.gamma_pos},
             {"gamma_neg", m.gamma_neg}, {"upsilon", m.upsilon}, {"rho", m.rho}};
    } catch (const InvalidRegime&) {
    }
    return s;
}

ComparePanel run_compare(const ExperimentConfig& config, const fs::path& dir) {
    const auto model = analytic::build_model(config.params, config.quad);
    const auto batch = sde::run_batch(config.params, config.sim, batch_options(config, model.background_std(), false));
    const auto density = batch.histogram.to_density();

    Eigen::VectorXd reference(density.n_bins());
    for (Eigen::Index i = 0; i < density.n_bins(); ++i)
        reference(i) = analytic::bin_average(model, density.edges(i), density.edges(i + 1));
    const double std_dev = std::sqrt(batch.moments.variance());
    const auto gauss = stats::gaussian_bin_density(density.edges, batch.moments.mean, std_dev);
    const auto cmp = stats::compare_densities(density, reference, 10.0, 0.0, 4.0);

    double gaussian_gap = std::numeric_limits<double>::quiet_NaN();
    if (cmp.valid_bins > 0) {
        auto gap = [&](Eigen::Index i) {
            return std::log10(density.density(i)) - log10_gaussian_bin(density, gauss, i, std_dev);
        };
        gaussian_gap = std::min(gap(cmp.outer_left), gap(cmp.outer_right));
    }

    io::write_histogram_csv(dir / "histogram.csv", density);
    const auto curve = analytic::analytic_curve(
        model, analytic::default_curve_grid(model, config.curve_core_points, config.curve_log_points));
    io::write_curve_csv(dir / "curve.csv", curve);
    {
        std::string csv = "bin_left,bin_right,empirical,analytic,gaussian,count\n";
        for (Eigen::Index i = 0; i < density.n_bins(); ++i)
            csv += io::format(density.edges(i)) + "," + io::format(density.edges(i + 1)) + "," +
                   io::format(density.density(i)) + "," + io::format(reference(i)) + "," + io::format(gauss(i)) + "," +
                   std::to_string(density.count[static_cast<std::size_t>(i)]) + "\n";
        io::write_text(dir / "comparison.csv", csv);
    }

    ComparePanel panel;
    panel.metrics = {{"l1_core", cmp.l1_core},
                     {"log_ratio_tail", cmp.log_ratio_tail},
                     {"max_abs_log10_ratio", number(cmp.max_abs_log10_ratio)},
                     {"max_abs_log10_ratio_top4", number(cmp.max_abs_log10_ratio_top)},
                     {"decades", cmp.decades},
                     {"valid_bins", cmp.valid_bins},
                     {"total_samples", density.total_samples},
                     {"empirical_std", std_dev},
                     {"background_std", model.background_std()},
                     {"gaussian_underestimate_log10", number(gaussian_gap)}};

    PlotSpec& plot = panel.plot;
    plot.title = panel_title(config.params);
    plot.x_label = "x";
    plot.y_label = "pdf";
    plot.log_y = true;
    plot.log_floor = 1e-9;
    plot.series.push_back(density_steps(density, "simulation", "#1f77b4"));
    Series analytic_series{"analytic", {}, {}, "#d62728"};
    const double x_lim = std::max(std::abs(density.edges(0)), std::abs(density.edges(density.n_bins())));
    for (const auto& p : curve)
        if (std::abs(p.x) <= x_lim) {
            analytic_series.x.push_back(p.x);
            analytic_series.y.push_back(p.total);
        }
    plot.series.push_back(std::move(analytic_series));
    Series g{"Gaussian", {}, {}, "#7f7f7f", true};
    for (Eigen::Index i = 0; i < density.n_bins(); ++i) {
        g.x.push_back(density.center(i));
        g.y.push_back(gauss(i));
    }
    plot.series.push_back(std::move(g));
    return panel;
}

json run(const ExperimentConfig& config) {
    const fs::path& dir = config.outputs.dir;
    fs::create_directories(dir);
    io::write_text(dir / "config.json", dump(to_json(config)));

    Timings timings;
    json summary = model_summary(config);
    summary["mode"] = mode_name(config.mode);
    summary["master_seed"] = config.sim.master_seed;
    summary["timings"] = "timings.json";

    timings.time("total", [&] {
        switch (config.mode) {
            case Mode::SimulateFull:
            case Mode::SimulateAveraged: {
                ExperimentConfig c = config;
                c.system = config.mode == Mode::SimulateFull ? sde::System::Full : sde::System::Averaged;
                summary["system"] = c.system == sde::System::Full ? "full" : "averaged";
                summary["metrics"] = run_simulate(c, timings);
                break;
            }
            case Mode::AnalyticPdf:
                summary["metrics"] = run_analytic(config, timings);
                break;
            case Mode::StabilityDiagram:
                summary["metrics"] = run_stability(config, timings);
                break;
            case Mode::GpSample:
                summary["metrics"] = run_gp(config, timings);
                break;
            case Mode::Compare: {
                auto panel = timings.time("compare", [&] { return run_compare(config, dir); });
                summary["metrics"] = panel.metrics;
                if (config.outputs.svg) io::write_text(dir / "compare.svg", emit_svg(panel.plot));
                break;
            }
            case Mode::ReproduceFig3: {
                json panels = json::array();
                std::vector<PlotSpec> plots;
                for (double sigma : config.reproduce.sigma_alphas) {
                    for (double ell : config.reproduce.ell_alphas) {
                        ExperimentConfig c = config;
                        c.params.acf = {sigma, ell};
                        const std::string name = "panel_s" + io::format(sigma) + "_l" + io::format(ell);
                        auto panel = timings.time(name, [&] { return run_compare(c, dir / name); });
                        json entry = model_summary(c);
                        entry["sigma_alpha"] = sigma;
                        entry["ell_alpha"] = ell;
                        entry["dir"] = name;
                        entry["metrics"] = panel.metrics;
                        io::write_text(dir / name / "summary.json", dump(entry));
                        panels.push_back(std::move(entry));
                        plots.push_back(std::move(panel.plot));
                    }
                }
                summary["metrics"] = {{"panels", panels}};
                if (config.outputs.svg)
                    io::write_text(dir / "fig3.svg",
                                   emit_svg_grid(plots, static_cast<int>(config.reproduce.ell_alphas.size())));
                break;
            }
        }
        return 0;
    });

    io::write_text(dir / "summary.json", dump(summary));
    io::write_text(dir / "timings.json", dump(timings.doc()));
    return summary;
}

json error_record(const std::exception& e) {
    std::string kind = "internal";
    if (const auto* err = dynamic_cast<const Error*>(&e)) kind = err->kind();
    return {{"error", {{"kind", kind}, {"message", e.what()}}}};
}

}  // namespace mathieu::cli
