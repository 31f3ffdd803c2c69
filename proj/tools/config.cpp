#include "config.hpp"

#include <fstream>
#include <sstream>

#include "mathieu/errors.hpp"

namespace mathieu::cli {

using nlohmann::json;

namespace {

struct ModeName {
    Mode mode;
    const char* name;
};

constexpr ModeName kModes[] = {
    {Mode::SimulateFull, "simulate-full"},
    {Mode::SimulateAveraged, "simulate-averaged"},
    {Mode::AnalyticPdf, "analytic-pdf"},
    {Mode::StabilityDiagram, "stability-diagram"},
    {Mode::GpSample, "gp-sample"},
    {Mode::Compare, "compare"},
    {Mode::ReproduceFig3, "reproduce-fig3"},
};

bool same_kind(const json& value, const json& target) {
    if (value.is_number() && target.is_number()) {
        if (!target.is_number_integer()) return true;
        if (!value.is_number_integer()) return false;
        return !target.is_number_unsigned() || value.is_number_unsigned();
    }
    return value.type() == target.type();
}

template <typename T>
T get(const json& doc, const char* key, const std::string& where) {
    try {
        return doc.at(key).get<T>();
    } catch (const json::exception& e) {
        throw ConfigError(where + key + ": " + e.what());
    }
}

}  // namespace

Mode parse_mode(const std::string& name) {
    for (const auto& m : kModes)
        if (name == m.name) return m.mode;
    throw ConfigError("unknown mode '" + name + "'");
}

std::string mode_name(Mode m) {
    for (const auto& entry : kModes)
        if (entry.mode == m) return entry.name;
    return "?";
}

json default_config_json() {
    const ExperimentConfig c;
    return to_json(c);
}

void merge_strict(json& base, const json& patch, const std::string& where) {
    if (!patch.is_object()) throw ConfigError("expected an object at '" + (where.empty() ? "<root>" : where) + "'");
    for (auto it = patch.begin(); it != patch.end(); ++it) {
        const std::string path = where.empty() ? it.key() : where + "." + it.key();
        if (!base.contains(it.key())) throw ConfigError("unknown key '" + path + "'");
        json& target = base[it.key()];
        if (target.is_object()) {
            merge_strict(target, it.value(), path);
        } else {
            if (!same_kind(it.value(), target))
                throw ConfigError("type mismatch at '" + path + "': expected " + target.type_name() + ", got " +
                                  it.value().type_name());
            target = it.value();
        }
    }
}

void apply_override(json& doc, const std::string& dotted, const std::string& value) {
    json parsed;
    try {
        parsed = json::parse(value);
    } catch (const json::parse_error&) {
        parsed = value;
    }
    // Build {"a": {"b": value}} and merge so the same checks apply.
    json patch = parsed;
    std::string rest = dotted;
    std::vector<std::string> keys;
    for (std::size_t pos; (pos = rest.find('.')) != std::string::npos; rest = rest.substr(pos + 1))
        keys.push_back(rest.substr(0, pos));
    keys.push_back(rest);
    for (auto k = keys.rbegin(); k != keys.rend(); ++k) {
        if (k->empty()) throw ConfigError("malformed override path '" + dotted + "'");
        patch = json{{*k, patch}};
    }
    merge_strict(doc, patch);
}

void apply_desk_scale(json& doc) {
    doc["sim"]["n_realizations"] = 300;
    doc["sim"]["t_end"] = 2500.0;
}

json to_json(const ExperimentConfig& c) {
    json forcing;
    if (const auto* w = std::get_if<sde::WhiteNoise>(&c.params.forcing))
        forcing = {{"kind", "white_noise"}, {"nu", w->nu}, {"spectrum_level", 0.0}};
    else
        forcing = {{"kind", "broadband"},
                   {"nu", 0.0},
                   {"spectrum_level", std::get<sde::Broadband>(c.params.forcing).spectrum_level}};
    return {
        {"mode", mode_name(c.mode)},
        {"params",
         {{"omega0", c.params.omega0},
          {"zeta", c.params.zeta},
          {"sigma_alpha", c.params.acf.sigma_alpha},
          {"ell_alpha", c.params.acf.ell_alpha},
          {"forcing", forcing}}},
        {"sim",
         {{"dt", c.sim.dt},
          {"t_end", c.sim.t_end},
          {"burn_in", c.sim.burn_in},
          {"n_realizations", c.sim.n_realizations},
          {"master_seed", c.sim.master_seed},
          {"system", c.system == sde::System::Full ? "full" : "averaged"},
          {"threads", c.threads},
          {"binning", {{"core_std", c.binning.core_std}, {"core_bins", c.binning.core_bins}, {"ratio", c.binning.ratio}}}}},
        {"analytic",
         {{"rel_tol", c.quad.rel_tol},
          {"abs_tol", c.quad.abs_tol},
          {"max_evals", c.quad.max_evals},
          {"curve_core_points", c.curve_core_points},
          {"curve_log_points", c.curve_log_points}}},
        {"stability",
         {{"delta_min", c.diagram.delta_min},
          {"delta_max", c.diagram.delta_max},
          {"alpha_min", c.diagram.alpha_min},
          {"alpha_max", c.diagram.alpha_max},
          {"zeta", c.diagram.zeta},
          {"n_delta", c.diagram.n_delta},
          {"n_alpha", c.diagram.n_alpha},
          {"trunc", c.diagram.trunc},
          {"boundary_tol", c.diagram.boundary_tol}}},
        {"gp", {{"n_points", c.gp.n_points}}},
        {"reproduce", {{"sigma_alphas", c.reproduce.sigma_alphas}, {"ell_alphas", c.reproduce.ell_alphas}}},
        {"outputs",
         {{"dir", c.outputs.dir.string()}, {"svg", c.outputs.svg}, {"trajectory_stride", c.outputs.trajectory_stride}}},
    };
}

ExperimentConfig from_json(const json& doc) {
    ExperimentConfig c;
    c.mode = parse_mode(get<std::string>(doc, "mode", ""));

    const json& p = doc.at("params");
    c.params.omega0 = get<double>(p, "omega0", "params.");
    c.params.zeta = get<double>(p, "zeta", "params.");
    c.params.acf.sigma_alpha = get<double>(p, "sigma_alpha", "params.");
    c.params.acf.ell_alpha = get<double>(p, "ell_alpha", "params.");
    const json& f = p.at("forcing");
    const auto kind = get<std::string>(f, "kind", "params.forcing.");
    if (kind == "white_noise")
        c.params.forcing = sde::WhiteNoise{get<double>(f, "nu", "params.forcing.")};
    else if (kind == "broadband")
        c.params.forcing = sde::Broadband{get<double>(f, "spectrum_level", "params.forcing.")};
    else
        throw ConfigError("params.forcing.kind must be 'white_noise' or 'broadband'");

    const json& s = doc.at("sim");
    c.sim.dt = get<double>(s, "dt", "sim.");
    c.sim.t_end = get<double>(s, "t_end", "sim.");
    c.sim.burn_in = get<double>(s, "burn_in", "sim.");
    c.sim.n_realizations = get<std::int64_t>(s, "n_realizations", "sim.");
    c.sim.master_seed = get<std::uint64_t>(s, "master_seed", "sim.");
    const auto system = get<std::string>(s, "system", "sim.");
    if (system == "averaged")
        c.system = sde::System::Averaged;
    else if (system == "full")
        c.system = sde::System::Full;
    else
        throw ConfigError("sim.system must be 'averaged' or 'full'");
    c.threads = get<unsigned>(s, "threads", "sim.");
    const json& b = s.at("binning");
    c.binning.core_std = get<double>(b, "core_std", "sim.binning.");
    c.binning.core_bins = get<int>(b, "core_bins", "sim.binning.");
    c.binning.ratio = get<double>(b, "ratio", "sim.binning.");

    const json& a = doc.at("analytic");
    c.quad.rel_tol = get<double>(a, "rel_tol", "analytic.");
    c.quad.abs_tol = get<double>(a, "abs_tol", "analytic.");
    c.quad.max_evals = get<int>(a, "max_evals", "analytic.");
    c.curve_core_points = get<int>(a, "curve_core_points", "analytic.");
    c.curve_log_points = get<int>(a, "curve_log_points", "analytic.");

    const json& st = doc.at("stability");
    c.diagram.delta_min = get<double>(st, "delta_min", "stability.");
    c.diagram.delta_max = get<double>(st, "delta_max", "stability.");
    c.diagram.alpha_min = get<double>(st, "alpha_min", "stability.");
    c.diagram.alpha_max = get<double>(st, "alpha_max", "stability.");
    c.diagram.zeta = get<double>(st, "zeta", "stability.");
    c.diagram.n_delta = get<Eigen::Index>(st, "n_delta", "stability.");
    c.diagram.n_alpha = get<Eigen::Index>(st, "n_alpha", "stability.");
    c.diagram.trunc = get<int>(st, "trunc", "stability.");
    c.diagram.boundary_tol = get<double>(st, "boundary_tol", "stability.");

    c.gp.n_points = get<long>(doc.at("gp"), "n_points", "gp.");
    c.reproduce.sigma_alphas = get<std::vector<double>>(doc.at("reproduce"), "sigma_alphas", "reproduce.");
    c.reproduce.ell_alphas = get<std::vector<double>>(doc.at("reproduce"), "ell_alphas", "reproduce.");

    const json& o = doc.at("outputs");
    c.outputs.dir = get<std::string>(o, "dir", "outputs.");
    c.outputs.svg = get<bool>(o, "svg", "outputs.");
    c.outputs.trajectory_stride = get<long>(o, "trajectory_stride", "outputs.");

    try {
        c.params.validate(true);
        c.sim.validate();
        stats::LogTailBinning{1.0, c.binning.core_bins, c.binning.ratio}.validate();
    } catch (const InvalidArgument& e) {
        throw ConfigError(e.what());
    }
    if (c.binning.core_std <= 0.0) throw ConfigError("sim.binning.core_std must be > 0");
    if (c.curve_core_points < 3 || c.curve_log_points < 2) throw ConfigError("analytic curve point counts too small");
    if (c.gp.n_points < 2) throw ConfigError("gp.n_points must be >= 2");
    if (c.outputs.trajectory_stride < 1) throw ConfigError("outputs.trajectory_stride must be >= 1");
    if (c.reproduce.sigma_alphas.empty() || c.reproduce.ell_alphas.empty())
        throw ConfigError("reproduce grids must be non-empty");
    return c;
}

json load_json_file(const std::filesystem::path& file) {
    std::ifstream in(file);
    if (!in) throw ConfigError("cannot open config '" + file.string() + "'");
    try {
        return json::parse(in);
    } catch (const json::parse_error& e) {
        throw ConfigError("config '" + file.string() + "': " + e.what());
    }
}

}  // namespace mathieu::cli
