#include <filesystem>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "config.hpp"
#include "mathieu/errors.hpp"
#include "mathieu/io.hpp"
#include "runner.hpp"

using namespace mathieu;

namespace {

struct CommonFlags {
    std::string config_file;
    std::optional<std::uint64_t> seed;
    std::string out;
    bool svg = false;
    bool desk_scale = false;
    std::vector<std::string> overrides;
};

void add_common(CLI::App* app, CommonFlags& f) {
    app->add_option("--config", f.config_file, "JSON config file (partial documents are merged onto the defaults)");
    app->add_option("--seed", f.seed, "Master seed");
    app->add_option("--out", f.out, "Output directory");
    app->add_flag("--svg", f.svg, "Also write SVG plots");
    app->add_flag("--desk-scale", f.desk_scale, "300 realizations on [0, 2500]");
    app->add_option("--set", f.overrides, "Override a config field, e.g. --set params.sigma_alpha=0.229");
}

nlohmann::json resolve(const CommonFlags& f, const std::optional<std::string>& mode) {
    auto doc = cli::default_config_json();
    if (!f.config_file.empty()) cli::merge_strict(doc, cli::load_json_file(f.config_file));
    if (f.desk_scale) cli::apply_desk_scale(doc);
    for (const auto& o : f.overrides) {
        const auto eq = o.find('=');
        if (eq == std::string::npos) throw ConfigError("--set expects key.path=value, got '" + o + "'");
        cli::apply_override(doc, o.substr(0, eq), o.substr(eq + 1));
    }
    if (f.seed) doc["sim"]["master_seed"] = *f.seed;
    if (!f.out.empty()) doc["outputs"]["dir"] = f.out;
    if (f.svg) doc["outputs"]["svg"] = true;
    if (mode) doc["mode"] = *mode;
    return doc;
}

void print_summary(const nlohmann::json& s, const std::filesystem::path& dir) {
    std::cout << "mode: " << s["mode"].get<std::string>() << "\n";
    for (const char* key : {"P_r", "eta", "T_bar", "gamma_pos", "rho"})
        if (!s[key].is_null()) std::cout << key << ": " << io::format(s[key].get<double>()) << "\n";
    if (s.contains("metrics")) std::cout << "metrics: " << s["metrics"].dump() << "\n";
    std::cout << "outputs: " << dir.string() << "\n";
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Stochastic Mathieu equation: simulation, analytic heavy-tailed pdf and stability charts"};
    app.require_subcommand(1);

    CommonFlags flags;
    std::string system = "averaged";
    struct Command {
        CLI::App* app;
        std::optional<std::string> mode;
    };
    std::vector<Command> commands;
    auto add = [&](const char* name, const char* help, std::optional<std::string> mode) {
        CLI::App* sub = app.add_subcommand(name, help);
        add_common(sub, flags);
        commands.push_back({sub, std::move(mode)});
        return sub;
    };
    auto* simulate = add("simulate", "Monte-Carlo batch of the full or averaged system", std::nullopt);
    simulate->add_option("--system", system, "averaged | full")->check(CLI::IsMember({"averaged", "full"}));
    add("analytic", "Analytic response pdf", "analytic-pdf");
    add("stability", "Stability diagram of the damped Mathieu equation", "stability-diagram");
    add("gp", "Sample the excitation process", "gp-sample");
    add("compare", "Simulated vs analytic density for one parameter set", "compare");
    add("reproduce", "3 x 3 grid of density comparisons", "reproduce-fig3");
    add("run", "Run the mode named in the config", std::nullopt);

    CLI11_PARSE(app, argc, argv);

    std::filesystem::path out_dir = flags.out.empty() ? "out" : flags.out;
    try {
        std::optional<std::string> mode;
        for (const auto& c : commands)
            if (c.app->parsed()) mode = c.mode;
        if (simulate->parsed()) mode = system == "full" ? "simulate-full" : "simulate-averaged";

        const auto doc = resolve(flags, mode);
        if (doc["outputs"]["dir"].is_string()) out_dir = doc["outputs"]["dir"].get<std::string>();
        const auto config = cli::from_json(doc);
        const auto summary = cli::run(config);
        print_summary(summary, config.outputs.dir);
        return 0;
    } catch (const std::exception& e) {
        const auto record = cli::error_record(e);
        std::cerr << "error: " << record["error"]["kind"].get<std::string>() << ": " << e.what() << "\n";
        try {
            io::write_text(out_dir / "error.json", record.dump(2) + "\n");
        } catch (const std::exception&) {
        }
        return dynamic_cast<const ConfigError*>(&e) ? 2 : 1;
    }
}
