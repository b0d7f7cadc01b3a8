#include <CLI11.hpp>

#include <charconv>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include "commands.hpp"
#include "config.hpp"
#include "wavkan/error.hpp"

namespace {

using namespace wavkan;
using namespace wavkan::cli;
using nlohmann::json;

struct Overrides {
    std::string config_path;
    std::optional<std::uint64_t> seed;
    std::optional<std::string> out;
    std::optional<std::string> target;
    std::optional<std::string> benchmark;
    std::optional<std::size_t> epochs;
    std::optional<std::string> b_list;
    std::optional<std::string> n_list;
    bool train = false;
    bool weighted = false;
    bool unweighted = false;
    bool print_config = false;
};

template <class T>
std::vector<T> parse_list(const std::string& text, const char* flag) {
    std::vector<T> out;
    std::size_t start = 0;
    while (start < text.size()) {
        std::size_t end = text.find(',', start);
        if (end == std::string::npos) end = text.size();
        const std::string item = text.substr(start, end - start);
        T v{};
        const auto [ptr, ec] = std::from_chars(item.data(), item.data() + item.size(), v);
        if (item.empty() || ec != std::errc{} || ptr != item.data() + item.size())
            throw Error(Errc::InvalidConfig, std::string(flag) + ": bad list entry '" + item + "'");
        out.push_back(v);
        start = end + 1;
    }
    return out;
}

json load_json(const std::string& path) {
    std::ifstream is(path);
    if (!is) throw Error(Errc::Io, "cannot open config '" + path + "'");
    try {
        return json::parse(is);
    } catch (const json::parse_error& e) {
        throw Error(Errc::InvalidConfig, "config '" + path + "' is not valid JSON: " + e.what());
    }
}

ExperimentConfig resolve(ExperimentKind kind, const Overrides& o) {
    json j = o.config_path.empty() ? json::object() : load_json(o.config_path);
    const std::string name(to_string(kind));
    if (j.contains("experiment") && j["experiment"] != name)
        throw Error(Errc::InvalidConfig, "config file is for '" + j["experiment"].dump() + "', not '" + name + "'");
    j["experiment"] = name;
    if (o.seed) j["seed"] = *o.seed;
    if (o.out) j["output_dir"] = *o.out;
    if (o.target) j["data"]["target"] = *o.target;
    if (o.benchmark) j["pinn"]["benchmark"] = *o.benchmark;
    if (o.weighted || o.unweighted) {
        j["pinn"]["weighted"] = o.weighted;
        if (j["pinn"].contains("weights")) j["pinn"].erase("weights");
    }
    if (o.epochs) j["training"]["epochs"] = *o.epochs;
    if (o.b_list) j["ntk"]["b_list"] = parse_list<double>(*o.b_list, "--b-list");
    if (o.n_list) j["hidden"]["n_list"] = parse_list<std::size_t>(*o.n_list, "--n-list");
    if (o.train) j["ntk"]["train"] = true;
    return config_from_json(j);
}

CLI::App* add_command(CLI::App& app, const char* name, const char* help, Overrides& o) {
    auto* sub = app.add_subcommand(name, help);
    sub->add_option("--config", o.config_path, "JSON experiment config (missing fields take their defaults)")
        ->check(CLI::ExistingFile);
    sub->add_option("--seed", o.seed, "Seed for initialization, sampling and training");
    sub->add_option("--out", o.out, "Output directory");
    sub->add_flag("--print-config", o.print_config, "Print the resolved config and exit");
    return sub;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Wav-KAN experiments: function fitting, NTK analysis and physics-informed PDE solves"};
    app.require_subcommand(1);
    Overrides o;

    auto* fit = add_command(app, "fit", "Fit a builtin target function", o);
    fit->add_option("--target", o.target, "quintic or two-tone");
    fit->add_option("--epochs", o.epochs, "Training epochs");

    auto* ntk = add_command(app, "ntk-sweep", "NTK spectra over Morlet frequencies b", o);
    ntk->add_option("--b-list", o.b_list, "Comma-separated b values, e.g. 1,5,10,15");
    ntk->add_flag("--train", o.train, "Also train each net and write its loss curve");
    ntk->add_option("--epochs", o.epochs, "Training epochs when --train is given");

    auto* hidden = add_command(app, "hidden-sweep", "NTK spectra and fits over hidden widths n", o);
    hidden->add_option("--n-list", o.n_list, "Comma-separated hidden widths, e.g. 10,50,200");
    hidden->add_option("--epochs", o.epochs, "Training epochs");

    add_command(app, "bound-grid", "Rank-one Morlet eigenvalue against its lower bound", o);
    add_command(app, "dynamics-check", "Gradient descent against the closed-form linearized flow", o);

    auto* pinn = add_command(app, "pinn", "Physics-informed solve of a benchmark PDE", o);
    pinn->add_option("--benchmark", o.benchmark, "poisson, heat, helmholtz or wave");
    pinn->add_option("--epochs", o.epochs, "Optimizer steps (L-BFGS outer iterations for L-BFGS)");
    auto* w = pinn->add_flag("--weighted", o.weighted, "Weight every condition term by 100");
    auto* u = pinn->add_flag("--unweighted", o.unweighted, "All loss weights 1");
    w->excludes(u);

    CLI11_PARSE(app, argc, argv);

    try {
        const std::string name = app.get_subcommands().front()->get_name();
        const ExperimentConfig cfg = resolve(experiment_kind_from_string(name), o);
        if (o.print_config) {
            std::cout << to_json(cfg).dump(2) << '\n';
            return 0;
        }
        run(cfg);
    } catch (const Error& e) {
        std::cerr << "wavkan: " << e.what() << '\n';
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "wavkan: " << e.what() << '\n';
        return 3;
    }
    return 0;
}
