#include <gtest/gtest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

#include "commands.hpp"
#include "config.hpp"
#include "wavkan/checkpoint.hpp"
#include "wavkan/error.hpp"

using namespace wavkan;
using namespace wavkan::cli;
using nlohmann::json;

namespace {

Errc config_error(const json& j) {
    try {
        (void)config_from_json(j);
    } catch (const Error& e) {
        return e.code();
    }
    ADD_FAILURE() << "config accepted: " << j.dump();
    return Errc::Io;
}

std::string slurp(const std::filesystem::path& p) {
    std::ifstream is(p);
    std::stringstream ss;
    ss << is.rdbuf();
    return ss.str();
}

}  // namespace

TEST(CliConfig, QuinticPreset) {
    const auto cfg = config_from_json({{"experiment", "fit"}});
    EXPECT_EQ(cfg.network.shape, (std::vector<std::size_t>{1, 3, 1}));
    EXPECT_EQ(cfg.network.wavelet, MotherWavelet::morlet(0.5, 2.0));
    EXPECT_EQ(cfg.training.epochs, 5000u);
    ASSERT_TRUE(std::holds_alternative<AdamConfig>(cfg.training.optimizer));
    EXPECT_EQ(std::get<AdamConfig>(cfg.training.optimizer).lr, 1e-3);
    EXPECT_EQ(cfg.data.target, FitTarget::Quintic);
}

TEST(CliConfig, TwoTonePreset) {
    const auto cfg = config_from_json({{"experiment", "fit"}, {"data", {{"target", "two-tone"}}}});
    EXPECT_EQ(cfg.network.shape, (std::vector<std::size_t>{1, 35, 1}));
    EXPECT_EQ(cfg.network.wavelet.b(), 15.0);
    EXPECT_EQ(cfg.training.epochs, 1000u);
}

TEST(CliConfig, MaterializedJsonReloadsIdentically) {
    for (const char* kind : {"fit", "ntk-sweep", "hidden-sweep", "bound-grid", "dynamics-check", "pinn"}) {
        const auto cfg = config_from_json({{"experiment", kind}, {"seed", 7}});
        const auto text = to_json(cfg).dump();
        const auto again = to_json(config_from_json(json::parse(text))).dump();
        EXPECT_EQ(text, again) << kind;
    }
    const json wave{{"experiment", "pinn"}, {"pinn", {{"benchmark", "wave"}, {"weighted", true}}}};
    const auto text = to_json(config_from_json(wave)).dump();
    EXPECT_EQ(to_json(config_from_json(json::parse(text))).dump(), text);
}

TEST(CliConfig, OverlaysPartialFields) {
    const json j{{"experiment", "fit"},
                 {"network", {{"wavelet", {{"b", 3.0}}}}},
                 {"training", {{"optimizer", "lbfgs"}, {"history_size", 5}}}};
    const auto cfg = config_from_json(j);
    EXPECT_EQ(cfg.network.wavelet, MotherWavelet::morlet(0.5, 3.0));
    ASSERT_TRUE(std::holds_alternative<LbfgsConfig>(cfg.training.optimizer));
    EXPECT_EQ(std::get<LbfgsConfig>(cfg.training.optimizer).history_size, 5u);
}

TEST(CliConfig, PinnPresetsAndWeights) {
    const auto plain = config_from_json({{"experiment", "pinn"}, {"pinn", {{"benchmark", "helmholtz"}}}});
    EXPECT_EQ(plain.pinn.problem.weight(PinnTerm::Boundary), 1.0);
    EXPECT_EQ(plain.network.shape, (std::vector<std::size_t>{2, 15, 15, 15, 1}));
    const auto weighted =
        config_from_json({{"experiment", "pinn"}, {"pinn", {{"benchmark", "helmholtz"}, {"weighted", true}}}});
    EXPECT_EQ(weighted.pinn.problem.weight(PinnTerm::Boundary), 100.0);
    EXPECT_EQ(weighted.pinn.problem.weight(PinnTerm::Domain), 1.0);
    const auto js = to_json(weighted).dump();
    EXPECT_NE(js.find("\"L_bc\":100.0"), std::string::npos);
    const auto custom = config_from_json(
        {{"experiment", "pinn"}, {"seed", 4}, {"pinn", {{"benchmark", "wave"}, {"weights", {{"L_nbc", 7.0}}}}}});
    EXPECT_EQ(custom.pinn.problem.weight(PinnTerm::Neumann), 7.0);
    EXPECT_EQ(custom.pinn.problem.seed, 4u);
}

TEST(CliConfig, Errors) {
    EXPECT_EQ(config_error({{"experiment", "fit"}, {"data", {{"target", "cubic"}}}}), Errc::UnknownTarget);
    EXPECT_EQ(config_error({{"experiment", "pinn"}, {"pinn", {{"benchmark", "burgers"}}}}), Errc::UnknownBenchmark);
    EXPECT_EQ(config_error({{"experiment", "ntk-sweep"}, {"ntk", {{"b_list", json::array()}}}}), Errc::InvalidConfig);
    EXPECT_EQ(config_error({{"experiment", "fit"}, {"extra", 1}}), Errc::InvalidConfig);
    EXPECT_EQ(config_error({{"experiment", "fit"}, {"pinn", json::object()}}), Errc::InvalidConfig);
    EXPECT_EQ(config_error({{"experiment", "fit"}, {"training", {{"lr", "fast"}}}}), Errc::InvalidConfig);
    EXPECT_EQ(config_error({{"experiment", "fit"}, {"training", {{"c1", 0.1}}}}), Errc::InvalidConfig);
    EXPECT_EQ(config_error({{"experiment", "pinn"}, {"pinn", {{"weights", {{"L_ic", 2.0}}}}}}), Errc::InvalidConfig);
    EXPECT_EQ(config_error({{"experiment", "sweep"}}), Errc::InvalidConfig);
    EXPECT_EQ(config_error(json::object()), Errc::InvalidConfig);
}

TEST(CliConfig, NtkSweepScopes) {
    const auto both = config_from_json({{"experiment", "ntk-sweep"}});
    EXPECT_EQ(both.ntk.scopes, (std::vector<NtkScope>{NtkScope::AllParams, NtkScope::WeightsOnly}));
    const auto one = config_from_json({{"experiment", "ntk-sweep"}, {"ntk", {{"scopes", {"weights-only"}}}}});
    EXPECT_EQ(one.ntk.scopes, (std::vector<NtkScope>{NtkScope::WeightsOnly}));
    EXPECT_EQ(config_error({{"experiment", "ntk-sweep"}, {"ntk", {{"scopes", {"biases"}}}}}), Errc::InvalidConfig);
    EXPECT_EQ(config_error({{"experiment", "ntk-sweep"}, {"ntk", {{"scopes", json::array()}}}}),
              Errc::InvalidConfig);
}

TEST(CliConfig, HiddenListIsDeduplicated) {
    const auto cfg = config_from_json({{"experiment", "hidden-sweep"}, {"hidden", {{"n_list", {50, 10, 50}}}}});
    EXPECT_EQ(cfg.hidden.n_list, (std::vector<std::size_t>{50, 10}));
}

TEST(CliCommands, FitIsReproducibleAndWritesArtifacts) {
    const auto dir = std::filesystem::temp_directory_path() / "wavkan_cli_fit_test";
    std::filesystem::remove_all(dir);
    auto cfg = config_from_json({{"experiment", "fit"}, {"seed", 3}, {"training", {{"epochs", 40}}}});
    cfg.output_dir = dir.string();
    cmd_fit(cfg);
    const auto loss = slurp(dir / "loss.csv");
    const auto pred = slurp(dir / "prediction.csv");
    EXPECT_EQ(loss.rfind("# config: {", 0), 0u);
    EXPECT_NE(loss.find("# seed: 3"), std::string::npos);
    cmd_fit(cfg);
    EXPECT_EQ(slurp(dir / "loss.csv"), loss);
    EXPECT_EQ(slurp(dir / "prediction.csv"), pred);

    const auto net = load_checkpoint(dir / "checkpoint.txt");
    EXPECT_EQ(net.shape(), (std::vector<std::size_t>{1, 3, 1}));
    const auto reloaded = config_from_json(json::parse(slurp(dir / "config.json")));
    EXPECT_EQ(to_json(reloaded).dump(), to_json(cfg).dump());
    std::filesystem::remove_all(dir);
}

TEST(CliCommands, BoundGridDefaultRowsAllHold) {
    const auto dir = std::filesystem::temp_directory_path() / "wavkan_cli_bound_test";
    auto cfg = config_from_json({{"experiment", "bound-grid"}});
    cfg.output_dir = dir.string();
    cmd_bound_grid(cfg);
    const auto csv = slurp(dir / "bound_grid.csv");
    EXPECT_EQ(csv.find(",fail"), std::string::npos);
    // b = 0, T = 0: bound is exactly 1/4.
    EXPECT_NE(csv.find("\n0,0,"), std::string::npos);
    EXPECT_NE(csv.find(",0.25,"), std::string::npos);
    std::filesystem::remove_all(dir);
}
