#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "wavkan/experiments.hpp"
#include "wavkan/network.hpp"
#include "wavkan/ntk.hpp"
#include "wavkan/pinn.hpp"
#include "wavkan/training.hpp"

namespace wavkan::cli {

enum class ExperimentKind { Fit, NtkSweep, HiddenSweep, BoundGrid, DynamicsCheck, Pinn };

[[nodiscard]] std::string_view to_string(ExperimentKind kind) noexcept;
[[nodiscard]] ExperimentKind experiment_kind_from_string(std::string_view name);

struct NetworkSection {
    std::vector<std::size_t> shape;
    MotherWavelet wavelet = MotherWavelet::morlet(1.0, 1.0);
    InitPolicy policy = InitPolicy::AllTrainable;
    Interval translation_domain;
};

struct DataSection {
    FitTarget target = FitTarget::Quintic;
    std::size_t points = 100;
};

struct NtkSection {
    std::vector<double> b_list{1.0, 5.0, 10.0, 15.0, 25.0};
    std::vector<double> thresholds{1e-2, 1e-4, 1e-6, 1e-8};
    std::vector<NtkScope> scopes{NtkScope::AllParams, NtkScope::WeightsOnly};
    bool train = false;
};

struct HiddenSection {
    std::vector<std::size_t> n_list{10, 50, 100, 150, 200};
};

struct BoundSection {
    std::vector<double> b_list{0.0, 0.5, 1.0, 2.0};
    std::vector<double> T_list{0.0, 0.25, 0.5, 0.75, 1.0};
    double a = 0.5;
    std::size_t n_quad = 257;
};

struct PinnSection {
    PdeProblem problem;
    bool weighted = false;
};

/// Fully resolved run description. Every field has a value; the JSON form
/// written by to_json() reproduces the run when loaded again.
struct ExperimentConfig {
    ExperimentKind kind = ExperimentKind::Fit;
    std::uint64_t seed = 0;
    std::string output_dir = "wavkan-out";
    NetworkSection network;
    DataSection data;
    TrainConfig training;
    NtkSection ntk;
    HiddenSection hidden;
    BoundSection bound;
    DynamicsCheckConfig dynamics;
    PinnSection pinn;
};

/// Defaults for an experiment; `target` matters for fit, `benchmark` and
/// `weighted` for pinn.
[[nodiscard]] ExperimentConfig default_config(ExperimentKind kind, FitTarget target = FitTarget::Quintic,
                                              PdeKind benchmark = PdeKind::Poisson1D, bool weighted = false);

/// Builds a config from (possibly partial) JSON: the experiment kind and its
/// presets first, then every field present in `j`. Unknown keys throw
/// Errc::InvalidConfig.
[[nodiscard]] ExperimentConfig config_from_json(const nlohmann::json& j);

/// Materialized form with every field, in a fixed key order.
[[nodiscard]] nlohmann::ordered_json to_json(const ExperimentConfig& cfg);

}  // namespace wavkan::cli
