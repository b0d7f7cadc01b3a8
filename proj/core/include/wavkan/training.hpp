#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <iosfwd>
#include <span>
#include <string>
#include <variant>
#include <vector>

#include "wavkan/artifacts.hpp"
#include "wavkan/network.hpp"

namespace wavkan {

struct AdamConfig {
    double lr = 1e-3;
    double beta1 = 0.9;
    double beta2 = 0.999;
    double eps = 1e-8;
};

struct LbfgsConfig {
    std::size_t history_size = 10;
    std::size_t max_linesearch = 25;
    double c1 = 1e-4;
    double c2 = 0.9;
    double initial_step = 1.0;
};

using OptimizerConfig = std::variant<AdamConfig, LbfgsConfig>;

struct TrainConfig {
    OptimizerConfig optimizer = AdamConfig{};
    std::size_t epochs = 1000;
    std::uint64_t seed = 0;
    std::size_t record_every = 1;

    /// Throws Errc::InvalidConfig when a field is out of range.
    void validate() const;
};

/// Loss value with its named parts (e.g. L_D, L_bc for a PDE loss).
struct LossEval {
    double total = 0.0;
    std::vector<double> components;
};

/// A differentiable training loss over a net's trainable parameters.
class Objective {
public:
    virtual ~Objective() = default;
    [[nodiscard]] virtual std::vector<std::string> component_names() const = 0;
    /// Loss at the net's current parameters. When `grad` is non-empty it
    /// receives the gradient in ParamVector layout.
    virtual LossEval evaluate(const WavKanNet& net, std::span<double> grad) = 0;
};

/// (1/N) sum_r |f(x_r) - y_r|^2 for a scalar-output net. X is N x n0, Y has N entries.
class MseObjective final : public Objective {
public:
    MseObjective(Matrix X, std::vector<double> Y);
    [[nodiscard]] std::vector<std::string> component_names() const override { return {}; }
    LossEval evaluate(const WavKanNet& net, std::span<double> grad) override;

private:
    Matrix X_;
    std::vector<double> Y_;
};

/// Throws Errc::EmptyData for N = 0 and Errc::DimensionMismatch on size mismatch.
[[nodiscard]] double mse_loss(const WavKanNet& net, const Matrix& X, std::span<const double> Y);

struct AdamState {
    std::vector<double> m;
    std::vector<double> v;
    std::size_t step = 0;
};

/// Bias-corrected Adam update in place. Entries whose block is ParamBlock::S
/// are re-projected to |S| >= kScaleMin; `blocks` may be empty to skip that.
/// Throws Errc::ShapeMismatch if sizes disagree.
void adam_step(std::span<double> params, std::span<const double> grad, AdamState& state, const AdamConfig& cfg,
               std::span<const ParamBlock> blocks = {});

/// Loss and gradient at a point; the gradient span has the point's length.
using LossGradFn = std::function<double(std::span<const double> x, std::span<double> grad)>;

struct LbfgsState {
    std::vector<std::vector<double>> s_history;
    std::vector<std::vector<double>> y_history;
    std::vector<double> rho;
    std::vector<double> grad;
    double loss = 0.0;
    bool initialized = false;
    std::size_t iterations = 0;
    std::size_t evaluations = 0;
    std::size_t steepest_fallbacks = 0;
};

struct LbfgsStepResult {
    double loss = 0.0;
    double step_length = 0.0;
    bool moved = false;
    bool used_fallback = false;
};

/// One L-BFGS iteration: two-loop recursion over the stored pairs, then a
/// strong-Wolfe line search; if that fails, steepest descent with Armijo
/// backtracking. Throws Errc::LineSearchFailed when both fail. Parameters
/// tagged ParamBlock::S in `blocks` are re-projected after the step.
LbfgsStepResult lbfgs_step(std::span<double> params, const LossGradFn& fn, LbfgsState& state, const LbfgsConfig& cfg,
                           std::span<const ParamBlock> blocks = {});

struct LossRow {
    std::size_t epoch = 0;  // number of completed optimizer steps
    double total = 0.0;
    std::vector<double> components;
};

struct TrainReport {
    std::vector<LossRow> loss_history;
    std::vector<std::string> component_names;
    double wall_time = 0.0;  // seconds
    ParamVector final_params;
    std::uint64_t seed = 0;
    TrainConfig config;
    std::size_t loss_evaluations = 0;  // objective calls, including line-search trials
};

/// Full-batch optimization of `objective`, one optimizer step per epoch. The
/// history holds the loss after epochs record_every, 2 record_every, ... and
/// always the final epoch. Throws Errc::NonFiniteLoss on a NaN/inf loss.
TrainReport train(WavKanNet& net, Objective& objective, const TrainConfig& cfg);
/// Least-squares fit of Y from X.
TrainReport train(WavKanNet& net, const Matrix& X, std::span<const double> Y, const TrainConfig& cfg);

[[nodiscard]] std::string describe(const OptimizerConfig& optimizer);
[[nodiscard]] HeaderFields describe(const TrainConfig& cfg);

/// "epoch,total[,component...]" CSV preceded by '#' header lines.
void write_loss_csv(std::ostream& os, const TrainReport& report, const HeaderFields& header);

}  // namespace wavkan
