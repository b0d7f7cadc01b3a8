#pragma once

#include <Eigen/Dense>

#include <cstddef>
#include <cstdint>
#include <span>
#include <string_view>
#include <vector>

#include "wavkan/network.hpp"
#include "wavkan/ntk.hpp"
#include "wavkan/training.hpp"

namespace wavkan {

// Reusable pieces of the function-approximation and NTK experiments, shared
// by the command-line runner and the acceptance suite.

enum class FitTarget { Quintic, TwoTone };

[[nodiscard]] std::string_view to_string(FitTarget target) noexcept;
/// Accepts "quintic" and "two-tone". Throws Errc::UnknownTarget.
[[nodiscard]] FitTarget fit_target_from_string(std::string_view name);

/// 4x^5 on [-1, 1], or sin(2 pi x) + 0.1 sin(50 pi x) on [0, 1].
[[nodiscard]] double target_value(FitTarget target, double x);
[[nodiscard]] Interval target_domain(FitTarget target);

struct FitData {
    Matrix X;  // N x 1, equally spaced including both ends of the domain
    std::vector<double> Y;
};

[[nodiscard]] FitData make_fit_data(FitTarget target, std::size_t points = 100);

/// Architecture and budget of a builtin target: quintic [1,3,1],
/// Morlet(a=0.5, b=2), 5000 epochs; two-tone [1,35,1], Morlet(a=1, b=15),
/// 1000 epochs. Both use Adam with lr 1e-3.
struct FitPreset {
    std::vector<std::size_t> shape;
    MotherWavelet wavelet = MotherWavelet::morlet(1.0, 1.0);
    TrainConfig train;
};

[[nodiscard]] FitPreset fit_preset(FitTarget target);

/// Index at which the spectrum first falls below threshold * lambda_1
/// (1-based; N + 1 if it never does).
[[nodiscard]] std::size_t decay_index(const Eigen::VectorXd& eigenvalues, double threshold = 1e-6);

/// Plain gradient descent on 0.5 * sum_r (f(x_r) - y_r)^2 for a single-layer
/// weights-only net started from W = 0, compared against the closed-form
/// linearized flow at t = eta * steps.
struct DynamicsCheckConfig {
    std::size_t inputs = 8;
    std::size_t points = 16;
    MotherWavelet wavelet = MotherWavelet::morlet(1.0, 5.0);
    double eta = 1e-4;
    std::size_t steps = 1000;
    std::uint64_t seed = 0;
};

struct DynamicsCheckResult {
    double t = 0.0;
    Eigen::VectorXd eigenvalues;
    Eigen::VectorXd empirical_residual;  // f - Y after training
    Eigen::VectorXd predicted_residual;  // f(t) - Y from the closed form
    Eigen::VectorXd empirical_modes;     // Q^T (f - Y)
    Eigen::VectorXd predicted_modes;
    double deviation = 0.0;           // ||empirical - predicted|| / ||predicted||
    double max_mode_deviation = 0.0;  // over modes with nonzero eigenvalue
};

[[nodiscard]] DynamicsCheckResult run_dynamics_check(const DynamicsCheckConfig& cfg);

struct BoundRow {
    double b = 0.0;
    double T = 0.0;
    double lambda = 0.0;
    double bound = 0.0;
    double relative_change = 0.0;
    bool holds = false;
};

/// Rank-one Morlet eigenvalue against morlet_bound over every (b, T) pair,
/// with S = 1 and the given Gaussian exponent.
[[nodiscard]] std::vector<BoundRow> bound_grid(std::span<const double> bs, std::span<const double> Ts, double a = 0.5,
                                               std::size_t n_quad = 257);

}  // namespace wavkan
