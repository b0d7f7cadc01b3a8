#include "wavkan/experiments.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

#include "wavkan/diffengine.hpp"
#include "wavkan/error.hpp"
#include "wavkan/rng.hpp"

namespace wavkan {

std::string_view to_string(FitTarget target) noexcept {
    return target == FitTarget::Quintic ? "quintic" : "two-tone";
}

FitTarget fit_target_from_string(std::string_view name) {
    if (name == "quintic") return FitTarget::Quintic;
    if (name == "two-tone") return FitTarget::TwoTone;
    throw Error(Errc::UnknownTarget, "unknown target '" + std::string(name) + "' (expected quintic or two-tone)");
}

double target_value(FitTarget target, double x) {
    constexpr double pi = std::numbers::pi;
    if (target == FitTarget::Quintic) return 4.0 * std::pow(x, 5);
    return std::sin(2.0 * pi * x) + 0.1 * std::sin(50.0 * pi * x);
}

Interval target_domain(FitTarget target) {
    return target == FitTarget::Quintic ? Interval{-1.0, 1.0} : Interval{0.0, 1.0};
}

FitData make_fit_data(FitTarget target, std::size_t points) {
    if (points < 2) throw Error(Errc::InvalidConfig, "a fit needs at least two data points");
    const Interval dom = target_domain(target);
    FitData data{Matrix(points, 1), std::vector<double>(points)};
    for (std::size_t i = 0; i < points; ++i) {
        const double x = dom.lo + (dom.hi - dom.lo) * static_cast<double>(i) / static_cast<double>(points - 1);
        data.X(i, 0) = x;
        data.Y[i] = target_value(target, x);
    }
    return data;
}

FitPreset fit_preset(FitTarget target) {
    FitPreset p;
    p.train.optimizer = AdamConfig{1e-3};
    if (target == FitTarget::Quintic) {
        p.shape = {1, 3, 1};
        p.wavelet = MotherWavelet::morlet(0.5, 2.0);
        p.train.epochs = 5000;
        p.train.record_every = 50;
    } else {
        p.shape = {1, 35, 1};
        p.wavelet = MotherWavelet::morlet(1.0, 15.0);
        p.train.epochs = 1000;
        p.train.record_every = 10;
    }
    return p;
}

std::size_t decay_index(const Eigen::VectorXd& eigenvalues, double threshold) {
    const double thresholds[] = {threshold};
    return spectrum_decay_report(eigenvalues, thresholds).front().first_index_below;
}

DynamicsCheckResult run_dynamics_check(const DynamicsCheckConfig& cfg) {
    if (cfg.inputs == 0 || cfg.points == 0 || cfg.steps == 0 || !(cfg.eta > 0.0))
        throw Error(Errc::InvalidConfig, "dynamics check needs positive inputs, points, steps and eta");

    auto net = init({cfg.inputs, 1}, cfg.wavelet, cfg.seed, InitPolicy::WeightsOnly, {0.0, 1.0});
    auto& W = net.layer(0).W;
    std::fill(W.flat().begin(), W.flat().end(), 0.0);

    Rng rng(cfg.seed ^ 0x9e3779b97f4a7c15ULL);
    Matrix X(cfg.points, cfg.inputs);
    for (double& v : X.flat()) v = rng.uniform();
    Eigen::VectorXd Y(static_cast<Eigen::Index>(cfg.points));
    for (Eigen::Index r = 0; r < Y.size(); ++r) Y(r) = rng.uniform(-1.0, 1.0);

    const NtkSpectrum spec = eigendecompose(ntk_matrix(net, X, NtkScope::WeightsOnly));

    // The model is linear in W, so the parameter gradient of every output is
    // fixed; it is still recomputed each step, as plain gradient descent would.
    std::vector<double> theta = flatten(net).values;
    std::vector<double> grad(theta.size());
    for (std::size_t step = 0; step < cfg.steps; ++step) {
        std::fill(grad.begin(), grad.end(), 0.0);
        for (std::size_t r = 0; r < cfg.points; ++r) {
            const double resid = forward(net, X.row(r))[0] - Y(static_cast<Eigen::Index>(r));
            const auto g = grad_params(net, X.row(r)).param_grad;
            for (std::size_t k = 0; k < grad.size(); ++k) grad[k] += resid * g[k];
        }
        for (std::size_t k = 0; k < theta.size(); ++k) theta[k] -= cfg.eta * grad[k];
        unflatten(net, theta);
    }

    DynamicsCheckResult out;
    out.t = cfg.eta * static_cast<double>(cfg.steps);
    out.eigenvalues = spec.eigenvalues;
    out.empirical_residual.resize(Y.size());
    for (Eigen::Index r = 0; r < Y.size(); ++r)
        out.empirical_residual(r) = forward(net, X.row(static_cast<std::size_t>(r)))[0] - Y(r);
    const DynamicsPrediction pred = predict_dynamics(spec, Y, out.t);
    out.predicted_residual = pred.f_pred - Y;
    out.empirical_modes = spec.Q.transpose() * out.empirical_residual;
    out.predicted_modes = pred.mode_residuals;
    out.deviation = (out.empirical_residual - out.predicted_residual).norm() / out.predicted_residual.norm();

    const double lead = spec.eigenvalues.size() > 0 ? spec.eigenvalues(0) : 0.0;
    for (Eigen::Index i = 0; i < spec.eigenvalues.size(); ++i) {
        if (!(spec.eigenvalues(i) > 1e-12 * lead)) continue;
        const double dev = std::abs(out.empirical_modes(i) - out.predicted_modes(i)) / std::abs(out.predicted_modes(i));
        out.max_mode_deviation = std::max(out.max_mode_deviation, dev);
    }
    return out;
}

std::vector<BoundRow> bound_grid(std::span<const double> bs, std::span<const double> Ts, double a,
                                 std::size_t n_quad) {
    std::vector<BoundRow> rows;
    rows.reserve(bs.size() * Ts.size());
    for (double b : bs) {
        for (double T : Ts) {
            const auto eig = rank1_operator_eigen(MotherWavelet::morlet(a, b), T, 1.0, n_quad);
            BoundRow row{b, T, eig.lambda, morlet_bound(b, T), eig.relative_change, false};
            row.holds = row.lambda >= row.bound;
            rows.push_back(row);
        }
    }
    return rows;
}

}  // namespace wavkan
