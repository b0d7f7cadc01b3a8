#pragma once

#include <Eigen/Dense>

#include <cstddef>
#include <iosfwd>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "wavkan/network.hpp"

namespace wavkan {

/// Which parameters enter the kernel inner product. AllParams uses every
/// trainable parameter of the net; WeightsOnly restricts to the W entries.
enum class NtkScope { AllParams, WeightsOnly };

[[nodiscard]] std::string_view to_string(NtkScope scope) noexcept;
[[nodiscard]] NtkScope ntk_scope_from_string(std::string_view name);

struct NtkAssembly {
    Eigen::MatrixXd K;           // symmetrized
    double max_asymmetry = 0.0;  // max |K - K^T| before symmetrization
};

/// Empirical kernel K_rs = <df(x_r)/dtheta, df(x_s)/dtheta> over the scope's
/// parameters, symmetrized as (K + K^T) / 2. Throws Errc::NonScalarOutput.
[[nodiscard]] NtkAssembly assemble_ntk(const WavKanNet& net, const Matrix& X, NtkScope scope = NtkScope::AllParams);
[[nodiscard]] Eigen::MatrixXd ntk_matrix(const WavKanNet& net, const Matrix& X, NtkScope scope = NtkScope::AllParams);

/// K = Q diag(eigenvalues) Q^T with eigenvalues descending and each column of
/// Q signed so that its largest-magnitude entry is positive.
struct NtkSpectrum {
    Eigen::MatrixXd K;
    Eigen::VectorXd eigenvalues;
    Eigen::MatrixXd Q;
};

/// Throws Errc::ShapeMismatch for non-square input, Errc::DomainViolation if
/// K is not symmetric to 1e-10 relative, Errc::NonConvergence if the solver
/// stalls.
[[nodiscard]] NtkSpectrum eigendecompose(const Eigen::MatrixXd& K);

struct DynamicsPrediction {
    double t = 0.0;
    Eigen::VectorXd f_pred;
    Eigen::VectorXd mode_residuals;  // Q^T (f_pred - Y)
};

/// Linearized gradient-flow prediction df/dt = -K (f - Y) from zero initial
/// output: f(t) = Y - Q e^{-Lambda t} Q^T Y.
[[nodiscard]] DynamicsPrediction predict_dynamics(const NtkSpectrum& spec, const Eigen::VectorXd& Y, double t);

/// Same flow from an arbitrary starting output: f(t) = Y + Q e^{-Lambda t} Q^T (f0 - Y).
[[nodiscard]] DynamicsPrediction predict_dynamics_from(const NtkSpectrum& spec, const Eigen::VectorXd& Y,
                                                       const Eigen::VectorXd& f0, double t);

/// Lower bound (1/4) e^{-4 (b (x - T))^2} on the nonzero eigenvalue of the
/// rank-one Morlet kernel on [0, 1]. Requires S = 1, T in [0, 1], x in [0, 1];
/// throws Errc::DomainViolation otherwise.
[[nodiscard]] double morlet_bound(double b, double T, double x = 1.0, double S = 1.0);

struct RankOneEigen {
    double lambda = 0.0;             // Richardson-refined quadrature of int_0^1 psi_1^2
    double lambda_discrete = 0.0;    // leading eigenvalue of the discretized operator
    double second_eigenvalue = 0.0;  // next eigenvalue of the discretized operator
    double relative_change = 0.0;    // |lambda(2n) - lambda(n)| / lambda(2n)
    std::vector<double> nodes;
    std::vector<double> g_samples;    // leading eigenfunction at the nodes, unit 2-norm
    std::vector<double> psi_samples;  // psi_1 at the nodes
};

/// Nystrom discretization of the kernel psi_1(x) psi_1(y) on [0, 1], with
/// psi_1(x) = psi((x - T) / S) and composite Simpson weights on `n_quad`
/// nodes (rounded up to odd). Throws Errc::QuadratureTooCoarse if doubling
/// the interval count moves lambda by more than 1e-8 relative, and
/// Errc::DomainViolation if n_quad < 64.
[[nodiscard]] RankOneEigen rank1_operator_eigen(const MotherWavelet& wavelet, double T, double S,
                                                std::size_t n_quad = 257);

/// Composite Simpson nodes/weights on [lo, hi] with `points` (odd) nodes.
[[nodiscard]] std::pair<std::vector<double>, std::vector<double>> simpson_rule(double lo, double hi,
                                                                               std::size_t points);

struct DecayRow {
    double threshold = 0.0;
    /// 1-based index of the first eigenvalue below threshold * lambda_1;
    /// N + 1 when none falls below.
    std::size_t first_index_below = 0;
};

[[nodiscard]] std::vector<DecayRow> spectrum_decay_report(const Eigen::VectorXd& eigenvalues,
                                                          std::span<const double> thresholds);

/// "index,eigenvalue" CSV (1-based, descending) preceded by '#' comment lines.
void write_spectrum_csv(std::ostream& os, const Eigen::VectorXd& eigenvalues,
                        const std::vector<std::pair<std::string, std::string>>& header);

}  // namespace wavkan
