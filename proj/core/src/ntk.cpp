#include "wavkan/ntk.hpp"

#include <algorithm>
#include <cmath>
#include <ostream>

#include "wavkan/artifacts.hpp"
#include "wavkan/diffengine.hpp"
#include "wavkan/error.hpp"
#include "wavkan/parallel.hpp"

namespace wavkan {

std::string_view to_string(NtkScope scope) noexcept {
    return scope == NtkScope::AllParams ? "all-params" : "weights-only";
}

NtkScope ntk_scope_from_string(std::string_view name) {
    if (name == "all-params") return NtkScope::AllParams;
    if (name == "weights-only") return NtkScope::WeightsOnly;
    throw Error(Errc::InvalidConfig, "unknown NTK scope '" + std::string(name) + "'");
}

NtkAssembly assemble_ntk(const WavKanNet& net, const Matrix& X, NtkScope scope) {
    if (net.output_dim() != 1) throw Error(Errc::NonScalarOutput, "NTK needs a scalar-output net");
    if (X.cols() != net.input_dim()) throw Error(Errc::DimensionMismatch, "data width does not match the net input");

    // Full-layout indices that take part in the inner product.
    const ParamLayout layout = param_layout(net);
    std::vector<std::size_t> index;
    for (std::size_t k = 0; k < layout.full_index.size(); ++k)
        if (scope == NtkScope::AllParams || layout.block[k] == ParamBlock::W) index.push_back(layout.full_index[k]);

    const std::size_t N = X.rows();
    const std::size_t P = index.size();
    Eigen::MatrixXd G(N, P);
    const std::size_t workers = default_workers();
    std::vector<JetEvaluator> jets(workers);
    parallel_for(
        N,
        [&](std::size_t r, std::size_t w) {
            std::vector<double> full(net.num_total(), 0.0);
            (void)jets[w].apply_with_grad(net, X.row(r), LinearOperator::identity(), 1.0, full);
            for (std::size_t p = 0; p < P; ++p) G(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(p)) = full[index[p]];
        },
        workers);

    NtkAssembly out;
    out.K.resize(N, N);
    parallel_for(
        N,
        [&](std::size_t r, std::size_t) {
            for (std::size_t s = 0; s < N; ++s) {
                double sum = 0.0;
                for (std::size_t p = 0; p < P; ++p)
                    sum += G(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(p)) *
                           G(static_cast<Eigen::Index>(s), static_cast<Eigen::Index>(p));
                out.K(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(s)) = sum;
            }
        },
        workers);
    out.max_asymmetry = N == 0 ? 0.0 : (out.K - out.K.transpose()).cwiseAbs().maxCoeff();
    out.K = 0.5 * (out.K + out.K.transpose());
    return out;
}

Eigen::MatrixXd ntk_matrix(const WavKanNet& net, const Matrix& X, NtkScope scope) {
    return assemble_ntk(net, X, scope).K;
}

NtkSpectrum eigendecompose(const Eigen::MatrixXd& K) {
    if (K.rows() != K.cols()) throw Error(Errc::ShapeMismatch, "kernel matrix must be square");
    const Eigen::Index N = K.rows();
    NtkSpectrum spec;
    spec.K = K;
    if (N == 0) return spec;
    const double scale = std::max(1.0, K.cwiseAbs().maxCoeff());
    if ((K - K.transpose()).cwiseAbs().maxCoeff() > 1e-10 * scale)
        throw Error(Errc::DomainViolation, "kernel matrix is not symmetric");

    // Householder tridiagonalization followed by implicit symmetric QR.
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(K, Eigen::ComputeEigenvectors);
    if (solver.info() != Eigen::Success)
        throw Error(Errc::NonConvergence, "symmetric eigensolver did not converge");

    spec.eigenvalues = solver.eigenvalues().reverse();
    spec.Q = solver.eigenvectors().rowwise().reverse();
    for (Eigen::Index c = 0; c < N; ++c) {
        Eigen::Index arg = 0;
        spec.Q.col(c).cwiseAbs().maxCoeff(&arg);
        if (spec.Q(arg, c) < 0.0) spec.Q.col(c) *= -1.0;
    }
    return spec;
}

DynamicsPrediction predict_dynamics_from(const NtkSpectrum& spec, const Eigen::VectorXd& Y,
                                         const Eigen::VectorXd& f0, double t) {
    if (!(t >= 0.0)) throw Error(Errc::DomainViolation, "training time must be non-negative");
    if (Y.size() != spec.eigenvalues.size() || f0.size() != Y.size())
        throw Error(Errc::DimensionMismatch, "targets must match the kernel size");
    const Eigen::VectorXd decay = (-spec.eigenvalues.array() * t).exp().matrix();
    DynamicsPrediction out;
    out.t = t;
    out.mode_residuals = decay.cwiseProduct(spec.Q.transpose() * (f0 - Y));
    out.f_pred = Y + spec.Q * out.mode_residuals;
    return out;
}

DynamicsPrediction predict_dynamics(const NtkSpectrum& spec, const Eigen::VectorXd& Y, double t) {
    return predict_dynamics_from(spec, Y, Eigen::VectorXd::Zero(Y.size()), t);
}

double morlet_bound(double b, double T, double x, double S) {
    if (S != 1.0) throw Error(Errc::DomainViolation, "the Morlet eigenvalue bound holds for S = 1 only");
    if (!(T >= 0.0 && T <= 1.0)) throw Error(Errc::DomainViolation, "T must lie in [0, 1]");
    if (!(x >= 0.0 && x <= 1.0)) throw Error(Errc::DomainViolation, "x must lie in [0, 1]");
    const double arg = b * (x - T);
    return 0.25 * std::exp(-4.0 * arg * arg);
}

std::pair<std::vector<double>, std::vector<double>> simpson_rule(double lo, double hi, std::size_t points) {
    if (points < 3 || points % 2 == 0) throw Error(Errc::DomainViolation, "Simpson rule needs an odd node count >= 3");
    const std::size_t intervals = points - 1;
    const double h = (hi - lo) / static_cast<double>(intervals);
    std::vector<double> nodes(points), weights(points);
    for (std::size_t i = 0; i < points; ++i) {
        nodes[i] = i == intervals ? hi : lo + h * static_cast<double>(i);
        const double c = (i == 0 || i == intervals) ? 1.0 : (i % 2 == 1 ? 4.0 : 2.0);
        weights[i] = c * h / 3.0;
    }
    return {std::move(nodes), std::move(weights)};
}

namespace {

double simpson_energy(const MotherWavelet& wavelet, double T, double S, std::size_t points) {
    const auto [nodes, weights] = simpson_rule(0.0, 1.0, points);
    double sum = 0.0;
    for (std::size_t i = 0; i < points; ++i) {
        const double psi = scaled_shifted_eval(wavelet, nodes[i], T, S);
        sum += weights[i] * psi * psi;
    }
    return sum;
}

}  // namespace

RankOneEigen rank1_operator_eigen(const MotherWavelet& wavelet, double T, double S, std::size_t n_quad) {
    if (n_quad < 64) throw Error(Errc::DomainViolation, "rank-one eigenproblem needs n_quad >= 64");
    if (n_quad % 2 == 0) ++n_quad;

    const auto [nodes, weights] = simpson_rule(0.0, 1.0, n_quad);
    const auto n = static_cast<Eigen::Index>(n_quad);
    Eigen::VectorXd psi(n), root_w(n);
    for (Eigen::Index i = 0; i < n; ++i) {
        psi(i) = scaled_shifted_eval(wavelet, nodes[static_cast<std::size_t>(i)], T, S);
        root_w(i) = std::sqrt(weights[static_cast<std::size_t>(i)]);
    }

    // Symmetrized Nystrom matrix W^{1/2} K W^{1/2}; eigenvectors map back via W^{-1/2}.
    const Eigen::VectorXd v = root_w.cwiseProduct(psi);
    const Eigen::MatrixXd B = v * v.transpose();
    const NtkSpectrum spec = eigendecompose(B);

    RankOneEigen out;
    out.lambda_discrete = spec.eigenvalues(0);
    out.second_eigenvalue = n > 1 ? spec.eigenvalues(1) : 0.0;
    Eigen::VectorXd g = spec.Q.col(0).cwiseQuotient(root_w);
    g.normalize();
    if (g.dot(psi) < 0.0) g = -g;
    out.nodes = nodes;
    out.g_samples.assign(g.data(), g.data() + n);
    out.psi_samples.assign(psi.data(), psi.data() + n);

    const double coarse = v.squaredNorm();
    const double fine = simpson_energy(wavelet, T, S, 2 * (n_quad - 1) + 1);
    out.relative_change = std::abs(fine - coarse) / std::abs(fine);
    if (!(out.relative_change <= 1e-8))
        throw Error(Errc::QuadratureTooCoarse,
                    "doubling the quadrature moved lambda by " + format_double(out.relative_change) + " relative");
    out.lambda = fine + (fine - coarse) / 15.0;
    return out;
}

std::vector<DecayRow> spectrum_decay_report(const Eigen::VectorXd& eigenvalues, std::span<const double> thresholds) {
    std::vector<DecayRow> rows;
    rows.reserve(thresholds.size());
    const auto N = static_cast<std::size_t>(eigenvalues.size());
    const double lead = N > 0 ? eigenvalues(0) : 0.0;
    for (double threshold : thresholds) {
        DecayRow row{threshold, N + 1};
        for (std::size_t i = 0; i < N; ++i) {
            if (eigenvalues(static_cast<Eigen::Index>(i)) < threshold * lead) {
                row.first_index_below = i + 1;
                break;
            }
        }
        rows.push_back(row);
    }
    return rows;
}

void write_spectrum_csv(std::ostream& os, const Eigen::VectorXd& eigenvalues,
                        const std::vector<std::pair<std::string, std::string>>& header) {
    write_comment_header(os, header);
    os << "index,eigenvalue\n";
    for (Eigen::Index i = 0; i < eigenvalues.size(); ++i) os << (i + 1) << ',' << format_double(eigenvalues(i)) << '\n';
}

}  // namespace wavkan
