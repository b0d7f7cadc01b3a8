#pragma once

#include <cstddef>
#include <functional>
#include <span>
#include <vector>

#include "wavkan/network.hpp"

namespace wavkan {

// Exact derivatives of a scalar-output Wav-KAN.
//
// The forward pass carries, per node, the triple (value, d/dx_k, d^2/dx_k^2)
// for each requested input direction k, and caches per-edge
// u_ij = (x_j - T_ij) / S_ij together with psi(u) and its derivatives. A hand
// derived reverse sweep over the same cache yields parameter gradients of any
// linear combination of those quantities.
//
// Second-order propagation is diagonal only: d^2/dx_k^2 is exact, mixed
// partials d^2/dx_j dx_k are never formed. Every PDE residual in the pinn
// module uses pure second derivatives, so this suffices there.

/// Gradient of the scalar output w.r.t. the trainable parameters (ParamVector layout).
struct GradRecord {
    std::vector<double> param_grad;
};

struct InputDerivs {
    double value = 0.0;
    std::vector<double> jac;        // df/dx_k
    std::vector<double> hess_diag;  // d^2f/dx_k^2
};

enum class DerivWanted : unsigned { None = 0, Jac = 1, HessDiag = 2, Both = 3 };

[[nodiscard]] constexpr bool wants(DerivWanted set, DerivWanted bit) noexcept {
    return (static_cast<unsigned>(set) & static_cast<unsigned>(bit)) != 0;
}

/// c_first * d/dx_coord + c_second * d^2/dx_coord^2
struct DirectionalTerm {
    std::size_t coord = 0;
    double first = 0.0;
    double second = 0.0;
};

/// L[f](x) = value_coef * f(x) + sum over terms. Covers every residual and
/// boundary operator of the benchmark PDEs.
struct LinearOperator {
    double value_coef = 0.0;
    std::vector<DirectionalTerm> terms;

    [[nodiscard]] static LinearOperator identity() { return {1.0, {}}; }
};

/// Reusable scratch space for jet propagation. One instance per thread; the
/// net itself is only read.
class JetEvaluator {
public:
    /// L[f](x).
    [[nodiscard]] double apply(const WavKanNet& net, std::span<const double> x, const LinearOperator& op);

    /// Returns L[f](x) and adds seed * dL[f](x)/dtheta into `full_grad`, which
    /// is indexed in the full layout (every W, T, S of every layer, see
    /// ParamLayout::full_index), trainable or not.
    double apply_with_grad(const WavKanNet& net, std::span<const double> x, const LinearOperator& op, double seed,
                           std::span<double> full_grad);

    /// Forward pass that keeps the cache for a later accumulate(); returns L[f](x).
    double prepare(const WavKanNet& net, std::span<const double> x, const LinearOperator& op);
    /// Reverse sweep over the cache of the last prepare() with the same net
    /// and operator: adds seed * dL[f](x)/dtheta into `full_grad`.
    void accumulate(const WavKanNet& net, const LinearOperator& op, double seed, std::span<double> full_grad);

    /// Value plus all n0 first and pure second input derivatives.
    [[nodiscard]] InputDerivs input_derivs(const WavKanNet& net, std::span<const double> x, DerivWanted wanted);

private:
    struct LayerCache {
        std::vector<double> in0;
        std::vector<double> in1;   // [k * n + j]
        std::vector<double> in2;   // [k * n + j]
        std::vector<double> edge;  // 5 per edge: u, psi, psi', psi'', psi'''
    };

    void run_forward(const WavKanNet& net, std::span<const double> x, std::size_t directions, int fwd_order,
                     bool keep_cache);

    std::vector<std::size_t> coords_;
    std::vector<LayerCache> layers_;
    std::vector<double> out0_, out1_, out2_;
    std::vector<double> adj0_, adj1_, adj2_, nadj0_, nadj1_, nadj2_;
};

/// Exact gradient of forward(net, x) w.r.t. the trainable parameters.
/// Throws Errc::NonScalarOutput unless the net has one output.
[[nodiscard]] GradRecord grad_params(const WavKanNet& net, std::span<const double> x);

/// Same as grad_params but in the full (W,T,S for every layer) layout.
[[nodiscard]] std::vector<double> grad_params_full(const WavKanNet& net, std::span<const double> x);

[[nodiscard]] InputDerivs input_derivs(const WavKanNet& net, std::span<const double> x,
                                       DerivWanted wanted = DerivWanted::Both);

/// Gather the trainable entries of a full-layout vector.
[[nodiscard]] std::vector<double> to_trainable(const ParamLayout& layout, std::span<const double> full);

enum class FdKind { First, SecondDiagonal };

struct FdReport {
    std::vector<double> analytic;
    std::vector<double> numeric;
    /// max_k |analytic_k - numeric_k| / (1 + |analytic_k|)
    double max_rel_error = 0.0;
    double max_abs_error = 0.0;
    std::size_t worst_index = 0;
};

/// Central-difference comparison of `analytic` against fn around x: first
/// derivatives (f(x+h) - f(x-h)) / 2h, or pure second derivatives
/// (f(x+h) - 2f(x) + f(x-h)) / h^2, one entry per coordinate of x.
[[nodiscard]] FdReport fd_check(const std::function<double(std::span<const double>)>& fn, std::span<const double> x,
                                std::span<const double> analytic, double h, FdKind kind = FdKind::First);

}  // namespace wavkan
