#include "wavkan/diffengine.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "wavkan/error.hpp"

namespace wavkan {

namespace {

void require_scalar(const WavKanNet& net) {
    if (net.output_dim() != 1)
        throw Error(Errc::NonScalarOutput,
                    "derivatives need a scalar-output net, got output width " + std::to_string(net.output_dim()));
}

void require_input(const WavKanNet& net, std::span<const double> x) {
    if (x.size() != net.input_dim())
        throw Error(Errc::DimensionMismatch,
                    "input has " + std::to_string(x.size()) + " entries, net expects " + std::to_string(net.input_dim()));
}

inline void wavelet_jet(const MotherWavelet& w, double u, int order, double* out) {
    switch (order) {
        case 0: out[0] = eval_jet<0>(w, u)[0]; break;
        case 1: {
            const auto j = eval_jet<1>(w, u);
            out[0] = j[0];
            out[1] = j[1];
            break;
        }
        case 2: {
            const auto j = eval_jet<2>(w, u);
            std::copy(j.begin(), j.end(), out);
            break;
        }
        default: {
            const auto j = eval_jet<3>(w, u);
            std::copy(j.begin(), j.end(), out);
            break;
        }
    }
}

}  // namespace

void JetEvaluator::run_forward(const WavKanNet& net, std::span<const double> x, std::size_t directions, int order,
                               bool keep_cache) {
    const std::size_t num_layers = net.num_layers();
    const std::size_t D = directions;
    layers_.resize(num_layers);

    auto& first = layers_[0];
    const std::size_t n0 = net.input_dim();
    first.in0.assign(x.begin(), x.end());
    first.in1.assign(D * n0, 0.0);
    first.in2.assign(D * n0, 0.0);
    for (std::size_t k = 0; k < D; ++k) first.in1[k * n0 + coords_[k]] = 1.0;

    const auto& wavelet = net.wavelet();
    double w[4] = {0.0, 0.0, 0.0, 0.0};
    for (std::size_t l = 0; l < num_layers; ++l) {
        const auto& layer = net.layer(l);
        const std::size_t m = layer.fan_out();
        const std::size_t n = layer.fan_in();
        auto& cache = layers_[l];
        if (keep_cache) cache.edge.resize(5 * m * n);

        const bool last = (l + 1 == num_layers);
        auto& next0 = last ? out0_ : layers_[l + 1].in0;
        auto& next1 = last ? out1_ : layers_[l + 1].in1;
        auto& next2 = last ? out2_ : layers_[l + 1].in2;
        next0.assign(m, 0.0);
        next1.assign(D * m, 0.0);
        next2.assign(D * m, 0.0);

        for (std::size_t i = 0; i < m; ++i) {
            for (std::size_t j = 0; j < n; ++j) {
                const std::size_t e = i * n + j;
                const double S = layer.S(i, j);
                const double Wij = layer.W(i, j);
                const double u = (cache.in0[j] - layer.T(i, j)) / S;
                wavelet_jet(wavelet, u, order, w);
                next0[i] += Wij * w[0];
                for (std::size_t k = 0; k < D; ++k) {
                    const double u1 = cache.in1[k * n + j] / S;
                    const double u2 = cache.in2[k * n + j] / S;
                    next1[k * m + i] += Wij * w[1] * u1;
                    next2[k * m + i] += Wij * (w[2] * u1 * u1 + w[1] * u2);
                }
                if (keep_cache) {
                    double* slot = &cache.edge[5 * e];
                    slot[0] = u;
                    slot[1] = w[0];
                    slot[2] = w[1];
                    slot[3] = w[2];
                    slot[4] = w[3];
                }
            }
        }
    }
}

namespace {

// Distinct coordinates referenced by the operator, in order of appearance.
std::vector<std::size_t> operator_coords(const LinearOperator& op, std::size_t input_dim) {
    std::vector<std::size_t> coords;
    for (const auto& term : op.terms) {
        if (term.coord >= input_dim)
            throw Error(Errc::DimensionMismatch, "operator references coordinate " + std::to_string(term.coord));
        if (std::find(coords.begin(), coords.end(), term.coord) == coords.end()) coords.push_back(term.coord);
    }
    return coords;
}

std::size_t slot_of(const std::vector<std::size_t>& coords, std::size_t coord) {
    return static_cast<std::size_t>(std::find(coords.begin(), coords.end(), coord) - coords.begin());
}

}  // namespace

double JetEvaluator::apply(const WavKanNet& net, std::span<const double> x, const LinearOperator& op) {
    require_scalar(net);
    require_input(net, x);
    coords_ = operator_coords(op, net.input_dim());
    const std::size_t D = coords_.size();
    run_forward(net, x, D, D > 0 ? 2 : 0, false);
    double value = op.value_coef * out0_[0];
    for (const auto& term : op.terms) {
        const std::size_t k = slot_of(coords_, term.coord);
        value += term.first * out1_[k] + term.second * out2_[k];
    }
    return value;
}

double JetEvaluator::prepare(const WavKanNet& net, std::span<const double> x, const LinearOperator& op) {
    require_scalar(net);
    require_input(net, x);
    coords_ = operator_coords(op, net.input_dim());
    const std::size_t D = coords_.size();
    const int fwd_order = D > 0 ? 2 : 0;
    run_forward(net, x, D, fwd_order + 1, true);
    double value = op.value_coef * out0_[0];
    for (const auto& term : op.terms) {
        const std::size_t k = slot_of(coords_, term.coord);
        value += term.first * out1_[k] + term.second * out2_[k];
    }
    return value;
}

double JetEvaluator::apply_with_grad(const WavKanNet& net, std::span<const double> x, const LinearOperator& op,
                                     double seed, std::span<double> full_grad) {
    const double value = prepare(net, x, op);
    accumulate(net, op, seed, full_grad);
    return value;
}

void JetEvaluator::accumulate(const WavKanNet& net, const LinearOperator& op, double seed,
                              std::span<double> full_grad) {
    if (full_grad.size() != net.num_total())
        throw Error(Errc::LayoutMismatch, "full gradient buffer has wrong length");
    const std::size_t D = coords_.size();
    adj0_.assign(1, seed * op.value_coef);
    adj1_.assign(D, 0.0);
    adj2_.assign(D, 0.0);
    for (const auto& term : op.terms) {
        const std::size_t k = slot_of(coords_, term.coord);
        adj1_[k] += seed * term.first;
        adj2_[k] += seed * term.second;
    }

    std::vector<std::size_t> offsets(net.num_layers(), 0);
    for (std::size_t l = 1; l < net.num_layers(); ++l) offsets[l] = offsets[l - 1] + 3 * net.layer(l - 1).W.size();

    for (std::size_t l = net.num_layers(); l-- > 0;) {
        const auto& layer = net.layer(l);
        const auto& cache = layers_[l];
        const std::size_t m = layer.fan_out();
        const std::size_t n = layer.fan_in();
        const std::size_t E = m * n;
        const bool need_input_adj = l > 0;
        if (need_input_adj) {
            nadj0_.assign(n, 0.0);
            nadj1_.assign(D * n, 0.0);
            nadj2_.assign(D * n, 0.0);
        }
        double* gW = full_grad.data() + offsets[l];
        double* gT = gW + E;
        double* gS = gT + E;

        for (std::size_t i = 0; i < m; ++i) {
            const double a0 = adj0_[i];
            for (std::size_t j = 0; j < n; ++j) {
                const std::size_t e = i * n + j;
                const double* slot = &cache.edge[5 * e];
                const double u = slot[0], w0 = slot[1], w1 = slot[2], w2 = slot[3], w3 = slot[4];
                const double Wij = layer.W(i, j);
                const double S = layer.S(i, j);

                double gw = a0 * w0;
                double ubar = Wij * a0 * w1;
                double sbar = 0.0;
                for (std::size_t k = 0; k < D; ++k) {
                    const double u1 = cache.in1[k * n + j] / S;
                    const double u2 = cache.in2[k * n + j] / S;
                    const double a1 = adj1_[k * m + i];
                    const double a2 = adj2_[k * m + i];
                    gw += a1 * w1 * u1 + a2 * (w2 * u1 * u1 + w1 * u2);
                    const double pb1 = Wij * a1;
                    const double pb2 = Wij * a2;
                    ubar += pb1 * w2 * u1 + pb2 * (w3 * u1 * u1 + w2 * u2);
                    const double u1bar = pb1 * w1 + 2.0 * pb2 * w2 * u1;
                    const double u2bar = pb2 * w1;
                    sbar += u1bar * u1 + u2bar * u2;
                    if (need_input_adj) {
                        nadj1_[k * n + j] += u1bar / S;
                        nadj2_[k * n + j] += u2bar / S;
                    }
                }
                gW[e] += gw;
                gT[e] -= ubar / S;
                gS[e] -= (ubar * u + sbar) / S;
                if (need_input_adj) nadj0_[j] += ubar / S;
            }
        }
        if (need_input_adj) {
            adj0_.swap(nadj0_);
            adj1_.swap(nadj1_);
            adj2_.swap(nadj2_);
        }
    }
}

InputDerivs JetEvaluator::input_derivs(const WavKanNet& net, std::span<const double> x, DerivWanted wanted) {
    require_scalar(net);
    require_input(net, x);
    const std::size_t n0 = net.input_dim();
    const bool any = wanted != DerivWanted::None;
    coords_.clear();
    if (any)
        for (std::size_t k = 0; k < n0; ++k) coords_.push_back(k);
    run_forward(net, x, coords_.size(), any ? 2 : 0, false);
    InputDerivs out;
    out.value = out0_[0];
    if (wants(wanted, DerivWanted::Jac)) out.jac.assign(out1_.begin(), out1_.end());
    if (wants(wanted, DerivWanted::HessDiag)) out.hess_diag.assign(out2_.begin(), out2_.end());
    return out;
}

std::vector<double> grad_params_full(const WavKanNet& net, std::span<const double> x) {
    JetEvaluator jets;
    std::vector<double> full(net.num_total(), 0.0);
    (void)jets.apply_with_grad(net, x, LinearOperator::identity(), 1.0, full);
    return full;
}

GradRecord grad_params(const WavKanNet& net, std::span<const double> x) {
    const auto full = grad_params_full(net, x);
    return GradRecord{to_trainable(param_layout(net), full)};
}

InputDerivs input_derivs(const WavKanNet& net, std::span<const double> x, DerivWanted wanted) {
    JetEvaluator jets;
    return jets.input_derivs(net, x, wanted);
}

std::vector<double> to_trainable(const ParamLayout& layout, std::span<const double> full) {
    if (full.size() != layout.full_size) throw Error(Errc::LayoutMismatch, "full-layout vector has wrong length");
    std::vector<double> out(layout.full_index.size());
    for (std::size_t k = 0; k < out.size(); ++k) out[k] = full[layout.full_index[k]];
    return out;
}

FdReport fd_check(const std::function<double(std::span<const double>)>& fn, std::span<const double> x,
                  std::span<const double> analytic, double h, FdKind kind) {
    if (analytic.size() != x.size()) throw Error(Errc::DimensionMismatch, "analytic vector must match x");
    FdReport report;
    report.analytic.assign(analytic.begin(), analytic.end());
    report.numeric.resize(x.size());
    std::vector<double> probe(x.begin(), x.end());
    const double centre = kind == FdKind::SecondDiagonal ? fn(probe) : 0.0;
    for (std::size_t k = 0; k < x.size(); ++k) {
        const double orig = probe[k];
        probe[k] = orig + h;
        const double fp = fn(probe);
        probe[k] = orig - h;
        const double fm = fn(probe);
        probe[k] = orig;
        report.numeric[k] = kind == FdKind::First ? (fp - fm) / (2.0 * h) : (fp - 2.0 * centre + fm) / (h * h);
        const double abs_err = std::abs(report.numeric[k] - analytic[k]);
        const double rel_err = abs_err / (1.0 + std::abs(analytic[k]));
        report.max_abs_error = std::max(report.max_abs_error, abs_err);
        if (rel_err > report.max_rel_error) {
            report.max_rel_error = rel_err;
            report.worst_index = k;
        }
    }
    return report;
}

}  // namespace wavkan
