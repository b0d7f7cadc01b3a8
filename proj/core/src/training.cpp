#include "wavkan/training.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <limits>
#include <numeric>
#include <optional>
#include <ostream>
#include <sstream>

#include "wavkan/diffengine.hpp"
#include "wavkan/error.hpp"
#include "wavkan/parallel.hpp"

namespace wavkan {

void TrainConfig::validate() const {
    if (epochs < 1) throw Error(Errc::InvalidConfig, "epochs must be >= 1");
    if (record_every < 1) throw Error(Errc::InvalidConfig, "record_every must be >= 1");
    if (const auto* adam = std::get_if<AdamConfig>(&optimizer)) {
        if (!(adam->lr > 0.0)) throw Error(Errc::InvalidConfig, "Adam lr must be > 0");
        if (!(adam->beta1 >= 0.0 && adam->beta1 < 1.0) || !(adam->beta2 >= 0.0 && adam->beta2 < 1.0))
            throw Error(Errc::InvalidConfig, "Adam betas must lie in [0, 1)");
        if (!(adam->eps > 0.0)) throw Error(Errc::InvalidConfig, "Adam eps must be > 0");
    } else {
        const auto& lbfgs = std::get<LbfgsConfig>(optimizer);
        if (lbfgs.history_size < 1) throw Error(Errc::InvalidConfig, "L-BFGS history_size must be >= 1");
        if (lbfgs.max_linesearch < 1) throw Error(Errc::InvalidConfig, "L-BFGS max_linesearch must be >= 1");
        if (!(lbfgs.c1 > 0.0 && lbfgs.c1 < lbfgs.c2 && lbfgs.c2 < 1.0))
            throw Error(Errc::InvalidConfig, "L-BFGS needs 0 < c1 < c2 < 1");
        if (!(lbfgs.initial_step > 0.0)) throw Error(Errc::InvalidConfig, "L-BFGS initial_step must be > 0");
    }
}

// ---------------------------------------------------------------------------
// Least squares

namespace {

constexpr std::size_t kBlock = 32;

void check_data(const WavKanNet& net, const Matrix& X, std::size_t num_targets) {
    if (X.rows() == 0) throw Error(Errc::EmptyData, "least-squares loss needs at least one data point");
    if (X.rows() != num_targets) throw Error(Errc::DimensionMismatch, "X and Y must have the same number of rows");
    if (X.cols() != net.input_dim()) throw Error(Errc::DimensionMismatch, "X width does not match the net input");
    if (net.output_dim() != 1) throw Error(Errc::NonScalarOutput, "least-squares loss expects a scalar output");
}

}  // namespace

MseObjective::MseObjective(Matrix X, std::vector<double> Y) : X_(std::move(X)), Y_(std::move(Y)) {
    if (X_.rows() == 0) throw Error(Errc::EmptyData, "least-squares loss needs at least one data point");
    if (X_.rows() != Y_.size()) throw Error(Errc::DimensionMismatch, "X and Y must have the same number of rows");
}

LossEval MseObjective::evaluate(const WavKanNet& net, std::span<double> grad) {
    check_data(net, X_, Y_.size());
    const std::size_t N = X_.rows();
    const std::size_t num_blocks = (N + kBlock - 1) / kBlock;
    const bool want_grad = !grad.empty();
    const std::size_t P = net.num_total();
    const double inv_n = 1.0 / static_cast<double>(N);

    std::vector<double> block_loss(num_blocks, 0.0);
    std::vector<std::vector<double>> block_grad(want_grad ? num_blocks : 0);
    const std::size_t workers = default_workers();
    std::vector<JetEvaluator> jets(workers);
    const LinearOperator id = LinearOperator::identity();

    parallel_for(
        num_blocks,
        [&](std::size_t b, std::size_t w) {
            const std::size_t begin = b * kBlock;
            const std::size_t end = std::min(N, begin + kBlock);
            double sum = 0.0;
            if (want_grad) block_grad[b].assign(P, 0.0);
            for (std::size_t r = begin; r < end; ++r) {
                if (want_grad) {
                    const double f = jets[w].prepare(net, X_.row(r), id);
                    const double diff = f - Y_[r];
                    sum += diff * diff;
                    jets[w].accumulate(net, id, 2.0 * diff * inv_n, block_grad[b]);
                } else {
                    const double diff = jets[w].apply(net, X_.row(r), id) - Y_[r];
                    sum += diff * diff;
                }
            }
            block_loss[b] = sum;
        },
        workers);

    LossEval out;
    for (double v : block_loss) out.total += v;
    out.total *= inv_n;
    if (want_grad) {
        std::vector<double> full(P, 0.0);
        for (const auto& g : block_grad)
            for (std::size_t p = 0; p < P; ++p) full[p] += g[p];
        const auto trainable = to_trainable(param_layout(net), full);
        if (trainable.size() != grad.size()) throw Error(Errc::LayoutMismatch, "gradient buffer has wrong length");
        std::copy(trainable.begin(), trainable.end(), grad.begin());
    }
    return out;
}

double mse_loss(const WavKanNet& net, const Matrix& X, std::span<const double> Y) {
    check_data(net, X, Y.size());
    MseObjective objective(X, std::vector<double>(Y.begin(), Y.end()));
    return objective.evaluate(net, {}).total;
}

// ---------------------------------------------------------------------------
// Adam

namespace {

void project_tagged_scales(std::span<double> params, std::span<const ParamBlock> blocks) {
    if (blocks.empty()) return;
    for (std::size_t k = 0; k < params.size(); ++k)
        if (blocks[k] == ParamBlock::S) params[k] = project_scale(params[k]);
}

}  // namespace

void adam_step(std::span<double> params, std::span<const double> grad, AdamState& state, const AdamConfig& cfg,
               std::span<const ParamBlock> blocks) {
    if (grad.size() != params.size() || (!blocks.empty() && blocks.size() != params.size()))
        throw Error(Errc::ShapeMismatch, "Adam parameter, gradient and block sizes must match");
    if (state.m.empty() && state.v.empty()) {
        state.m.assign(params.size(), 0.0);
        state.v.assign(params.size(), 0.0);
    }
    if (state.m.size() != params.size() || state.v.size() != params.size())
        throw Error(Errc::ShapeMismatch, "Adam state does not match the parameter count");

    ++state.step;
    const double t = static_cast<double>(state.step);
    const double bias1 = 1.0 - std::pow(cfg.beta1, t);
    const double bias2 = 1.0 - std::pow(cfg.beta2, t);
    for (std::size_t k = 0; k < params.size(); ++k) {
        const double g = grad[k];
        state.m[k] = cfg.beta1 * state.m[k] + (1.0 - cfg.beta1) * g;
        state.v[k] = cfg.beta2 * state.v[k] + (1.0 - cfg.beta2) * g * g;
        const double m_hat = state.m[k] / bias1;
        const double v_hat = state.v[k] / bias2;
        params[k] -= cfg.lr * m_hat / (std::sqrt(v_hat) + cfg.eps);
    }
    project_tagged_scales(params, blocks);
}

// ---------------------------------------------------------------------------
// L-BFGS

namespace {

double dot(std::span<const double> a, std::span<const double> b) {
    double s = 0.0;
    for (std::size_t k = 0; k < a.size(); ++k) s += a[k] * b[k];
    return s;
}

double max_abs(std::span<const double> a) {
    double m = 0.0;
    for (double v : a) m = std::max(m, std::abs(v));
    return m;
}

// Minimizer of the cubic through (x1, f1, g1), (x2, f2, g2), clamped to bounds.
double cubic_interpolate(double x1, double f1, double g1, double x2, double f2, double g2, double lo, double hi) {
    const double d1 = g1 + g2 - 3.0 * (f1 - f2) / (x1 - x2);
    const double d2_sq = d1 * d1 - g1 * g2;
    if (d2_sq >= 0.0) {
        const double d2 = std::sqrt(d2_sq);
        double pos;
        if (x1 <= x2)
            pos = x2 - (x2 - x1) * ((g2 + d2 - d1) / (g2 - g1 + 2.0 * d2));
        else
            pos = x1 - (x1 - x2) * ((g1 + d2 - d1) / (g1 - g2 + 2.0 * d2));
        if (std::isfinite(pos)) return std::clamp(pos, lo, hi);
    }
    return 0.5 * (lo + hi);
}

struct TrialPoint {
    double alpha = 0.0;
    double f = 0.0;
    double dphi = 0.0;
    std::vector<double> x;
    std::vector<double> g;
};

class LineSearch {
public:
    LineSearch(std::span<const double> x0, double f0, std::span<const double> g0, std::span<const double> d,
               const LossGradFn& fn, std::span<const ParamBlock> blocks, LbfgsState& state)
        : x0_(x0), f0_(f0), d_(d), fn_(fn), blocks_(blocks), state_(state), dphi0_(dot(g0, d)) {}

    [[nodiscard]] double dphi0() const noexcept { return dphi0_; }

    TrialPoint evaluate(double alpha) {
        TrialPoint p;
        p.alpha = alpha;
        p.x.resize(x0_.size());
        for (std::size_t k = 0; k < x0_.size(); ++k) p.x[k] = x0_[k] + alpha * d_[k];
        project_tagged_scales(p.x, blocks_);
        p.g.assign(x0_.size(), 0.0);
        p.f = fn_(p.x, p.g);
        p.dphi = dot(p.g, d_);
        ++state_.evaluations;
        ++used_;
        return p;
    }

    [[nodiscard]] bool armijo(const TrialPoint& p, double c1) const {
        return std::isfinite(p.f) && p.f <= f0_ + c1 * p.alpha * dphi0_;
    }

    [[nodiscard]] std::size_t used() const noexcept { return used_; }

    // Strong Wolfe search (bracketing + zoom with cubic interpolation).
    std::optional<TrialPoint> strong_wolfe(double alpha, const LbfgsConfig& cfg) {
        TrialPoint prev{0.0, f0_, dphi0_, {}, {}};
        std::optional<TrialPoint> best_armijo;
        auto remember = [&](const TrialPoint& p) {
            if (armijo(p, cfg.c1) && (!best_armijo || p.f < best_armijo->f)) best_armijo = p;
        };
        bool first = true;
        while (used_ < cfg.max_linesearch) {
            TrialPoint cur = evaluate(alpha);
            remember(cur);
            if (!armijo(cur, cfg.c1) || (!first && cur.f >= prev.f)) return zoom(prev, cur, cfg, best_armijo);
            if (std::abs(cur.dphi) <= -cfg.c2 * dphi0_) return cur;
            if (cur.dphi >= 0.0) return zoom(cur, prev, cfg, best_armijo);
            const double lo = alpha + 0.01 * (alpha - prev.alpha);
            const double hi = alpha * 10.0;
            const double next = cubic_interpolate(prev.alpha, prev.f, prev.dphi, cur.alpha, cur.f, cur.dphi, lo, hi);
            prev = std::move(cur);
            alpha = next;
            first = false;
        }
        return best_armijo;
    }

private:
    std::optional<TrialPoint> zoom(TrialPoint lo, TrialPoint hi, const LbfgsConfig& cfg,
                                   std::optional<TrialPoint>& best_armijo) {
        while (used_ < cfg.max_linesearch) {
            const double a = std::min(lo.alpha, hi.alpha);
            const double b = std::max(lo.alpha, hi.alpha);
            const double width = b - a;
            if (width <= 1e-14 * std::max(1.0, b)) break;
            double alpha = std::isfinite(hi.f)
                               ? cubic_interpolate(lo.alpha, lo.f, lo.dphi, hi.alpha, hi.f, hi.dphi, a, b)
                               : 0.5 * (a + b);
            if (std::min(alpha - a, b - alpha) < 0.1 * width) alpha = 0.5 * (a + b);
            TrialPoint cur = evaluate(alpha);
            if (armijo(cur, cfg.c1) && (!best_armijo || cur.f < best_armijo->f)) best_armijo = cur;
            if (!armijo(cur, cfg.c1) || cur.f >= lo.f) {
                hi = std::move(cur);
            } else {
                if (std::abs(cur.dphi) <= -cfg.c2 * dphi0_) return cur;
                if (cur.dphi * (hi.alpha - lo.alpha) >= 0.0) hi = lo;
                lo = std::move(cur);
            }
        }
        return best_armijo;
    }

    std::span<const double> x0_;
    double f0_;
    std::span<const double> d_;
    const LossGradFn& fn_;
    std::span<const ParamBlock> blocks_;
    LbfgsState& state_;
    double dphi0_;
    std::size_t used_ = 0;
};

std::vector<double> two_loop_direction(const LbfgsState& state, std::span<const double> g) {
    std::vector<double> q(g.begin(), g.end());
    const std::size_t h = state.s_history.size();
    std::vector<double> alpha(h);
    for (std::size_t i = h; i-- > 0;) {
        alpha[i] = state.rho[i] * dot(state.s_history[i], q);
        for (std::size_t k = 0; k < q.size(); ++k) q[k] -= alpha[i] * state.y_history[i][k];
    }
    if (h > 0) {
        const auto& s = state.s_history.back();
        const auto& y = state.y_history.back();
        const double gamma = dot(s, y) / dot(y, y);
        for (double& v : q) v *= gamma;
    }
    for (std::size_t i = 0; i < h; ++i) {
        const double beta = state.rho[i] * dot(state.y_history[i], q);
        for (std::size_t k = 0; k < q.size(); ++k) q[k] += state.s_history[i][k] * (alpha[i] - beta);
    }
    for (double& v : q) v = -v;
    return q;
}

}  // namespace

LbfgsStepResult lbfgs_step(std::span<double> params, const LossGradFn& fn, LbfgsState& state, const LbfgsConfig& cfg,
                           std::span<const ParamBlock> blocks) {
    if (!blocks.empty() && blocks.size() != params.size())
        throw Error(Errc::ShapeMismatch, "block tags must match the parameter count");
    const std::size_t n = params.size();
    if (!state.initialized || state.grad.size() != n) {
        state.grad.assign(n, 0.0);
        state.loss = fn(params, state.grad);
        ++state.evaluations;
        state.initialized = true;
        state.s_history.clear();
        state.y_history.clear();
        state.rho.clear();
    }
    ++state.iterations;
    LbfgsStepResult result{state.loss, 0.0, false, false};
    if (max_abs(state.grad) == 0.0) return result;

    std::vector<double> d = two_loop_direction(state, state.grad);
    if (!(dot(d, state.grad) < 0.0)) {
        state.s_history.clear();
        state.y_history.clear();
        state.rho.clear();
        d.assign(state.grad.begin(), state.grad.end());
        for (double& v : d) v = -v;
    }

    const std::vector<double> x0(params.begin(), params.end());
    double alpha0 = cfg.initial_step;
    if (state.s_history.empty()) {
        double l1 = 0.0;
        for (double v : state.grad) l1 += std::abs(v);
        alpha0 = std::min(1.0, 1.0 / l1) * cfg.initial_step;
    }

    std::optional<TrialPoint> accepted;
    {
        LineSearch search(x0, state.loss, state.grad, d, fn, blocks, state);
        accepted = search.strong_wolfe(alpha0, cfg);
    }
    if (!accepted) {
        // Steepest descent with Armijo backtracking.
        result.used_fallback = true;
        ++state.steepest_fallbacks;
        std::vector<double> sd(state.grad.begin(), state.grad.end());
        for (double& v : sd) v = -v;
        double gnorm = std::sqrt(dot(sd, sd));
        LineSearch search(x0, state.loss, state.grad, sd, fn, blocks, state);
        double alpha = cfg.initial_step / std::max(1.0, gnorm);
        for (std::size_t trial = 0; trial < cfg.max_linesearch; ++trial, alpha *= 0.5) {
            TrialPoint p = search.evaluate(alpha);
            if (search.armijo(p, cfg.c1)) {
                accepted = std::move(p);
                break;
            }
        }
        state.s_history.clear();
        state.y_history.clear();
        state.rho.clear();
        if (!accepted)
            throw Error(Errc::LineSearchFailed,
                        "no acceptable step after " + std::to_string(cfg.max_linesearch) + " trials");
        d = std::move(sd);
    }

    std::vector<double> s(n), y(n);
    for (std::size_t k = 0; k < n; ++k) {
        s[k] = accepted->x[k] - x0[k];
        y[k] = accepted->g[k] - state.grad[k];
    }
    const double sy = dot(s, y);
    if (sy > 1e-10 * std::max(1e-300, dot(y, y)) && sy > 0.0) {
        if (state.s_history.size() == cfg.history_size) {
            state.s_history.erase(state.s_history.begin());
            state.y_history.erase(state.y_history.begin());
            state.rho.erase(state.rho.begin());
        }
        state.s_history.push_back(std::move(s));
        state.y_history.push_back(std::move(y));
        state.rho.push_back(1.0 / sy);
    }

    std::copy(accepted->x.begin(), accepted->x.end(), params.begin());
    state.loss = accepted->f;
    state.grad = std::move(accepted->g);
    result.loss = state.loss;
    result.step_length = accepted->alpha;
    result.moved = true;
    return result;
}

// ---------------------------------------------------------------------------
// Training loop

namespace {

void check_finite(const LossEval& eval, std::size_t epoch) {
    if (!std::isfinite(eval.total))
        throw Error(Errc::NonFiniteLoss, "loss became non-finite at epoch " + std::to_string(epoch));
}

bool should_record(std::size_t epoch, const TrainConfig& cfg) {
    return epoch % cfg.record_every == 0 || epoch == cfg.epochs;
}

std::vector<ParamBlock> trainable_blocks(const WavKanNet& net) { return param_layout(net).block; }

}  // namespace

TrainReport train(WavKanNet& net, Objective& objective, const TrainConfig& cfg) {
    cfg.validate();
    const auto start = std::chrono::steady_clock::now();
    TrainReport report;
    report.seed = cfg.seed;
    report.config = cfg;
    report.component_names = objective.component_names();

    const std::vector<ParamBlock> blocks = trainable_blocks(net);
    std::vector<double> params = flatten(net).values;
    std::vector<double> grad(params.size(), 0.0);

    auto evaluate = [&](std::span<const double> x, std::span<double> g) {
        unflatten(net, x);
        ++report.loss_evaluations;
        return objective.evaluate(net, g);
    };

    if (const auto* adam = std::get_if<AdamConfig>(&cfg.optimizer)) {
        AdamState state;
        for (std::size_t epoch = 0; epoch < cfg.epochs; ++epoch) {
            const LossEval eval = evaluate(params, grad);
            check_finite(eval, epoch);
            if (epoch > 0 && should_record(epoch, cfg)) report.loss_history.push_back({epoch, eval.total, eval.components});
            adam_step(params, grad, state, *adam, blocks);
        }
        const LossEval last = evaluate(params, {});
        check_finite(last, cfg.epochs);
        report.loss_history.push_back({cfg.epochs, last.total, last.components});
    } else {
        const auto& lbfgs = std::get<LbfgsConfig>(cfg.optimizer);
        LbfgsState state;
        std::vector<double> last_components;
        const LossGradFn fn = [&](std::span<const double> x, std::span<double> g) {
            const LossEval eval = evaluate(x, g);
            last_components = eval.components;
            return std::isfinite(eval.total) ? eval.total : std::numeric_limits<double>::infinity();
        };
        for (std::size_t epoch = 1; epoch <= cfg.epochs; ++epoch) {
            (void)lbfgs_step(params, fn, state, lbfgs, blocks);
            if (!std::isfinite(state.loss))
                throw Error(Errc::NonFiniteLoss, "loss became non-finite at epoch " + std::to_string(epoch));
            if (should_record(epoch, cfg)) {
                unflatten(net, params);
                const LossEval eval = objective.evaluate(net, {});
                check_finite(eval, epoch);
                report.loss_history.push_back({epoch, eval.total, eval.components});
            }
        }
    }

    unflatten(net, params);
    report.final_params = flatten(net);
    report.wall_time = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    return report;
}

TrainReport train(WavKanNet& net, const Matrix& X, std::span<const double> Y, const TrainConfig& cfg) {
    check_data(net, X, Y.size());
    MseObjective objective(X, std::vector<double>(Y.begin(), Y.end()));
    return train(net, objective, cfg);
}

std::string describe(const OptimizerConfig& optimizer) {
    std::ostringstream os;
    os.precision(17);
    if (const auto* adam = std::get_if<AdamConfig>(&optimizer)) {
        os << "adam(lr=" << adam->lr << ",beta1=" << adam->beta1 << ",beta2=" << adam->beta2 << ",eps=" << adam->eps
           << ')';
    } else {
        const auto& l = std::get<LbfgsConfig>(optimizer);
        os << "lbfgs(history_size=" << l.history_size << ",max_linesearch=" << l.max_linesearch << ",c1=" << l.c1
           << ",c2=" << l.c2 << ",initial_step=" << l.initial_step << ')';
    }
    return os.str();
}

HeaderFields describe(const TrainConfig& cfg) {
    return {{"optimizer", describe(cfg.optimizer)},
            {"epochs", std::to_string(cfg.epochs)},
            {"record_every", std::to_string(cfg.record_every)},
            {"seed", std::to_string(cfg.seed)},
            {"epoch_unit", std::holds_alternative<AdamConfig>(cfg.optimizer) ? "one full-batch Adam step"
                                                                              : "one L-BFGS outer iteration"}};
}

void write_loss_csv(std::ostream& os, const TrainReport& report, const HeaderFields& header) {
    write_comment_header(os, header);
    os << "epoch,total";
    for (const auto& name : report.component_names) os << ',' << name;
    os << '\n';
    for (const auto& row : report.loss_history) {
        os << row.epoch << ',' << format_double(row.total);
        for (double c : row.components) os << ',' << format_double(c);
        os << '\n';
    }
}

}  // namespace wavkan
