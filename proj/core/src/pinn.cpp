#include "wavkan/pinn.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <ostream>

#include "wavkan/error.hpp"
#include "wavkan/parallel.hpp"
#include "wavkan/rng.hpp"

namespace wavkan {

namespace {

constexpr double kPi = std::numbers::pi;
constexpr std::size_t kBlock = 32;
constexpr std::array<PinnTerm, kNumPinnTerms> kAllTerms{PinnTerm::Domain, PinnTerm::Boundary, PinnTerm::Initial,
                                                        PinnTerm::Neumann};

std::size_t index_of(PinnTerm term) { return static_cast<std::size_t>(term); }

}  // namespace

std::string_view to_string(PdeKind kind) noexcept {
    switch (kind) {
        case PdeKind::Poisson1D: return "poisson";
        case PdeKind::Heat1D: return "heat";
        case PdeKind::Helmholtz2D: return "helmholtz";
        case PdeKind::Wave1D: return "wave";
    }
    return "unknown";
}

PdeKind pde_kind_from_string(std::string_view name) {
    for (PdeKind kind : {PdeKind::Poisson1D, PdeKind::Heat1D, PdeKind::Helmholtz2D, PdeKind::Wave1D})
        if (name == to_string(kind)) return kind;
    throw Error(Errc::UnknownBenchmark,
                "unknown benchmark '" + std::string(name) + "' (expected poisson, heat, helmholtz or wave)");
}

std::string_view to_string(PinnTerm term) noexcept {
    switch (term) {
        case PinnTerm::Domain: return "L_D";
        case PinnTerm::Boundary: return "L_bc";
        case PinnTerm::Initial: return "L_ic";
        case PinnTerm::Neumann: return "L_nbc";
    }
    return "unknown";
}

// ---------------------------------------------------------------------------
// Problem definition

PdeProblem PdeProblem::preset(PdeKind kind, bool weighted) {
    PdeProblem p;
    p.kind = kind;
    switch (kind) {
        case PdeKind::Poisson1D:
            p.domain = {{0.0, 1.0}};
            p.n_domain = 100;
            p.n_bc = 2;
            break;
        case PdeKind::Heat1D:
            p.domain = {{0.0, 1.0}, {0.0, 1.0}};
            p.diffusivity = 1.0 / ((50.0 * kPi) * (50.0 * kPi));
            p.n_domain = 1024;
            p.n_bc = 200;
            p.n_ic = 100;
            break;
        case PdeKind::Helmholtz2D:
            p.domain = {{-1.0, 1.0}, {-1.0, 1.0}};
            p.n_domain = 2500;
            p.n_bc = 200;
            break;
        case PdeKind::Wave1D:
            p.domain = {{0.0, 1.0}, {0.0, 1.0}};
            p.n_domain = 2500;
            p.n_bc = 200;
            p.n_ic = 200;
            p.n_nbc = 200;
            break;
    }
    if (weighted) p.weights = {1.0, 100.0, 100.0, 100.0};
    return p;
}

bool PdeProblem::has_term(PinnTerm term) const noexcept {
    switch (term) {
        case PinnTerm::Domain:
        case PinnTerm::Boundary: return true;
        case PinnTerm::Initial: return kind == PdeKind::Heat1D || kind == PdeKind::Wave1D;
        case PinnTerm::Neumann: return kind == PdeKind::Wave1D;
    }
    return false;
}

std::size_t PdeProblem::count(PinnTerm term) const noexcept {
    switch (term) {
        case PinnTerm::Domain: return n_domain;
        case PinnTerm::Boundary: return n_bc;
        case PinnTerm::Initial: return n_ic;
        case PinnTerm::Neumann: return n_nbc;
    }
    return 0;
}

void PdeProblem::validate() const {
    const std::size_t expected_dim = kind == PdeKind::Poisson1D ? 1 : 2;
    if (domain.size() != expected_dim)
        throw Error(Errc::InvalidConfig, std::string(to_string(kind)) + " needs a " + std::to_string(expected_dim) +
                                             "-dimensional domain");
    for (const auto& iv : domain)
        if (!(iv.lo < iv.hi)) throw Error(Errc::InvalidConfig, "domain bounds must satisfy lo < hi");
    for (PinnTerm term : kAllTerms) {
        if (!has_term(term) && count(term) != 0)
            throw Error(Errc::InvalidConfig, std::string(to_string(kind)) + " has no " + std::string(to_string(term)) +
                                                 " term, its count must be 0");
        const double w = weight(term);
        if (!(w > 0.0) || !std::isfinite(w)) throw Error(Errc::InvalidConfig, "loss weights must be positive");
    }
    if (kind == PdeKind::Heat1D && !(diffusivity > 0.0))
        throw Error(Errc::InvalidConfig, "heat diffusivity must be positive");
    if (kind == PdeKind::Wave1D && !(speed_sq > 0.0))
        throw Error(Errc::InvalidConfig, "wave speed squared must be positive");
}

const Matrix& CollocationSet::points(PinnTerm term) const noexcept {
    switch (term) {
        case PinnTerm::Domain: return interior;
        case PinnTerm::Boundary: return boundary;
        case PinnTerm::Initial: return initial;
        case PinnTerm::Neumann: return neumann;
    }
    return interior;
}

// ---------------------------------------------------------------------------
// Collocation

namespace {

// Points on the faces {coord = lo}, {coord = hi} of each spatial coordinate.
Matrix sample_faces(const PdeProblem& p, std::size_t count, Rng& rng) {
    std::vector<std::pair<std::size_t, double>> faces;  // (fixed coordinate, value)
    const std::size_t spatial = p.kind == PdeKind::Helmholtz2D ? 2 : 1;
    for (std::size_t c = 0; c < spatial; ++c) {
        faces.emplace_back(c, p.domain[c].lo);
        faces.emplace_back(c, p.domain[c].hi);
    }
    Matrix out(count, p.dim());
    std::size_t row = 0;
    for (std::size_t f = 0; f < faces.size(); ++f) {
        const std::size_t share = count / faces.size() + (f < count % faces.size() ? 1 : 0);
        for (std::size_t r = 0; r < share; ++r, ++row) {
            for (std::size_t c = 0; c < p.dim(); ++c)
                out(row, c) = c == faces[f].first ? faces[f].second : rng.uniform(p.domain[c].lo, p.domain[c].hi);
        }
    }
    return out;
}

// Points on t = t_lo with x uniform.
Matrix sample_initial(const PdeProblem& p, std::size_t count, Rng& rng) {
    Matrix out(count, 2);
    for (std::size_t r = 0; r < count; ++r) {
        out(r, 0) = rng.uniform(p.domain[0].lo, p.domain[0].hi);
        out(r, 1) = p.domain[1].lo;
    }
    return out;
}

}  // namespace

CollocationSet sample_collocation(const PdeProblem& problem) {
    problem.validate();
    Rng rng(problem.seed);
    CollocationSet set;
    const std::size_t d = problem.dim();
    set.interior = Matrix(problem.n_domain, d);
    if (problem.kind == PdeKind::Poisson1D) {
        const auto& iv = problem.domain[0];
        for (std::size_t i = 0; i < problem.n_domain; ++i)
            set.interior(i, 0) =
                iv.lo + (iv.hi - iv.lo) * static_cast<double>(i + 1) / static_cast<double>(problem.n_domain + 1);
    } else {
        for (std::size_t i = 0; i < problem.n_domain; ++i)
            for (std::size_t c = 0; c < d; ++c) set.interior(i, c) = rng.uniform(problem.domain[c].lo, problem.domain[c].hi);
    }
    set.boundary = sample_faces(problem, problem.n_bc, rng);
    set.initial = problem.has_term(PinnTerm::Initial) ? sample_initial(problem, problem.n_ic, rng) : Matrix(0, d);
    set.neumann = problem.has_term(PinnTerm::Neumann) ? sample_initial(problem, problem.n_nbc, rng) : Matrix(0, d);
    return set;
}

// ---------------------------------------------------------------------------
// Exact solutions

namespace {

void require_point(const PdeProblem& p, std::span<const double> point) {
    if (point.size() != p.dim())
        throw Error(Errc::DimensionMismatch, "point has " + std::to_string(point.size()) + " coordinates, " +
                                                 std::string(to_string(p.kind)) + " needs " + std::to_string(p.dim()));
}

}  // namespace

FieldJet exact_jet(const PdeProblem& p, std::span<const double> point) {
    require_point(p, point);
    FieldJet j;
    const double x = point[0];
    switch (p.kind) {
        case PdeKind::Poisson1D: {
            const double w1 = 2.0 * kPi, w2 = 50.0 * kPi;
            j.value = std::sin(w1 * x) + 0.1 * std::sin(w2 * x);
            j.d1[0] = w1 * std::cos(w1 * x) + 0.1 * w2 * std::cos(w2 * x);
            j.d2[0] = -w1 * w1 * std::sin(w1 * x) - 0.1 * w2 * w2 * std::sin(w2 * x);
            break;
        }
        case PdeKind::Heat1D: {
            const double t = point[1];
            const double w = 50.0 * kPi;
            const double e = std::exp(-t);
            j.value = e * std::sin(w * x);
            j.d1 = {w * e * std::cos(w * x), -j.value};
            j.d2 = {-w * w * j.value, j.value};
            break;
        }
        case PdeKind::Helmholtz2D: {
            const double y = point[1];
            const double w1 = p.a1 * kPi, w2 = p.a2 * kPi;
            const double sx = std::sin(w1 * x), cx = std::cos(w1 * x);
            const double sy = std::sin(w2 * y), cy = std::cos(w2 * y);
            j.value = sx * sy;
            j.d1 = {w1 * cx * sy, w2 * sx * cy};
            j.d2 = {-w1 * w1 * j.value, -w2 * w2 * j.value};
            break;
        }
        case PdeKind::Wave1D: {
            const double t = point[1];
            const double s1 = std::sin(kPi * x), c1 = std::cos(kPi * x);
            const double s4 = std::sin(4.0 * kPi * x), c4 = std::cos(4.0 * kPi * x);
            const double ct2 = std::cos(2.0 * kPi * t), st2 = std::sin(2.0 * kPi * t);
            const double ct8 = std::cos(8.0 * kPi * t), st8 = std::sin(8.0 * kPi * t);
            j.value = s1 * ct2 + 0.5 * s4 * ct8;
            j.d1 = {kPi * c1 * ct2 + 2.0 * kPi * c4 * ct8, -2.0 * kPi * s1 * st2 - 4.0 * kPi * s4 * st8};
            j.d2 = {-kPi * kPi * s1 * ct2 - 8.0 * kPi * kPi * s4 * ct8,
                    -4.0 * kPi * kPi * s1 * ct2 - 32.0 * kPi * kPi * s4 * ct8};
            break;
        }
    }
    return j;
}

double exact_solution(const PdeProblem& problem, std::span<const double> point) {
    return exact_jet(problem, point).value;
}

double source_term(const PdeProblem& p, std::span<const double> point) {
    require_point(p, point);
    switch (p.kind) {
        case PdeKind::Poisson1D: {
            const double x = point[0];
            return -4.0 * kPi * kPi * std::sin(2.0 * kPi * x) -
                   0.1 * (50.0 * kPi) * (50.0 * kPi) * std::sin(50.0 * kPi * x);
        }
        case PdeKind::Helmholtz2D: {
            const double w1 = p.a1 * kPi, w2 = p.a2 * kPi;
            return (p.k * p.k - w1 * w1 - w2 * w2) * std::sin(w1 * point[0]) * std::sin(w2 * point[1]);
        }
        case PdeKind::Heat1D:
        case PdeKind::Wave1D: return 0.0;
    }
    return 0.0;
}

LinearOperator term_operator(const PdeProblem& p, PinnTerm term) {
    switch (term) {
        case PinnTerm::Domain:
            switch (p.kind) {
                case PdeKind::Poisson1D: return {0.0, {{0, 0.0, 1.0}}};
                case PdeKind::Heat1D: return {0.0, {{1, 1.0, 0.0}, {0, 0.0, -p.diffusivity}}};
                case PdeKind::Helmholtz2D: return {p.k * p.k, {{0, 0.0, 1.0}, {1, 0.0, 1.0}}};
                case PdeKind::Wave1D: return {0.0, {{1, 0.0, 1.0}, {0, 0.0, -p.speed_sq}}};
            }
            break;
        case PinnTerm::Boundary:
        case PinnTerm::Initial: return LinearOperator::identity();
        case PinnTerm::Neumann: return {0.0, {{1, 1.0, 0.0}}};
    }
    return LinearOperator::identity();
}

double term_target(const PdeProblem& p, PinnTerm term, std::span<const double> point) {
    switch (term) {
        case PinnTerm::Domain: return source_term(p, point);
        case PinnTerm::Boundary: return 0.0;  // homogeneous Dirichlet data on every benchmark
        case PinnTerm::Initial: return exact_solution(p, point);
        case PinnTerm::Neumann: return 0.0;
    }
    return 0.0;
}

double apply(const LinearOperator& op, const FieldJet& jet) {
    double v = op.value_coef * jet.value;
    for (const auto& t : op.terms) {
        if (t.coord >= 2) throw Error(Errc::DimensionMismatch, "field jets carry at most two coordinates");
        v += t.first * jet.d1[t.coord] + t.second * jet.d2[t.coord];
    }
    return v;
}

// ---------------------------------------------------------------------------
// Residuals and losses

namespace {

void require_net(const PdeProblem& p, const WavKanNet& net) {
    if (net.input_dim() != p.dim())
        throw Error(Errc::DimensionMismatch, "net takes " + std::to_string(net.input_dim()) + " inputs, " +
                                                 std::string(to_string(p.kind)) + " has " + std::to_string(p.dim()) +
                                                 " coordinates");
    if (net.output_dim() != 1) throw Error(Errc::NonScalarOutput, "a PDE solution net must have one output");
}

void require_points(const PdeProblem& p, const Matrix& points) {
    if (points.rows() > 0 && points.cols() != p.dim())
        throw Error(Errc::DimensionMismatch, "collocation points have the wrong width");
}

// Sum over every present term of weight * mean squared residual. When
// `full_grad` is non-empty it receives the gradient in the full layout.
PinnLossBreakdown evaluate_terms(const PdeProblem& p, const CollocationSet& set, const WavKanNet& net,
                                 std::span<double> full_grad, const PointObserver& observer) {
    require_net(p, net);
    struct Task {
        PinnTerm term;
        std::size_t begin;
        std::size_t end;
    };
    std::vector<Task> tasks;
    std::array<LinearOperator, kNumPinnTerms> ops;
    for (PinnTerm term : kAllTerms) {
        if (!p.has_term(term)) continue;
        const Matrix& pts = set.points(term);
        if (pts.rows() == 0)
            throw Error(Errc::EmptyTerm, std::string(to_string(term)) + " has no collocation points");
        require_points(p, pts);
        ops[index_of(term)] = term_operator(p, term);
        for (std::size_t b = 0; b < pts.rows(); b += kBlock) tasks.push_back({term, b, std::min(pts.rows(), b + kBlock)});
    }

    const bool want_grad = !full_grad.empty();
    const std::size_t workers = observer ? 1 : default_workers();
    std::vector<JetEvaluator> jets(workers);
    std::vector<double> task_sum(tasks.size(), 0.0);
    std::vector<std::vector<double>> task_grad(want_grad ? tasks.size() : 0);

    parallel_for(
        tasks.size(),
        [&](std::size_t i, std::size_t w) {
            const Task& task = tasks[i];
            const Matrix& pts = set.points(task.term);
            const LinearOperator& op = ops[index_of(task.term)];
            const double scale = 2.0 * p.weight(task.term) / static_cast<double>(pts.rows());
            if (want_grad) task_grad[i].assign(net.num_total(), 0.0);
            double sum = 0.0;
            for (std::size_t r = task.begin; r < task.end; ++r) {
                const auto x = pts.row(r);
                if (observer) observer(task.term, x);
                const double target = term_target(p, task.term, x);
                if (want_grad) {
                    const double res = jets[w].prepare(net, x, op) - target;
                    jets[w].accumulate(net, op, scale * res, task_grad[i]);
                    sum += res * res;
                } else {
                    const double res = jets[w].apply(net, x, op) - target;
                    sum += res * res;
                }
            }
            task_sum[i] = sum;
        },
        workers);

    std::array<double, kNumPinnTerms> term_sum{};
    for (std::size_t i = 0; i < tasks.size(); ++i) term_sum[index_of(tasks[i].term)] += task_sum[i];
    if (want_grad) {
        std::fill(full_grad.begin(), full_grad.end(), 0.0);
        for (const auto& g : task_grad)
            for (std::size_t k = 0; k < g.size(); ++k) full_grad[k] += g[k];
    }

    PinnLossBreakdown out;
    double* slots[kNumPinnTerms] = {&out.L_D, &out.L_bc, &out.L_ic, &out.L_nbc};
    for (PinnTerm term : kAllTerms) {
        if (!p.has_term(term)) continue;
        const double mean = term_sum[index_of(term)] / static_cast<double>(set.points(term).rows());
        *slots[index_of(term)] = mean;
        out.total += p.weight(term) * mean;
    }
    return out;
}

}  // namespace

std::vector<double> residual(const PdeProblem& problem, const WavKanNet& net, const Matrix& points, PinnTerm term) {
    require_net(problem, net);
    require_points(problem, points);
    const LinearOperator op = term_operator(problem, term);
    std::vector<double> out(points.rows());
    JetEvaluator jets;
    for (std::size_t r = 0; r < points.rows(); ++r)
        out[r] = jets.apply(net, points.row(r), op) - term_target(problem, term, points.row(r));
    return out;
}

std::vector<double> residual(const PdeProblem& problem, const std::function<FieldJet(std::span<const double>)>& field,
                             const Matrix& points, PinnTerm term) {
    require_points(problem, points);
    const LinearOperator op = term_operator(problem, term);
    std::vector<double> out(points.rows());
    for (std::size_t r = 0; r < points.rows(); ++r)
        out[r] = apply(op, field(points.row(r))) - term_target(problem, term, points.row(r));
    return out;
}

double PinnLossBreakdown::term(PinnTerm t) const noexcept {
    switch (t) {
        case PinnTerm::Domain: return L_D;
        case PinnTerm::Boundary: return L_bc;
        case PinnTerm::Initial: return L_ic;
        case PinnTerm::Neumann: return L_nbc;
    }
    return 0.0;
}

PinnLossBreakdown pinn_loss(const PdeProblem& problem, const WavKanNet& net, const CollocationSet& set,
                            const PointObserver& observer) {
    return evaluate_terms(problem, set, net, {}, observer);
}

PinnObjective::PinnObjective(PdeProblem problem, CollocationSet set)
    : problem_(std::move(problem)), set_(std::move(set)) {
    problem_.validate();
    for (PinnTerm term : kAllTerms)
        if (problem_.has_term(term)) terms_.push_back(term);
}

std::vector<std::string> PinnObjective::component_names() const {
    std::vector<std::string> names;
    for (PinnTerm term : terms_) names.emplace_back(to_string(term));
    return names;
}

LossEval PinnObjective::evaluate(const WavKanNet& net, std::span<double> grad) {
    std::vector<double> full;
    if (!grad.empty()) full.assign(net.num_total(), 0.0);
    const PinnLossBreakdown b = evaluate_terms(problem_, set_, net, full, {});
    if (!grad.empty()) {
        const auto trainable = to_trainable(param_layout(net), full);
        if (trainable.size() != grad.size()) throw Error(Errc::LayoutMismatch, "gradient buffer has wrong length");
        std::copy(trainable.begin(), trainable.end(), grad.begin());
    }
    LossEval out;
    out.total = b.total;
    for (PinnTerm term : terms_) out.components.push_back(b.term(term));
    return out;
}

// ---------------------------------------------------------------------------
// Evaluation

Matrix evaluation_grid(const PdeProblem& problem) {
    problem.validate();
    auto axis = [](const Interval& iv, std::size_t n, std::size_t i) {
        return i + 1 == n ? iv.hi : iv.lo + (iv.hi - iv.lo) * static_cast<double>(i) / static_cast<double>(n - 1);
    };
    if (problem.dim() == 1) {
        constexpr std::size_t n = 1001;
        Matrix g(n, 1);
        for (std::size_t i = 0; i < n; ++i) g(i, 0) = axis(problem.domain[0], n, i);
        return g;
    }
    constexpr std::size_t n = 101;
    Matrix g(n * n, 2);
    for (std::size_t j = 0; j < n; ++j)
        for (std::size_t i = 0; i < n; ++i) {
            g(j * n + i, 0) = axis(problem.domain[0], n, i);
            g(j * n + i, 1) = axis(problem.domain[1], n, j);
        }
    return g;
}

ErrorMetrics error_metrics(std::span<const double> prediction, std::span<const double> exact) {
    if (prediction.size() != exact.size())
        throw Error(Errc::DimensionMismatch, "prediction and exact values differ in length");
    double diff_sq = 0.0, ref_sq = 0.0;
    ErrorMetrics m;
    for (std::size_t i = 0; i < exact.size(); ++i) {
        const double d = prediction[i] - exact[i];
        diff_sq += d * d;
        ref_sq += exact[i] * exact[i];
        m.max_abs = std::max(m.max_abs, std::abs(d));
    }
    if (ref_sq > 0.0)
        m.rel_l2 = std::sqrt(diff_sq / ref_sq);
    else
        m.rel_l2 = diff_sq == 0.0 ? 0.0 : std::numeric_limits<double>::infinity();
    return m;
}

namespace {

std::vector<double> predict(const WavKanNet& net, const Matrix& grid) {
    std::vector<double> out(grid.rows());
    const std::size_t workers = default_workers();
    parallel_for(
        grid.rows(), [&](std::size_t r, std::size_t) { out[r] = forward(net, grid.row(r))[0]; }, workers);
    return out;
}

std::vector<double> exact_on(const PdeProblem& problem, const Matrix& grid) {
    std::vector<double> out(grid.rows());
    for (std::size_t r = 0; r < grid.rows(); ++r) out[r] = exact_solution(problem, grid.row(r));
    return out;
}

}  // namespace

ErrorMetrics error_metrics(const WavKanNet& net, const PdeProblem& problem, const Matrix& grid) {
    require_net(problem, net);
    require_points(problem, grid);
    return error_metrics(predict(net, grid), exact_on(problem, grid));
}

NetSpec preset_net(PdeKind kind) {
    switch (kind) {
        case PdeKind::Poisson1D: return {{1, 64, 1}, MotherWavelet::morlet(1.0, 10.0), InitPolicy::AllTrainable, 0, std::nullopt};
        case PdeKind::Heat1D: return {{2, 15, 15, 1}, MotherWavelet::morlet(1.0, 5.0), InitPolicy::AllTrainable, 0, std::nullopt};
        case PdeKind::Helmholtz2D:
            return {{2, 15, 15, 15, 1}, MotherWavelet::morlet(1.0, 5.0), InitPolicy::AllTrainable, 0, std::nullopt};
        case PdeKind::Wave1D: return {{2, 20, 20, 20, 1}, MotherWavelet::morlet(1.0, 5.0), InitPolicy::AllTrainable, 0, std::nullopt};
    }
    return {};
}

TrainConfig preset_training(PdeKind kind) {
    TrainConfig cfg;
    cfg.epochs = 10000;
    if (kind == PdeKind::Poisson1D) {
        cfg.optimizer = AdamConfig{};
        cfg.record_every = 100;
    } else {
        cfg.optimizer = LbfgsConfig{};
        cfg.record_every = 10;
    }
    return cfg;
}

PinnResult solve(const PdeProblem& problem, const NetSpec& net_spec, const TrainConfig& train_cfg,
                 WavKanNet* trained) {
    problem.validate();
    train_cfg.validate();
    if (net_spec.shape.empty() || net_spec.shape.front() != problem.dim() || net_spec.shape.back() != 1)
        throw Error(Errc::DimensionMismatch, "net shape must map " + std::to_string(problem.dim()) + " inputs to 1 output");
    WavKanNet net = init(net_spec.shape, net_spec.wavelet, net_spec.seed, net_spec.policy,
                          net_spec.translation_domain.value_or(problem.domain[0]));
    PinnObjective objective(problem, sample_collocation(problem));

    PinnResult result;
    result.report = train(net, objective, train_cfg);
    result.final_loss = pinn_loss(problem, net, objective.collocation());
    result.grid = evaluation_grid(problem);
    result.prediction = predict(net, result.grid);
    result.exact = exact_on(problem, result.grid);
    result.metrics = error_metrics(result.prediction, result.exact);
    if (trained) *trained = std::move(net);
    return result;
}

HeaderFields describe(const PdeProblem& p) {
    HeaderFields h;
    h.emplace_back("benchmark", std::string(to_string(p.kind)));
    std::string dom;
    for (const auto& iv : p.domain) {
        if (!dom.empty()) dom += " x ";
        dom += "[" + format_double(iv.lo) + "," + format_double(iv.hi) + "]";
    }
    h.emplace_back("domain", dom);
    switch (p.kind) {
        case PdeKind::Poisson1D: break;
        case PdeKind::Heat1D: h.emplace_back("diffusivity", format_double(p.diffusivity)); break;
        case PdeKind::Helmholtz2D:
            h.emplace_back("a1", format_double(p.a1));
            h.emplace_back("a2", format_double(p.a2));
            h.emplace_back("k", format_double(p.k));
            break;
        case PdeKind::Wave1D: h.emplace_back("speed_sq", format_double(p.speed_sq)); break;
    }
    h.emplace_back("N_D", std::to_string(p.n_domain));
    h.emplace_back("N_bc", std::to_string(p.n_bc));
    if (p.has_term(PinnTerm::Initial)) h.emplace_back("N_ic", std::to_string(p.n_ic));
    if (p.has_term(PinnTerm::Neumann)) h.emplace_back("N_nbc", std::to_string(p.n_nbc));
    h.emplace_back("interior_sampling", p.kind == PdeKind::Poisson1D ? "equally spaced, endpoints excluded"
                                                                      : "uniform random, N_D points");
    if (p.kind == PdeKind::Wave1D) h.emplace_back("interior_note", "N_D counts random interior points, no 32 x 32 grid");
    for (PinnTerm term : kAllTerms)
        if (p.has_term(term))
            h.emplace_back("lambda_" + std::string(to_string(term)).substr(2), format_double(p.weight(term)));
    h.emplace_back("collocation_seed", std::to_string(p.seed));
    return h;
}

void write_solution_csv(std::ostream& os, const PdeProblem& problem, const PinnResult& result,
                        const HeaderFields& header) {
    write_comment_header(os, header);
    switch (problem.kind) {
        case PdeKind::Poisson1D: os << "x"; break;
        case PdeKind::Helmholtz2D: os << "x,y"; break;
        case PdeKind::Heat1D:
        case PdeKind::Wave1D: os << "x,t"; break;
    }
    os << ",prediction,exact,abs_error\n";
    for (std::size_t r = 0; r < result.grid.rows(); ++r) {
        for (std::size_t c = 0; c < result.grid.cols(); ++c) os << format_double(result.grid(r, c)) << ',';
        os << format_double(result.prediction[r]) << ',' << format_double(result.exact[r]) << ','
           << format_double(std::abs(result.prediction[r] - result.exact[r])) << '\n';
    }
}

}  // namespace wavkan
