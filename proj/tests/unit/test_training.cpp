#include <gtest/gtest.h>

#include <cmath>
#include <sstream>

#include "wavkan/error.hpp"
#include "wavkan/training.hpp"

using namespace wavkan;

namespace {

// f(x) = c for every x: single edge with Morlet(b = 0, a tiny) is not exactly
// constant, so build the constant from a zero-weight net plus an offset target.
WavKanNet zero_net() {
    auto net = init({1, 2, 1}, MotherWavelet::morlet(1.0, 1.0), 0);
    for (auto& L : net.layers()) std::fill(L.W.flat().begin(), L.W.flat().end(), 0.0);
    return net;
}

Matrix line(std::size_t n, double lo, double hi) {
    Matrix X(n, 1);
    for (std::size_t i = 0; i < n; ++i) X(i, 0) = lo + (hi - lo) * static_cast<double>(i) / static_cast<double>(n - 1);
    return X;
}

}  // namespace

TEST(MseLoss, Examples) {
    const auto net = zero_net();
    EXPECT_DOUBLE_EQ(mse_loss(net, line(2, 0, 1), std::vector<double>{1.0, -1.0}), 1.0);

    // f == 1: single edge with W = 1 and the input pinned at T.
    const WavKanNet one(MotherWavelet::morlet(1.0, 2.0), {1, 1},
                        {WavKanLayer{Matrix(1, 1, 1.0), Matrix(1, 1, 0.0), Matrix(1, 1, 1.0)}});
    EXPECT_DOUBLE_EQ(mse_loss(one, Matrix(3, 1, 0.0), std::vector<double>{0.0, 0.0, 3.0}), 2.0);

    const auto fit = init({1, 3, 1}, MotherWavelet::morlet(1.0, 2.0), 1);
    const Matrix X = line(5, 0, 1);
    std::vector<double> Y;
    for (std::size_t i = 0; i < 5; ++i) Y.push_back(forward(fit, X.row(i))[0]);
    EXPECT_EQ(mse_loss(fit, X, Y), 0.0);
}

TEST(MseLoss, Errors) {
    const auto net = zero_net();
    try {
        (void)mse_loss(net, Matrix(0, 1), std::vector<double>{});
        FAIL();
    } catch (const Error& e) {
        EXPECT_EQ(e.code(), Errc::EmptyData);
    }
    try {
        (void)mse_loss(net, line(3, 0, 1), std::vector<double>{1.0});
        FAIL();
    } catch (const Error& e) {
        EXPECT_EQ(e.code(), Errc::DimensionMismatch);
    }
}

TEST(MseObjective, GradientMatchesFiniteDifferences) {
    auto net = init({1, 4, 1}, MotherWavelet::morlet(1.0, 3.0), 8);
    const Matrix X = line(70, -1, 1);  // spans three reduction blocks
    std::vector<double> Y;
    for (std::size_t i = 0; i < X.rows(); ++i) Y.push_back(std::sin(3.0 * X(i, 0)));
    MseObjective obj(X, Y);
    const auto theta = flatten(net).values;
    std::vector<double> g(theta.size());
    (void)obj.evaluate(net, g);
    for (std::size_t k = 0; k < theta.size(); ++k) {
        auto p = theta;
        p[k] += 1e-6;
        unflatten(net, p);
        const double fp = obj.evaluate(net, {}).total;
        p[k] -= 2e-6;
        unflatten(net, p);
        const double fm = obj.evaluate(net, {}).total;
        EXPECT_NEAR(g[k], (fp - fm) / 2e-6, 1e-7 * (1.0 + std::abs(g[k])));
    }
}

TEST(Adam, ZeroGradientKeepsParameters) {
    std::vector<double> p{1.0, -2.0, 0.5};
    const auto orig = p;
    AdamState st;
    for (int i = 0; i < 10; ++i) adam_step(p, std::vector<double>(3, 0.0), st, AdamConfig{});
    EXPECT_EQ(p, orig);
}

TEST(Adam, FirstStepHasMagnitudeLr) {
    std::vector<double> p{0.0, 0.0};
    AdamState st;
    adam_step(p, std::vector<double>{3.0, -0.02}, st, AdamConfig{0.01});
    EXPECT_NEAR(p[0], -0.01, 1e-8);
    EXPECT_NEAR(p[1], 0.01, 1e-6);
}

TEST(Adam, Deterministic) {
    std::vector<double> a{0.3, 0.1}, b{0.3, 0.1};
    AdamState sa, sb;
    const std::vector<double> g{0.5, -1.5};
    adam_step(a, g, sa, AdamConfig{});
    adam_step(b, g, sb, AdamConfig{});
    EXPECT_EQ(a, b);
    EXPECT_EQ(sa.m, sb.m);
    EXPECT_EQ(sa.v, sb.v);
}

TEST(Adam, LossScaleInvariance) {
    AdamConfig cfg;
    cfg.eps = 1e-12;
    std::vector<double> a{0.0, 0.0}, b{0.0, 0.0};
    AdamState sa, sb;
    adam_step(a, std::vector<double>{0.2, -0.7}, sa, cfg);
    adam_step(b, std::vector<double>{2.0, -7.0}, sb, cfg);
    for (int k = 0; k < 2; ++k) EXPECT_NEAR(a[k], b[k], 1e-3 * std::abs(a[k]));
}

TEST(Adam, ProjectsScales) {
    std::vector<double> p{1.0, 1.5e-3};
    const std::vector<ParamBlock> blocks{ParamBlock::W, ParamBlock::S};
    AdamState st;
    adam_step(p, std::vector<double>{0.0, 1.0}, st, AdamConfig{1e-3}, blocks);
    EXPECT_EQ(p[1], kScaleMin);
}

TEST(Adam, ShapeMismatch) {
    std::vector<double> p{1.0, 2.0};
    AdamState st;
    try {
        adam_step(p, std::vector<double>{1.0}, st, AdamConfig{});
        FAIL();
    } catch (const Error& e) {
        EXPECT_EQ(e.code(), Errc::ShapeMismatch);
    }
}

TEST(Lbfgs, QuadraticConvergesInFewIterations) {
    const std::vector<double> target{1.0, -2.0, 3.0, 0.5, -0.25};
    const LossGradFn fn = [&](std::span<const double> x, std::span<double> g) {
        double f = 0.0;
        for (std::size_t k = 0; k < x.size(); ++k) {
            g[k] = x[k] - target[k];
            f += 0.5 * g[k] * g[k];
        }
        return f;
    };
    std::vector<double> x(5, 0.0);
    LbfgsState st;
    for (std::size_t it = 0; it < target.size() + 2; ++it) (void)lbfgs_step(x, fn, st, LbfgsConfig{});
    for (std::size_t k = 0; k < 5; ++k) EXPECT_NEAR(x[k], target[k], 1e-10);
}

TEST(Lbfgs, ZeroGradientDoesNotMove) {
    const LossGradFn fn = [](std::span<const double> x, std::span<double> g) {
        g[0] = 0.0;
        return x[0] * 0.0 + 1.0;
    };
    std::vector<double> x{0.7};
    LbfgsState st;
    const auto r = lbfgs_step(x, fn, st, LbfgsConfig{});
    EXPECT_FALSE(r.moved);
    EXPECT_EQ(x[0], 0.7);
}

TEST(Lbfgs, DescentOnRosenbrock) {
    const LossGradFn fn = [](std::span<const double> x, std::span<double> g) {
        const double a = 1.0 - x[0], b = x[1] - x[0] * x[0];
        g[0] = -2.0 * a - 400.0 * x[0] * b;
        g[1] = 200.0 * b;
        return a * a + 100.0 * b * b;
    };
    std::vector<double> x{-1.2, 1.0};
    LbfgsState st;
    double last = std::numeric_limits<double>::infinity();
    for (int it = 0; it < 100; ++it) {
        const auto r = lbfgs_step(x, fn, st, LbfgsConfig{});
        EXPECT_LE(r.loss, last);
        last = r.loss;
    }
    EXPECT_NEAR(x[0], 1.0, 1e-6);
    EXPECT_NEAR(x[1], 1.0, 1e-6);
}

TEST(Lbfgs, LineSearchFailure) {
    // Gradient points the wrong way: no step along -g decreases the loss.
    const LossGradFn fn = [](std::span<const double> x, std::span<double> g) {
        g[0] = -1.0;
        return x[0];
    };
    std::vector<double> x{0.0};
    LbfgsState st;
    LbfgsConfig cfg;
    cfg.max_linesearch = 5;
    try {
        (void)lbfgs_step(x, fn, st, cfg);
        FAIL();
    } catch (const Error& e) {
        EXPECT_EQ(e.code(), Errc::LineSearchFailed);
    }
}

TEST(Train, HistoryBookkeeping) {
    auto net = init({1, 3, 1}, MotherWavelet::morlet(1.0, 2.0), 1);
    const Matrix X = line(10, -1, 1);
    std::vector<double> Y(10);
    for (std::size_t i = 0; i < 10; ++i) Y[i] = X(i, 0);
    TrainConfig cfg;
    cfg.epochs = 1;
    EXPECT_EQ(train(net, X, Y, cfg).loss_history.size(), 1u);
    cfg.epochs = 25;
    cfg.record_every = 10;
    const auto rep = train(net, X, Y, cfg);
    ASSERT_EQ(rep.loss_history.size(), 3u);
    EXPECT_EQ(rep.loss_history[0].epoch, 10u);
    EXPECT_EQ(rep.loss_history[2].epoch, 25u);
    cfg.epochs = 0;
    EXPECT_THROW((void)train(net, X, Y, cfg), Error);
}

TEST(Train, RecordedLossMatchesFinalParams) {
    for (bool use_lbfgs : {false, true}) {
        auto net = init({1, 4, 1}, MotherWavelet::morlet(1.0, 3.0), 2);
        const Matrix X = line(20, 0, 1);
        std::vector<double> Y(20);
        for (std::size_t i = 0; i < 20; ++i) Y[i] = std::cos(4.0 * X(i, 0));
        TrainConfig cfg;
        cfg.epochs = 30;
        if (use_lbfgs) cfg.optimizer = LbfgsConfig{};
        const auto rep = train(net, X, Y, cfg);
        auto check = init({1, 4, 1}, MotherWavelet::morlet(1.0, 3.0), 2);
        unflatten(check, rep.final_params);
        EXPECT_NEAR(mse_loss(check, X, Y), rep.loss_history.back().total, 1e-12);
        EXPECT_EQ(flatten(net), rep.final_params);
    }
}

TEST(Train, ExactFitStaysAtZero) {
    auto net = init({1, 3, 1}, MotherWavelet::morlet(1.0, 2.0), 5);
    const Matrix X = line(8, 0, 1);
    std::vector<double> Y;
    for (std::size_t i = 0; i < 8; ++i) Y.push_back(forward(net, X.row(i))[0]);
    TrainConfig cfg;
    cfg.epochs = 20;
    const auto rep = train(net, X, Y, cfg);
    for (const auto& row : rep.loss_history) EXPECT_EQ(row.total, 0.0);
}

TEST(Train, BitwiseDeterministic) {
    const Matrix X = line(15, -1, 1);
    std::vector<double> Y(15);
    for (std::size_t i = 0; i < 15; ++i) Y[i] = 4.0 * std::pow(X(i, 0), 5);
    TrainConfig cfg;
    cfg.epochs = 50;
    auto a = init({1, 3, 1}, MotherWavelet::morlet(0.5, 2.0), 3, InitPolicy::AllTrainable, {-1, 1});
    auto b = a;
    const auto ra = train(a, X, Y, cfg);
    const auto rb = train(b, X, Y, cfg);
    EXPECT_EQ(ra.final_params, rb.final_params);
    ASSERT_EQ(ra.loss_history.size(), rb.loss_history.size());
    for (std::size_t i = 0; i < ra.loss_history.size(); ++i)
        EXPECT_EQ(ra.loss_history[i].total, rb.loss_history[i].total);
}

TEST(Train, ConfigValidation) {
    TrainConfig cfg;
    cfg.optimizer = AdamConfig{-1.0};
    EXPECT_THROW(cfg.validate(), Error);
    cfg.optimizer = AdamConfig{1e-3, 1.0};
    EXPECT_THROW(cfg.validate(), Error);
    LbfgsConfig l;
    l.history_size = 0;
    cfg.optimizer = l;
    EXPECT_THROW(cfg.validate(), Error);
    cfg.optimizer = LbfgsConfig{};
    EXPECT_NO_THROW(cfg.validate());
}

TEST(Train, LossCsv) {
    TrainReport rep;
    rep.component_names = {"L_D", "L_bc"};
    rep.loss_history = {{1, 3.0, {2.0, 1.0}}, {2, 0.5, {0.25, 0.25}}};
    std::ostringstream os;
    write_loss_csv(os, rep, {{"seed", "0"}});
    EXPECT_EQ(os.str(), "# seed: 0\nepoch,total,L_D,L_bc\n1,3,2,1\n2,0.5,0.25,0.25\n");
}
