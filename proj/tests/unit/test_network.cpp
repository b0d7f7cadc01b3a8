#include <gtest/gtest.h>

#include <cmath>

#include "wavkan/error.hpp"
#include "wavkan/network.hpp"

using namespace wavkan;

namespace {

WavKanNet single_edge(double W, double T, double S, MotherWavelet w = MotherWavelet::morlet(0.5, 2.0)) {
    WavKanLayer layer{Matrix(1, 1, W), Matrix(1, 1, T), Matrix(1, 1, S)};
    return WavKanNet(w, {1, 1}, {layer});
}

}  // namespace

TEST(Network, InitShapes) {
    const auto net = init({1, 3, 1}, MotherWavelet::morlet(1.0, 2.0), 7);
    ASSERT_EQ(net.num_layers(), 2u);
    EXPECT_EQ(net.layer(0).W.rows(), 3u);
    EXPECT_EQ(net.layer(0).W.cols(), 1u);
    EXPECT_EQ(net.layer(1).W.rows(), 1u);
    EXPECT_EQ(net.layer(1).W.cols(), 3u);
    EXPECT_EQ(net.num_trainable(), 18u);
    EXPECT_EQ(net.num_total(), 18u);
}

TEST(Network, InitRanges) {
    const auto net = init({4, 9, 2}, MotherWavelet::morlet(1.0, 2.0), 3, InitPolicy::AllTrainable, {-1.0, 1.0});
    for (std::size_t l = 0; l < net.num_layers(); ++l) {
        const auto& L = net.layer(l);
        const double bound = 1.0 / std::sqrt(static_cast<double>(L.fan_in()));
        for (double w : L.W.flat()) EXPECT_LE(std::abs(w), bound);
        for (double t : L.T.flat()) {
            EXPECT_GE(t, -1.0);
            EXPECT_LE(t, 1.0);
        }
        for (double s : L.S.flat()) EXPECT_EQ(s, 1.0);
    }
}

TEST(Network, WeightsOnlyPolicy) {
    const auto net = init({1, 3, 1}, MotherWavelet::morlet(1.0, 2.0), 7, InitPolicy::WeightsOnly);
    EXPECT_EQ(flatten(net).values.size(), 6u);
    EXPECT_FALSE(net.layer(0).trainable_T);
    EXPECT_FALSE(net.layer(1).trainable_S);
}

TEST(Network, InitIsDeterministic) {
    const auto w = MotherWavelet::mexican_hat(1.0);
    EXPECT_EQ(init({2, 5, 1}, w, 11), init({2, 5, 1}, w, 11));
    EXPECT_NE(flatten(init({2, 5, 1}, w, 11)), flatten(init({2, 5, 1}, w, 12)));
}

TEST(Network, BadShape) {
    const auto w = MotherWavelet::morlet(1.0, 1.0);
    EXPECT_THROW((void)init({3}, w, 0), Error);
    EXPECT_THROW((void)init({2, 0, 1}, w, 0), Error);
    try {
        (void)init({}, w, 0);
        FAIL();
    } catch (const Error& e) {
        EXPECT_EQ(e.code(), Errc::BadShape);
    }
}

TEST(Network, Tau0) {
    Matrix m(2, 2);
    m(0, 0) = 1;
    m(0, 1) = 2;
    m(1, 0) = 3;
    m(1, 1) = 4;
    EXPECT_EQ(tau0(m), (std::vector<double>{3, 7}));
    EXPECT_EQ(tau0(Matrix(3, 4)), (std::vector<double>{0, 0, 0}));
    EXPECT_EQ(tau0(Matrix(1, 1, 5.0)), (std::vector<double>{5}));
}

TEST(Network, ForwardExamples) {
    EXPECT_DOUBLE_EQ(forward(single_edge(1, 0, 1), std::vector<double>{0.0})[0], 1.0);

    WavKanLayer two{Matrix(1, 2, 1.0), Matrix(1, 2, 0.0), Matrix(1, 2, 1.0)};
    const WavKanNet net(MotherWavelet::morlet(0.5, 2.0), {2, 1}, {two});
    EXPECT_DOUBLE_EQ(forward(net, std::vector<double>{0.0, 0.0})[0], 2.0);

    auto zero = init({2, 4, 3}, MotherWavelet::morlet(1.0, 3.0), 1);
    for (auto& L : zero.layers()) std::fill(L.W.flat().begin(), L.W.flat().end(), 0.0);
    for (double v : forward(zero, std::vector<double>{0.3, -2.0})) EXPECT_EQ(v, 0.0);
}

TEST(Network, ForwardComposesLayers) {
    const auto net = init({2, 3, 1}, MotherWavelet::dog(1.0), 5);
    const std::vector<double> x{0.2, 0.9};
    std::vector<double> h(3, 0.0);
    const auto& L0 = net.layer(0);
    for (std::size_t i = 0; i < 3; ++i)
        for (std::size_t j = 0; j < 2; ++j) h[i] += L0.W(i, j) * eval(net.wavelet(), (x[j] - L0.T(i, j)) / L0.S(i, j));
    double y = 0.0;
    const auto& L1 = net.layer(1);
    for (std::size_t j = 0; j < 3; ++j) y += L1.W(0, j) * eval(net.wavelet(), (h[j] - L1.T(0, j)) / L1.S(0, j));
    EXPECT_DOUBLE_EQ(forward(net, x)[0], y);
}

TEST(Network, ForwardDimensionMismatch) {
    const auto net = init({2, 3, 1}, MotherWavelet::morlet(1.0, 1.0), 0);
    try {
        (void)forward(net, std::vector<double>{1.0});
        FAIL();
    } catch (const Error& e) {
        EXPECT_EQ(e.code(), Errc::DimensionMismatch);
    }
}

TEST(Network, BatchMatchesSingle) {
    const auto net = init({2, 4, 2}, MotherWavelet::morlet(1.0, 5.0), 2);
    Matrix X(3, 2);
    for (std::size_t i = 0; i < X.size(); ++i) X.flat()[i] = 0.1 * static_cast<double>(i);
    const Matrix Y = forward_batch(net, X);
    for (std::size_t r = 0; r < 3; ++r) {
        const auto y = forward(net, X.row(r));
        for (std::size_t c = 0; c < 2; ++c) EXPECT_EQ(Y(r, c), y[c]);
    }
}

TEST(Network, FlattenRoundTrip) {
    auto net = init({2, 3, 1}, MotherWavelet::morlet(1.0, 2.0), 4);
    const std::vector<double> probe{0.3, 0.8};
    const double before = forward(net, probe)[0];
    unflatten(net, flatten(net));
    EXPECT_EQ(forward(net, probe)[0], before);
}

TEST(Network, FlattenLayout) {
    auto net = init({2, 3, 1}, MotherWavelet::morlet(1.0, 2.0), 4);
    const auto original = net;
    ParamVector v = flatten(net);
    // Layer 0: W (6), T (6), S (6); layer 1: W (3) ...
    v.values[7] += 0.5;  // T(0, 1) of layer 0
    unflatten(net, v);
    EXPECT_EQ(net.layer(0).T(0, 1), original.layer(0).T(0, 1) + 0.5);
    int changed = 0;
    for (std::size_t l = 0; l < 2; ++l)
        for (Matrix WavKanLayer::*pair : {&WavKanLayer::W, &WavKanLayer::T, &WavKanLayer::S}) {
            const auto& a = net.layer(l).*pair;
            const auto& b = original.layer(l).*pair;
            for (std::size_t k = 0; k < a.size(); ++k) changed += a.flat()[k] != b.flat()[k];
        }
    EXPECT_EQ(changed, 1);
}

TEST(Network, UnflattenRejectsWrongLength) {
    auto net = init({1, 2, 1}, MotherWavelet::morlet(1.0, 2.0), 0);
    try {
        unflatten(net, ParamVector{{1.0, 2.0}});
        FAIL();
    } catch (const Error& e) {
        EXPECT_EQ(e.code(), Errc::LayoutMismatch);
    }
}

TEST(Network, UnflattenProjectsScales) {
    auto net = init({1, 1}, MotherWavelet::morlet(1.0, 2.0), 0);
    unflatten(net, ParamVector{{1.0, 0.0, -1e-6}});
    EXPECT_EQ(net.layer(0).S(0, 0), -kScaleMin);
}

TEST(Network, HomogeneousInLastLayerWeights) {
    auto net = init({2, 5, 1}, MotherWavelet::mexican_hat(1.0), 9);
    const std::vector<double> x{0.4, -0.2};
    const double y = forward(net, x)[0];
    for (double& w : net.layers().back().W.flat()) w *= 3.0;
    EXPECT_NEAR(forward(net, x)[0], 3.0 * y, 1e-15 * std::max(1.0, std::abs(y)));
}

TEST(Network, SingleLayerLinearInWeights) {
    const auto w = MotherWavelet::morlet(1.0, 4.0);
    auto a = init({3, 1}, w, 1, InitPolicy::WeightsOnly);
    auto b = a;
    for (double& v : b.layer(0).W.flat()) v = v * -1.7 + 0.3;
    auto mix = a;
    for (std::size_t k = 0; k < mix.layer(0).W.size(); ++k)
        mix.layer(0).W.flat()[k] = 2.0 * a.layer(0).W.flat()[k] - 0.5 * b.layer(0).W.flat()[k];
    const std::vector<double> x{0.1, 0.5, 0.9};
    EXPECT_NEAR(forward(mix, x)[0], 2.0 * forward(a, x)[0] - 0.5 * forward(b, x)[0], 1e-14);
}

TEST(Network, ParamLayoutTracksTrainableEntries) {
    const auto net = init({1, 3, 1}, MotherWavelet::morlet(1.0, 2.0), 7, InitPolicy::WeightsOnly);
    const auto layout = param_layout(net);
    EXPECT_EQ(layout.full_size, 18u);
    ASSERT_EQ(layout.full_index.size(), 6u);
    EXPECT_EQ(layout.full_index[3], 9u);  // first W entry of layer 1
    for (auto b : layout.block) EXPECT_EQ(b, ParamBlock::W);
}
