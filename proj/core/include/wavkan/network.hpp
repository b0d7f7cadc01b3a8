#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <string_view>
#include <vector>

#include "wavkan/wavelets.hpp"

namespace wavkan {

/// Dense row-major matrix of doubles.
class Matrix {
public:
    Matrix() = default;
    Matrix(std::size_t rows, std::size_t cols, double fill = 0.0)
        : rows_(rows), cols_(cols), data_(rows * cols, fill) {}

    [[nodiscard]] std::size_t rows() const noexcept { return rows_; }
    [[nodiscard]] std::size_t cols() const noexcept { return cols_; }
    [[nodiscard]] std::size_t size() const noexcept { return data_.size(); }

    double& operator()(std::size_t i, std::size_t j) noexcept { return data_[i * cols_ + j]; }
    double operator()(std::size_t i, std::size_t j) const noexcept { return data_[i * cols_ + j]; }

    [[nodiscard]] std::span<double> row(std::size_t i) noexcept { return {data_.data() + i * cols_, cols_}; }
    [[nodiscard]] std::span<const double> row(std::size_t i) const noexcept {
        return {data_.data() + i * cols_, cols_};
    }

    [[nodiscard]] std::span<double> flat() noexcept { return data_; }
    [[nodiscard]] std::span<const double> flat() const noexcept { return data_; }

    friend bool operator==(const Matrix&, const Matrix&) = default;

private:
    std::size_t rows_ = 0;
    std::size_t cols_ = 0;
    std::vector<double> data_;
};

/// Closed interval used to draw initial translations.
struct Interval {
    double lo = 0.0;
    double hi = 1.0;
    friend bool operator==(const Interval&, const Interval&) = default;
};

enum class InitPolicy { AllTrainable, WeightsOnly };

[[nodiscard]] std::string_view to_string(InitPolicy policy) noexcept;
[[nodiscard]] InitPolicy init_policy_from_string(std::string_view name);

/// One Wav-KAN layer with fan-out m and fan-in n. Edge (i, j) computes
/// W_ij * psi((x_j - T_ij) / S_ij); node i sums its row.
struct WavKanLayer {
    Matrix W;
    Matrix T;
    Matrix S;
    bool trainable_W = true;
    bool trainable_T = true;
    bool trainable_S = true;

    [[nodiscard]] std::size_t fan_out() const noexcept { return W.rows(); }
    [[nodiscard]] std::size_t fan_in() const noexcept { return W.cols(); }

    friend bool operator==(const WavKanLayer&, const WavKanLayer&) = default;
};

/// Which of the three per-layer matrices a parameter block refers to.
enum class ParamBlock { W, T, S };

/// Flat vector of trainable parameters. Layout: layers in order; within a
/// layer W (row-major), then T, then S; untrainable blocks are skipped.
struct ParamVector {
    std::vector<double> values;
    friend bool operator==(const ParamVector&, const ParamVector&) = default;
};

class WavKanNet {
public:
    WavKanNet(MotherWavelet wavelet, std::vector<std::size_t> shape, std::vector<WavKanLayer> layers,
              InitPolicy policy = InitPolicy::AllTrainable, std::uint64_t seed = 0,
              Interval translation_domain = {});

    [[nodiscard]] const MotherWavelet& wavelet() const noexcept { return wavelet_; }
    [[nodiscard]] const std::vector<std::size_t>& shape() const noexcept { return shape_; }
    [[nodiscard]] std::size_t input_dim() const noexcept { return shape_.front(); }
    [[nodiscard]] std::size_t output_dim() const noexcept { return shape_.back(); }
    [[nodiscard]] std::size_t num_layers() const noexcept { return layers_.size(); }
    [[nodiscard]] const std::vector<WavKanLayer>& layers() const noexcept { return layers_; }
    [[nodiscard]] std::vector<WavKanLayer>& layers() noexcept { return layers_; }
    [[nodiscard]] const WavKanLayer& layer(std::size_t l) const { return layers_.at(l); }
    [[nodiscard]] WavKanLayer& layer(std::size_t l) { return layers_.at(l); }
    [[nodiscard]] InitPolicy policy() const noexcept { return policy_; }
    [[nodiscard]] std::uint64_t seed() const noexcept { return seed_; }
    [[nodiscard]] Interval translation_domain() const noexcept { return domain_; }

    /// Number of trainable scalars (length of flatten()).
    [[nodiscard]] std::size_t num_trainable() const noexcept;
    /// Number of W, T and S scalars regardless of trainability.
    [[nodiscard]] std::size_t num_total() const noexcept;

    /// Clamp every |S_ij| to at least kScaleMin.
    void project_scales() noexcept;

    friend bool operator==(const WavKanNet&, const WavKanNet&) = default;

private:
    MotherWavelet wavelet_;
    std::vector<std::size_t> shape_;
    std::vector<WavKanLayer> layers_;
    InitPolicy policy_;
    std::uint64_t seed_;
    Interval domain_;
};

/// Build a network of the given shape [n0, ..., nL]. W ~ U[-1/sqrt(n_in), 1/sqrt(n_in)],
/// T ~ U[domain], S = 1. WeightsOnly freezes T and S. Throws Errc::BadShape.
[[nodiscard]] WavKanNet init(const std::vector<std::size_t>& shape, const MotherWavelet& wavelet,
                             std::uint64_t seed, InitPolicy policy = InitPolicy::AllTrainable,
                             Interval translation_domain = {});

/// Row sums, accumulated left to right.
[[nodiscard]] std::vector<double> tau0(const Matrix& m);

[[nodiscard]] std::vector<double> forward(const WavKanNet& net, std::span<const double> x);
/// Row i of the result is forward(net, X.row(i)).
[[nodiscard]] Matrix forward_batch(const WavKanNet& net, const Matrix& X);

[[nodiscard]] ParamVector flatten(const WavKanNet& net);
/// Writes v back into the trainable blocks and re-projects S. Throws
/// Errc::LayoutMismatch on a length mismatch.
void unflatten(WavKanNet& net, const ParamVector& v);
void unflatten(WavKanNet& net, std::span<const double> v);

/// Calls fn(layer_index, block, matrix, trainable) for every block in
/// canonical order, trainable or not.
template <class Net, class Fn>
void for_each_block(Net& net, Fn&& fn) {
    auto& layers = net.layers();
    for (std::size_t l = 0; l < layers.size(); ++l) {
        auto& layer = layers[l];
        fn(l, ParamBlock::W, layer.W, layer.trainable_W);
        fn(l, ParamBlock::T, layer.T, layer.trainable_T);
        fn(l, ParamBlock::S, layer.S, layer.trainable_S);
    }
}

/// Index map from the trainable layout into the full (W,T,S per layer)
/// layout, plus per-entry block tags.
struct ParamLayout {
    std::vector<std::size_t> full_index;  // size = num_trainable
    std::vector<ParamBlock> block;        // size = num_trainable
    std::vector<std::size_t> layer;       // size = num_trainable
    std::size_t full_size = 0;
};

[[nodiscard]] ParamLayout param_layout(const WavKanNet& net);

}  // namespace wavkan
