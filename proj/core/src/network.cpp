#include "wavkan/network.hpp"

#include <cmath>
#include <string>

#include "wavkan/error.hpp"
#include "wavkan/rng.hpp"

namespace wavkan {

std::string_view to_string(InitPolicy policy) noexcept {
    return policy == InitPolicy::AllTrainable ? "all-trainable" : "weights-only";
}

InitPolicy init_policy_from_string(std::string_view name) {
    if (name == "all-trainable") return InitPolicy::AllTrainable;
    if (name == "weights-only") return InitPolicy::WeightsOnly;
    throw Error(Errc::InvalidConfig, "unknown init policy '" + std::string(name) + "'");
}

WavKanNet::WavKanNet(MotherWavelet wavelet, std::vector<std::size_t> shape, std::vector<WavKanLayer> layers,
                     InitPolicy policy, std::uint64_t seed, Interval translation_domain)
    : wavelet_(wavelet),
      shape_(std::move(shape)),
      layers_(std::move(layers)),
      policy_(policy),
      seed_(seed),
      domain_(translation_domain) {
    if (shape_.size() < 2 || layers_.size() != shape_.size() - 1)
        throw Error(Errc::BadShape, "shape must list at least input and output widths, one layer per pair");
    for (std::size_t l = 0; l < layers_.size(); ++l) {
        const auto& layer = layers_[l];
        const std::size_t m = shape_[l + 1];
        const std::size_t n = shape_[l];
        if (m == 0 || n == 0) throw Error(Errc::BadShape, "layer widths must be >= 1");
        for (const Matrix* mat : {&layer.W, &layer.T, &layer.S})
            if (mat->rows() != m || mat->cols() != n)
                throw Error(Errc::BadShape, "layer " + std::to_string(l) + " matrices must be " + std::to_string(m) +
                                                "x" + std::to_string(n));
    }
}

std::size_t WavKanNet::num_trainable() const noexcept {
    std::size_t count = 0;
    for (const auto& layer : layers_) {
        const std::size_t edges = layer.W.size();
        count += (layer.trainable_W ? edges : 0) + (layer.trainable_T ? edges : 0) + (layer.trainable_S ? edges : 0);
    }
    return count;
}

std::size_t WavKanNet::num_total() const noexcept {
    std::size_t count = 0;
    for (const auto& layer : layers_) count += 3 * layer.W.size();
    return count;
}

void WavKanNet::project_scales() noexcept {
    for (auto& layer : layers_)
        for (double& s : layer.S.flat()) s = project_scale(s);
}

WavKanNet init(const std::vector<std::size_t>& shape, const MotherWavelet& wavelet, std::uint64_t seed,
               InitPolicy policy, Interval translation_domain) {
    if (shape.size() < 2) throw Error(Errc::BadShape, "shape needs at least two entries");
    for (std::size_t width : shape)
        if (width < 1) throw Error(Errc::BadShape, "every width must be >= 1");
    if (!(translation_domain.hi >= translation_domain.lo))
        throw Error(Errc::BadShape, "translation domain must satisfy lo <= hi");

    Rng rng(seed);
    std::vector<WavKanLayer> layers;
    layers.reserve(shape.size() - 1);
    for (std::size_t l = 0; l + 1 < shape.size(); ++l) {
        const std::size_t n = shape[l];
        const std::size_t m = shape[l + 1];
        WavKanLayer layer{Matrix(m, n), Matrix(m, n), Matrix(m, n, 1.0)};
        const double bound = 1.0 / std::sqrt(static_cast<double>(n));
        for (double& w : layer.W.flat()) w = rng.uniform(-bound, bound);
        for (double& t : layer.T.flat()) t = rng.uniform(translation_domain.lo, translation_domain.hi);
        if (policy == InitPolicy::WeightsOnly) {
            layer.trainable_T = false;
            layer.trainable_S = false;
        }
        layers.push_back(std::move(layer));
    }
    return WavKanNet(wavelet, shape, std::move(layers), policy, seed, translation_domain);
}

std::vector<double> tau0(const Matrix& m) {
    std::vector<double> out(m.rows(), 0.0);
    for (std::size_t i = 0; i < m.rows(); ++i) {
        double sum = 0.0;
        for (double v : m.row(i)) sum += v;
        out[i] = sum;
    }
    return out;
}

std::vector<double> forward(const WavKanNet& net, std::span<const double> x) {
    if (x.size() != net.input_dim())
        throw Error(Errc::DimensionMismatch,
                    "input has " + std::to_string(x.size()) + " entries, net expects " + std::to_string(net.input_dim()));
    std::vector<double> current(x.begin(), x.end());
    std::vector<double> next;
    const auto& wavelet = net.wavelet();
    for (const auto& layer : net.layers()) {
        const std::size_t m = layer.fan_out();
        const std::size_t n = layer.fan_in();
        next.assign(m, 0.0);
        for (std::size_t i = 0; i < m; ++i) {
            double sum = 0.0;
            for (std::size_t j = 0; j < n; ++j) {
                const double u = (current[j] - layer.T(i, j)) / layer.S(i, j);
                sum += layer.W(i, j) * eval_jet<0>(wavelet, u)[0];
            }
            next[i] = sum;
        }
        current.swap(next);
    }
    return current;
}

Matrix forward_batch(const WavKanNet& net, const Matrix& X) {
    if (X.cols() != net.input_dim())
        throw Error(Errc::DimensionMismatch, "batch has " + std::to_string(X.cols()) + " columns, net expects " +
                                                 std::to_string(net.input_dim()));
    Matrix out(X.rows(), net.output_dim());
    for (std::size_t r = 0; r < X.rows(); ++r) {
        const auto y = forward(net, X.row(r));
        for (std::size_t k = 0; k < y.size(); ++k) out(r, k) = y[k];
    }
    return out;
}

ParamVector flatten(const WavKanNet& net) {
    ParamVector v;
    v.values.reserve(net.num_trainable());
    for_each_block(net, [&](std::size_t, ParamBlock, const Matrix& m, bool trainable) {
        if (trainable) v.values.insert(v.values.end(), m.flat().begin(), m.flat().end());
    });
    return v;
}

void unflatten(WavKanNet& net, std::span<const double> v) {
    if (v.size() != net.num_trainable())
        throw Error(Errc::LayoutMismatch, "parameter vector has " + std::to_string(v.size()) + " entries, net has " +
                                              std::to_string(net.num_trainable()) + " trainable parameters");
    std::size_t offset = 0;
    for_each_block(net, [&](std::size_t, ParamBlock, Matrix& m, bool trainable) {
        if (!trainable) return;
        auto dst = m.flat();
        for (std::size_t k = 0; k < dst.size(); ++k) dst[k] = v[offset + k];
        offset += dst.size();
    });
    net.project_scales();
}

void unflatten(WavKanNet& net, const ParamVector& v) { unflatten(net, std::span<const double>(v.values)); }

ParamLayout param_layout(const WavKanNet& net) {
    ParamLayout layout;
    std::size_t full = 0;
    for_each_block(net, [&](std::size_t l, ParamBlock block, const Matrix& m, bool trainable) {
        if (trainable) {
            for (std::size_t k = 0; k < m.size(); ++k) {
                layout.full_index.push_back(full + k);
                layout.block.push_back(block);
                layout.layer.push_back(l);
            }
        }
        full += m.size();
    });
    layout.full_size = full;
    return layout;
}

}  // namespace wavkan
