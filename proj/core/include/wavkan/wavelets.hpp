#pragma once

#include <array>
#include <string>
#include <string_view>

namespace wavkan {

/// Smallest admissible |S| for a scaled/shifted wavelet. Keeps the 1/S
/// chain-rule factors bounded during optimization.
inline constexpr double kScaleMin = 1e-3;

enum class WaveletKind { Morlet, Shannon, MexicanHat, DoG };

[[nodiscard]] std::string_view to_string(WaveletKind kind) noexcept;
[[nodiscard]] WaveletKind wavelet_kind_from_string(std::string_view name);

/// A real mother wavelet together with its frequency/scale parameters.
///
///   Morlet      e^{-a x^2} cos(b x)
///   Shannon     (sin(omega1 x) - sin(omega2 x)) / (pi x)
///   MexicanHat  2 / (sqrt(3 sigma) pi^{1/4}) (1 - (x/sigma)^2) e^{-x^2 / (2 sigma^2)}
///   DoG         -(x / sigma^2) e^{-x^2 / (2 sigma^2)}
///
/// Only the fields relevant to `kind` are meaningful. Construct through the
/// named factories, which validate the parameter ranges.
class MotherWavelet {
public:
    static MotherWavelet morlet(double a, double b);
    static MotherWavelet shannon(double omega1, double omega2);
    /// Octave band: omega1 = 2 omega2 exactly.
    static MotherWavelet shannon_octave(double omega2);
    static MotherWavelet mexican_hat(double sigma);
    static MotherWavelet dog(double sigma);

    [[nodiscard]] WaveletKind kind() const noexcept { return kind_; }
    [[nodiscard]] double a() const noexcept { return a_; }
    [[nodiscard]] double b() const noexcept { return b_; }
    [[nodiscard]] double omega1() const noexcept { return omega1_; }
    [[nodiscard]] double omega2() const noexcept { return omega2_; }
    [[nodiscard]] double sigma() const noexcept { return sigma_; }

    /// Human-readable "kind(param=value,...)" used in artifact headers.
    [[nodiscard]] std::string describe() const;

    /// The frequency-like knob of the family: b (Morlet), omega1 (Shannon),
    /// sigma (MexicanHat, DoG).
    [[nodiscard]] double frequency_parameter() const noexcept;

    friend bool operator==(const MotherWavelet&, const MotherWavelet&) = default;

private:
    MotherWavelet() = default;

    WaveletKind kind_ = WaveletKind::Morlet;
    double a_ = 1.0;
    double b_ = 0.0;
    double omega1_ = 2.0;
    double omega2_ = 1.0;
    double sigma_ = 1.0;
};

[[nodiscard]] double eval(const MotherWavelet& w, double x);
[[nodiscard]] double eval_d1(const MotherWavelet& w, double x);
[[nodiscard]] double eval_d2(const MotherWavelet& w, double x);
/// Third derivative. Not part of the input-derivative surface; the
/// parameter gradient of a second-derivative PDE residual needs it.
[[nodiscard]] double eval_d3(const MotherWavelet& w, double x);

/// psi(x) and its derivatives up to `Order` (<= 3) in one evaluation.
template <int Order>
[[nodiscard]] std::array<double, Order + 1> eval_jet(const MotherWavelet& w, double x);

extern template std::array<double, 1> eval_jet<0>(const MotherWavelet&, double);
extern template std::array<double, 2> eval_jet<1>(const MotherWavelet&, double);
extern template std::array<double, 3> eval_jet<2>(const MotherWavelet&, double);
extern template std::array<double, 4> eval_jet<3>(const MotherWavelet&, double);

/// psi((x - shift) / scale). Throws Errc::ScaleTooSmall when |scale| < kScaleMin.
[[nodiscard]] double scaled_shifted_eval(const MotherWavelet& w, double x, double shift, double scale);
/// d/dx psi((x - shift) / scale) = psi'(u) / scale.
[[nodiscard]] double scaled_shifted_eval_d1(const MotherWavelet& w, double x, double shift, double scale);
/// d^2/dx^2 psi((x - shift) / scale) = psi''(u) / scale^2.
[[nodiscard]] double scaled_shifted_eval_d2(const MotherWavelet& w, double x, double shift, double scale);

/// Clamp |scale| up to kScaleMin, keeping its sign (zero maps to +kScaleMin).
[[nodiscard]] double project_scale(double scale) noexcept;

}  // namespace wavkan
