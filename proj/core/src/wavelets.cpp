#include "wavkan/wavelets.hpp"

#include <cmath>
#include <numbers>
#include <sstream>

#include "wavkan/error.hpp"

namespace wavkan {

std::string_view to_string(WaveletKind kind) noexcept {
    switch (kind) {
        case WaveletKind::Morlet: return "morlet";
        case WaveletKind::Shannon: return "shannon";
        case WaveletKind::MexicanHat: return "mexican_hat";
        case WaveletKind::DoG: return "dog";
    }
    return "unknown";
}

WaveletKind wavelet_kind_from_string(std::string_view name) {
    if (name == "morlet") return WaveletKind::Morlet;
    if (name == "shannon") return WaveletKind::Shannon;
    if (name == "mexican_hat" || name == "mexicanhat") return WaveletKind::MexicanHat;
    if (name == "dog") return WaveletKind::DoG;
    throw Error(Errc::InvalidConfig, "unknown wavelet kind '" + std::string(name) + "'");
}

MotherWavelet MotherWavelet::morlet(double a, double b) {
    if (!(a > 0.0) || !(b >= 0.0) || !std::isfinite(a) || !std::isfinite(b))
        throw Error(Errc::InvalidConfig, "Morlet requires a > 0 and b >= 0");
    MotherWavelet w;
    w.kind_ = WaveletKind::Morlet;
    w.a_ = a;
    w.b_ = b;
    return w;
}

MotherWavelet MotherWavelet::shannon(double omega1, double omega2) {
    if (!(omega2 > 0.0) || !(omega1 > omega2) || !std::isfinite(omega1))
        throw Error(Errc::InvalidConfig, "Shannon requires omega1 > omega2 > 0");
    MotherWavelet w;
    w.kind_ = WaveletKind::Shannon;
    w.omega1_ = omega1;
    w.omega2_ = omega2;
    return w;
}

MotherWavelet MotherWavelet::shannon_octave(double omega2) { return shannon(2.0 * omega2, omega2); }

MotherWavelet MotherWavelet::mexican_hat(double sigma) {
    if (!(sigma > 0.0) || !std::isfinite(sigma))
        throw Error(Errc::InvalidConfig, "Mexican hat requires sigma > 0");
    MotherWavelet w;
    w.kind_ = WaveletKind::MexicanHat;
    w.sigma_ = sigma;
    return w;
}

MotherWavelet MotherWavelet::dog(double sigma) {
    if (!(sigma > 0.0) || !std::isfinite(sigma))
        throw Error(Errc::InvalidConfig, "DoG requires sigma > 0");
    MotherWavelet w;
    w.kind_ = WaveletKind::DoG;
    w.sigma_ = sigma;
    return w;
}

std::string MotherWavelet::describe() const {
    std::ostringstream os;
    os.precision(17);
    os << to_string(kind_) << '(';
    switch (kind_) {
        case WaveletKind::Morlet: os << "a=" << a_ << ",b=" << b_; break;
        case WaveletKind::Shannon: os << "omega1=" << omega1_ << ",omega2=" << omega2_; break;
        case WaveletKind::MexicanHat:
        case WaveletKind::DoG: os << "sigma=" << sigma_; break;
    }
    os << ')';
    return os.str();
}

double MotherWavelet::frequency_parameter() const noexcept {
    switch (kind_) {
        case WaveletKind::Morlet: return b_;
        case WaveletKind::Shannon: return omega1_;
        case WaveletKind::MexicanHat:
        case WaveletKind::DoG: return sigma_;
    }
    return 0.0;
}

namespace {

template <int Order>
std::array<double, Order + 1> morlet_jet(double a, double b, double x) {
    const double g0 = std::exp(-a * x * x);
    const double c = std::cos(b * x);
    std::array<double, Order + 1> out{};
    out[0] = g0 * c;
    if constexpr (Order >= 1) {
        const double s = std::sin(b * x);
        // Gaussian factor derivatives.
        const double g1 = -2.0 * a * x * g0;
        // Oscillating factor derivatives.
        const double c1 = -b * s;
        out[1] = g1 * c + g0 * c1;
        if constexpr (Order >= 2) {
            const double g2 = (4.0 * a * a * x * x - 2.0 * a) * g0;
            const double c2 = -b * b * c;
            out[2] = g2 * c + 2.0 * g1 * c1 + g0 * c2;
            if constexpr (Order >= 3) {
                const double g3 = (-8.0 * a * a * a * x * x * x + 12.0 * a * a * x) * g0;
                const double c3 = b * b * b * s;
                out[3] = g3 * c + 3.0 * g2 * c1 + 3.0 * g1 * c2 + g0 * c3;
            }
        }
    }
    return out;
}

// Derivatives of He_n(z) e^{-z^2/2} satisfy d/dz [He_n e] = -He_{n+1} e.
// Mexican hat is A * (-He_2) e and DoG is -(1/sigma) He_1 e in z = x / sigma.
template <int Order>
std::array<double, Order + 1> hermite_gaussian_jet(int first, double amplitude, double sigma, double x) {
    const double z = x / sigma;
    const double e = std::exp(-0.5 * z * z);
    // Probabilists' Hermite polynomials He_0..He_5 at z.
    std::array<double, 6> he{};
    he[0] = 1.0;
    he[1] = z;
    for (int n = 1; n < 5; ++n) he[n + 1] = z * he[n] - n * he[n - 1];
    std::array<double, Order + 1> out{};
    double sign = 1.0;
    double inv_scale = 1.0;
    for (int k = 0; k <= Order; ++k) {
        out[k] = amplitude * sign * he[first + k] * e * inv_scale;
        sign = -sign;
        inv_scale /= sigma;
    }
    return out;
}

// Shannon via psi(x) = (1/pi) * integral_{omega2}^{omega1} cos(w x) dw.
constexpr double kShannonSeriesArg = 0.5;
constexpr int kShannonSeriesTerms = 16;

template <int Order>
std::array<double, Order + 1> shannon_series(double w1, double w2, double x) {
    std::array<double, Order + 1> out{};
    double fact2m = 1.0;  // (2m)!
    double p1 = w1;       // w1^{2m+1}
    double p2 = w2;
    for (int m = 0; m < kShannonSeriesTerms; ++m) {
        if (m > 0) {
            fact2m *= (2.0 * m - 1.0) * (2.0 * m);
            p1 *= w1 * w1;
            p2 *= w2 * w2;
        }
        const double sign = (m % 2 == 0) ? 1.0 : -1.0;
        const double coeff = sign * (p1 - p2) / ((2.0 * m + 1.0) * fact2m);
        // d^n/dx^n x^{2m} = (2m)! / (2m - n)! x^{2m - n}
        for (int n = 0; n <= Order; ++n) {
            const int power = 2 * m - n;
            if (power < 0) continue;
            double falling = 1.0;
            for (int r = 0; r < n; ++r) falling *= static_cast<double>(2 * m - r);
            out[n] += coeff * falling * std::pow(x, power);
        }
    }
    for (auto& v : out) v *= std::numbers::inv_pi;
    return out;
}

// n-th derivative of sin(w x) / x.
template <int Order>
std::array<double, Order + 1> sinc_term(double w, double x) {
    const double s = std::sin(w * x);
    const double c = std::cos(w * x);
    const double r = 1.0 / x;
    std::array<double, Order + 1> out{};
    out[0] = s * r;
    if constexpr (Order >= 1) out[1] = w * c * r - s * r * r;
    if constexpr (Order >= 2) out[2] = -w * w * s * r - 2.0 * w * c * r * r + 2.0 * s * r * r * r;
    if constexpr (Order >= 3)
        out[3] = -w * w * w * c * r + 3.0 * w * w * s * r * r + 6.0 * w * c * r * r * r - 6.0 * s * r * r * r * r;
    return out;
}

template <int Order>
std::array<double, Order + 1> shannon_jet(double w1, double w2, double x) {
    if (std::abs(w1 * x) < kShannonSeriesArg) return shannon_series<Order>(w1, w2, x);
    const auto hi = sinc_term<Order>(w1, x);
    const auto lo = sinc_term<Order>(w2, x);
    std::array<double, Order + 1> out{};
    for (int n = 0; n <= Order; ++n) out[n] = (hi[n] - lo[n]) * std::numbers::inv_pi;
    return out;
}

void check_scale(double scale) {
    if (!(std::abs(scale) >= kScaleMin))
        throw Error(Errc::ScaleTooSmall, "|S| = " + std::to_string(std::abs(scale)) + " is below the minimum scale");
}

}  // namespace

template <int Order>
std::array<double, Order + 1> eval_jet(const MotherWavelet& w, double x) {
    static_assert(Order >= 0 && Order <= 3);
    switch (w.kind()) {
        case WaveletKind::Morlet: return morlet_jet<Order>(w.a(), w.b(), x);
        case WaveletKind::Shannon: return shannon_jet<Order>(w.omega1(), w.omega2(), x);
        case WaveletKind::MexicanHat: {
            const double amp = 2.0 / (std::sqrt(3.0 * w.sigma()) * std::pow(std::numbers::pi, 0.25));
            return hermite_gaussian_jet<Order>(2, -amp, w.sigma(), x);
        }
        case WaveletKind::DoG: return hermite_gaussian_jet<Order>(1, -1.0 / w.sigma(), w.sigma(), x);
    }
    return {};
}

template std::array<double, 1> eval_jet<0>(const MotherWavelet&, double);
template std::array<double, 2> eval_jet<1>(const MotherWavelet&, double);
template std::array<double, 3> eval_jet<2>(const MotherWavelet&, double);
template std::array<double, 4> eval_jet<3>(const MotherWavelet&, double);

double eval(const MotherWavelet& w, double x) { return eval_jet<0>(w, x)[0]; }
double eval_d1(const MotherWavelet& w, double x) { return eval_jet<1>(w, x)[1]; }
double eval_d2(const MotherWavelet& w, double x) { return eval_jet<2>(w, x)[2]; }
double eval_d3(const MotherWavelet& w, double x) { return eval_jet<3>(w, x)[3]; }

double scaled_shifted_eval(const MotherWavelet& w, double x, double shift, double scale) {
    check_scale(scale);
    return eval(w, (x - shift) / scale);
}

double scaled_shifted_eval_d1(const MotherWavelet& w, double x, double shift, double scale) {
    check_scale(scale);
    return eval_d1(w, (x - shift) / scale) / scale;
}

double scaled_shifted_eval_d2(const MotherWavelet& w, double x, double shift, double scale) {
    check_scale(scale);
    return eval_d2(w, (x - shift) / scale) / (scale * scale);
}

double project_scale(double scale) noexcept {
    if (std::abs(scale) >= kScaleMin) return scale;
    return scale < 0.0 ? -kScaleMin : kScaleMin;
}

}  // namespace wavkan
