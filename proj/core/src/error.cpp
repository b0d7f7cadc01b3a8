#include "wavkan/error.hpp"

namespace wavkan {

std::string_view to_string(Errc code) noexcept {
    switch (code) {
        case Errc::ScaleTooSmall: return "ScaleTooSmall";
        case Errc::BadShape: return "BadShape";
        case Errc::DimensionMismatch: return "DimensionMismatch";
        case Errc::LayoutMismatch: return "LayoutMismatch";
        case Errc::NonScalarOutput: return "NonScalarOutput";
        case Errc::NonConvergence: return "NonConvergence";
        case Errc::DomainViolation: return "DomainViolation";
        case Errc::QuadratureTooCoarse: return "QuadratureTooCoarse";
        case Errc::EmptyData: return "EmptyData";
        case Errc::ShapeMismatch: return "ShapeMismatch";
        case Errc::LineSearchFailed: return "LineSearchFailed";
        case Errc::NonFiniteLoss: return "NonFiniteLoss";
        case Errc::EmptyTerm: return "EmptyTerm";
        case Errc::UnknownTarget: return "UnknownTarget";
        case Errc::UnknownBenchmark: return "UnknownBenchmark";
        case Errc::InvalidConfig: return "InvalidConfig";
        case Errc::Io: return "Io";
    }
    return "Unknown";
}

}  // namespace wavkan
