#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace wavkan {

enum class Errc {
    ScaleTooSmall,
    BadShape,
    DimensionMismatch,
    LayoutMismatch,
    NonScalarOutput,
    NonConvergence,
    DomainViolation,
    QuadratureTooCoarse,
    EmptyData,
    ShapeMismatch,
    LineSearchFailed,
    NonFiniteLoss,
    EmptyTerm,
    UnknownTarget,
    UnknownBenchmark,
    InvalidConfig,
    Io,
};

[[nodiscard]] std::string_view to_string(Errc code) noexcept;

// Every failure raised by the library carries one of the codes above so that
// callers (and the CLI exit path) can tell the failure kinds apart.
class Error : public std::runtime_error {
public:
    Error(Errc code, const std::string& what)
        : std::runtime_error(std::string(to_string(code)) + ": " + what), code_(code) {}

    [[nodiscard]] Errc code() const noexcept { return code_; }

private:
    Errc code_;
};

}  // namespace wavkan
