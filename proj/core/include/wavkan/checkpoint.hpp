#pragma once

#include <filesystem>
#include <iosfwd>

#include "wavkan/network.hpp"

namespace wavkan {

/// Line-oriented text checkpoint of a net: wavelet, shape, policy, seed,
/// every layer's W/T/S with trainability flags, and the trainable ParamVector.
/// Values use the shortest decimal form that round-trips, so a load restores
/// the net bit for bit. The layout is described in docs/checkpoint-format.md.
/// Lines starting with '#' are skipped on load, so callers may prepend a
/// comment header.
void save_checkpoint(std::ostream& os, const WavKanNet& net);
void save_checkpoint(const std::filesystem::path& path, const WavKanNet& net);

/// Throws Errc::Io on malformed input and Errc::LayoutMismatch when the stored
/// ParamVector disagrees with the stored layers.
[[nodiscard]] WavKanNet load_checkpoint(std::istream& is);
[[nodiscard]] WavKanNet load_checkpoint(const std::filesystem::path& path);

}  // namespace wavkan
