#pragma once

#include <iosfwd>
#include <string>
#include <utility>
#include <vector>

namespace wavkan {

using HeaderFields = std::vector<std::pair<std::string, std::string>>;

/// Writes "# key: value" lines.
void write_comment_header(std::ostream& os, const HeaderFields& fields);

/// Shortest decimal text that round-trips to the same double.
[[nodiscard]] std::string format_double(double v);

}  // namespace wavkan
