#include "wavkan/artifacts.hpp"

#include <charconv>
#include <ostream>

namespace wavkan {

void write_comment_header(std::ostream& os, const HeaderFields& fields) {
    for (const auto& [key, value] : fields) os << "# " << key << ": " << value << '\n';
}

std::string format_double(double v) {
    char buf[64];
    const auto res = std::to_chars(buf, buf + sizeof(buf), v);
    return std::string(buf, res.ptr);
}

}  // namespace wavkan
