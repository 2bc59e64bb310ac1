#include "cyclo/format.hpp"

#include <charconv>
#include <cctype>
#include <system_error>

#include "cyclo/error.hpp"

namespace cyclo {

std::string format_double(double value) {
    char buf[64];
    const auto result = std::to_chars(buf, buf + sizeof(buf), value);
    return std::string(buf, result.ptr);
}

double parse_double(const std::string& text, const std::string& what) {
    std::size_t begin = 0;
    std::size_t end = text.size();
    while (begin < end && std::isspace(static_cast<unsigned char>(text[begin]))) ++begin;
    while (end > begin && std::isspace(static_cast<unsigned char>(text[end - 1]))) --end;
    // from_chars rejects a leading '+', strtod-style input accepts it
    if (begin + 1 < end && text[begin] == '+' && text[begin + 1] != '-') ++begin;
    double value = 0.0;
    const auto result = std::from_chars(text.data() + begin, text.data() + end, value);
    if (begin == end || result.ec != std::errc() || result.ptr != text.data() + end)
        throw ConfigError("invalid number for " + what + ": '" + text + "'");
    return value;
}

}  // namespace cyclo
