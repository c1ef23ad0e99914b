#pragma once

#include <string>
#include <string_view>

namespace phishmatch::punycode {

/// RFC 3492 decoding of one label without the "xn--" prefix.
/// Throws PunycodeDecodeError on malformed input.
std::u32string decode(std::string_view label);

/// RFC 3492 encoding of one label (no prefix added).
std::string encode(std::u32string_view label);

inline constexpr std::string_view kAcePrefix = "xn--";

inline bool is_ace_label(std::string_view label) {
    return label.size() > kAcePrefix.size() && label.substr(0, 4) == kAcePrefix;
}

/// True when any dot-separated label of `host` carries the ACE prefix.
bool has_ace_label(std::string_view host);

}  // namespace phishmatch::punycode
