#pragma once

#include <string>
#include <string_view>

namespace phishmatch::unicode {

std::u32string utf8_to_u32(std::string_view s);
std::string u32_to_utf8(std::u32string_view s);

/// Root-locale lowercase followed by NFC.
std::u32string fold_nfc(std::string_view utf8);

/// NFKD decomposition.
std::u32string nfkd(std::u32string_view s);

/// Nonspacing, spacing-combining or enclosing mark.
bool is_combining_mark(char32_t c);

inline bool is_ascii(std::string_view s) {
    for (char c : s)
        if (static_cast<unsigned char>(c) >= 0x80) return false;
    return true;
}

}  // namespace phishmatch::unicode
