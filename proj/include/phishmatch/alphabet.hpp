#pragma once

#include <array>
#include <cstdint>
#include <string_view>

namespace phishmatch {

/// Hostname alphabet in ASCII order: '-', '.', '0'-'9', 'a'-'z'.
inline constexpr int kSigma = 38;
inline constexpr std::string_view kSigmaChars = "-.0123456789abcdefghijklmnopqrstuvwxyz";

namespace detail {
constexpr std::array<int8_t, 256> make_symbol_table() {
    std::array<int8_t, 256> t{};
    for (auto& v : t) v = -1;
    for (int i = 0; i < kSigma; ++i) t[static_cast<unsigned char>(kSigmaChars[i])] = static_cast<int8_t>(i);
    return t;
}
inline constexpr auto kSymbolTable = make_symbol_table();
}  // namespace detail

/// Bit position of `c` in a state bitmap, or -1 when `c` is outside the alphabet.
constexpr int symbol_index(char c) { return detail::kSymbolTable[static_cast<unsigned char>(c)]; }

constexpr char symbol_char(int index) { return kSigmaChars[index]; }

constexpr bool in_alphabet(std::string_view s) {
    for (char c : s)
        if (symbol_index(c) < 0) return false;
    return true;
}

}  // namespace phishmatch
