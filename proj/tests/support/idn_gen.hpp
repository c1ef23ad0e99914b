#pragma once

#include <random>
#include <string>

#include "unicode_util.hpp"

namespace testutil {

/// Random one- to three-label domain mixing ASCII, lookalikes, marks and CJK.
inline std::string random_unicode_domain(std::mt19937_64& rng) {
    static const std::u32string pool =
        U"abcdefghijklmnopqrstuvwxyz0123456789-"
        U"ABCXYZ"
        U"аеорсхуіјѕԁɡһ"   // Cyrillic and other Latin lookalikes
        U"αβγδεικνορτυχ"    // Greek
        U"áéíóúĺñçüößàèþðæ"  // Latin with diacritics
        U"ｐａｙ"              // fullwidth
        U"́̈‍"
        U"中文日本語한국"
        U"①ﬁ";
    std::u32string s;
    size_t labels = 1 + rng() % 3;
    for (size_t l = 0; l < labels; ++l) {
        if (l) s += U'.';
        size_t n = 1 + rng() % 10;
        for (size_t i = 0; i < n; ++i) s += pool[rng() % pool.size()];
    }
    return phishmatch::unicode::u32_to_utf8(s);
}

}  // namespace testutil
