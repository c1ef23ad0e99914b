#include "unicode_util.hpp"

#include <unicode/normalizer2.h>
#include <unicode/locid.h>
#include <unicode/uchar.h>
#include <unicode/unistr.h>

#include "phishmatch/error.hpp"

namespace phishmatch::unicode {
namespace {

icu::UnicodeString to_icu(std::u32string_view s) {
    return icu::UnicodeString::fromUTF32(reinterpret_cast<const UChar32*>(s.data()), static_cast<int32_t>(s.size()));
}

std::u32string from_icu(const icu::UnicodeString& u) {
    UErrorCode status = U_ZERO_ERROR;
    std::u32string out(static_cast<size_t>(u.countChar32()), U'\0');
    u.toUTF32(reinterpret_cast<UChar32*>(out.data()), static_cast<int32_t>(out.size()), status);
    if (U_FAILURE(status)) throw Error("utf-32 conversion failed");
    return out;
}

const icu::Normalizer2& normalizer(bool nfkd) {
    UErrorCode status = U_ZERO_ERROR;
    const icu::Normalizer2* n = nfkd ? icu::Normalizer2::getNFKDInstance(status) : icu::Normalizer2::getNFCInstance(status);
    if (U_FAILURE(status) || n == nullptr) throw Error("ICU normalizer unavailable");
    return *n;
}

}  // namespace

std::u32string utf8_to_u32(std::string_view s) {
    return from_icu(icu::UnicodeString::fromUTF8(icu::StringPiece(s.data(), static_cast<int32_t>(s.size()))));
}

std::string u32_to_utf8(std::u32string_view s) {
    std::string out;
    to_icu(s).toUTF8String(out);
    return out;
}

std::u32string fold_nfc(std::string_view utf8) {
    auto u = icu::UnicodeString::fromUTF8(icu::StringPiece(utf8.data(), static_cast<int32_t>(utf8.size())));
    u.toLower(icu::Locale::getRoot());
    UErrorCode status = U_ZERO_ERROR;
    auto n = normalizer(false).normalize(u, status);
    if (U_FAILURE(status)) throw Error("NFC normalization failed");
    return from_icu(n);
}

std::u32string nfkd(std::u32string_view s) {
    UErrorCode status = U_ZERO_ERROR;
    auto n = normalizer(true).normalize(to_icu(s), status);
    if (U_FAILURE(status)) throw Error("NFKD normalization failed");
    return from_icu(n);
}

bool is_combining_mark(char32_t c) {
    int8_t t = u_charType(static_cast<UChar32>(c));
    return t == U_NON_SPACING_MARK || t == U_COMBINING_SPACING_MARK || t == U_ENCLOSING_MARK;
}

}  // namespace phishmatch::unicode
