#include "phishmatch/punycode.hpp"

#include <cstdint>
#include <limits>

#include "phishmatch/error.hpp"

namespace phishmatch::punycode {
namespace {

constexpr uint32_t kBase = 36;
constexpr uint32_t kTMin = 1;
constexpr uint32_t kTMax = 26;
constexpr uint32_t kSkew = 38;
constexpr uint32_t kDamp = 700;
constexpr uint32_t kInitialBias = 72;
constexpr uint32_t kInitialN = 128;
constexpr uint32_t kMaxInt = std::numeric_limits<uint32_t>::max();

uint32_t adapt(uint32_t delta, uint32_t numpoints, bool first) {
    delta = first ? delta / kDamp : delta / 2;
    delta += delta / numpoints;
    uint32_t k = 0;
    while (delta > ((kBase - kTMin) * kTMax) / 2) {
        delta /= kBase - kTMin;
        k += kBase;
    }
    return k + (kBase - kTMin + 1) * delta / (delta + kSkew);
}

uint32_t decode_digit(char c) {
    if (c >= '0' && c <= '9') return static_cast<uint32_t>(c - '0') + 26;
    if (c >= 'a' && c <= 'z') return static_cast<uint32_t>(c - 'a');
    if (c >= 'A' && c <= 'Z') return static_cast<uint32_t>(c - 'A');
    return kBase;
}

char encode_digit(uint32_t d) { return d < 26 ? static_cast<char>('a' + d) : static_cast<char>('0' + d - 26); }

uint32_t threshold(uint32_t k, uint32_t bias) {
    if (k <= bias) return kTMin;
    if (k >= bias + kTMax) return kTMax;
    return k - bias;
}

}  // namespace

std::u32string decode(std::string_view input) {
    std::u32string out;
    size_t b = input.rfind('-');
    size_t in = 0;
    if (b != std::string_view::npos) {
        for (size_t j = 0; j < b; ++j) {
            auto c = static_cast<unsigned char>(input[j]);
            if (c >= 0x80) throw PunycodeDecodeError("non-basic code point before delimiter");
            out.push_back(c);
        }
        in = b + 1;
    }

    uint32_t n = kInitialN, i = 0, bias = kInitialBias;
    while (in < input.size()) {
        uint32_t oldi = i, w = 1;
        for (uint32_t k = kBase;; k += kBase) {
            if (in >= input.size()) throw PunycodeDecodeError("truncated punycode label");
            uint32_t digit = decode_digit(input[in++]);
            if (digit >= kBase) throw PunycodeDecodeError("invalid punycode digit");
            if (digit > (kMaxInt - i) / w) throw PunycodeDecodeError("punycode overflow");
            i += digit * w;
            uint32_t t = threshold(k, bias);
            if (digit < t) break;
            if (w > kMaxInt / (kBase - t)) throw PunycodeDecodeError("punycode overflow");
            w *= kBase - t;
        }
        auto len = static_cast<uint32_t>(out.size() + 1);
        bias = adapt(i - oldi, len, oldi == 0);
        if (i / len > kMaxInt - n) throw PunycodeDecodeError("punycode overflow");
        n += i / len;
        i %= len;
        if (n > 0x10FFFF || (n >= 0xD800 && n <= 0xDFFF)) throw PunycodeDecodeError("invalid code point");
        out.insert(out.begin() + i, static_cast<char32_t>(n));
        ++i;
    }
    return out;
}

std::string encode(std::u32string_view input) {
    std::string out;
    for (char32_t c : input)
        if (c < 0x80) out.push_back(static_cast<char>(c));
    auto b = static_cast<uint32_t>(out.size());
    uint32_t h = b;
    if (b > 0) out.push_back('-');

    uint32_t n = kInitialN, delta = 0, bias = kInitialBias;
    while (h < input.size()) {
        uint32_t m = kMaxInt;
        for (char32_t c : input)
            if (c >= n && c < m) m = c;
        delta += (m - n) * (h + 1);
        n = m;
        for (char32_t c : input) {
            if (c < n) ++delta;
            if (c == n) {
                uint32_t q = delta;
                for (uint32_t k = kBase;; k += kBase) {
                    uint32_t t = threshold(k, bias);
                    if (q < t) break;
                    out.push_back(encode_digit(t + (q - t) % (kBase - t)));
                    q = (q - t) / (kBase - t);
                }
                out.push_back(encode_digit(q));
                bias = adapt(delta, h + 1, h == b);
                delta = 0;
                ++h;
            }
        }
        ++delta;
        ++n;
    }
    return out;
}

bool has_ace_label(std::string_view host) {
    size_t start = 0;
    while (start <= host.size()) {
        size_t dot = host.find('.', start);
        auto label = host.substr(start, dot == std::string_view::npos ? std::string_view::npos : dot - start);
        if (is_ace_label(label)) return true;
        if (dot == std::string_view::npos) break;
        start = dot + 1;
    }
    return false;
}

}  // namespace phishmatch::punycode
