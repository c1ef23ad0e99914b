#include "phishmatch/url.hpp"

#include <arpa/inet.h>

#include <algorithm>
#include <charconv>
#include <mutex>

#include "phishmatch/alphabet.hpp"
#include "phishmatch/data_paths.hpp"
#include "phishmatch/error.hpp"
#include "phishmatch/punycode.hpp"
#include "unicode_util.hpp"

namespace phishmatch {
namespace {

std::string ascii_lower(std::string_view s) {
    std::string out(s);
    for (char& c : out)
        if (c >= 'A' && c <= 'Z') c = static_cast<char>(c - 'A' + 'a');
    return out;
}

// Lowercases, normalizes and punycode-encodes every label. With `strict`
// set, labels must be non-empty and drawn from the hostname alphabet.
std::string encode_labels(std::string_view host, bool strict) {
    std::string folded;
    if (unicode::is_ascii(host)) {
        folded = ascii_lower(host);
    } else {
        folded = unicode::u32_to_utf8(unicode::fold_nfc(host));
    }
    std::string out;
    size_t start = 0;
    while (true) {
        size_t dot = folded.find('.', start);
        std::string_view label(folded.data() + start, (dot == std::string::npos ? folded.size() : dot) - start);
        if (strict && label.empty()) throw MalformedUrl("empty label in host");
        if (!out.empty() || start > 0) out.push_back('.');
        if (unicode::is_ascii(label)) {
            out.append(label);
        } else {
            out.append(punycode::kAcePrefix);
            out.append(punycode::encode(unicode::utf8_to_u32(label)));
        }
        if (dot == std::string::npos) break;
        start = dot + 1;
    }
    if (strict) {
        if (!in_alphabet(out)) throw MalformedUrl("invalid character in host: " + std::string(host));
        if (out.size() > 253) throw MalformedUrl("host too long");
    }
    return out;
}

bool parse_uint(std::string_view s, int base, uint64_t& value) {
    if (s.empty()) return false;
    auto [p, ec] = std::from_chars(s.data(), s.data() + s.size(), value, base);
    return ec == std::errc() && p == s.data() + s.size();
}

bool parse_ipv4_part(std::string_view part, uint64_t& value) {
    if (part.size() > 2 && part[0] == '0' && (part[1] == 'x' || part[1] == 'X')) return parse_uint(part.substr(2), 16, value);
    if (part.size() > 3) return false;
    for (char c : part)
        if (c < '0' || c > '9') return false;
    return parse_uint(part, 10, value);
}

}  // namespace

PublicSuffixList PublicSuffixList::parse(std::string_view text) {
    PublicSuffixList psl;
    size_t pos = 0;
    while (pos < text.size()) {
        size_t nl = text.find('\n', pos);
        std::string_view line = text.substr(pos, nl == std::string_view::npos ? std::string_view::npos : nl - pos);
        pos = nl == std::string_view::npos ? text.size() : nl + 1;

        size_t b = line.find_first_not_of(" \t\r");
        if (b == std::string_view::npos) continue;
        line = line.substr(b);
        if (line.starts_with("//")) continue;
        line = line.substr(0, line.find_first_of(" \t\r"));

        if (line.starts_with("!")) {
            psl.exception_.insert(encode_labels(line.substr(1), false));
        } else if (line.starts_with("*.")) {
            psl.wildcard_.insert(encode_labels(line.substr(2), false));
        } else {
            psl.exact_.insert(encode_labels(line, false));
        }
    }
    return psl;
}

PublicSuffixList PublicSuffixList::load(const std::filesystem::path& path) { return parse(read_file(path)); }

const PublicSuffixList& PublicSuffixList::bundled() {
    static const PublicSuffixList psl = load(data_file("public_suffix_list.dat"));
    return psl;
}

size_t PublicSuffixList::suffix_labels(std::string_view host) const {
    size_t n = static_cast<size_t>(std::count(host.begin(), host.end(), '.')) + 1;
    size_t start = 0;
    std::string key;
    for (size_t i = 0; i < n; ++i) {
        std::string_view suffix = host.substr(start);
        key.assign(suffix);
        if (exception_.contains(key)) return n - i - 1;
        if (exact_.contains(key)) return n - i;
        size_t dot = suffix.find('.');
        if (dot != std::string_view::npos) {
            key.assign(suffix.substr(dot + 1));
            if (wildcard_.contains(key)) return n - i;
        }
        if (dot == std::string_view::npos) break;
        start += dot + 1;
    }
    return 1;
}

std::string to_ascii_host(std::string_view host) { return encode_labels(host, true); }

std::optional<std::string> normalize_ipv4(std::string_view host) {
    uint64_t addr = 0;
    if (host.find('.') == std::string_view::npos) {
        if (host.size() <= 2 || host[0] != '0' || (host[1] != 'x' && host[1] != 'X') || host.size() > 10) return std::nullopt;
        if (!parse_uint(host.substr(2), 16, addr)) return std::nullopt;
    } else {
        int parts = 0;
        size_t start = 0;
        while (true) {
            size_t dot = host.find('.', start);
            auto part = host.substr(start, dot == std::string_view::npos ? std::string_view::npos : dot - start);
            uint64_t v = 0;
            if (++parts > 4 || !parse_ipv4_part(part, v) || v > 255) return std::nullopt;
            addr = (addr << 8) | v;
            if (dot == std::string_view::npos) break;
            start = dot + 1;
        }
        if (parts != 4) return std::nullopt;
    }
    return std::to_string((addr >> 24) & 0xff) + "." + std::to_string((addr >> 16) & 0xff) + "." +
           std::to_string((addr >> 8) & 0xff) + "." + std::to_string(addr & 0xff);
}

bool is_ip_hostname(std::string_view host) {
    if (host.size() >= 2 && host.front() == '[' && host.back() == ']') host = host.substr(1, host.size() - 2);
    if (host.find(':') != std::string_view::npos) {
        in6_addr a6{};
        std::string h(host);
        return inet_pton(AF_INET6, h.c_str(), &a6) == 1;
    }
    return normalize_ipv4(host).has_value();
}

ParsedUrl parse_url(std::string_view raw, const PublicSuffixList& psl) {
    ParsedUrl url;
    auto first = raw.find_first_not_of(" \t\r\n");
    if (first == std::string_view::npos) throw MalformedUrl("empty url");
    raw = raw.substr(first, raw.find_last_not_of(" \t\r\n") - first + 1);

    std::string_view rest = raw;
    size_t sep = raw.find("://");
    auto scheme_ok = [&](std::string_view s) {
        if (s.empty() || !std::isalpha(static_cast<unsigned char>(s[0]))) return false;
        return std::all_of(s.begin(), s.end(), [](char c) {
            return std::isalnum(static_cast<unsigned char>(c)) || c == '+' || c == '-' || c == '.';
        });
    };
    if (sep != std::string_view::npos && scheme_ok(raw.substr(0, sep))) {
        url.scheme = ascii_lower(raw.substr(0, sep));
        rest = raw.substr(sep + 3);
    } else {
        url.scheme = "http";
        if (rest.starts_with("//")) rest.remove_prefix(2);
    }

    size_t auth_end = rest.find_first_of("/?#");
    std::string_view authority = rest.substr(0, auth_end);
    std::string_view tail = auth_end == std::string_view::npos ? std::string_view{} : rest.substr(auth_end);
    if (size_t at = authority.rfind('@'); at != std::string_view::npos) authority.remove_prefix(at + 1);

    std::string_view host = authority;
    std::string_view port;
    if (authority.starts_with("[")) {
        size_t close = authority.find(']');
        if (close == std::string_view::npos) throw MalformedUrl("unterminated IPv6 literal");
        host = authority.substr(1, close - 1);
        auto after = authority.substr(close + 1);
        if (!after.empty()) {
            if (after[0] != ':') throw MalformedUrl("junk after IPv6 literal");
            port = after.substr(1);
        }
    } else if (std::count(authority.begin(), authority.end(), ':') == 1) {
        size_t colon = authority.find(':');
        host = authority.substr(0, colon);
        port = authority.substr(colon + 1);
    }
    if (!port.empty()) {
        uint64_t p = 0;
        if (port.size() > 5 || !parse_uint(port, 10, p) || p > 65535) throw MalformedUrl("invalid port");
        url.port = static_cast<uint16_t>(p);
    }
    if (host.ends_with(".")) host.remove_suffix(1);
    if (host.empty()) throw MalformedUrl("url has no host: " + std::string(raw));

    if (host.find(':') != std::string_view::npos) {
        if (!is_ip_hostname(host)) throw MalformedUrl("invalid IPv6 literal");
        url.ip_host = true;
        url.hostname = ascii_lower(host);
        url.registrable_domain = url.hostname;
    } else if (auto v4 = normalize_ipv4(ascii_lower(host))) {
        url.ip_host = true;
        url.hostname = ascii_lower(host);
        url.registrable_domain = *v4;
    } else {
        url.hostname = to_ascii_host(host);
        size_t n = static_cast<size_t>(std::count(url.hostname.begin(), url.hostname.end(), '.')) + 1;
        size_t k = psl.suffix_labels(url.hostname);
        if (k >= n) {
            if (n < 2) throw MalformedUrl("host has no registrable domain: " + url.hostname);
            k = n - 1;
        }
        // Offset of the registrable domain: skip n-k-1 labels.
        size_t reg = 0;
        for (size_t i = 0; i + k + 1 < n; ++i) reg = url.hostname.find('.', reg) + 1;
        url.registrable_domain = url.hostname.substr(reg);
        url.subdomain = reg == 0 ? "" : url.hostname.substr(0, reg - 1);
        size_t dot = url.registrable_domain.find('.');
        url.brand = url.registrable_domain.substr(0, dot);
        url.tld = url.registrable_domain.substr(dot + 1);
    }

    size_t frag = tail.find('#');
    if (frag != std::string_view::npos) tail = tail.substr(0, frag);
    size_t q = tail.find('?');
    std::string_view path = tail.substr(0, q);
    if (q != std::string_view::npos) url.arguments = tail.substr(q + 1);
    size_t slash = path.rfind('/');
    if (slash != std::string_view::npos) {
        url.directory = path.substr(0, slash + 1);
        url.filename = path.substr(slash + 1);
    }
    return url;
}

}  // namespace phishmatch
