#include "phishmatch/idn.hpp"

#include <charconv>
#include <optional>

#include "phishmatch/alphabet.hpp"
#include "phishmatch/data_paths.hpp"
#include "phishmatch/error.hpp"
#include "phishmatch/punycode.hpp"
#include "unicode_util.hpp"

namespace phishmatch {

namespace {

std::optional<char32_t> parse_hex(std::string_view s) {
    uint32_t v = 0;
    auto [p, ec] = std::from_chars(s.data(), s.data() + s.size(), v, 16);
    if (ec != std::errc{} || p != s.data() + s.size() || v > 0x10FFFF) return std::nullopt;
    return static_cast<char32_t>(v);
}

// Splits on '.', decoding ACE labels; the result is UTF-32 with dots kept.
std::u32string decode_labels(std::string_view domain) {
    std::u32string out;
    size_t start = 0;
    while (true) {
        size_t dot = domain.find('.', start);
        std::string_view label = domain.substr(start, dot == std::string_view::npos ? std::string_view::npos : dot - start);
        std::string lower(label);
        bool ascii = unicode::is_ascii(lower);
        if (ascii)
            for (char& c : lower) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
        if (ascii && punycode::is_ace_label(lower))
            out += punycode::decode(std::string_view(lower).substr(punycode::kAcePrefix.size()));
        else
            out += unicode::utf8_to_u32(lower);
        if (dot == std::string_view::npos) break;
        out += U'.';
        start = dot + 1;
    }
    return out;
}

Skeleton skeleton_once(std::string_view domain, const ConfusablesMap& map) {
    std::u32string folded = unicode::fold_nfc(unicode::u32_to_utf8(decode_labels(domain)));
    Skeleton sk;
    for (char32_t c : unicode::nfkd(folded)) {
        if (c < 0x80) {
            char ch = static_cast<char>(std::tolower(static_cast<int>(c)));
            if ((symbol_index(ch) >= 0)) sk.ascii += ch;
        } else if (const std::string* t = map.find(c)) {
            sk.ascii += *t;
        } else if (!unicode::is_combining_mark(c)) {
            sk.dropped = true;
        }
    }
    return sk;
}

}  // namespace

ConfusablesMap ConfusablesMap::parse(std::string_view text) {
    ConfusablesMap m;
    size_t lineno = 0;
    while (!text.empty()) {
        size_t nl = text.find('\n');
        std::string_view line = text.substr(0, nl);
        text = nl == std::string_view::npos ? std::string_view{} : text.substr(nl + 1);
        ++lineno;
        if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
        if (line.empty() || line.front() == '#') continue;
        size_t tab = line.find('\t');
        auto src = tab == std::string_view::npos ? std::nullopt : parse_hex(line.substr(0, tab));
        if (!src) throw InvalidRecord("confusables line " + std::to_string(lineno));
        std::string target;
        bool ok = true;
        std::string_view rest = line.substr(tab + 1);
        while (!rest.empty()) {
            size_t sp = rest.find(' ');
            auto cp = parse_hex(rest.substr(0, sp));
            if (!cp) throw InvalidRecord("confusables line " + std::to_string(lineno));
            char ch = *cp < 0x80 ? static_cast<char>(std::tolower(static_cast<int>(*cp))) : '\0';
            if (!(symbol_index(ch) >= 0)) ok = false;
            target += ch;
            rest = sp == std::string_view::npos ? std::string_view{} : rest.substr(sp + 1);
        }
        if (ok && !target.empty()) m.add(*src, std::move(target));
    }
    return m;
}

ConfusablesMap ConfusablesMap::load(const std::filesystem::path& path) { return parse(read_file(path)); }

const ConfusablesMap& ConfusablesMap::bundled() {
    static const ConfusablesMap m = load(data_file("confusables.tsv"));
    return m;
}

Skeleton ascii_skeleton(std::string_view domain, const ConfusablesMap& map) {
    Skeleton sk = skeleton_once(domain, map);
    // A lookalike substitution can spell a fresh ACE label; run to a fixpoint
    // so the result is stable under another pass.
    for (int i = 0; i < 4 && punycode::has_ace_label(sk.ascii); ++i) {
        Skeleton next;
        try {
            next = skeleton_once(sk.ascii, map);
        } catch (const PunycodeDecodeError&) {
            break;
        }
        if (next.ascii == sk.ascii) break;
        sk.ascii = std::move(next.ascii);
        sk.dropped = sk.dropped || next.dropped;
    }
    return sk;
}

bool is_punycode(std::string_view domain) {
    std::string lower(domain);
    for (char& c : lower) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
    return punycode::has_ace_label(lower);
}

bool is_idn_candidate(std::string_view domain) { return !unicode::is_ascii(domain) || is_punycode(domain); }

IdnResult is_idn_attack(std::string_view domain, const ConfusablesMap& map,
                        const std::function<bool(std::string_view)>& whitelisted) {
    IdnResult r;
    r.skeleton = ascii_skeleton(domain, map);
    r.attack = !r.skeleton.ascii.empty() && whitelisted(r.skeleton.ascii);
    return r;
}

}  // namespace phishmatch
