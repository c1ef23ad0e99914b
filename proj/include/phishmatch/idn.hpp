#pragma once

#include <filesystem>
#include <functional>
#include <string>
#include <string_view>
#include <unordered_map>

namespace phishmatch {

/// Source code point -> ASCII lookalike string over the hostname alphabet.
class ConfusablesMap {
public:
    /// "SRC_HEX<TAB>DST_HEX[ DST_HEX...]" lines, '#' comments ignored.
    /// Targets are lowercased; pairs whose target leaves the alphabet are skipped.
    static ConfusablesMap parse(std::string_view text);
    static ConfusablesMap load(const std::filesystem::path& path);
    static const ConfusablesMap& bundled();

    void add(char32_t source, std::string target) { map_[source] = std::move(target); }
    const std::string* find(char32_t c) const {
        auto it = map_.find(c);
        return it == map_.end() ? nullptr : &it->second;
    }
    size_t size() const { return map_.size(); }

private:
    std::unordered_map<char32_t, std::string> map_;
};

struct Skeleton {
    std::string ascii;
    bool dropped = false;  ///< a non-mark character had no ASCII lookalike and was removed
};

/// Decode ACE labels, lowercase, NFKD, substitute confusables, drop the rest
/// and keep only [a-z0-9.-]. Throws PunycodeDecodeError on a bad ACE label.
Skeleton ascii_skeleton(std::string_view domain, const ConfusablesMap& map = ConfusablesMap::bundled());

inline std::string to_ascii_skeleton(std::string_view domain, const ConfusablesMap& map = ConfusablesMap::bundled()) {
    return ascii_skeleton(domain, map).ascii;
}

/// Any dot-separated label starts with "xn--".
bool is_punycode(std::string_view domain);

/// Punycode or raw non-ASCII: the inputs the IDN check applies to.
bool is_idn_candidate(std::string_view domain);

struct IdnResult {
    bool attack = false;
    Skeleton skeleton;
};

/// The skeleton of `domain` is whitelisted although `domain` itself is not ASCII.
IdnResult is_idn_attack(std::string_view domain, const ConfusablesMap& map,
                        const std::function<bool(std::string_view)>& whitelisted);

}  // namespace phishmatch
