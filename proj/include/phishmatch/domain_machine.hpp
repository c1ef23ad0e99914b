#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <unordered_map>
#include <unordered_set>
#include <vector>

#include "phishmatch/artifact.hpp"
#include "phishmatch/automaton.hpp"
#include "phishmatch/url.hpp"

namespace phishmatch {

/// Brand statistics of a whitelist.
struct BrandCensus {
    uint64_t domains = 0;
    uint64_t brands = 0;
    uint64_t single_tld_brands = 0;
    uint64_t multi_tld_brands = 0;
    uint64_t prefix_brands = 0;     ///< single-TLD brands that prefix another brand
    uint64_t shareable_brands = 0;  ///< single-TLD brands whose TLD trie is shared
    uint64_t shared_tlds = 0;       ///< number of shared TLD tries
};

/// One longest-per-position occurrence: `length` characters ending at `end`.
struct Match {
    uint32_t end;
    uint32_t length;
    bool operator==(const Match&) const = default;
};

struct MatchStats {
    uint64_t fail_transitions = 0;  ///< fail pointers taken by the primary state
};

/// Aho-Corasick machine over whitelist brands and domains with shared TLD
/// tries: every brand registered under a single TLD and not prefixing
/// another brand ends in a '.' edge into one trie per TLD.
class DomainMachine {
public:
    struct Options {
        std::vector<std::string> reference_domains;  ///< list used to find common brands
        size_t common_threshold = 20;
    };

    static DomainMachine build(const std::vector<std::string>& domains, const Options& options);
    static DomainMachine build(const std::vector<std::string>& domains) { return build(domains, Options{}); }

    /// Longest brand or domain ending at each position, ordered by position.
    /// Shared TLD states are resolved against the brand that entered them,
    /// so the result equals a naive scan over all brands and domains.
    /// Characters outside the alphabet reset the machine.
    std::vector<Match> match(std::string_view text, MatchStats* stats = nullptr) const;

    /// Convenience wrapper returning the matched strings.
    std::vector<std::string> match_strings(std::string_view text) const;

    /// Single-state matcher using only the stored fail pointers; a match
    /// starting with '.' is joined to the preceding brand match.
    std::vector<std::string> match_joined(std::string_view text) const;

    bool contains_domain(std::string_view domain) const;
    bool contains_brand(std::string_view brand) const;
    bool is_common_brand(std::string_view brand) const { return common_.contains(std::string(brand)); }

    /// Best-ranked whitelist domain registered under `brand`.
    std::optional<std::string> primary_domain(std::string_view brand) const;

    const BrandCensus& census() const { return census_; }
    const std::vector<std::string>& domains() const { return domains_; }
    const std::vector<std::string>& common_brands() const { return common_sorted_; }
    const CompactAutomaton& automaton() const { return a_; }
    uint32_t tld_begin() const { return tld_begin_; }
    size_t size() const { return a_.size(); }

    /// Longest output length stored for `state` (0 when none).
    uint32_t output_at(uint32_t state) const {
        auto it = output_.find(state);
        return it == output_.end() ? 0 : it->second;
    }

    std::string serialize() const;
    static DomainMachine deserialize(std::string_view bytes);

private:
    struct Level {
        uint32_t state;
        uint32_t len;
        bool dotted;
    };
    void advance(const std::vector<Level>& cur, int sym, std::vector<Level>& next, MatchStats* stats) const;
    void step_plain(uint32_t s, int sym, bool primary, std::vector<Level>& next, MatchStats* stats) const;
    uint32_t longest_output(const std::vector<Level>& levels) const;
    void index_domains();

    std::vector<std::string> domains_;
    CompactAutomaton a_;
    std::unordered_map<uint32_t, uint32_t> output_;
    uint32_t tld_begin_ = 0;
    BrandCensus census_;
    std::vector<std::string> common_sorted_;
    std::unordered_set<std::string> common_;
    std::unordered_map<std::string, uint32_t> primary_;
};

/// Brand census computed directly from a domain list, independent of the machine.
BrandCensus census_of(const std::vector<std::string>& domains);

enum class SquatCategory { Benign, WrongTld, Combosquatting, SubdomainSpoofing, DirectorySpoofing, Unknown };

std::string_view to_string(SquatCategory c);

struct SquattingResult {
    SquatCategory category = SquatCategory::Unknown;
    std::string matched;            ///< brand or domain that triggered the category
    std::string legitimate_domain;  ///< whitelist domain to recommend
};

/// Squatting analysis of a parsed URL against the global whitelist machine.
SquattingResult squatting_category(const DomainMachine& machine, const ParsedUrl& url);

}  // namespace phishmatch
