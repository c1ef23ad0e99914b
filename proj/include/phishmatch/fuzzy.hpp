#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace phishmatch {

/// Optimal string alignment distance: insertions, deletions, substitutions
/// and transpositions of adjacent characters, no substring edited twice.
uint32_t osa_distance(std::string_view a, std::string_view b);

/// Edit budget for a query of length `len`.
inline uint32_t edit_budget(size_t len) { return len <= 10 ? 1 : 2; }

/// Distinct trigram codes of a string, in order of first appearance.
/// Windows containing characters outside the alphabet map to kNoTrigram.
std::vector<uint32_t> trigram_codes(std::string_view s);
inline constexpr uint32_t kTrigramSpace = 38 * 38 * 38;
inline constexpr uint32_t kNoTrigram = kTrigramSpace;

/// Splits `s` into `k` contiguous parts whose lengths differ by at most
/// one, longer parts first.
std::vector<std::string_view> split_parts(std::string_view s, size_t k);

struct SimilarDomain {
    std::string domain;
    uint32_t distance;
    uint32_t rank;  ///< position in the whitelist
    bool operator==(const SimilarDomain&) const = default;
};

/// Inverted index from trigrams of character-sorted domains to domain ids,
/// plus a length index and per-domain unigram histograms.
class TrigramIndex {
public:
    static constexpr size_t kMinIndexed = 6;
    static constexpr size_t kMaxIndexed = 22;
    static constexpr size_t kMinQuery = 6;
    static constexpr size_t kMaxQuery = 20;

    TrigramIndex() = default;
    explicit TrigramIndex(std::vector<std::string> domains);

    const std::vector<std::string>& domains() const { return domains_; }
    std::span<const uint32_t> postings(uint32_t trigram) const;
    uint32_t frequency(uint32_t trigram) const;
    std::span<const uint32_t> with_length(size_t len) const;
    size_t total_postings() const { return postings_.size(); }
    const uint8_t* histograms() const { return histograms_.data(); }

    std::string serialize() const;
    static TrigramIndex deserialize(std::string_view bytes);

private:
    void build_side_tables();

    std::vector<std::string> domains_;
    std::vector<uint32_t> offsets_;  ///< kTrigramSpace + 1 entries
    std::vector<uint32_t> postings_;
    std::vector<std::vector<uint32_t>> by_length_;
    std::vector<uint8_t> histograms_;
};

/// Fills a kHistStride-byte unigram histogram of `s`.
void unigram_histogram(std::string_view s, uint8_t* out);

struct CandidateSet {
    bool all = false;  ///< some part had no trigram, so nothing was filtered
    std::vector<uint32_t> ids;
};

/// Sorted-string trigram filter. The sorted query is cut into `parts`
/// pieces; a domain is a candidate when it holds every trigram of some piece.
/// `parts` = 0 selects 2e+1, which keeps every indexed domain within e edits.
CandidateSet ngram_filter(const TrigramIndex& index, std::string_view d, uint32_t e, size_t parts = 0);

/// Length, unigram and distance checks over the given domain ids.
std::vector<SimilarDomain> basic_filter(const TrigramIndex& index, std::span<const uint32_t> ids, std::string_view d,
                                        uint32_t e);

/// Every whitelist domain within the edit budget of `d`, closest first.
std::vector<SimilarDomain> find_similar(const TrigramIndex& index, std::string_view d);

}  // namespace phishmatch
