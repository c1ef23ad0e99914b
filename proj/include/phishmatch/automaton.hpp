#pragma once

#include <bit>
#include <cstdint>
#include <string>
#include <vector>

#include "phishmatch/alphabet.hpp"

namespace phishmatch {

inline constexpr uint32_t kNoState = UINT32_MAX;

/// Trie whose states are numbered level by level over lexicographically
/// sorted keywords, so the children of every state are consecutive.
struct LexTrie {
    std::vector<uint32_t> first_child;
    std::vector<uint8_t> child_count;
    std::vector<uint8_t> in_symbol;  ///< symbol index on the edge from the parent
    std::vector<uint32_t> parent;
    std::vector<uint16_t> depth;
    std::vector<int32_t> keyword;       ///< index into `keywords`, or -1
    std::vector<std::string> keywords;  ///< sorted

    size_t size() const { return parent.size(); }
    uint32_t find(std::string_view s) const;  ///< state spelling `s`, or kNoState
};

/// Builds a LexTrie. Throws EmptyKeywordSet, InvalidSymbol or DuplicatePattern.
LexTrie create_lex_trie(std::vector<std::string> keywords);

/// Open-addressing map from state id to its 38-bit transition bitmap.
class BitmapTable {
public:
    void insert(uint32_t state, uint64_t bits);
    uint64_t at(uint32_t state) const;
    size_t size() const { return count_; }

    /// Entries sorted by state id.
    std::vector<std::pair<uint32_t, uint64_t>> entries() const;

private:
    void grow();
    std::vector<uint32_t> keys_;
    std::vector<uint64_t> values_;
    size_t count_ = 0;
};

/// Per-state symbol tags besides the 38 alphabet indices.
inline constexpr uint8_t kBranchSymbol = kSigma;     ///< '#': several transitions, see bitmap
inline constexpr uint8_t kLeafSymbol = kSigma + 1;   ///< '$': no transitions

/// Bitmap-lex storage: one symbol, the smallest next state and a fail
/// pointer per state; branching states keep a bitmap in a side table.
struct CompactAutomaton {
    std::vector<uint8_t> symbol;
    std::vector<uint32_t> next;
    std::vector<uint32_t> fail;
    BitmapTable bitmaps;

    size_t size() const { return symbol.size(); }

    uint32_t step(uint32_t s, int sym) const {
        uint8_t tag = symbol[s];
        if (tag < kSigma) return tag == sym ? next[s] : kNoState;
        if (tag == kLeafSymbol) return kNoState;
        uint64_t bits = bitmaps.at(s);
        uint64_t bit = uint64_t{1} << sym;
        if (!(bits & bit)) return kNoState;
        return next[s] + static_cast<uint32_t>(std::popcount(bits & (bit - 1)));
    }

    /// Number of outgoing transitions of `s`.
    int degree(uint32_t s) const {
        uint8_t tag = symbol[s];
        if (tag < kSigma) return 1;
        if (tag == kLeafSymbol) return 0;
        return std::popcount(bitmaps.at(s));
    }

    size_t branch_states() const { return bitmaps.size(); }
};

/// Copies the goto structure of a lex trie into compact form. Fail
/// pointers are left at the start state.
CompactAutomaton compact_from_trie(const LexTrie& trie);

/// Standard breadth-first fail computation over a trie-shaped automaton.
void compute_trie_fails(const LexTrie& trie, CompactAutomaton& a);

}  // namespace phishmatch
