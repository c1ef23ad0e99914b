#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "phishmatch/automaton.hpp"
#include "phishmatch/domain_machine.hpp"

namespace phishmatch {

/// Analytic size of one machine layout, with 64-bit state references.
struct VariantCost {
    std::string name;
    uint64_t states = 0;
    uint64_t branch_states = 0;  ///< states with more than one transition
    uint64_t bits = 0;

    double megabytes() const { return static_cast<double>(bits) / 8e6; }
    double branch_fraction() const { return states ? static_cast<double>(branch_states) / static_cast<double>(states) : 0.0; }
};

struct MemoryReport {
    VariantCost original;        ///< full |Σ|-wide goto table
    VariantCost bitmap;          ///< bitmap plus explicit next array
    VariantCost bitmap_lex;      ///< bitmap-lex over the plain trie
    VariantCost bitmap_lex_tld;  ///< bitmap-lex over the TLD-shared machine

    std::vector<const VariantCost*> all() const { return {&original, &bitmap, &bitmap_lex, &bitmap_lex_tld}; }
};

inline constexpr int kSymbolBits = 8;  ///< α, bits for one stored symbol
inline constexpr int kRefBits = 64;    ///< c·|Σ| bits = |Σ| references of 64 bits

/// Costs for every layout. `plain` must be the trie over all brands and domains.
MemoryReport memory_report(const LexTrie& plain, const DomainMachine& machine);

/// Builds both structures from a whitelist and reports their costs.
MemoryReport memory_report(const std::vector<std::string>& domains);

/// Trie over every brand and every domain of a whitelist.
LexTrie plain_trie(const std::vector<std::string>& domains);

/// Per-state cost of each layout.
inline uint64_t original_state_bits() { return uint64_t{kSigma} * kRefBits; }
inline uint64_t bitmap_state_bits(int degree) { return kSigma + uint64_t(degree) * kRefBits + kRefBits; }
inline uint64_t lex_state_bits(int degree) { return (degree > 1 ? kSigma : kSymbolBits) + 2 * kRefBits; }

/// Break-even branching fraction γ = (|Σ| − α) / (c·|Σ|) with c = 2.
double bitmap_threshold_gamma(int sigma = kSigma, int alpha = kSymbolBits, int c = 2);

/// Expected symbol comparisons per lookup when a fraction f of states branch.
double expected_lookup_cost(double branch_fraction, int sigma = kSigma);

}  // namespace phishmatch
