#include "phishmatch/memory_report.hpp"

#include <set>

namespace phishmatch {

LexTrie plain_trie(const std::vector<std::string>& domains) {
    std::set<std::string> keys(domains.begin(), domains.end());
    for (const auto& d : domains) keys.insert(d.substr(0, d.find('.')));
    return create_lex_trie({keys.begin(), keys.end()});
}

MemoryReport memory_report(const LexTrie& plain, const DomainMachine& machine) {
    MemoryReport r;
    r.original.name = "original";
    r.bitmap.name = "bitmap";
    r.bitmap_lex.name = "bitmap_lex";
    r.bitmap_lex_tld.name = "bitmap_lex_tld";

    for (uint32_t s = 0; s < plain.size(); ++s) {
        int deg = plain.child_count[s];
        bool branch = deg > 1;
        for (VariantCost* v : {&r.original, &r.bitmap, &r.bitmap_lex}) {
            ++v->states;
            v->branch_states += branch;
        }
        r.original.bits += original_state_bits();
        r.bitmap.bits += bitmap_state_bits(deg);
        r.bitmap_lex.bits += lex_state_bits(deg);
    }
    const auto& a = machine.automaton();
    for (uint32_t s = 0; s < a.size(); ++s) {
        int deg = a.degree(s);
        ++r.bitmap_lex_tld.states;
        r.bitmap_lex_tld.branch_states += deg > 1;
        r.bitmap_lex_tld.bits += lex_state_bits(deg);
    }
    return r;
}

MemoryReport memory_report(const std::vector<std::string>& domains) {
    return memory_report(plain_trie(domains), DomainMachine::build(domains));
}

double bitmap_threshold_gamma(int sigma, int alpha, int c) {
    return static_cast<double>(sigma - alpha) / static_cast<double>(c * sigma);
}

double expected_lookup_cost(double branch_fraction, int sigma) { return branch_fraction * sigma / 2.0 + 1.0; }

}  // namespace phishmatch
