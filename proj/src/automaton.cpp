#include "phishmatch/automaton.hpp"

#include <algorithm>

#include "phishmatch/error.hpp"

namespace phishmatch {

uint32_t LexTrie::find(std::string_view s) const {
    uint32_t state = 0;
    for (char c : s) {
        int sym = symbol_index(c);
        if (sym < 0 || child_count[state] == 0) return kNoState;
        uint32_t lo = first_child[state], hi = lo + child_count[state];
        uint32_t found = kNoState;
        for (uint32_t k = lo; k < hi; ++k)
            if (in_symbol[k] == sym) found = k;
        if (found == kNoState) return kNoState;
        state = found;
    }
    return state;
}

LexTrie create_lex_trie(std::vector<std::string> keywords) {
    if (keywords.empty()) throw EmptyKeywordSet("keyword set is empty");
    for (const auto& k : keywords) {
        if (k.empty()) throw InvalidSymbol("empty keyword");
        if (k.size() > UINT16_MAX) throw InvalidSymbol("keyword too long");
        if (!in_alphabet(k)) throw InvalidSymbol("keyword outside alphabet: " + k);
    }
    std::sort(keywords.begin(), keywords.end());
    if (auto it = std::adjacent_find(keywords.begin(), keywords.end()); it != keywords.end())
        throw DuplicatePattern("duplicate keyword: " + *it);

    LexTrie t;
    t.keywords = std::move(keywords);
    const auto& kw = t.keywords;
    auto add_state = [&](uint32_t parent, uint8_t sym, uint16_t depth) {
        t.first_child.push_back(0);
        t.child_count.push_back(0);
        t.in_symbol.push_back(sym);
        t.parent.push_back(parent);
        t.depth.push_back(depth);
        t.keyword.push_back(-1);
        return static_cast<uint32_t>(t.parent.size() - 1);
    };
    add_state(kNoState, 0, 0);

    // node_of[i] is the state spelling the current-level prefix of kw[i].
    std::vector<uint32_t> node_of(kw.size(), 0);
    size_t max_len = 0;
    for (const auto& k : kw) max_len = std::max(max_len, k.size());
    for (size_t level = 1; level <= max_len; ++level) {
        uint32_t last_parent = kNoState;
        uint8_t last_sym = 0;
        uint32_t last_state = kNoState;
        for (size_t i = 0; i < kw.size(); ++i) {
            if (kw[i].size() < level) continue;
            uint32_t p = node_of[i];
            auto sym = static_cast<uint8_t>(symbol_index(kw[i][level - 1]));
            if (p != last_parent || sym != last_sym) {
                last_state = add_state(p, sym, static_cast<uint16_t>(level));
                if (t.child_count[p] == 0) t.first_child[p] = last_state;
                ++t.child_count[p];
                last_parent = p;
                last_sym = sym;
            }
            node_of[i] = last_state;
            if (kw[i].size() == level) t.keyword[last_state] = static_cast<int32_t>(i);
        }
    }
    return t;
}

void BitmapTable::insert(uint32_t state, uint64_t bits) {
    if ((count_ + 1) * 2 > keys_.size()) grow();
    size_t mask = keys_.size() - 1;
    size_t h = (state * 0x9E3779B1u) & mask;
    while (keys_[h] != kNoState && keys_[h] != state) h = (h + 1) & mask;
    if (keys_[h] == kNoState) ++count_;
    keys_[h] = state;
    values_[h] = bits;
}

uint64_t BitmapTable::at(uint32_t state) const {
    size_t mask = keys_.size() - 1;
    size_t h = (state * 0x9E3779B1u) & mask;
    while (keys_[h] != state) {
        if (keys_[h] == kNoState) return 0;
        h = (h + 1) & mask;
    }
    return values_[h];
}

void BitmapTable::grow() {
    size_t cap = keys_.empty() ? 16 : keys_.size() * 2;
    std::vector<uint32_t> old_keys(cap, kNoState);
    std::vector<uint64_t> old_values(cap, 0);
    old_keys.swap(keys_);
    old_values.swap(values_);
    count_ = 0;
    for (size_t i = 0; i < old_keys.size(); ++i)
        if (old_keys[i] != kNoState) insert(old_keys[i], old_values[i]);
}

std::vector<std::pair<uint32_t, uint64_t>> BitmapTable::entries() const {
    std::vector<std::pair<uint32_t, uint64_t>> out;
    out.reserve(count_);
    for (size_t i = 0; i < keys_.size(); ++i)
        if (keys_[i] != kNoState) out.emplace_back(keys_[i], values_[i]);
    std::sort(out.begin(), out.end());
    return out;
}

CompactAutomaton compact_from_trie(const LexTrie& trie) {
    CompactAutomaton a;
    size_t n = trie.size();
    a.symbol.resize(n);
    a.next.assign(n, 0);
    a.fail.assign(n, 0);
    for (uint32_t s = 0; s < n; ++s) {
        uint8_t deg = trie.child_count[s];
        if (deg == 0) {
            a.symbol[s] = kLeafSymbol;
        } else if (deg == 1) {
            a.symbol[s] = trie.in_symbol[trie.first_child[s]];
            a.next[s] = trie.first_child[s];
        } else {
            uint64_t bits = 0;
            for (uint32_t c = trie.first_child[s]; c < trie.first_child[s] + deg; ++c) bits |= uint64_t{1} << trie.in_symbol[c];
            a.symbol[s] = kBranchSymbol;
            a.next[s] = trie.first_child[s];
            a.bitmaps.insert(s, bits);
        }
    }
    return a;
}

void compute_trie_fails(const LexTrie& trie, CompactAutomaton& a) {
    // State ids are already in breadth-first order.
    a.fail[0] = 0;
    for (uint32_t s = 1; s < trie.size(); ++s) {
        uint32_t p = trie.parent[s];
        if (p == 0) {
            a.fail[s] = 0;
            continue;
        }
        int sym = trie.in_symbol[s];
        uint32_t f = a.fail[p];
        uint32_t t;
        while ((t = a.step(f, sym)) == kNoState && f != 0) f = a.fail[f];
        a.fail[s] = (t == kNoState || t == s) ? 0 : t;
    }
}

}  // namespace phishmatch
