#pragma once

#include <string>
#include <string_view>
#include <vector>

#include "phishmatch/automaton.hpp"

namespace phishmatch {

/// Aho-Corasick machine over arbitrary keywords in bitmap-lex storage that
/// reports every occurrence, not only the longest one per position.
class KeywordMachine {
public:
    KeywordMachine() = default;
    explicit KeywordMachine(std::vector<std::string> keywords);

    /// Keywords in sorted order; callbacks receive indices into this list.
    const std::vector<std::string>& keywords() const { return keywords_; }
    bool empty() const { return keywords_.empty(); }

    /// Calls `f(keyword_index, end_position)` for every occurrence.
    /// Characters outside the alphabet reset the machine.
    template <class F>
    void for_each_match(std::string_view text, F&& f) const {
        if (keywords_.empty()) return;
        uint32_t s = 0;
        for (uint32_t i = 0; i < text.size(); ++i) {
            int sym = symbol_index(text[i]);
            if (sym < 0) {
                s = 0;
                continue;
            }
            uint32_t t;
            while ((t = a_.step(s, sym)) == kNoState && s != 0) s = a_.fail[s];
            s = t == kNoState ? 0 : t;
            for (uint32_t o = own_[s] >= 0 ? s : out_link_[s]; o != kNoState; o = out_link_[o]) f(own_[o], i);
        }
    }

    const CompactAutomaton& automaton() const { return a_; }

private:
    std::vector<std::string> keywords_;
    CompactAutomaton a_;
    std::vector<int32_t> own_;
    std::vector<uint32_t> out_link_;  ///< nearest proper fail ancestor holding a keyword
};

}  // namespace phishmatch
