#include "phishmatch/keyword_machine.hpp"

namespace phishmatch {

KeywordMachine::KeywordMachine(std::vector<std::string> keywords) {
    if (keywords.empty()) return;
    LexTrie trie = create_lex_trie(std::move(keywords));
    a_ = compact_from_trie(trie);
    compute_trie_fails(trie, a_);
    own_ = trie.keyword;
    out_link_.assign(trie.size(), kNoState);
    for (uint32_t s = 1; s < trie.size(); ++s) {
        uint32_t f = a_.fail[s];
        out_link_[s] = (f != 0 && own_[f] >= 0) ? f : out_link_[f];
    }
    keywords_ = std::move(trie.keywords);
}

}  // namespace phishmatch
