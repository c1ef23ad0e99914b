#pragma once

#include <algorithm>
#include <random>
#include <set>
#include <string>
#include <string_view>
#include <vector>

#include "phishmatch/domain_machine.hpp"
#include "test_util.hpp"

namespace testutil {

/// Every brand and every domain of a whitelist.
inline std::vector<std::string> brand_and_domain_keywords(const std::vector<std::string>& domains) {
    std::set<std::string> k(domains.begin(), domains.end());
    for (const auto& d : domains) k.insert(d.substr(0, d.find('.')));
    return {k.begin(), k.end()};
}

/// Tests every keyword at every end position and keeps the longest.
inline std::vector<phishmatch::Match> naive_longest_matches(const std::vector<std::string>& keywords, std::string_view text) {
    std::vector<phishmatch::Match> out;
    for (uint32_t end = 0; end < text.size(); ++end) {
        uint32_t best = 0;
        for (const auto& k : keywords) {
            if (k.size() > end + 1 || k.size() <= best) continue;
            if (text.substr(end + 1 - k.size(), k.size()) == k) best = static_cast<uint32_t>(k.size());
        }
        if (best) out.push_back({end, best});
    }
    return out;
}

// Small alphabets make brands collide often: suffixes, prefixes, shared TLDs.
inline std::vector<std::string> random_whitelist(std::mt19937_64& rng, size_t n) {
    static const char* tlds[] = {"com", "co", "co.uk", "uk", "de", "c", "com.br", "b"};
    std::set<std::string> out;
    while (out.size() < n) {
        std::string b = random_string(rng, "abcd-", 1, 6);
        if (b.front() == '-') continue;
        int k = rng() % 5 == 0 ? 2 : 1;
        for (int i = 0; i < k; ++i) out.insert(b + "." + tlds[rng() % 8]);
    }
    std::vector<std::string> v(out.begin(), out.end());
    std::shuffle(v.begin(), v.end(), rng);
    return v;
}

inline std::string random_text(std::mt19937_64& rng, const std::vector<std::string>& domains, size_t max_len) {
    std::string t;
    while (t.size() < max_len) {
        switch (rng() % 4) {
            case 0: t += domains[rng() % domains.size()]; break;
            case 1: t += domains[rng() % domains.size()].substr(rng() % 3); break;
            case 2: t += random_string(rng, "abcd.-cobkude", 1, 4); break;
            default: t += '.'; break;
        }
    }
    return t.substr(0, max_len);
}

}  // namespace testutil
