#include "phishmatch/domain_machine.hpp"

#include <algorithm>
#include <map>
#include <set>

#include "phishmatch/error.hpp"
#include "phishmatch/keyword_machine.hpp"

namespace phishmatch {
namespace {

constexpr int kDot = symbol_index('.');

std::pair<std::string_view, std::string_view> split_domain(std::string_view d) {
    size_t dot = d.find('.');
    if (dot == std::string_view::npos || dot == 0 || dot + 1 == d.size())
        throw InvalidSymbol("not a brand.tld domain: " + std::string(d));
    return {d.substr(0, dot), d.substr(dot + 1)};
}

std::vector<std::string> distinct_brands(const std::vector<std::string>& domains) {
    std::set<std::string> s;
    for (const auto& d : domains) {
        size_t dot = d.find('.');
        s.insert(d.substr(0, dot));
    }
    return {s.begin(), s.end()};
}

}  // namespace

BrandCensus census_of(const std::vector<std::string>& domains) {
    std::unordered_map<std::string, std::unordered_set<std::string>> tlds;
    for (const auto& d : domains) {
        auto [b, t] = split_domain(d);
        tlds[std::string(b)].insert(std::string(t));
    }
    std::unordered_set<std::string> proper_prefixes;
    for (const auto& [b, _] : tlds)
        for (size_t n = 1; n < b.size(); ++n) proper_prefixes.insert(b.substr(0, n));

    BrandCensus c;
    c.domains = domains.size();
    c.brands = tlds.size();
    std::unordered_set<std::string> shared;
    for (const auto& [b, ts] : tlds) {
        if (ts.size() > 1) {
            ++c.multi_tld_brands;
            continue;
        }
        ++c.single_tld_brands;
        if (proper_prefixes.contains(b)) {
            ++c.prefix_brands;
        } else {
            ++c.shareable_brands;
            shared.insert(*ts.begin());
        }
    }
    c.shared_tlds = shared.size();
    return c;
}

DomainMachine DomainMachine::build(const std::vector<std::string>& domains, const Options& options) {
    if (domains.empty()) throw EmptyKeywordSet("whitelist is empty");
    DomainMachine m;
    m.domains_ = domains;

    std::map<std::string, std::vector<std::string>> tlds_by_brand;
    std::unordered_set<std::string> seen;
    for (const auto& d : domains) {
        if (!in_alphabet(d)) throw InvalidSymbol("domain outside alphabet: " + d);
        if (!seen.insert(d).second) throw DuplicatePattern("duplicate domain: " + d);
        auto [b, t] = split_domain(d);
        tlds_by_brand[std::string(b)].emplace_back(t);
    }

    // In sorted order a brand prefixes some other brand iff it prefixes its successor.
    std::vector<std::string> keywords;
    std::map<std::string, std::vector<std::string>> shared_by_tld;
    BrandCensus& c = m.census_;
    c.domains = domains.size();
    c.brands = tlds_by_brand.size();
    for (auto it = tlds_by_brand.begin(); it != tlds_by_brand.end(); ++it) {
        const auto& [brand, tlds] = *it;
        keywords.push_back(brand);
        auto nx = std::next(it);
        bool is_prefix = nx != tlds_by_brand.end() && nx->first.starts_with(brand);
        if (tlds.size() > 1) {
            ++c.multi_tld_brands;
        } else {
            ++c.single_tld_brands;
            if (is_prefix) ++c.prefix_brands;
        }
        if (tlds.size() > 1 || is_prefix) {
            for (const auto& t : tlds) keywords.push_back(brand + "." + t);
        } else {
            shared_by_tld[tlds.front()].push_back(brand);
        }
    }
    c.shareable_brands = c.single_tld_brands - c.prefix_brands;
    c.shared_tlds = shared_by_tld.size();

    LexTrie trie = create_lex_trie(std::move(keywords));
    CompactAutomaton& a = m.a_;
    a = compact_from_trie(trie);
    const auto n_brand = static_cast<uint32_t>(trie.size());
    m.tld_begin_ = n_brand;

    // Append one chain per shared TLD and link each brand end to its start.
    uint32_t total = n_brand;
    std::vector<std::pair<uint32_t, std::string>> chains;
    for (const auto& [tld, brands] : shared_by_tld) {
        chains.emplace_back(total, tld);
        total += static_cast<uint32_t>(tld.size()) + 1;
    }
    a.symbol.resize(total);
    a.next.resize(total, 0);
    a.fail.resize(total, 0);
    for (const auto& [start, tld] : chains) {
        for (uint32_t k = 0; k < tld.size(); ++k) {
            a.symbol[start + k] = static_cast<uint8_t>(symbol_index(tld[k]));
            a.next[start + k] = start + k + 1;
        }
        a.symbol[start + tld.size()] = kLeafSymbol;
    }
    size_t chain_idx = 0;
    for (const auto& [tld, brands] : shared_by_tld) {
        uint32_t start = chains[chain_idx++].first;
        for (const auto& b : brands) {
            uint32_t s = trie.find(b);
            a.symbol[s] = static_cast<uint8_t>(kDot);
            a.next[s] = start;
        }
    }

    // Fail pointers. States reached by '.' and TLD starts fall back to the
    // start state; everything else follows the usual construction.
    auto fail_of_child = [&](uint32_t parent, int sym) {
        uint32_t f = a.fail[parent];
        uint32_t t;
        while ((t = a.step(f, sym)) == kNoState && f != 0) f = a.fail[f];
        return t == kNoState ? 0u : t;
    };
    for (uint32_t s = 1; s < n_brand; ++s) {
        uint32_t p = trie.parent[s];
        int sym = trie.in_symbol[s];
        a.fail[s] = (p == 0 || sym == kDot) ? 0 : fail_of_child(p, sym);
    }
    for (const auto& [start, tld] : chains) {
        a.fail[start] = 0;
        for (uint32_t k = 1; k <= tld.size(); ++k)
            a.fail[start + k] = fail_of_child(start + k - 1, symbol_index(tld[k - 1]));
    }

    // Longest output per state, merged along fail pointers.
    std::vector<uint32_t> out(total, 0);
    for (uint32_t s = 1; s < n_brand; ++s) {
        uint32_t own = trie.keyword[s] >= 0 ? trie.depth[s] : 0;
        out[s] = std::max(own, out[a.fail[s]]);
    }
    for (const auto& [start, tld] : chains) {
        for (uint32_t k = 0; k <= tld.size(); ++k) {
            uint32_t s = start + k;
            uint32_t own = k == tld.size() ? static_cast<uint32_t>(tld.size()) + 1 : 0;
            out[s] = std::max(own, out[a.fail[s]]);
        }
    }
    for (uint32_t s = 0; s < total; ++s)
        if (out[s]) m.output_.emplace(s, out[s]);

    if (!options.reference_domains.empty()) {
        std::vector<std::string> brands;
        for (const auto& [b, _] : tlds_by_brand) brands.push_back(b);
        KeywordMachine km(brands);
        std::vector<uint32_t> hits(km.keywords().size(), 0);
        std::vector<int> found;
        for (const auto& ref : distinct_brands(options.reference_domains)) {
            found.clear();
            km.for_each_match(ref, [&](int k, uint32_t) {
                if (km.keywords()[k] != ref) found.push_back(k);
            });
            std::sort(found.begin(), found.end());
            found.erase(std::unique(found.begin(), found.end()), found.end());
            for (int k : found) ++hits[k];
        }
        for (size_t k = 0; k < hits.size(); ++k)
            if (hits[k] > options.common_threshold) m.common_sorted_.push_back(km.keywords()[k]);
    }
    m.common_.insert(m.common_sorted_.begin(), m.common_sorted_.end());
    m.index_domains();
    return m;
}

void DomainMachine::index_domains() {
    primary_.clear();
    for (uint32_t i = 0; i < domains_.size(); ++i) {
        size_t dot = domains_[i].find('.');
        primary_.try_emplace(domains_[i].substr(0, dot), i);
    }
}

std::optional<std::string> DomainMachine::primary_domain(std::string_view brand) const {
    auto it = primary_.find(std::string(brand));
    if (it == primary_.end()) return std::nullopt;
    return domains_[it->second];
}

void DomainMachine::step_plain(uint32_t s, int sym, bool primary, std::vector<Level>& next, MatchStats* stats) const {
    while (true) {
        uint32_t t;
        while ((t = a_.step(s, sym)) == kNoState && s != 0) {
            s = a_.fail[s];
            if (primary && stats) ++stats->fail_transitions;
        }
        if (t == kNoState) {
            next.push_back({0, 0, false});
            return;
        }
        if (sym != kDot) {
            next.push_back({t, 0, false});
            return;
        }
        // `s` spells a brand; the new state spells brand + "." and its
        // fail chain is the transition on '.' from the brand's fail state.
        next.push_back({t, output_at(s) + 1, true});
        s = a_.fail[s];
        primary = false;
    }
}

void DomainMachine::advance(const std::vector<Level>& cur, int sym, std::vector<Level>& next, MatchStats* stats) const {
    next.clear();
    bool primary = true;
    for (const Level& level : cur) {
        if (!level.dotted) {
            step_plain(level.state, sym, primary, next, stats);
            return;
        }
        uint32_t t = a_.step(level.state, sym);
        if (t != kNoState) {
            next.push_back({t, level.len + 1, true});
            primary = false;
        } else if (primary && stats) {
            ++stats->fail_transitions;
        }
    }
}

uint32_t DomainMachine::longest_output(const std::vector<Level>& levels) const {
    for (const Level& level : levels) {
        if (!level.dotted) return output_at(level.state);
        if (level.state >= tld_begin_) {
            if (a_.symbol[level.state] == kLeafSymbol) return level.len;
        } else if (output_at(level.state) == level.len) {
            return level.len;
        }
    }
    return 0;
}

std::vector<Match> DomainMachine::match(std::string_view text, MatchStats* stats) const {
    std::vector<Match> out;
    std::vector<Level> cur{{0, 0, false}}, next;
    for (uint32_t i = 0; i < text.size(); ++i) {
        int sym = symbol_index(text[i]);
        if (sym < 0) {
            cur.assign(1, {0, 0, false});
            continue;
        }
        advance(cur, sym, next, stats);
        std::swap(cur, next);
        if (uint32_t len = longest_output(cur)) out.push_back({i, len});
    }
    return out;
}

std::vector<std::string> DomainMachine::match_strings(std::string_view text) const {
    std::vector<std::string> out;
    for (const auto& m : match(text)) out.emplace_back(text.substr(m.end + 1 - m.length, m.length));
    return out;
}

std::vector<std::string> DomainMachine::match_joined(std::string_view text) const {
    std::vector<std::string> out;
    std::string prev;
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
        uint32_t len = output_at(s);
        if (len == 0) continue;
        std::string m(text.substr(i + 1 - len, len));
        if (m.front() == '.') {
            m = prev + m;
        } else {
            prev = m;
        }
        out.push_back(std::move(m));
    }
    return out;
}

bool DomainMachine::contains_domain(std::string_view domain) const {
    if (domain.empty()) return false;
    auto ms = match(domain);
    return !ms.empty() && ms.back().end + 1 == domain.size() && ms.back().length == domain.size();
}

bool DomainMachine::contains_brand(std::string_view brand) const {
    return !brand.empty() && brand.find('.') == std::string_view::npos && contains_domain(brand);
}

std::string DomainMachine::serialize() const {
    BinaryWriter w;
    w.put_strings(domains_);
    w.put_vector(a_.symbol);
    w.put_vector(a_.next);
    w.put_vector(a_.fail);
    auto bitmaps = a_.bitmaps.entries();
    w.put<uint64_t>(bitmaps.size());
    for (auto [s, bits] : bitmaps) {
        w.put<uint32_t>(s);
        w.put<uint64_t>(bits);
    }
    std::vector<std::pair<uint32_t, uint32_t>> outputs(output_.begin(), output_.end());
    std::sort(outputs.begin(), outputs.end());
    w.put<uint64_t>(outputs.size());
    for (auto [s, len] : outputs) {
        w.put<uint32_t>(s);
        w.put<uint32_t>(len);
    }
    w.put<uint32_t>(tld_begin_);
    for (uint64_t v : {census_.domains, census_.brands, census_.single_tld_brands, census_.multi_tld_brands,
                       census_.prefix_brands, census_.shareable_brands, census_.shared_tlds})
        w.put<uint64_t>(v);
    w.put_strings(common_sorted_);
    return w.take();
}

DomainMachine DomainMachine::deserialize(std::string_view bytes) {
    BinaryReader r(bytes);
    DomainMachine m;
    m.domains_ = r.get_strings();
    m.a_.symbol = r.get_vector<uint8_t>();
    m.a_.next = r.get_vector<uint32_t>();
    m.a_.fail = r.get_vector<uint32_t>();
    size_t n = m.a_.symbol.size();
    if (m.a_.next.size() != n || m.a_.fail.size() != n) throw ArtifactCorrupt("state arrays disagree in length");
    auto nb = r.get<uint64_t>();
    for (uint64_t i = 0; i < nb; ++i) {
        auto s = r.get<uint32_t>();
        auto bits = r.get<uint64_t>();
        m.a_.bitmaps.insert(s, bits);
    }
    auto no = r.get<uint64_t>();
    for (uint64_t i = 0; i < no; ++i) {
        auto s = r.get<uint32_t>();
        auto len = r.get<uint32_t>();
        m.output_.emplace(s, len);
    }
    m.tld_begin_ = r.get<uint32_t>();
    for (uint64_t* v : {&m.census_.domains, &m.census_.brands, &m.census_.single_tld_brands, &m.census_.multi_tld_brands,
                        &m.census_.prefix_brands, &m.census_.shareable_brands, &m.census_.shared_tlds})
        *v = r.get<uint64_t>();
    m.common_sorted_ = r.get_strings();
    if (!r.done()) throw ArtifactCorrupt("trailing bytes in machine section");
    for (uint32_t s = 0; s < n; ++s) {
        uint8_t tag = m.a_.symbol[s];
        if (tag > kLeafSymbol || (tag != kLeafSymbol && m.a_.next[s] >= n) || m.a_.fail[s] >= n)
            throw ArtifactCorrupt("state table out of range");
    }
    m.common_.insert(m.common_sorted_.begin(), m.common_sorted_.end());
    m.index_domains();
    return m;
}

std::string_view to_string(SquatCategory c) {
    switch (c) {
        case SquatCategory::Benign: return "benign";
        case SquatCategory::WrongTld: return "wrongTLDsquatting";
        case SquatCategory::Combosquatting: return "combosquatting";
        case SquatCategory::SubdomainSpoofing: return "subdomain_spoofing";
        case SquatCategory::DirectorySpoofing: return "directory_spoofing";
        case SquatCategory::Unknown: return "unknown";
    }
    return "unknown";
}

SquattingResult squatting_category(const DomainMachine& machine, const ParsedUrl& url) {
    SquattingResult r;
    if (url.ip_host || url.registrable_domain.empty()) return r;

    const std::string& d = url.registrable_domain;
    if (machine.contains_domain(d)) return {SquatCategory::Benign, d, d};
    if (machine.contains_brand(url.brand))
        return {SquatCategory::WrongTld, url.brand, machine.primary_domain(url.brand).value_or(d)};

    // Prefers a full whitelist domain, then the longest uncommon brand.
    auto pick = [&](std::string_view text) -> std::optional<std::pair<std::string, std::string>> {
        std::optional<std::pair<std::string, std::string>> best;
        bool best_is_domain = false;
        for (const auto& m : machine.match(text)) {
            std::string p(text.substr(m.end + 1 - m.length, m.length));
            bool is_domain = p.find('.') != std::string::npos;
            if (!is_domain && machine.is_common_brand(p)) continue;
            if (best && (best_is_domain > is_domain || (best_is_domain == is_domain && best->first.size() >= p.size())))
                continue;
            std::string legit = is_domain ? p : machine.primary_domain(p).value_or(p);
            best.emplace(std::move(p), std::move(legit));
            best_is_domain = is_domain;
        }
        return best;
    };

    if (auto hit = pick(url.brand)) return {SquatCategory::Combosquatting, hit->first, hit->second};
    if (!url.subdomain.empty())
        if (auto hit = pick(url.subdomain)) return {SquatCategory::SubdomainSpoofing, hit->first, hit->second};
    std::string dir = url.directory;
    for (char& ch : dir)
        if (ch >= 'A' && ch <= 'Z') ch = static_cast<char>(ch - 'A' + 'a');
    if (auto hit = pick(dir)) return {SquatCategory::DirectorySpoofing, hit->first, hit->second};
    return r;
}

}  // namespace phishmatch
