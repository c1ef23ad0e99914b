#include <doctest.h>

#include <random>

#include "naive_matcher.hpp"
#include "phishmatch/domain_machine.hpp"
#include "phishmatch/error.hpp"
#include "phishmatch/keyword_machine.hpp"
#include "phishmatch/memory_report.hpp"
#include "test_util.hpp"

using namespace phishmatch;

namespace {

const std::vector<std::string> kSeven = {"amazon.com", "amazon.fr", "al.com", "eb.com", "ebay.com", "paypal.com", "paytm.com"};

std::vector<std::string> strings_of(std::string_view text, const std::vector<Match>& ms) {
    std::vector<std::string> out;
    for (const auto& m : ms) out.emplace_back(text.substr(m.end + 1 - m.length, m.length));
    return out;
}

}  // namespace

TEST_CASE("lex trie numbers children consecutively") {
    auto t = create_lex_trie({"paypal", "al", "amazon", "eb", "ebay"});
    CHECK(t.keywords.front() == "al");
    CHECK(t.size() == 18);
    for (uint32_t s = 0; s < t.size(); ++s)
        for (uint32_t c = t.first_child[s]; c < t.first_child[s] + t.child_count[s]; ++c) {
            CHECK(t.parent[c] == s);
            if (c > t.first_child[s]) CHECK(t.in_symbol[c] > t.in_symbol[c - 1]);
        }
    CHECK(t.find("amazon") != kNoState);
    CHECK(t.find("amaz") != kNoState);
    CHECK(t.find("amx") == kNoState);
}

TEST_CASE("lex trie input validation") {
    CHECK_THROWS_AS(create_lex_trie({}), EmptyKeywordSet);
    CHECK_THROWS_AS(create_lex_trie({"ok", "Bad"}), InvalidSymbol);
    CHECK_THROWS_AS(create_lex_trie({"pay_pal"}), InvalidSymbol);
    CHECK_THROWS_AS(create_lex_trie({"a", "b", "a"}), DuplicatePattern);
    CHECK_THROWS_AS(DomainMachine::build({}), EmptyKeywordSet);
    CHECK_THROWS_AS(DomainMachine::build({"paypal"}), InvalidSymbol);
    CHECK_THROWS_AS(DomainMachine::build({"a.com", "a.com"}), DuplicatePattern);
}

TEST_CASE("seven-domain example: state counts") {
    auto plain = plain_trie(kSeven);
    CHECK(plain.size() == 46);
    auto m = DomainMachine::build(kSeven);
    CHECK(m.size() == 34);
    CHECK(m.tld_begin() == 30);

    // The shared "com" trie occupies states 30..33.
    const auto& a = m.automaton();
    CHECK(a.symbol[30] == symbol_index('c'));
    CHECK(a.symbol[31] == symbol_index('o'));
    CHECK(a.symbol[32] == symbol_index('m'));
    CHECK(a.symbol[33] == kLeafSymbol);
    CHECK(a.step(30, symbol_index('c')) == 31);

    CHECK(m.automaton().branch_states() == 5);
    size_t plain_branch = 0;
    for (uint32_t s = 0; s < plain.size(); ++s) plain_branch += plain.child_count[s] > 1;
    CHECK(plain_branch == 5);

    const auto& c = m.census();
    CHECK(c.brands == 6);
    CHECK(c.multi_tld_brands == 1);
    CHECK(c.single_tld_brands == 5);
    CHECK(c.prefix_brands == 1);
    CHECK(c.shareable_brands == 4);
    CHECK(c.shared_tlds == 1);
}

TEST_CASE("start-state cost per layout") {
    CHECK(original_state_bits() == 2432);
    CHECK(bitmap_state_bits(3) == 294);
    CHECK(lex_state_bits(3) == 166);
    CHECK(lex_state_bits(1) == 136);
    CHECK(lex_state_bits(0) == 136);
    CHECK(bitmap_threshold_gamma() == doctest::Approx(30.0 / 76.0));
    CHECK(bitmap_threshold_gamma() == doctest::Approx(0.395).epsilon(0.001));
    CHECK(expected_lookup_cost(0.05) == doctest::Approx(1.95));
}

TEST_CASE("seven-domain example: memory report") {
    auto r = memory_report(kSeven);
    CHECK(r.original.bits == 46ull * 2432);
    // 45 edges, 46 states.
    CHECK(r.bitmap.bits == 46ull * (38 + 64) + 45ull * 64);
    CHECK(r.bitmap_lex.bits == 5ull * 166 + 41ull * 136);
    CHECK(r.bitmap_lex_tld.bits == 5ull * 166 + 29ull * 136);
    CHECK(r.original.bits > r.bitmap.bits);
    CHECK(r.bitmap.bits > r.bitmap_lex.bits);
    CHECK(r.bitmap_lex.bits > r.bitmap_lex_tld.bits);
}

TEST_CASE("matching brands and domains") {
    auto m = DomainMachine::build(kSeven);
    CHECK(m.match_strings("paypal.com") == std::vector<std::string>{"paypal", "paypal.com"});
    CHECK(m.match_strings("amazon.fr") == std::vector<std::string>{"amazon", "amazon.fr"});
    CHECK(m.match_strings("ebay.com") == std::vector<std::string>{"eb", "ebay", "ebay.com"});
    CHECK(m.match_strings("xxpaytm.comyy") == std::vector<std::string>{"paytm", "paytm.com"});
    CHECK(m.match_strings("ssl-paypalupdate") == std::vector<std::string>{"paypal"});
    CHECK(m.match_joined("paypal.com") == std::vector<std::string>{"paypal", "paypal.com"});
    CHECK(m.match_joined("go.amazon.com") == std::vector<std::string>{"amazon", "amazon.com"});
    CHECK(m.contains_domain("al.com"));
    CHECK(m.contains_domain("eb.com"));
    CHECK_FALSE(m.contains_domain("al.fr"));
    CHECK_FALSE(m.contains_domain("paypal.co"));
    CHECK(m.contains_brand("paytm"));
    CHECK_FALSE(m.contains_brand("payt"));
    CHECK(m.primary_domain("amazon") == "amazon.com");
}

TEST_CASE("shared TLD states resolve against the entering brand") {
    // A brand that ends another brand and differs in TLD.
    auto m = DomainMachine::build({"abc.com", "bc.de"});
    CHECK(m.match_strings("abc.de") == std::vector<std::string>{"abc", "bc.de"});
    // The single-state matcher drops the match: its fail pointer leaves the
    // shared TLD trie for the start state.
    CHECK(m.match_joined("abc.de") == std::vector<std::string>{"abc"});

    // A brand spelled inside a shared TLD.
    auto n = DomainMachine::build({"paypal.com", "co.uk"});
    CHECK(m.match_strings("xbc.de") == std::vector<std::string>{"bc", "bc.de"});
    CHECK(n.match_strings("paypal.com") == std::vector<std::string>{"paypal", "co", "paypal.com"});
    CHECK(n.match_joined("paypal.com") == std::vector<std::string>{"paypal", "co", "co.com"});
}

TEST_CASE("keyword machine reports every occurrence") {
    KeywordMachine km({"he", "she", "his", "hers"});
    std::vector<std::pair<std::string, uint32_t>> hits;
    km.for_each_match("ushers", [&](int k, uint32_t end) { hits.emplace_back(km.keywords()[k], end); });
    std::sort(hits.begin(), hits.end());
    CHECK(hits == std::vector<std::pair<std::string, uint32_t>>{{"he", 3}, {"hers", 5}, {"she", 3}});
}

TEST_CASE("agrees with a naive scan on random whitelists") {
    std::mt19937_64 rng(2021);
    for (int trial = 0; trial < 200; ++trial) {
        auto domains = testutil::random_whitelist(rng, 1 + rng() % 120);
        auto keywords = testutil::brand_and_domain_keywords(domains);
        auto m = DomainMachine::build(domains);
        for (int t = 0; t < 5; ++t) {
            auto text = testutil::random_text(rng, domains, 1 + rng() % 200);
            MatchStats stats;
            auto got = m.match(text, &stats);
            auto want = testutil::naive_longest_matches(keywords, text);
            REQUIRE_MESSAGE(got == want, "text=" << text);
            CHECK(stats.fail_transitions <= text.size());
        }
    }
}

TEST_CASE("serialization round trip") {
    std::mt19937_64 rng(5);
    auto domains = testutil::random_whitelist(rng, 300);
    DomainMachine::Options opt;
    opt.reference_domains = domains;
    opt.common_threshold = 3;
    auto m = DomainMachine::build(domains, opt);
    auto bytes = m.serialize();
    auto back = DomainMachine::deserialize(bytes);
    CHECK(back.serialize() == bytes);
    CHECK(back.common_brands() == m.common_brands());
    for (int i = 0; i < 50; ++i) {
        auto text = testutil::random_text(rng, domains, 80);
        CHECK(back.match(text) == m.match(text));
    }

    ArtifactContainer c;
    c.add(make_tag("MACH"), bytes);
    auto blob = c.serialize();
    CHECK(ArtifactContainer::deserialize(blob).serialize() == blob);
    auto flipped = blob;
    flipped[blob.size() / 2] ^= 0x40;
    CHECK_THROWS_AS(ArtifactContainer::deserialize(flipped), ArtifactCorrupt);
    CHECK_THROWS_AS(ArtifactContainer::deserialize(blob.substr(0, blob.size() - 3)), ArtifactCorrupt);
    auto old = blob;
    old[4] = 9;
    CHECK_THROWS_AS(ArtifactContainer::deserialize(old), ArtifactVersionMismatch);
    CHECK_THROWS_AS(DomainMachine::deserialize(bytes.substr(0, bytes.size() / 2)), ArtifactCorrupt);
}

TEST_CASE("census of the ranked list is internally consistent") {
    auto domains = testutil::ranked_domains(50000);
    auto m = DomainMachine::build(domains);
    auto c = census_of(domains);
    const auto& mc = m.census();
    CHECK(mc.brands == c.brands);
    CHECK(mc.single_tld_brands == c.single_tld_brands);
    CHECK(mc.prefix_brands == c.prefix_brands);
    CHECK(mc.shareable_brands == c.shareable_brands);
    CHECK(mc.shared_tlds == c.shared_tlds);
    CHECK(mc.shareable_brands == mc.single_tld_brands - mc.prefix_brands);
    CHECK(mc.single_tld_brands + mc.multi_tld_brands == mc.brands);
}

TEST_CASE("squatting categories") {
    auto reference = testutil::ranked_domains(100000);
    std::vector<std::string> wl = kSeven;
    DomainMachine::Options opt;
    opt.reference_domains = reference;
    auto m = DomainMachine::build(wl, opt);
    CHECK(m.is_common_brand("al"));
    CHECK(m.is_common_brand("eb"));
    CHECK_FALSE(m.is_common_brand("paypal"));

    auto cat = [&](const char* u) { return squatting_category(m, parse_url(u)); };
    CHECK(cat("https://www.paypal.com/signin").category == SquatCategory::Benign);
    auto wrong = cat("http://paypal.net/");
    CHECK(wrong.category == SquatCategory::WrongTld);
    CHECK(wrong.legitimate_domain == "paypal.com");
    auto combo = cat("http://ssl-paypalupdate.com/");
    CHECK(combo.category == SquatCategory::Combosquatting);
    CHECK(combo.matched == "paypal");
    auto sub = cat("http://paypal.com.elvalorsocial.com/");
    CHECK(sub.category == SquatCategory::SubdomainSpoofing);
    CHECK(sub.legitimate_domain == "paypal.com");
    auto dir = cat("https://hollywoodbytez.com/paypal.com/signin/");
    CHECK(dir.category == SquatCategory::DirectorySpoofing);
    CHECK(dir.matched == "paypal.com");
    CHECK(cat("http://papyal.com/").category == SquatCategory::Unknown);
    CHECK(cat("http://159.203.6.191/paypal").category == SquatCategory::Unknown);
}
