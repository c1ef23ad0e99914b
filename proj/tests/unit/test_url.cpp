#include <doctest.h>

#include <random>

#include "phishmatch/alphabet.hpp"
#include "phishmatch/error.hpp"
#include "phishmatch/punycode.hpp"
#include "phishmatch/url.hpp"
#include "test_util.hpp"
#include "unicode_util.hpp"

using namespace phishmatch;

TEST_CASE("components of a typical url") {
    auto u = parse_url("https://www.paypal.com/in/webapps/mpp/account-selection");
    CHECK(u.scheme == "https");
    CHECK(u.hostname == "www.paypal.com");
    CHECK(u.subdomain == "www");
    CHECK(u.brand == "paypal");
    CHECK(u.tld == "com");
    CHECK(u.registrable_domain == "paypal.com");
    CHECK(u.directory == "/in/webapps/mpp/");
    CHECK(u.filename == "account-selection");
    CHECK(u.arguments.empty());
    CHECK_FALSE(u.ip_host);
}

TEST_CASE("multi-label suffixes and deep subdomains") {
    auto u = parse_url("http://bbc.co.uk/news?x=1#top");
    CHECK(u.brand == "bbc");
    CHECK(u.tld == "co.uk");
    CHECK(u.directory == "/");
    CHECK(u.filename == "news");
    CHECK(u.arguments == "x=1");

    auto v = parse_url("http://www.nwolb.co.uk.secureonlinelogin.s-secureuk.com/");
    CHECK(v.registrable_domain == "s-secureuk.com");
    CHECK(v.subdomain == "www.nwolb.co.uk.secureonlinelogin");
    CHECK(v.brand == "s-secureuk");

    auto w = parse_url("paypal.com.elvalorsocial.com");
    CHECK(w.scheme == "http");
    CHECK(w.subdomain == "paypal.com");
    CHECK(w.registrable_domain == "elvalorsocial.com");
}

TEST_CASE("userinfo, port, case and trailing dot") {
    auto u = parse_url("HTTPS://User:Pw@WWW.PayPal.COM.:8443/A/B.html");
    CHECK(u.scheme == "https");
    CHECK(u.hostname == "www.paypal.com");
    CHECK(u.port == 8443);
    CHECK(u.directory == "/A/");
    CHECK(u.filename == "B.html");
}

TEST_CASE("wildcard and exception rules") {
    CHECK(parse_url("http://a.b.ck/").registrable_domain == "a.b.ck");
    CHECK(parse_url("http://x.www.ck/").registrable_domain == "www.ck");
    CHECK(parse_url("http://x.city.kawasaki.jp/").registrable_domain == "city.kawasaki.jp");
    CHECK(parse_url("http://x.y.foo.kawasaki.jp/").registrable_domain == "y.foo.kawasaki.jp");
    // A host that is itself a public suffix keeps its first label as the brand.
    auto u = parse_url("http://co.uk/");
    CHECK(u.brand == "co");
    CHECK(u.tld == "uk");
}

TEST_CASE("ip hosts") {
    CHECK(is_ip_hostname("159.203.6.191"));
    CHECK(is_ip_hostname("[::1]"));
    CHECK(is_ip_hostname("2001:db8::8a2e:370:7334"));
    CHECK(is_ip_hostname("0xC0A80001"));
    CHECK(is_ip_hostname("0xc0.0xa8.0.1"));
    CHECK_FALSE(is_ip_hostname("256.1.1.1"));
    CHECK_FALSE(is_ip_hostname("1.2.3"));
    CHECK_FALSE(is_ip_hostname("paypal.com"));
    CHECK_FALSE(is_ip_hostname("0xpaypal"));

    auto u = parse_url("159.203.6.191/servicepaypal");
    CHECK(u.ip_host);
    CHECK(u.registrable_domain == "159.203.6.191");
    CHECK(u.filename == "servicepaypal");
    CHECK(parse_url("http://[::1]:8080/").ip_host);
}

TEST_CASE("hex ipv4 agrees with an independent dotted rendering") {
    std::mt19937_64 rng(7);
    for (int i = 0; i < 1000; ++i) {
        auto addr = static_cast<uint32_t>(rng());
        char hex[16];
        std::snprintf(hex, sizeof hex, "0x%08X", addr);
        std::string dotted = std::to_string(addr >> 24) + "." + std::to_string((addr >> 16) & 255) + "." +
                             std::to_string((addr >> 8) & 255) + "." + std::to_string(addr & 255);
        CHECK(normalize_ipv4(hex) == dotted);
        CHECK(is_ip_hostname(dotted));
        CHECK(parse_url(std::string("http://") + hex + "/").registrable_domain == dotted);
    }
}

TEST_CASE("malformed urls") {
    CHECK_THROWS_AS(parse_url(""), MalformedUrl);
    CHECK_THROWS_AS(parse_url("http:///path"), MalformedUrl);
    CHECK_THROWS_AS(parse_url("http://a..b.com/"), MalformedUrl);
    CHECK_THROWS_AS(parse_url("http://localhost/"), MalformedUrl);
    CHECK_THROWS_AS(parse_url("http://paypal.com:99999/"), MalformedUrl);
    CHECK_THROWS_AS(parse_url("http://pay_pal.com/"), MalformedUrl);
    CHECK_THROWS_AS(parse_url("http://[::1/"), MalformedUrl);
}

TEST_CASE("punycode reference vectors") {
    auto u32 = [](const char* s) { return unicode::utf8_to_u32(s); };
    CHECK(punycode::encode(u32("bücher")) == "bcher-kva");
    CHECK(punycode::encode(u32("münchen")) == "mnchen-3ya");
    CHECK(punycode::encode(u32("3年B組金八先生")) == "3B-ww4c5e180e575a65lsy2b");
    CHECK(punycode::encode(u32("pаypal")) == "pypal-4ve");  // Cyrillic a
    CHECK(punycode::decode("mnchen-3ya") == u32("münchen"));
    CHECK(punycode::decode("pypal-4ve") == u32("pаypal"));
    CHECK_THROWS_AS(punycode::decode("abc-9999999999"), PunycodeDecodeError);
    CHECK_THROWS_AS(punycode::decode("a-b!"), PunycodeDecodeError);
}

TEST_CASE("punycode round trip on random labels") {
    std::mt19937_64 rng(11);
    std::uniform_int_distribution<uint32_t> cp(0x80, 0x2FFF);
    std::uniform_int_distribution<int> len(1, 20);
    for (int i = 0; i < 2000; ++i) {
        std::u32string s;
        for (int k = len(rng); k > 0; --k) s.push_back(rng() % 3 ? U'a' + static_cast<char32_t>(rng() % 26) : cp(rng));
        CHECK(punycode::decode(punycode::encode(s)) == s);
    }
}

TEST_CASE("unicode hosts are punycode encoded") {
    auto u = parse_url("http://pаypal.com/");
    CHECK(u.hostname == "xn--pypal-4ve.com");
    CHECK(u.brand == "xn--pypal-4ve");
    auto v = parse_url("http://PAYPAĹ.com/");
    CHECK(v.hostname.starts_with("xn--"));
    CHECK(punycode::decode(v.brand.substr(4)) == unicode::utf8_to_u32("paypaĺ"));
}

TEST_CASE("structural invariants over ranked domains") {
    auto domains = testutil::ranked_domains(20000);
    std::mt19937_64 rng(3);
    const char* subs[] = {"", "www.", "login.secure.", "a-b.c1."};
    for (size_t i = 0; i < domains.size(); i += 7) {
        std::string host = subs[rng() % 4] + domains[i];
        std::string upper = host;
        for (char& c : upper)
            if (rng() % 2) c = static_cast<char>(std::toupper(static_cast<unsigned char>(c)));
        auto a = parse_url("http://" + host + "/x/y");
        auto b = parse_url("http://" + upper + "/x/y");
        REQUIRE(a.hostname == b.hostname);
        CHECK(a.registrable_domain == b.registrable_domain);
        CHECK(a.registrable_domain == a.brand + "." + a.tld);
        CHECK(in_alphabet(a.hostname));
        CHECK(a.hostname.ends_with(a.registrable_domain));
        if (!a.subdomain.empty()) CHECK(a.hostname == a.subdomain + "." + a.registrable_domain);
    }
}
