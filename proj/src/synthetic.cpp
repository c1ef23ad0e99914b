#include "phishmatch/synthetic.hpp"

#include <algorithm>
#include <random>
#include <unordered_set>

namespace phishmatch::synthetic {

namespace {

const std::vector<std::string> kFiller = {
    "blue", "river", "stone", "media", "garden", "north", "pixel", "cloud", "smart", "green",
    "alpha", "metro", "union", "bright", "coast", "field", "forest", "house", "market", "silver",
    "sun", "tech", "wave", "zen", "craft", "delta", "echo", "nova", "prime", "urban"};

const std::vector<std::string> kCheapTlds = {"xyz", "top", "online", "info", "club", "site", "tk", "ml", "ga", "live",
                                             "com", "net", "org", "com.br", "co"};

const std::vector<std::string> kHostingDomains = {"umbler.net", "000webhostapp.com", "weebly.com", "wixsite.com",
                                                  "firebaseapp.com", "herokuapp.com", "netlify.app", "blogspot.com"};

const std::vector<std::string> kBenignSubs = {"www", "www", "www", "mail", "blog", "shop", "news", "m",
                                              "en", "app", "docs", "store", "support", "api", "cdn"};

template <class T>
const T& pick(std::mt19937_64& rng, const std::vector<T>& v) {
    return v[rng() % v.size()];
}

std::string digits(std::mt19937_64& rng, size_t lo, size_t hi) {
    size_t n = lo + rng() % (hi - lo + 1);
    std::string s;
    for (size_t i = 0; i < n; ++i) s += static_cast<char>('0' + rng() % 10);
    return s;
}

std::string random_letters(std::mt19937_64& rng, size_t lo, size_t hi) {
    size_t n = lo + rng() % (hi - lo + 1);
    std::string s;
    for (size_t i = 0; i < n; ++i) s += static_cast<char>('a' + rng() % 26);
    return s;
}

std::string phishing_host(std::mt19937_64& rng) {
    const auto& w = phishy_words();
    const auto& b = target_brands();
    switch (rng() % 7) {
        case 0:  // brand combined with phishy words
            return pick(rng, b) + "-" + pick(rng, w) + pick(rng, w) + "." + pick(rng, kCheapTlds);
        case 1:  // phishy subdomain on an unrelated domain
            return pick(rng, w) + pick(rng, w) + "." + pick(rng, kFiller) + pick(rng, kFiller) + "." + pick(rng, kCheapTlds);
        case 2:  // long hyphenated subdomain on free hosting
            return pick(rng, w) + "-" + pick(rng, b) + "-" + pick(rng, w) + "-" + digits(rng, 6, 15) + "-com." +
                   pick(rng, kHostingDomains);
        case 3:  // legitimate domain spelled out in the subdomain
            return "www." + pick(rng, b) + ".com." + pick(rng, w) + "-" + pick(rng, kFiller) + "." + pick(rng, kCheapTlds);
        case 4:  // phishy words glued into the registrable label
            return pick(rng, w) + pick(rng, kFiller) + pick(rng, w) + "." + pick(rng, kCheapTlds);
        case 5:  // random-looking host, no phishy vocabulary
            return random_letters(rng, 6, 12) + digits(rng, 0, 3) + "." + pick(rng, kCheapTlds);
        default:  // brand on a cheap TLD with digits
            return pick(rng, b) + digits(rng, 2, 5) + "." + pick(rng, w) + "." + pick(rng, kCheapTlds);
    }
}

std::string benign_host(std::mt19937_64& rng, const std::vector<std::string>& domains) {
    const std::string& d = pick(rng, domains);
    switch (rng() % 10) {
        case 0:
        case 1:
        case 2: return d;
        case 3: return (rng() % 2 ? "login." : "secure.") + d;
        default: return pick(rng, kBenignSubs) + "." + d;
    }
}

}  // namespace

const std::vector<std::string>& phishy_words() {
    static const std::vector<std::string> w = {
        "secure", "login", "signin", "verify", "account", "update", "confirm", "banking", "support", "webscr",
        "wallet", "auth", "recovery", "billing", "service", "unlock", "alert", "validate", "payment", "customer",
        "ssl", "online", "access", "session", "security", "notice"};
    return w;
}

const std::vector<std::string>& target_brands() {
    static const std::vector<std::string> b = {"paypal", "apple", "amazon", "netflix", "chase", "wellsfargo",
                                               "microsoft", "office", "outlook", "ebay", "dhl", "facebook",
                                               "instagram", "icloud", "itau", "santander"};
    return b;
}

std::vector<LabeledHost> labeled_hosts(size_t n, uint64_t seed, const std::vector<std::string>& benign_domains) {
    std::mt19937_64 rng(seed);
    std::vector<LabeledHost> out;
    std::unordered_set<std::string> seen;
    size_t attempts = 0;
    while (out.size() < n && attempts++ < n * 50) {
        int label = static_cast<int>(out.size() % 2);
        std::string h = label ? phishing_host(rng) : benign_host(rng, benign_domains);
        if (seen.insert(h).second) out.push_back({std::move(h), label});
    }
    std::shuffle(out.begin(), out.end(), rng);
    return out;
}

}  // namespace phishmatch::synthetic
