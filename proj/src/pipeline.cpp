#include "phishmatch/pipeline.hpp"

#include <chrono>
#include <cmath>
#include <cstdio>
#include <stdexcept>
#include <unordered_set>

#include "phishmatch/alphabet.hpp"
#include "phishmatch/error.hpp"

namespace phishmatch {

namespace {

std::string numbered(size_t i, const std::string& s) { return std::to_string(i) + ". " + s; }

std::string join_words(const std::vector<std::string>& w) {
    std::string out;
    for (size_t i = 0; i < w.size(); ++i) {
        if (i) out += i + 1 == w.size() ? " and " : ", ";
        out += w[i];
    }
    return out;
}

/// Marks the differing middle of `d` against `target`: "pa[py]al.com".
std::string mark_difference(const std::string& d, const std::string& target) {
    size_t pre = 0;
    while (pre < d.size() && pre < target.size() && d[pre] == target[pre]) ++pre;
    size_t suf = 0;
    while (suf < d.size() - pre && suf < target.size() - pre && d[d.size() - 1 - suf] == target[target.size() - 1 - suf])
        ++suf;
    if (pre + suf >= d.size()) return d + " (missing characters)";
    return d.substr(0, pre) + "[" + d.substr(pre, d.size() - pre - suf) + "]" + d.substr(d.size() - suf);
}

std::string format_count(uint64_t n) {
    std::string s = std::to_string(n), out;
    for (size_t i = 0; i < s.size(); ++i) {
        if (i && (s.size() - i) % 3 == 0) out += ',';
        out += s[i];
    }
    return out;
}

Category squat_category(SquatCategory c) {
    switch (c) {
        case SquatCategory::WrongTld: return Category::WrongTld;
        case SquatCategory::Combosquatting: return Category::Combosquatting;
        case SquatCategory::SubdomainSpoofing: return Category::SubdomainSpoofing;
        default: return Category::DirectorySpoofing;
    }
}

/// Words of the URL's brand label other than the matched brand.
std::vector<std::string> extra_words(const std::string& label, const std::string& brand, const SegmenterCorpus& corpus) {
    std::vector<std::string> out;
    std::string rest = label;
    if (auto pos = rest.find(brand); pos != std::string::npos) rest.replace(pos, brand.size(), "-");
    size_t start = 0;
    for (size_t i = 0; i <= rest.size(); ++i) {
        if (i == rest.size() || rest[i] == '-' || rest[i] == '.') {
            if (i > start)
                for (auto& w : segment_token(rest.substr(start, i - start), corpus)) out.push_back(std::move(w));
            start = i + 1;
        }
    }
    return out;
}

}  // namespace

std::string_view to_string(VisitContext c) { return c == VisitContext::Link ? "link" : "typed"; }

VisitContext detect_visit_context(const VisitEvent& e, const std::unordered_map<int64_t, std::string>& tab_urls) {
    if (e.initiator) return VisitContext::Link;
    if (!tab_urls.contains(e.tab)) return VisitContext::Link;
    return VisitContext::Typed;
}

std::string_view to_string(Component c) {
    switch (c) {
        case Component::Blacklist: return "blacklist";
        case Component::Whitelist: return "whitelist";
        case Component::IpAddress: return "ip_address";
        case Component::TrustedSearch: return "trusted_search";
        case Component::Idn: return "idn";
        case Component::Squatting: return "squatting";
        case Component::Misspelling: return "misspelling";
        case Component::MlModel: return "ml_model";
        case Component::Search: return "search";
    }
    return "whitelist";
}

std::string_view to_string(Category c) {
    switch (c) {
        case Category::Whitelist: return "whitelist";
        case Category::Blacklist: return "blacklist";
        case Category::Ip: return "ip";
        case Category::Search: return "search";
        case Category::Idn: return "idn";
        case Category::WrongTld: return to_string(SquatCategory::WrongTld);
        case Category::Combosquatting: return to_string(SquatCategory::Combosquatting);
        case Category::SubdomainSpoofing: return to_string(SquatCategory::SubdomainSpoofing);
        case Category::DirectorySpoofing: return to_string(SquatCategory::DirectorySpoofing);
        case Category::Misspelling: return "misspelling";
        case Category::Ml: return "ml";
    }
    return "whitelist";
}

std::string_view to_string(Decision d) { return d == Decision::Allow ? "allow" : "block"; }

nlohmann::ordered_json Verdict::to_json() const {
    nlohmann::ordered_json j;
    j["url"] = url;
    j["domain"] = domain;
    j["decision"] = to_string(decision);
    j["component"] = to_string(component);
    j["category"] = to_string(category);
    j["explanation"] = explanation;
    if (recommendation) j["recommendation"] = *recommendation;
    if (elapsed_ms) j["elapsed_ms"] = *elapsed_ms;
    return j;
}

std::vector<std::string> warning_message(const Verdict& v) {
    std::vector<std::string> lines;
    lines.push_back(v.decision == Decision::Block ? "The URL is not safe to visit because:"
                                                  : "The URL is safe to visit because:");
    lines.insert(lines.end(), v.explanation.begin(), v.explanation.end());
    if (v.recommendation) lines.push_back("Recommendation: Visit " + *v.recommendation);
    return lines;
}

Pipeline::Pipeline(Artifacts artifacts, std::shared_ptr<SearchProvider> provider, PipelineConfig config)
    : art_(std::move(artifacts)),
      provider_(std::move(provider)),
      config_(config),
      tab_results_(config.trusted_search_min_results, config.trusted_search_top) {
    if (!art_.bundle) throw ArtifactMissing("pipeline needs the machine bundle");
    if (!(config_.ml_threshold > 0.5 && config_.ml_threshold <= 1.0))
        throw std::invalid_argument("ml threshold must lie in (0.5, 1]");
    auto bundle = art_.bundle;
    whitelists_.global = [bundle](std::string_view d) { return bundle->machine.contains_domain(d); };
}

void Pipeline::record_search(const SearchEvent& e) { tab_results_.record(e.tab, e.outcome); }

void Pipeline::override_warning(const std::string& domain) {
    if (blacklist_.erase(domain) == 0) throw NotBlacklisted(domain + " is not blacklisted");
    whitelists_.session.insert(domain);
}

Verdict Pipeline::classify(const VisitEvent& e) {
    auto t0 = std::chrono::steady_clock::now();
    Verdict v = decide(e);
    tab_urls_[e.tab] = e.url;
    commit(v);
    if (config_.timing)
        v.elapsed_ms = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0).count();
    return v;
}

void Pipeline::commit(const Verdict& v) {
    if (v.decision == Decision::Block) {
        whitelists_.session.erase(v.domain);
        if (v.component != Component::Blacklist) blacklist_[v.domain] = v.component;
    } else {
        whitelists_.session.insert(v.domain);
    }
}

Verdict Pipeline::decide(const VisitEvent& e) {
    const ParsedUrl u = parse_url(e.url, *art_.psl);
    const auto& machine = art_.bundle->machine;

    Verdict v;
    v.url = e.url;
    v.domain = u.registrable_domain;
    const std::string& d = v.domain;
    auto block = [&](Component c, Category cat) {
        v.decision = Decision::Block;
        v.component = c;
        v.category = cat;
    };
    auto allow = [&](Component c, Category cat) {
        v.decision = Decision::Allow;
        v.component = c;
        v.category = cat;
    };
    auto reason = [&](const std::string& s) { v.explanation.push_back(numbered(v.explanation.size() + 1, s)); };
    const std::string not_listed = "The domain " + d + " is not present in local, community or global whitelists";

    // 1. blacklist
    if (auto it = blacklist_.find(d); it != blacklist_.end()) {
        block(Component::Blacklist, Category::Blacklist);
        reason("The domain " + d + " was blocked earlier in this session by the " + std::string(to_string(it->second)) +
               " check");
        return v;
    }

    // 2. whitelist cascade
    last_lookup_ = whitelists_.lookup(d);
    if (last_lookup_ != LookupPath::Miss) {
        allow(Component::Whitelist, Category::Whitelist);
        reason("The domain " + d + " is present in the " + std::string(to_string(last_lookup_)) + " whitelist");
        return v;
    }

    // 3. IP hostname
    if (u.ip_host) {
        block(Component::IpAddress, Category::Ip);
        reason(not_listed);
        reason("The hostname is the IP address " + d + " instead of a domain name");
        return v;
    }

    // 4-5. visit context and trusted search clicks
    const VisitContext ctx = detect_visit_context(e, tab_urls_);
    if (ctx == VisitContext::Link && tab_results_.trusted_click(e.tab, e.url)) {
        allow(Component::TrustedSearch, Category::Search);
        reason("The URL is among the top " + std::to_string(config_.trusted_search_top) +
               " results of a search with more than " + format_count(config_.trusted_search_min_results) + " results");
        return v;
    }

    // 6. IDN homographs
    std::string target = d;
    bool idn = false;
    if (is_idn_candidate(u.hostname)) {
        idn = true;
        IdnResult r;
        try {
            r = is_idn_attack(d, *art_.confusables, [this](std::string_view s) { return whitelists_.contains(std::string(s)); });
        } catch (const PunycodeDecodeError&) {
            block(Component::Idn, Category::Idn);
            reason(not_listed);
            reason("The domain " + d + " contains a malformed punycode label");
            return v;
        }
        if (r.attack) {
            block(Component::Idn, Category::Idn);
            reason(not_listed);
            reason("The domain " + d + " looks similar to domain " + r.skeleton.ascii);
            reason("Probable IDN Homograph attack instance of legitimate domain " + r.skeleton.ascii);
            if (r.skeleton.dropped) reason("Characters without an ASCII lookalike were removed before the comparison");
            v.recommendation = r.skeleton.ascii;
            return v;
        }
        if (!r.skeleton.ascii.empty()) target = r.skeleton.ascii;
    }

    // 7. squatting, for followed links only
    if (ctx == VisitContext::Link && !idn) {
        SquattingResult s = squatting_category(machine, u);
        if (s.category != SquatCategory::Benign && s.category != SquatCategory::Unknown) {
            block(Component::Squatting, squat_category(s.category));
            reason(not_listed);
            switch (s.category) {
                case SquatCategory::WrongTld:
                    reason("The brand " + s.matched + " is registered in different TLD " + u.tld);
                    break;
                case SquatCategory::Combosquatting: {
                    auto words = extra_words(u.brand, s.matched, *art_.corpus);
                    reason("The brand " + s.matched + " is present in the domain" +
                           (words.empty() ? std::string() : " along with words " + join_words(words)));
                    break;
                }
                case SquatCategory::SubdomainSpoofing:
                    reason("The name " + s.matched + " appears in the subdomain " + u.subdomain);
                    break;
                default:
                    reason("The name " + s.matched + " appears in the path " + u.directory);
                    break;
            }
            std::string name(to_string(s.category));
            reason("Probable " + name + " instance of legitimate domain " + s.legitimate_domain);
            v.recommendation = s.legitimate_domain;
            return v;
        }
    }

    // 8. misspellings
    if (!target.empty() && in_alphabet(target)) {
        auto hits = find_similar(art_.bundle->index, target);
        if (!hits.empty()) {
            const auto& best = hits.front();
            if (best.distance == 0)
                throw std::logic_error("whitelisted domain " + best.domain + " reached the misspelling stage");
            block(Component::Misspelling, Category::Misspelling);
            reason(not_listed);
            reason("The domain " + mark_difference(target, best.domain) + " is a misspelling of domain " + best.domain);
            v.recommendation = best.domain;
            return v;
        }
    }

    // 9. hostname classifier
    if (art_.model) {
        HostFeatures f = extract_features(u.hostname, *art_.corpus, *art_.psl);
        double p = art_.model->predict_proba(f);
        char pbuf[32];
        std::snprintf(pbuf, sizeof pbuf, "%.3f", p);
        if (p >= config_.ml_threshold) {
            block(Component::MlModel, Category::Ml);
            reason(not_listed);
            std::vector<std::string> words;
            std::unordered_set<std::string> seen;
            for (Part part : {Part::Sub, Part::Dom, Part::Tld})
                for (const auto& w : f.words(part)) {
                    auto it = art_.model->weights.find(feature_key(part, w));
                    if (it != art_.model->weights.end() && it->second > 0 && seen.insert(w).second) words.push_back(w);
                }
            if (words.size() > 5) words.resize(5);
            if (words.empty())
                reason("The hostname has the length and punctuation profile of phishing hosts (p = " + std::string(pbuf) + ")");
            else
                reason("The hostname contains words " + join_words(words) + ", suggestive of phishing attack (p = " +
                       std::string(pbuf) + ")");
            return v;
        }
        if (p <= 1.0 - config_.ml_threshold) {
            allow(Component::MlModel, Category::Ml);
            reason("The hostname classifier rates the hostname benign (p = " + std::string(pbuf) + ")");
            return v;
        }
    }

    // 10. search reputation
    try {
        if (!provider_) throw ProviderUnavailable("no search provider configured");
        Reputation r = domain_reputation(*provider_, d, config_.search);
        if (r.reputable) {
            allow(Component::Search, Category::Search);
            reason("Searching the domain " + d + " returned " + format_count(r.result_count) + " results with the domain at rank " +
                   std::to_string(*r.rank));
        } else {
            block(Component::Search, Category::Search);
            reason(not_listed);
            if (r.result_count < config_.search.min_results)
                reason("The number of results obtained after searching the domain using " + provider_->name() +
                       " is only " + format_count(r.result_count));
            else
                reason("The domain is not among the top " + std::to_string(config_.search.max_rank) +
                       " results obtained after searching it using " + provider_->name());
        }
    } catch (const Error& err) {
        if (!dynamic_cast<const BudgetExhausted*>(&err) && !dynamic_cast<const ProviderUnavailable*>(&err)) throw;
        if (config_.fail_closed) {
            block(Component::Search, Category::Search);
            reason(not_listed);
        } else {
            allow(Component::Search, Category::Search);
        }
        reason(std::string("The search oracle could not be consulted: ") + err.what());
    }
    return v;
}

StreamEvent parse_event(const nlohmann::json& j) {
    if (!j.is_object()) throw InvalidRecord("event is not an object");
    StreamEvent out;
    auto tab = [&] {
        if (!j.contains("tab") || !j["tab"].is_number_integer()) throw InvalidRecord("event needs an integer tab");
        return j["tab"].get<int64_t>();
    };
    if (j.value("type", std::string("visit")) == "search") {
        SearchEvent s;
        s.tab = tab();
        s.query = j.value("query", std::string());
        s.outcome.result_count = j.value("result_count", uint64_t{0});
        for (const auto& r : j.value("results", nlohmann::json::array())) s.outcome.top_results.push_back(r.get<std::string>());
        out.search = std::move(s);
        return out;
    }
    VisitEvent v;
    if (!j.contains("url") || !j["url"].is_string()) throw InvalidRecord("visit event needs a url");
    v.url = j["url"].get<std::string>();
    if (j.contains("initiator") && j["initiator"].is_string()) v.initiator = j["initiator"].get<std::string>();
    v.tab = tab();
    if (j.contains("timestamp")) {
        const auto& t = j["timestamp"];
        v.timestamp = t.is_string() ? parse_iso_time(t.get<std::string>()) : t.get<int64_t>();
    }
    out.visit = std::move(v);
    return out;
}

std::vector<StreamEvent> parse_event_stream(std::string_view text) {
    std::vector<StreamEvent> out;
    size_t lineno = 0;
    while (!text.empty()) {
        size_t nl = text.find('\n');
        std::string_view line = text.substr(0, nl);
        text = nl == std::string_view::npos ? std::string_view{} : text.substr(nl + 1);
        ++lineno;
        if (line.find_first_not_of(" \t\r") == std::string_view::npos) continue;
        try {
            out.push_back(parse_event(nlohmann::json::parse(line)));
        } catch (const nlohmann::json::exception& e) {
            throw InvalidRecord("event line " + std::to_string(lineno) + ": " + e.what());
        } catch (const InvalidRecord& e) {
            throw InvalidRecord("event line " + std::to_string(lineno) + ": " + e.what());
        }
    }
    return out;
}

}  // namespace phishmatch
