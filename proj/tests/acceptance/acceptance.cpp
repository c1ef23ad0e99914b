// Acceptance run: one PASS/FAIL line per criterion, nonzero exit on any failure.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <random>
#include <set>
#include <sstream>

#include "fuzzy_oracle.hpp"
#include "idn_gen.hpp"
#include "naive_matcher.hpp"
#include "phishmatch/domain_machine.hpp"
#include "phishmatch/error.hpp"
#include "phishmatch/fuzzy.hpp"
#include "phishmatch/idn.hpp"
#include "phishmatch/memory_report.hpp"
#include "phishmatch/pipeline.hpp"
#include "phishmatch/sbow.hpp"
#include "phishmatch/search.hpp"
#include "phishmatch/synthetic.hpp"
#include "phishmatch/whitelists.hpp"
#include "pipeline_fixture.hpp"
#include "test_util.hpp"

using namespace phishmatch;
using Clock = std::chrono::steady_clock;

namespace {

struct Outcome {
    bool pass = true;
    std::string detail;
};

/// Collects failed checks; the first few are reported.
class Checker {
public:
    void check(bool ok, const std::string& what) {
        if (ok) return;
        ++failures_;
        if (notes_.size() < 3) notes_.push_back(what);
    }
    size_t failures() const { return failures_; }
    std::string notes() const {
        std::string s;
        for (const auto& n : notes_) s += (s.empty() ? "" : "; ") + n;
        return s;
    }

private:
    size_t failures_ = 0;
    std::vector<std::string> notes_;
};

double seconds_since(Clock::time_point t0) { return std::chrono::duration<double>(Clock::now() - t0).count(); }

std::string fmt(const char* f, double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, f, v);
    return buf;
}

// ---- 1 ------------------------------------------------------------------------

Outcome squatting_golden() {
    auto t0 = Clock::now();
    struct Row {
        const char* url;
        Category category;
        const char* recommendation;
    };
    const Row rows[] = {
        {"http://paypal.com.elvalorsocial.com/", Category::SubdomainSpoofing, "paypal.com"},
        {"http://ssl-paypalupdate.com/login", Category::Combosquatting, "paypal.com"},
        {"http://paypal.net/home", Category::WrongTld, "paypal.com"},
        {"http://159.203.6.191/servicepaypal/", Category::Ip, nullptr},
        {"http://papyal.com/login", Category::Misspelling, "paypal.com"},
        {"http://www.xn--pypal-4ve.com/webapp/login", Category::Idn, "paypal.com"},
        {"http://www.paypaĺ.com/webapp/login", Category::Idn, "paypal.com"},
        {"https://hollywoodbytez.com/paypal.com/signin/", Category::DirectorySpoofing, "paypal.com"},
    };
    Checker c;
    for (const auto& r : rows) {
        auto p = testutil::golden_pipeline();
        auto v = p.classify(testutil::link(r.url));
        c.check(v.decision == Decision::Block && v.category == r.category, std::string(r.url) + " -> " +
                                                                                std::string(to_string(v.category)));
        if (r.recommendation) c.check(v.recommendation == r.recommendation, std::string(r.url) + " recommendation");
    }
    auto p = testutil::golden_pipeline();
    c.check(p.classify(testutil::link("https://www.paypal.com/in/home")).decision == Decision::Allow, "paypal.com blocked");
    double s = seconds_since(t0);
    c.check(s < 1.0, "runtime " + fmt("%.3f s", s));
    return {c.failures() == 0, std::to_string(std::size(rows) + 1) + " URLs, " + fmt("%.3f s", s) + " " + c.notes()};
}

// ---- 2 ------------------------------------------------------------------------

Outcome machine_shape() {
    Checker c;
    auto seven = testutil::golden_domains();
    size_t plain = plain_trie(seven).size();
    size_t optimized = DomainMachine::build(seven).size();
    c.check(plain == 46, "unoptimized " + std::to_string(plain));
    c.check(optimized == 34, "optimized " + std::to_string(optimized));

    auto domains = testutil::ranked_domains(50000);
    auto m = DomainMachine::build(domains);
    const auto& mc = m.census();
    auto rc = census_of(domains);
    c.check(mc.single_tld_brands == rc.single_tld_brands && mc.shareable_brands == rc.shareable_brands &&
                mc.prefix_brands == rc.prefix_brands && mc.brands == rc.brands,
            "machine census differs from recomputed census");
    c.check(mc.shareable_brands == mc.single_tld_brands - mc.prefix_brands, "shareable != single - prefix");
    return {c.failures() == 0, "7-domain " + std::to_string(plain) + "/" + std::to_string(optimized) +
                                   " states; 50k: single-TLD " + std::to_string(mc.single_tld_brands) + ", shareable " +
                                   std::to_string(mc.shareable_brands) + ", prefix " + std::to_string(mc.prefix_brands) +
                                   " " + c.notes()};
}

// ---- 3 ------------------------------------------------------------------------

Outcome exact_oracle() {
    auto t0 = Clock::now();
    std::mt19937_64 rng(31337);
    Checker c;
    size_t max_keywords = 0;
    for (int trial = 0; trial < 1000; ++trial) {
        auto domains = testutil::random_whitelist(rng, 1 + rng() % 240);
        auto keywords = testutil::brand_and_domain_keywords(domains);
        while (keywords.size() > 500) {
            domains.pop_back();
            keywords = testutil::brand_and_domain_keywords(domains);
        }
        max_keywords = std::max(max_keywords, keywords.size());
        auto m = DomainMachine::build(domains);
        auto text = testutil::random_text(rng, domains, 1 + rng() % 200);
        c.check(m.match(text) == testutil::naive_longest_matches(keywords, text), "mismatch on " + text);
    }
    double s = seconds_since(t0);
    c.check(s < 30.0, "runtime " + fmt("%.1f s", s));
    return {c.failures() == 0, std::to_string(c.failures()) + " mismatches in 1000 trials (up to " +
                                   std::to_string(max_keywords) + " keywords), " + fmt("%.2f s", s) + " " + c.notes()};
}

// ---- 4 ------------------------------------------------------------------------

Outcome memory_accounting() {
    Checker c;
    auto all = testutil::ranked_domains(50000);
    std::string detail;
    for (size_t n : {5000, 10000, 20000, 30000, 40000, 50000}) {
        std::vector<std::string> domains(all.begin(), all.begin() + static_cast<long>(n));
        auto r = memory_report(domains);
        c.check(r.original.bits > r.bitmap.bits && r.bitmap.bits > r.bitmap_lex.bits &&
                    r.bitmap_lex.bits > r.bitmap_lex_tld.bits,
                "ordering at " + std::to_string(n));
        if (n == 50000) {
            double ratio = static_cast<double>(r.bitmap_lex_tld.bits) / static_cast<double>(r.bitmap.bits);
            double mb = r.bitmap_lex_tld.megabytes();
            c.check(ratio <= 0.60, "ratio " + fmt("%.3f", ratio));
            c.check(mb <= 0.55 * 16.158, "bitmap_lex_tld " + fmt("%.3f MB", mb));
            detail = "at 50k: bitmap " + fmt("%.3f MB", r.bitmap.megabytes()) + ", bitmap_lex_tld " +
                     fmt("%.3f MB", mb) + ", ratio " + fmt("%.3f", ratio);
        }
    }
    return {c.failures() == 0, "ordering holds at 6 sizes; " + detail + " " + c.notes()};
}

// ---- 5 ------------------------------------------------------------------------

Outcome fuzzy_equivalence() {
    auto t0 = Clock::now();
    Checker c;
    auto domains = testutil::ranked_domains(20000);
    TrigramIndex idx(domains);
    std::vector<const std::string*> sources;
    for (const auto& d : domains)
        if (d.size() >= 6 && d.size() <= 20) sources.push_back(&d);
    std::mt19937_64 rng(5150);
    for (int i = 0; i < 10000; ++i) {
        const std::string& src = *sources[rng() % sources.size()];
        auto q = testutil::mutate(rng, src, 1 + static_cast<int>(rng() % edit_budget(src.size())));
        c.check(find_similar(idx, q) == testutil::brute_force_similar(domains, q), "query " + q);
    }
    size_t fuzzy_fail = c.failures();

    std::vector<std::string> all{""};
    for (size_t i = 0; i < all.size(); ++i)
        if (all[i].size() < 6)
            for (char ch : std::string("abc")) all.push_back(all[i] + ch);
    uint64_t pairs = 0;
    for (const auto& a : all)
        for (const auto& b : all) {
            c.check(osa_distance(a, b) == testutil::osa_recursive(a, b), "distance " + a + "/" + b);
            ++pairs;
        }
    return {c.failures() == 0, std::to_string(fuzzy_fail) + " mismatches over 10000 mutations; " +
                                   std::to_string(c.failures() - fuzzy_fail) + " distance mismatches over " +
                                   std::to_string(pairs) + " pairs, " + fmt("%.1f s", seconds_since(t0)) + " " +
                                   c.notes()};
}

// ---- 6 ------------------------------------------------------------------------

constexpr Timestamp kNow = 1700000000;

HistoryRecord history_record(std::string d, int64_t age, int64_t visits, int64_t recency, bool typed) {
    HistoryRecord r;
    r.domain = std::move(d);
    r.first_visit = kNow - age * 86400;
    r.last_visit = kNow - recency * 86400;
    for (int64_t i = 0; i < visits; ++i) r.visit_days.insert(day_of(r.last_visit) - static_cast<Day>(i));
    r.typed = typed;
    return r;
}

Outcome whitelist_scoring() {
    Checker c;
    ScoreParams p;
    int grid = 0;
    for (int64_t a : {44, 45, 46})
        for (int64_t v : {9, 10, 11})
            for (int64_t r : {6, 7, 8})
                for (bool t : {true, false}) {
                    Score want;
                    if (a > 45) want = 0;
                    else if (v <= 10) want = std::nullopt;
                    else if (a > 30) want = 1;
                    else if (r <= 7) want = 2;
                    else want = t ? 3 : 4;
                    c.check(domain_score({a, v, r, t}, p) == want, "grid cell a=" + std::to_string(a) +
                                                                       " v=" + std::to_string(v) + " r=" + std::to_string(r));
                    ++grid;
                }

    // Case 1: local and session; Case 2: local only; Case 3: session only.
    std::vector<HistoryRecord> h{history_record("both.com", 31, 11, 20, false),
                                 history_record("local.com", 60, 1, 1, false),
                                 history_record("session.com", 2, 1, 0, false)};
    auto w = update_local(h, {{"both.com", 3}, {"local.com", 4}, {"gone.com", 0}},
                          {"both.com", "session.com", "vanished.com"}, p, kNow);
    c.check(w == ScoredWhitelist{{"both.com", 1}, {"local.com", 4}, {"session.com", 8}}, "update_local cases");
    auto w2 = update_local({history_record("both.com", 3, 1, 0, true), history_record("session.com", 50, 1, 0, false)},
                           {{"both.com", 2}}, {"both.com", "session.com"}, p, kNow);
    c.check(w2 == ScoredWhitelist{{"both.com", 2}, {"session.com", 0}}, "update_local infinite/finite cases");

    auto two = create_community({{{"x.com", 0}}, {{"x.com", 1}}});
    auto three = create_community({{{"y.com", 0}}, {}, {}});
    c.check(two.entries.size() == 1 && two.entries[0].second == 1, "community N=2");
    c.check(three.entries.size() == 1 && three.entries[0].second == 32, "community N=3");
    return {c.failures() == 0, std::to_string(grid) + " grid cells, 5 update cases, community 1 and 32 " + c.notes()};
}

// ---- 7 ------------------------------------------------------------------------

Outcome ml_properties() {
    Checker c;
    const auto& corpus = SegmenterCorpus::bundled();
    auto benign = testutil::ranked_domains(100000);

    std::mt19937_64 rng(77);
    std::normal_distribution<double> g(0, 0.5);
    auto small = synthetic::labeled_hosts(120, 3, benign);
    std::vector<HostFeatures> feats;
    std::vector<int> labels;
    for (const auto& x : small) {
        feats.push_back(extract_features(x.hostname, corpus));
        labels.push_back(x.label);
    }
    Design d = make_design(feats, labels);
    std::vector<double> theta(d.params());
    for (auto& t : theta) t = g(rng);
    double bias = g(rng), worst = 0;
    auto grad = log_loss_gradient(d, theta, bias);
    const double h = 1e-5;
    for (size_t j = 0; j <= theta.size(); ++j) {
        auto tp = theta, tm = theta;
        double bp = bias, bm = bias;
        if (j < theta.size()) {
            tp[j] += h;
            tm[j] -= h;
        } else {
            bp += h;
            bm -= h;
        }
        double fd = (log_loss(d, tp, bp) - log_loss(d, tm, bm)) / (2 * h);
        double rel = std::abs(fd - grad[j]) / std::max(1e-8, std::max(std::abs(fd), std::abs(grad[j])));
        worst = std::max(worst, rel);
    }
    c.check(worst <= 1e-5, "gradient rel-err " + fmt("%.2e", worst));

    auto data = synthetic::labeled_hosts(2000, 42, benign);
    std::vector<LabeledHost> train_set(data.begin(), data.begin() + 1400), test_set(data.begin() + 1400, data.end());
    feats.clear();
    labels.clear();
    for (const auto& x : train_set) {
        feats.push_back(extract_features(x.hostname, corpus));
        labels.push_back(x.label);
    }
    Design full = make_design(feats, labels);
    TrainOptions opt;
    auto r = train(full, opt);
    for (size_t i = 1; i < r.model.epoch_loss.size(); ++i)
        c.check(r.model.epoch_loss[i] <= r.model.epoch_loss[i - 1], "loss rose at epoch " + std::to_string(i));

    size_t prev = 0;
    std::string zeros;
    for (double lambda : {0.0, 1e-4, 1e-3, 1e-2, 1e-1}) {
        TrainOptions o;
        o.lambda = lambda;
        o.epochs = 200;
        auto rr = train(full, o);
        c.check(rr.zero_weights >= prev, "zero count fell at lambda " + fmt("%g", lambda));
        prev = rr.zero_weights;
        zeros += (zeros.empty() ? "" : ",") + std::to_string(rr.zero_weights);
    }

    auto m = train(train_set, opt, corpus);
    auto conf = evaluate(m, test_set, corpus);
    c.check(conf.mcr() <= 15.0, "MCR " + fmt("%.2f", conf.mcr()));
    c.check(conf.fnr() <= 10.0, "FNR " + fmt("%.2f", conf.fnr()));

    Confusion fixture{100, 10, 80, 10};
    c.check(std::abs(fixture.mcr() - 10.0) < 1e-12, "fixture MCR");
    c.check(std::abs(fixture.fnr() - 9.0909) < 1e-4, "fixture FNR");
    return {c.failures() == 0, "grad rel-err " + fmt("%.1e", worst) + ", zero weights " + zeros + ", held-out MCR " +
                                   fmt("%.2f%%", conf.mcr()) + " FNR " + fmt("%.2f%%", conf.fnr()) + ", fixture " +
                                   fmt("%.2f", fixture.mcr()) + "/" + fmt("%.2f", fixture.fnr()) + " " + c.notes()};
}

// ---- 8 ------------------------------------------------------------------------

std::string event_stream(const std::vector<std::string>& global, size_t n, uint64_t seed,
                         std::vector<std::pair<std::string, MockProvider::Row>>& fixture) {
    std::mt19937_64 rng(seed);
    static const char* words[] = {"secure", "login", "update", "verify", "account", "online", "support", "service"};
    static const char* tlds[] = {"com", "net", "org", "info", "xyz", "co.uk"};
    auto top = [&] { return global[rng() % 5000]; };
    auto brand = [](const std::string& d) { return d.substr(0, d.find('.')); };
    auto unknown = [&] {
        return testutil::random_string(rng, "abcdefghijklmnopqrstuvwxyz", 5, 12) + "." + tlds[rng() % 6];
    };
    std::ostringstream out;
    for (size_t i = 0; i < n; ++i) {
        nlohmann::ordered_json j;
        int64_t tab = static_cast<int64_t>(rng() % 20);
        std::string host;
        int r = static_cast<int>(rng() % 100);
        if (r < 80 && r >= 76) {
            std::string clicked = unknown();
            fixture.push_back({clicked, {rng() % 1000, -1}});
            j = {{"type", "search"}, {"tab", tab}, {"query", brand(clicked)},
                 {"result_count", 20000 + rng() % 100000}, {"results", {"https://" + clicked + "/"}}};
            out << j.dump() << "\n";
            j = {{"url", "https://" + clicked + "/"}, {"tab", tab}, {"initiator", "https://www.search.example/"}};
            out << j.dump() << "\n";
            ++i;
            continue;
        }
        if (r < 50) host = (rng() % 2 ? "www." : "") + top();
        else if (r < 58) host = brand(top()) + "-" + words[rng() % 8] + ".com";
        else if (r < 62) host = brand(top()) + "." + tlds[rng() % 6];
        else if (r < 68) host = testutil::mutate(rng, top(), 1);
        else if (r < 71) {
            host = top();
            if (auto a = host.find('a'); a != std::string::npos) host.replace(a, 1, "а");
        } else if (r < 73) host = std::to_string(rng() % 256) + "." + std::to_string(rng() % 256) + ".1.7";
        else {
            host = unknown();
            if (rng() % 2) fixture.push_back({host, {rng() % 50000, static_cast<int64_t>(1 + rng() % 30)}});
        }
        j = {{"url", "http://" + host + "/p" + std::to_string(rng() % 100)}, {"tab", tab}, {"timestamp", 1700000000 + i}};
        if (rng() % 10 < 7) j["initiator"] = "https://mail.example.org/";
        out << j.dump() << "\n";
    }
    return out.str();
}

struct Replay {
    std::string verdicts;
    std::vector<double> whitelist_ms;
    size_t count = 0;
};

Replay replay(const Artifacts& a, const std::vector<StreamEvent>& events,
              const std::vector<std::pair<std::string, MockProvider::Row>>& fixture, bool timing) {
    auto provider = std::make_shared<MockProvider>();
    for (const auto& [d, row] : fixture) provider->set(d, row);
    PipelineConfig cfg;
    cfg.timing = timing;
    Pipeline p(a, provider, cfg);
    Replay r;
    for (const auto& ev : events) {
        if (ev.search) {
            p.record_search(*ev.search);
            continue;
        }
        Verdict v;
        try {
            v = p.classify(*ev.visit);
        } catch (const MalformedUrl& e) {
            r.verdicts += nlohmann::ordered_json{{"url", ev.visit->url}, {"error", e.what()}}.dump() + "\n";
            continue;
        }
        r.verdicts += v.to_json().dump() + "\n";
        ++r.count;
        if (v.component == Component::Whitelist && v.elapsed_ms) r.whitelist_ms.push_back(*v.elapsed_ms);
    }
    return r;
}

Outcome pipeline_replay() {
    Checker c;
    auto reference = testutil::ranked_domains(100000);
    std::vector<std::string> global(reference.begin(), reference.begin() + 50000);
    Artifacts a;
    a.bundle = std::make_shared<const MachineBundle>(MachineBundle::build(global, reference));
    TrainOptions opt;
    a.model = std::make_shared<const SbowModel>(
        train(synthetic::labeled_hosts(2000, 42, reference), opt, SegmenterCorpus::bundled()));

    std::vector<std::pair<std::string, MockProvider::Row>> fixture;
    std::string stream = event_stream(global, 10000, 8, fixture);
    auto events = parse_event_stream(stream);
    c.check(events.size() == 10000, "stream has " + std::to_string(events.size()) + " events");

    auto dir = std::filesystem::temp_directory_path() / "phishmatch_acceptance";
    std::filesystem::create_directories(dir);
    auto first = replay(a, events, fixture, false);
    auto second = replay(a, events, fixture, false);
    std::ofstream(dir / "verdicts_1.jsonl") << first.verdicts;
    std::ofstream(dir / "verdicts_2.jsonl") << second.verdicts;
    c.check(read_file(dir / "verdicts_1.jsonl") == read_file(dir / "verdicts_2.jsonl"), "replays differ");

    auto timed = replay(a, events, fixture, true);
    auto& ms = timed.whitelist_ms;
    double median = 0;
    if (!ms.empty()) {
        std::nth_element(ms.begin(), ms.begin() + static_cast<long>(ms.size() / 2), ms.end());
        median = ms[ms.size() / 2];
    }
    c.check(!ms.empty() && median <= 10.0, "median whitelist latency " + fmt("%.4f ms", median));
    return {c.failures() == 0, std::to_string(first.count) + " verdicts, replays identical, median whitelist-hit " +
                                   fmt("%.4f ms", median) + " over " + std::to_string(ms.size()) + " hits " + c.notes()};
}

// ---- 9 ------------------------------------------------------------------------

Outcome idn_suite() {
    Checker c;
    std::mt19937_64 rng(909);
    for (int i = 0; i < 1000; ++i) {
        auto d = testutil::random_unicode_domain(rng);
        auto s = to_ascii_skeleton(d);
        c.check(to_ascii_skeleton(s) == s, "not idempotent on " + d);
    }
    auto whitelisted = [](std::string_view d) { return d == "paypal.com"; };
    for (const char* ex : {"xn--pypal-4ve.com", "paypaĺ.com"}) {
        auto r = is_idn_attack(ex, ConfusablesMap::bundled(), whitelisted);
        c.check(r.attack && r.skeleton.ascii == "paypal.com", std::string("missed ") + ex);
    }
    int identity = 0;
    for (int i = 0; i < 1000; ++i) {
        auto s = testutil::random_string(rng, "-.0123456789abcdefghijklmnopqrstuvwxyz", 1, 30);
        if (is_punycode(s)) continue;
        c.check(to_ascii_skeleton(s) == s, "ASCII changed: " + s);
        ++identity;
    }
    return {c.failures() == 0,
            "1000 idempotent, 2/2 exemplars, " + std::to_string(identity) + " ASCII identities " + c.notes()};
}

// ---- 10 -----------------------------------------------------------------------

Outcome search_thresholds() {
    Checker c;
    auto p = MockProvider::from_fixture(
        "paypal.com\t1580000000\t1\n"
        "securecuserver.co.uk\t377\t-1\n"
        "edge20.com\t10000\t20\n"
        "edge21.com\t10000\t21\n"
        "few.com\t9999\t1\n");
    const std::pair<const char*, bool> rows[] = {
        {"paypal.com", true}, {"securecuserver.co.uk", false}, {"edge20.com", true}, {"edge21.com", false}, {"few.com", false}};
    for (const auto& [d, want] : rows) c.check(domain_reputable(*p, d) == want, d);
    return {c.failures() == 0, "5/5 fixture rows " + c.notes()};
}

}  // namespace

int main() {
    const std::pair<const char*, std::function<Outcome()>> criteria[] = {
        {"squatting golden suite", squatting_golden},
        {"machine shape", machine_shape},
        {"exact matching vs naive oracle", exact_oracle},
        {"memory accounting", memory_accounting},
        {"fuzzy filter equivalence", fuzzy_equivalence},
        {"whitelist scoring", whitelist_scoring},
        {"ML properties", ml_properties},
        {"pipeline determinism and latency", pipeline_replay},
        {"IDN suite", idn_suite},
        {"search thresholds", search_thresholds},
    };
    int failed = 0, n = 0;
    for (const auto& [name, fn] : criteria) {
        ++n;
        Outcome o;
        try {
            o = fn();
        } catch (const std::exception& e) {
            o = {false, std::string("exception: ") + e.what()};
        }
        while (!o.detail.empty() && o.detail.back() == ' ') o.detail.pop_back();
        std::cout << "criterion " << n << " " << (o.pass ? "PASS" : "FAIL") << " " << name << ": " << o.detail
                  << std::endl;
        failed += !o.pass;
    }
    std::cout << (n - failed) << "/" << n << " criteria passed" << std::endl;
    return failed ? 1 : 0;
}
