#include "phishmatch/whitelists.hpp"

#include <algorithm>
#include <charconv>
#include <chrono>
#include <cstdio>
#include <unordered_map>

#include <json.hpp>

#include "phishmatch/data_paths.hpp"
#include "phishmatch/error.hpp"

namespace phishmatch {

namespace {

constexpr int64_t kDay = 86400;

int64_t floor_div(int64_t a, int64_t b) { return a / b - ((a % b != 0) && ((a < 0) != (b < 0))); }

std::string_view trim(std::string_view s) {
    while (!s.empty() && (s.front() == ' ' || s.front() == '\t' || s.front() == '\r')) s.remove_prefix(1);
    while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) s.remove_suffix(1);
    return s;
}

template <class F>
void for_each_line(std::string_view text, F f) {
    size_t lineno = 0;
    while (!text.empty()) {
        size_t nl = text.find('\n');
        std::string_view line = text.substr(0, nl);
        text = nl == std::string_view::npos ? std::string_view{} : text.substr(nl + 1);
        ++lineno;
        line = trim(line);
        if (line.empty() || line.front() == '#') continue;
        f(line, lineno);
    }
}

Timestamp json_time(const nlohmann::json& v) {
    if (v.is_number_integer()) return v.get<int64_t>();
    if (v.is_number()) return static_cast<int64_t>(v.get<double>());
    if (v.is_string()) return parse_iso_time(v.get<std::string>());
    throw InvalidRecord("timestamp must be a number or ISO string");
}

}  // namespace

Day day_of(Timestamp t) { return static_cast<Day>(floor_div(t, kDay)); }

Day parse_iso_date(std::string_view s) {
    int y = 0;
    unsigned m = 0, d = 0;
    std::string buf(s.substr(0, 10));
    if (s.size() < 10 || std::sscanf(buf.c_str(), "%4d-%2u-%2u", &y, &m, &d) != 3)
        throw InvalidRecord("bad date: " + std::string(s));
    std::chrono::year_month_day ymd{std::chrono::year{y}, std::chrono::month{m}, std::chrono::day{d}};
    if (!ymd.ok()) throw InvalidRecord("bad date: " + std::string(s));
    return static_cast<Day>(std::chrono::sys_days{ymd}.time_since_epoch().count());
}

Timestamp parse_iso_time(std::string_view s) {
    Timestamp t = static_cast<Timestamp>(parse_iso_date(s)) * kDay;
    if (s.size() == 10) return t;
    unsigned hh = 0, mm = 0, ss = 0;
    std::string rest(s.substr(10));
    if ((rest[0] != 'T' && rest[0] != ' ') || std::sscanf(rest.c_str() + 1, "%2u:%2u:%2u", &hh, &mm, &ss) != 3 ||
        hh > 23 || mm > 59 || ss > 60)
        throw InvalidRecord("bad timestamp: " + std::string(s));
    return t + hh * 3600 + mm * 60 + ss;
}

std::string format_iso_date(Day d) {
    std::chrono::year_month_day ymd{std::chrono::sys_days{std::chrono::days{d}}};
    char buf[16];
    std::snprintf(buf, sizeof buf, "%04d-%02u-%02u", static_cast<int>(ymd.year()), static_cast<unsigned>(ymd.month()),
                  static_cast<unsigned>(ymd.day()));
    return buf;
}

Features features_of(const HistoryRecord& r, Timestamp now) {
    Features f;
    f.age = std::max<int64_t>(0, floor_div(now - r.first_visit, kDay));
    f.recency = std::max<int64_t>(0, floor_div(now - r.last_visit, kDay));
    f.visits = std::max<int64_t>(1, static_cast<int64_t>(r.visit_days.size()));
    f.typed = r.typed;
    return f;
}

Score domain_score(const Features& f, const ScoreParams& p) {
    if (f.age > p.A) return 0;
    if (f.visits <= p.V) return std::nullopt;
    if (f.age > p.B) return 1;
    if (f.recency <= p.R) return 2;
    return f.typed ? 3 : 4;
}

ScoredWhitelist create_local(const std::vector<HistoryRecord>& history, const ScoreParams& p, Timestamp now) {
    ScoredWhitelist w;
    for (const auto& r : history)
        if (auto s = domain_score(features_of(r, now), p)) w[r.domain] = *s;
    return w;
}

ScoredWhitelist update_local(const std::vector<HistoryRecord>& history, const ScoredWhitelist& prev_local,
                             const std::unordered_set<std::string>& prev_session, const ScoreParams& p,
                             Timestamp now) {
    std::unordered_map<std::string_view, const HistoryRecord*> by_domain;
    for (const auto& r : history) by_domain.emplace(r.domain, &r);

    std::set<std::string> candidates(prev_session.begin(), prev_session.end());
    for (const auto& [d, _] : prev_local) candidates.insert(d);

    ScoredWhitelist w;
    for (const auto& d : candidates) {
        auto it = by_domain.find(d);
        if (it == by_domain.end()) continue;  // removed from history
        Score fresh = domain_score(features_of(*it->second, now), p);
        auto old = prev_local.find(d);
        bool in_session = prev_session.contains(d);
        if (old != prev_local.end() && in_session) {
            w[d] = fresh ? std::min(*fresh, old->second) : old->second;
        } else if (old != prev_local.end()) {
            w[d] = old->second;
        } else {
            w[d] = fresh ? std::min(*fresh, kSessionScore) : kSessionScore;
        }
    }
    return w;
}

bool CommunityWhitelist::contains(std::string_view d) const {
    return std::any_of(entries.begin(), entries.end(), [&](const auto& e) { return e.first == d; });
}

CommunityWhitelist create_community(const std::vector<ScoredWhitelist>& relaxed_lists, size_t k, int penalty) {
    const int64_t n = static_cast<int64_t>(relaxed_lists.size());
    std::map<std::string, int64_t> score;
    for (const auto& list : relaxed_lists) {
        for (const auto& [d, s] : list) {
            auto [it, fresh] = score.try_emplace(d, (n - 1) * penalty);
            if (!fresh) it->second -= penalty;
            it->second += s;
        }
    }
    CommunityWhitelist c;
    c.k = k;
    for (const auto& [d, s] : score) c.entries.emplace_back(d, static_cast<int>(s));
    std::stable_sort(c.entries.begin(), c.entries.end(),
                     [](const auto& a, const auto& b) { return a.second < b.second; });
    if (c.entries.size() > k) c.entries.resize(k);
    return c;
}

std::string_view to_string(LookupPath p) {
    switch (p) {
        case LookupPath::Session: return "session";
        case LookupPath::Local: return "local";
        case LookupPath::Community: return "community";
        case LookupPath::Global: return "global";
        case LookupPath::Miss: return "miss";
    }
    return "miss";
}

LookupPath WhitelistSet::lookup(const std::string& domain) {
    if (session.contains(domain)) return LookupPath::Session;
    LookupPath hit = LookupPath::Miss;
    if (local.contains(domain))
        hit = LookupPath::Local;
    else if (community.contains(domain))
        hit = LookupPath::Community;
    else if (global && global(domain))
        hit = LookupPath::Global;
    if (hit != LookupPath::Miss) session.insert(domain);
    return hit;
}

bool WhitelistSet::contains(const std::string& domain) const {
    return session.contains(domain) || local.contains(domain) || community.contains(domain) || (global && global(domain));
}

std::vector<HistoryRecord> parse_history_jsonl(std::string_view text) {
    std::vector<HistoryRecord> out;
    std::unordered_map<std::string, size_t> seen;
    for_each_line(text, [&](std::string_view line, size_t lineno) {
        nlohmann::json j;
        try {
            j = nlohmann::json::parse(line);
        } catch (const nlohmann::json::exception& e) {
            throw InvalidRecord("history line " + std::to_string(lineno) + ": " + e.what());
        }
        if (!j.is_object() || !j.contains("domain") || !j["domain"].is_string())
            throw InvalidRecord("history line " + std::to_string(lineno) + ": missing domain");
        HistoryRecord r;
        r.domain = j["domain"].get<std::string>();
        std::transform(r.domain.begin(), r.domain.end(), r.domain.begin(),
                       [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
        if (j.contains("visit_dates"))
            for (const auto& v : j["visit_dates"]) r.visit_days.insert(parse_iso_date(v.get<std::string>()));
        bool has_first = j.contains("first_visit"), has_last = j.contains("last_visit");
        if (has_first) r.first_visit = json_time(j["first_visit"]);
        if (has_last) r.last_visit = json_time(j["last_visit"]);
        if (!r.visit_days.empty()) {
            if (!has_first) r.first_visit = static_cast<Timestamp>(*r.visit_days.begin()) * kDay;
            if (!has_last) r.last_visit = static_cast<Timestamp>(*r.visit_days.rbegin()) * kDay;
        } else if (has_first || has_last) {
            r.visit_days.insert(day_of(has_last ? r.last_visit : r.first_visit));
            if (!has_first) r.first_visit = r.last_visit;
            if (!has_last) r.last_visit = r.first_visit;
        } else {
            throw InvalidRecord("history line " + std::to_string(lineno) + ": no visits");
        }
        r.typed = j.value("typed", false);
        if (r.first_visit > r.last_visit)
            throw InvalidRecord("history line " + std::to_string(lineno) + ": first_visit after last_visit");

        if (auto it = seen.find(r.domain); it != seen.end()) {
            auto& m = out[it->second];
            m.first_visit = std::min(m.first_visit, r.first_visit);
            m.last_visit = std::max(m.last_visit, r.last_visit);
            m.visit_days.insert(r.visit_days.begin(), r.visit_days.end());
            m.typed = m.typed || r.typed;
        } else {
            seen.emplace(r.domain, out.size());
            out.push_back(std::move(r));
        }
    });
    return out;
}

std::vector<HistoryRecord> load_history(const std::filesystem::path& path) {
    return parse_history_jsonl(read_file(path));
}

namespace {

std::pair<std::string, int> parse_scored_line(std::string_view line, size_t lineno) {
    size_t tab = line.find('\t');
    if (tab == std::string_view::npos) throw InvalidRecord("whitelist line " + std::to_string(lineno) + ": no tab");
    std::string_view d = trim(line.substr(0, tab)), s = trim(line.substr(tab + 1));
    int score = 0;
    auto [p, ec] = std::from_chars(s.data(), s.data() + s.size(), score);
    if (ec != std::errc{} || p != s.data() + s.size() || d.empty())
        throw InvalidRecord("whitelist line " + std::to_string(lineno) + ": bad record");
    return {std::string(d), score};
}

}  // namespace

ScoredWhitelist parse_whitelist(std::string_view text) {
    ScoredWhitelist w;
    for_each_line(text, [&](std::string_view line, size_t lineno) {
        auto [d, s] = parse_scored_line(line, lineno);
        w[d] = s;
    });
    return w;
}

std::string format_whitelist(const ScoredWhitelist& w) {
    std::string out;
    for (const auto& [d, s] : w) out += d + '\t' + std::to_string(s) + '\n';
    return out;
}

std::string format_community(const CommunityWhitelist& c) {
    std::string out;
    for (const auto& [d, s] : c.entries) out += d + '\t' + std::to_string(s) + '\n';
    return out;
}

CommunityWhitelist parse_community(std::string_view text, size_t k) {
    CommunityWhitelist c;
    c.k = k;
    for_each_line(text, [&](std::string_view line, size_t lineno) { c.entries.push_back(parse_scored_line(line, lineno)); });
    std::stable_sort(c.entries.begin(), c.entries.end(),
                     [](const auto& a, const auto& b) { return a.second < b.second; });
    if (c.entries.size() > k) c.entries.resize(k);
    return c;
}

}  // namespace phishmatch
