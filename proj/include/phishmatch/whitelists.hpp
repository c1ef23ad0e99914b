#pragma once

#include <cstdint>
#include <filesystem>
#include <functional>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <unordered_set>
#include <utility>
#include <vector>

namespace phishmatch {

/// Seconds since the Unix epoch, UTC.
using Timestamp = int64_t;

/// Days since 1970-01-01 (UTC calendar date).
using Day = int32_t;

Day day_of(Timestamp t);

/// Parses "YYYY-MM-DD" or "YYYY-MM-DDTHH:MM:SS[Z]". Throws InvalidRecord.
Timestamp parse_iso_time(std::string_view s);
Day parse_iso_date(std::string_view s);
std::string format_iso_date(Day d);

struct HistoryRecord {
    std::string domain;
    Timestamp first_visit = 0;
    Timestamp last_visit = 0;
    std::set<Day> visit_days;
    bool typed = false;
};

/// Age, distinct visit days, recency and typed flag of a domain at `now`.
struct Features {
    int64_t age = 0;
    int64_t visits = 1;
    int64_t recency = 0;
    bool typed = false;
};

Features features_of(const HistoryRecord& r, Timestamp now);

struct ScoreParams {
    int64_t A = 45;
    int64_t B = 30;
    int64_t V = 10;
    int64_t R = 7;

    /// A, B and V halved (integer division); R unchanged.
    ScoreParams relaxed() const { return {A / 2, B / 2, V / 2, R}; }
    bool valid() const { return A > B && B > V && B >= R + V; }
};

/// Scores of the decision tree; `std::nullopt` is the infinite score.
using Score = std::optional<int>;

inline constexpr int kSessionScore = 8;
inline constexpr int kCommunityPenalty = 16;

Score domain_score(const Features& f, const ScoreParams& p);

/// domain -> score, ordered by domain so exports are stable.
using ScoredWhitelist = std::map<std::string, int>;

ScoredWhitelist create_local(const std::vector<HistoryRecord>& history, const ScoreParams& p, Timestamp now);

ScoredWhitelist update_local(const std::vector<HistoryRecord>& history, const ScoredWhitelist& prev_local,
                             const std::unordered_set<std::string>& prev_session, const ScoreParams& p,
                             Timestamp now);

struct CommunityWhitelist {
    std::vector<std::pair<std::string, int>> entries;  ///< ascending by score, then domain
    size_t k = 100;

    bool contains(std::string_view d) const;
};

/// Aggregates N relaxed lists. A first sighting starts at (N-1)*penalty,
/// every later sighting removes one penalty; each adds the user's score.
CommunityWhitelist create_community(const std::vector<ScoredWhitelist>& relaxed_lists, size_t k = 100,
                                    int penalty = kCommunityPenalty);

enum class LookupPath { Session, Local, Community, Global, Miss };
std::string_view to_string(LookupPath p);

/// The whitelist cascade. Local, community and global are read-only during a
/// session; any hit below the session list is cached in the session list.
class WhitelistSet {
public:
    std::unordered_set<std::string> session;
    ScoredWhitelist local;
    CommunityWhitelist community;
    std::function<bool(std::string_view)> global;

    LookupPath lookup(const std::string& domain);
    /// Membership in any list, without caching.
    bool contains(const std::string& domain) const;
    bool check(const std::string& domain) { return lookup(domain) != LookupPath::Miss; }
};

/// One JSON object per line: {domain, first_visit, last_visit, visit_dates, typed}.
/// Timestamps are ISO-8601 strings or epoch seconds. Later duplicates of a
/// domain are merged into the first.
std::vector<HistoryRecord> parse_history_jsonl(std::string_view text);
std::vector<HistoryRecord> load_history(const std::filesystem::path& path);

/// "domain<TAB>score" lines, '#' comments ignored.
ScoredWhitelist parse_whitelist(std::string_view text);
std::string format_whitelist(const ScoredWhitelist& w);
std::string format_community(const CommunityWhitelist& c);
CommunityWhitelist parse_community(std::string_view text, size_t k = 100);

}  // namespace phishmatch
