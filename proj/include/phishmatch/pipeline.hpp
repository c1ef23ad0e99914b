#pragma once

#include <cstdint>
#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include <json.hpp>

#include "phishmatch/bundle.hpp"
#include "phishmatch/idn.hpp"
#include "phishmatch/sbow.hpp"
#include "phishmatch/search.hpp"
#include "phishmatch/whitelists.hpp"

namespace phishmatch {

struct VisitEvent {
    std::string url;
    std::optional<std::string> initiator;
    int64_t tab = 0;
    Timestamp timestamp = 0;
};

/// A user-initiated search whose results page was shown in `tab`.
struct SearchEvent {
    int64_t tab = 0;
    std::string query;
    SearchOutcome outcome;
};

enum class VisitContext { Link, Typed };
std::string_view to_string(VisitContext c);

/// Initiator set, or a tab never seen before: link. Otherwise typed.
VisitContext detect_visit_context(const VisitEvent& e, const std::unordered_map<int64_t, std::string>& tab_urls);

enum class Component { Blacklist, Whitelist, IpAddress, TrustedSearch, Idn, Squatting, Misspelling, MlModel, Search };
std::string_view to_string(Component c);

enum class Category {
    Whitelist,
    Blacklist,
    Ip,
    Search,
    Idn,
    WrongTld,
    Combosquatting,
    SubdomainSpoofing,
    DirectorySpoofing,
    Misspelling,
    Ml,
};
std::string_view to_string(Category c);

enum class Decision { Allow, Block };
std::string_view to_string(Decision d);

struct Verdict {
    std::string url;
    std::string domain;  ///< registrable domain (or IP) the decision is recorded under
    Decision decision = Decision::Allow;
    Component component = Component::Whitelist;
    Category category = Category::Whitelist;
    std::vector<std::string> explanation;  ///< numbered reason lines
    std::optional<std::string> recommendation;
    std::optional<double> elapsed_ms;

    nlohmann::ordered_json to_json() const;
};

/// Message lines for a verdict: a header line followed by the reasons and
/// the recommendation, if any.
std::vector<std::string> warning_message(const Verdict& v);

struct PipelineConfig {
    double ml_threshold = 0.9;  ///< block at p ≥ t, allow at p ≤ 1 − t, search in between
    ReputationThresholds search;
    uint64_t trusted_search_min_results = 10000;
    size_t trusted_search_top = 20;
    bool fail_closed = true;  ///< provider errors block
    bool timing = true;       ///< fill Verdict::elapsed_ms
};

/// Shared, immutable artifacts. Several pipelines may use one instance.
struct Artifacts {
    std::shared_ptr<const MachineBundle> bundle;
    std::shared_ptr<const SbowModel> model;
    const ConfusablesMap* confusables = &ConfusablesMap::bundled();
    const SegmenterCorpus* corpus = &SegmenterCorpus::bundled();
    const PublicSuffixList* psl = &PublicSuffixList::bundled();
};

/// Per-session classification state. Not thread-safe: one event at a time.
class Pipeline {
public:
    Pipeline(Artifacts artifacts, std::shared_ptr<SearchProvider> provider, PipelineConfig config = {});

    /// Throws MalformedUrl when the URL has no usable host.
    Verdict classify(const VisitEvent& e);

    /// Stores the results of a user-initiated search for trusted clicks.
    void record_search(const SearchEvent& e);

    /// Removes `domain` from the blacklist and trusts it for the session.
    /// Throws NotBlacklisted.
    void override_warning(const std::string& domain);

    WhitelistSet& whitelists() { return whitelists_; }
    const std::unordered_map<std::string, Component>& blacklist() const { return blacklist_; }
    const PipelineConfig& config() const { return config_; }

    /// Path taken by the most recent whitelist lookup.
    LookupPath last_lookup() const { return last_lookup_; }

private:
    Verdict decide(const VisitEvent& e);
    void commit(const Verdict& v);

    Artifacts art_;
    std::shared_ptr<SearchProvider> provider_;
    PipelineConfig config_;
    WhitelistSet whitelists_;
    std::unordered_map<std::string, Component> blacklist_;
    std::unordered_map<int64_t, std::string> tab_urls_;
    TabResultsCache tab_results_;
    LookupPath last_lookup_ = LookupPath::Miss;
};

/// One JSON object per line. Visits: {"url", "initiator"?, "tab", "timestamp"?}.
/// Searches: {"type": "search", "tab", "query", "result_count", "results": [...]}.
struct StreamEvent {
    std::optional<VisitEvent> visit;
    std::optional<SearchEvent> search;
};
std::vector<StreamEvent> parse_event_stream(std::string_view text);
StreamEvent parse_event(const nlohmann::json& j);

}  // namespace phishmatch
