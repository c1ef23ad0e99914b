#pragma once

#include <cstdint>
#include <filesystem>
#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

namespace phishmatch {

struct SearchOutcome {
    uint64_t result_count = 0;
    std::vector<std::string> top_results;  ///< engine rank order
};

class SearchProvider {
public:
    virtual ~SearchProvider() = default;

    /// One query; consumes one unit of budget. Throws BudgetExhausted when
    /// none is left and ProviderUnavailable when the backend cannot be reached.
    virtual SearchOutcome query(std::string_view q) = 0;

    /// Remaining queries, or nullopt when unlimited.
    virtual std::optional<uint64_t> budget() const = 0;
    virtual std::string name() const = 0;
};

/// Fixture-backed provider: "domain<TAB>result_count<TAB>rank_or_-1" lines.
/// A domain with rank r appears at position r of the results; the other
/// positions hold filler URLs. Unknown domains get zero results.
class MockProvider final : public SearchProvider {
public:
    struct Row {
        uint64_t result_count = 0;
        int64_t rank = -1;
    };

    explicit MockProvider(std::optional<uint64_t> budget = std::nullopt, size_t cap = 50, std::string name = "mock");
    static std::unique_ptr<MockProvider> from_fixture(std::string_view text, std::optional<uint64_t> budget = std::nullopt);
    static std::unique_ptr<MockProvider> load(const std::filesystem::path& path, std::optional<uint64_t> budget = std::nullopt);

    void set(std::string domain, Row row) { rows_[std::move(domain)] = row; }

    SearchOutcome query(std::string_view q) override;
    std::optional<uint64_t> budget() const override { return budget_; }
    std::string name() const override { return name_; }
    uint64_t queries() const { return queries_; }

private:
    std::unordered_map<std::string, Row> rows_;
    std::optional<uint64_t> budget_;
    size_t cap_;
    std::string name_;
    uint64_t queries_ = 0;
};

/// Rotates over several providers, skipping exhausted ones.
class RoundRobinProvider final : public SearchProvider {
public:
    explicit RoundRobinProvider(std::vector<std::shared_ptr<SearchProvider>> providers);

    SearchOutcome query(std::string_view q) override;
    std::optional<uint64_t> budget() const override;
    std::string name() const override;

private:
    std::vector<std::shared_ptr<SearchProvider>> providers_;
    size_t next_ = 0;
};

/// JSON-over-HTTP backend. `query_template` contains "{q}", replaced by the
/// URL-encoded query; the response must be {"result_count": N, "results": [urls]}.
class HttpProvider final : public SearchProvider {
public:
    HttpProvider(std::string base_url, std::string query_template, std::optional<uint64_t> budget = std::nullopt,
                 int timeout_seconds = 5);

    /// PHISHMATCH_SEARCH_URL and PHISHMATCH_SEARCH_TEMPLATE (default "/search?q={q}").
    static std::unique_ptr<HttpProvider> from_environment();

    SearchOutcome query(std::string_view q) override;
    std::optional<uint64_t> budget() const override { return budget_; }
    std::string name() const override { return "http:" + base_url_; }

private:
    std::string base_url_;
    std::string template_;
    std::optional<uint64_t> budget_;
    int timeout_;
};

struct ReputationThresholds {
    uint64_t min_results = 10000;
    size_t max_rank = 20;
};

struct Reputation {
    bool reputable = false;
    uint64_t result_count = 0;
    std::optional<size_t> rank;  ///< 1-based position of the domain, if found
};

/// Searches the domain; reputable iff result_count ≥ min_results and a result
/// within the first max_rank has the domain as its registrable domain.
Reputation domain_reputation(SearchProvider& provider, std::string_view domain, const ReputationThresholds& t = {});

inline bool domain_reputable(SearchProvider& provider, std::string_view domain, const ReputationThresholds& t = {}) {
    return domain_reputation(provider, domain, t).reputable;
}

/// Top results of user-initiated searches per tab.
class TabResultsCache {
public:
    explicit TabResultsCache(uint64_t min_results = 10000, size_t top = 20) : min_results_(min_results), top_(top) {}

    /// Stores the first `top` results when the search returned more than `min_results`.
    /// Returns whether the list was stored.
    bool record(int64_t tab, const SearchOutcome& outcome);
    bool trusted_click(int64_t tab, std::string_view url) const;
    void forget(int64_t tab) { entries_.erase(tab); }

private:
    uint64_t min_results_;
    size_t top_;
    std::unordered_map<int64_t, std::vector<std::string>> entries_;
};

}  // namespace phishmatch
