#include "phishmatch/search.hpp"

#include <algorithm>
#include <charconv>

#include "phishmatch/data_paths.hpp"
#include "phishmatch/error.hpp"
#include "phishmatch/url.hpp"

namespace phishmatch {

MockProvider::MockProvider(std::optional<uint64_t> budget, size_t cap, std::string name)
    : budget_(budget), cap_(cap), name_(std::move(name)) {}

std::unique_ptr<MockProvider> MockProvider::from_fixture(std::string_view text, std::optional<uint64_t> budget) {
    auto p = std::make_unique<MockProvider>(budget);
    size_t lineno = 0;
    while (!text.empty()) {
        size_t nl = text.find('\n');
        std::string_view line = text.substr(0, nl);
        text = nl == std::string_view::npos ? std::string_view{} : text.substr(nl + 1);
        ++lineno;
        if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
        if (line.empty() || line.front() == '#') continue;
        size_t t1 = line.find('\t'), t2 = t1 == std::string_view::npos ? t1 : line.find('\t', t1 + 1);
        auto bad = [&] { return InvalidRecord("search fixture line " + std::to_string(lineno)); };
        if (t2 == std::string_view::npos || t1 == 0) throw bad();
        Row row;
        std::string_view c = line.substr(t1 + 1, t2 - t1 - 1), r = line.substr(t2 + 1);
        auto [pc, ec1] = std::from_chars(c.data(), c.data() + c.size(), row.result_count);
        auto [pr, ec2] = std::from_chars(r.data(), r.data() + r.size(), row.rank);
        if (ec1 != std::errc{} || ec2 != std::errc{} || pc != c.data() + c.size() || pr != r.data() + r.size() ||
            row.rank == 0 || row.rank < -1)
            throw bad();
        p->set(std::string(line.substr(0, t1)), row);
    }
    return p;
}

std::unique_ptr<MockProvider> MockProvider::load(const std::filesystem::path& path, std::optional<uint64_t> budget) {
    return from_fixture(read_file(path), budget);
}

SearchOutcome MockProvider::query(std::string_view q) {
    if (budget_) {
        if (*budget_ == 0) throw BudgetExhausted(name_ + ": query budget exhausted");
        --*budget_;
    }
    ++queries_;
    SearchOutcome out;
    auto it = rows_.find(std::string(q));
    if (it == rows_.end()) return out;
    out.result_count = it->second.result_count;
    if (out.result_count == 0) return out;
    size_t n = std::min<uint64_t>(cap_, out.result_count);
    for (size_t i = 1; i <= n; ++i) {
        if (static_cast<int64_t>(i) == it->second.rank)
            out.top_results.push_back("https://" + it->first + "/");
        else
            out.top_results.push_back("https://result" + std::to_string(i) + ".example/" + std::string(q));
    }
    return out;
}

RoundRobinProvider::RoundRobinProvider(std::vector<std::shared_ptr<SearchProvider>> providers)
    : providers_(std::move(providers)) {
    if (providers_.empty()) throw Error("round robin needs at least one provider");
}

SearchOutcome RoundRobinProvider::query(std::string_view q) {
    for (size_t tries = 0; tries < providers_.size(); ++tries) {
        auto& p = providers_[next_];
        next_ = (next_ + 1) % providers_.size();
        auto b = p->budget();
        if (b && *b == 0) continue;
        return p->query(q);
    }
    throw BudgetExhausted("all providers exhausted");
}

std::optional<uint64_t> RoundRobinProvider::budget() const {
    uint64_t total = 0;
    for (const auto& p : providers_) {
        auto b = p->budget();
        if (!b) return std::nullopt;
        total += *b;
    }
    return total;
}

std::string RoundRobinProvider::name() const {
    std::string n = "round-robin(";
    for (size_t i = 0; i < providers_.size(); ++i) n += (i ? "," : "") + providers_[i]->name();
    return n + ")";
}

Reputation domain_reputation(SearchProvider& provider, std::string_view domain, const ReputationThresholds& t) {
    SearchOutcome out = provider.query(domain);
    Reputation r;
    r.result_count = out.result_count;
    for (size_t i = 0; i < out.top_results.size(); ++i) {
        try {
            if (parse_url(out.top_results[i]).registrable_domain == domain) {
                r.rank = i + 1;
                break;
            }
        } catch (const MalformedUrl&) {
        }
    }
    r.reputable = r.result_count >= t.min_results && r.rank && *r.rank <= t.max_rank;
    return r;
}

bool TabResultsCache::record(int64_t tab, const SearchOutcome& outcome) {
    if (outcome.result_count <= min_results_) {
        entries_.erase(tab);
        return false;
    }
    auto& list = entries_[tab];
    list.assign(outcome.top_results.begin(),
                outcome.top_results.begin() + static_cast<long>(std::min(top_, outcome.top_results.size())));
    return true;
}

bool TabResultsCache::trusted_click(int64_t tab, std::string_view url) const {
    auto it = entries_.find(tab);
    return it != entries_.end() && std::find(it->second.begin(), it->second.end(), url) != it->second.end();
}

}  // namespace phishmatch
