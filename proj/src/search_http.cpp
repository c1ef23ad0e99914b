#include <cstdlib>

#include <httplib.h>
#include <json.hpp>

#include "phishmatch/error.hpp"
#include "phishmatch/search.hpp"

namespace phishmatch {

HttpProvider::HttpProvider(std::string base_url, std::string query_template, std::optional<uint64_t> budget,
                           int timeout_seconds)
    : base_url_(std::move(base_url)), template_(std::move(query_template)), budget_(budget), timeout_(timeout_seconds) {}

std::unique_ptr<HttpProvider> HttpProvider::from_environment() {
    const char* url = std::getenv("PHISHMATCH_SEARCH_URL");
    if (!url || !*url) throw ProviderUnavailable("PHISHMATCH_SEARCH_URL is not set");
    const char* tpl = std::getenv("PHISHMATCH_SEARCH_TEMPLATE");
    return std::make_unique<HttpProvider>(url, tpl && *tpl ? tpl : "/search?q={q}");
}

SearchOutcome HttpProvider::query(std::string_view q) {
    if (budget_) {
        if (*budget_ == 0) throw BudgetExhausted(name() + ": query budget exhausted");
        --*budget_;
    }
    std::string path = template_;
    if (auto pos = path.find("{q}"); pos != std::string::npos)
        path.replace(pos, 3, httplib::detail::encode_query_param(std::string(q)));

    httplib::Client client(base_url_);
    client.set_connection_timeout(timeout_, 0);
    client.set_read_timeout(timeout_, 0);
    auto res = client.Get(path);
    if (!res) throw ProviderUnavailable(name() + ": " + httplib::to_string(res.error()));
    if (res->status != 200) throw ProviderUnavailable(name() + ": HTTP " + std::to_string(res->status));
    try {
        auto j = nlohmann::json::parse(res->body);
        SearchOutcome out;
        out.result_count = j.at("result_count").get<uint64_t>();
        for (const auto& u : j.value("results", nlohmann::json::array())) out.top_results.push_back(u.get<std::string>());
        return out;
    } catch (const nlohmann::json::exception& e) {
        throw ProviderUnavailable(name() + ": bad response: " + e.what());
    }
}

}  // namespace phishmatch
