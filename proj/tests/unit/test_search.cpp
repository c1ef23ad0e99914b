#include <doctest.h>

#include <thread>

#include <httplib.h>

#include "phishmatch/error.hpp"
#include "phishmatch/search.hpp"

using namespace phishmatch;

namespace {

constexpr std::string_view kFixture =
    "# domain\tresult_count\trank\n"
    "paypal.com\t1580000000\t1\n"
    "securecuserver.co.uk\t377\t-1\n"
    "edge20.com\t10000\t20\n"
    "edge21.com\t10000\t21\n"
    "few.com\t9999\t1\n";

}  // namespace

TEST_CASE("reputation thresholds") {
    auto p = MockProvider::from_fixture(kFixture);
    CHECK(domain_reputable(*p, "paypal.com"));
    CHECK_FALSE(domain_reputable(*p, "securecuserver.co.uk"));
    CHECK(domain_reputable(*p, "edge20.com"));
    CHECK_FALSE(domain_reputable(*p, "edge21.com"));
    CHECK_FALSE(domain_reputable(*p, "few.com"));
    CHECK_FALSE(domain_reputable(*p, "unknown.org"));

    auto r = domain_reputation(*p, "paypal.com");
    CHECK(r.result_count == 1580000000ULL);
    CHECK(r.rank == 1u);
    auto s = domain_reputation(*p, "securecuserver.co.uk");
    CHECK(s.result_count == 377);
    CHECK_FALSE(s.rank.has_value());
    CHECK(p->queries() == 8);
}

TEST_CASE("fixture parsing") {
    CHECK_THROWS_AS(MockProvider::from_fixture("a.com\t12\n"), InvalidRecord);
    CHECK_THROWS_AS(MockProvider::from_fixture("a.com\tx\t1\n"), InvalidRecord);
    CHECK_THROWS_AS(MockProvider::from_fixture("a.com\t5\t0\n"), InvalidRecord);
}

TEST_CASE("budget accounting") {
    auto p = MockProvider::from_fixture(kFixture, 3);
    for (uint64_t left = 3; left > 0; --left) {
        CHECK(p->budget() == left);
        domain_reputable(*p, "paypal.com");
    }
    CHECK(p->budget() == 0u);
    CHECK_THROWS_AS(domain_reputable(*p, "paypal.com"), BudgetExhausted);
    CHECK(p->budget() == 0u);
}

TEST_CASE("round robin") {
    std::shared_ptr<MockProvider> a = MockProvider::from_fixture(kFixture, 2);
    std::shared_ptr<MockProvider> b = MockProvider::from_fixture(kFixture, 1);
    RoundRobinProvider rr({a, b});
    CHECK(rr.budget() == 3u);
    CHECK(domain_reputable(rr, "paypal.com"));
    CHECK(a->queries() == 1);
    domain_reputable(rr, "paypal.com");
    CHECK(b->queries() == 1);
    domain_reputable(rr, "paypal.com");
    CHECK(a->queries() == 2);
    CHECK(rr.budget() == 0u);
    CHECK_THROWS_AS(rr.query("paypal.com"), BudgetExhausted);
}

TEST_CASE("trusted clicks") {
    TabResultsCache cache;
    SearchOutcome big{20000, {}};
    for (int i = 1; i <= 30; ++i) big.top_results.push_back("https://r" + std::to_string(i) + ".example/");
    CHECK(cache.record(7, big));
    CHECK(cache.trusted_click(7, "https://r1.example/"));
    CHECK(cache.trusted_click(7, "https://r20.example/"));
    CHECK_FALSE(cache.trusted_click(7, "https://r21.example/"));
    CHECK_FALSE(cache.trusted_click(8, "https://r1.example/"));

    SearchOutcome small{9999, {"https://r1.example/"}};
    CHECK_FALSE(cache.record(9, small));
    CHECK_FALSE(cache.trusted_click(9, "https://r1.example/"));
    SearchOutcome exact{10000, {"https://r1.example/"}};
    CHECK_FALSE(cache.record(9, exact));
}

TEST_CASE("http provider against a local server") {
    httplib::Server server;
    server.Get("/search", [](const httplib::Request& req, httplib::Response& res) {
        std::string q = req.get_param_value("q");
        if (q == "paypal.com")
            res.set_content(R"({"result_count": 1580000000, "results": ["https://www.paypal.com/", "https://x.example/"]})",
                            "application/json");
        else if (q == "broken.com")
            res.set_content("not json", "text/plain");
        else
            res.set_content(R"({"result_count": 377, "results": []})", "application/json");
    });
    int port = server.bind_to_any_port("127.0.0.1");
    REQUIRE(port > 0);
    std::thread t([&] { server.listen_after_bind(); });
    server.wait_until_ready();

    HttpProvider p("http://127.0.0.1:" + std::to_string(port), "/search?q={q}", 3);
    CHECK(domain_reputable(p, "paypal.com"));
    CHECK_FALSE(domain_reputable(p, "other.com"));
    CHECK_THROWS_AS(p.query("broken.com"), ProviderUnavailable);
    CHECK_THROWS_AS(p.query("paypal.com"), BudgetExhausted);
    server.stop();
    t.join();

    HttpProvider down("http://127.0.0.1:" + std::to_string(port), "/search?q={q}", std::nullopt, 1);
    CHECK_THROWS_AS(down.query("paypal.com"), ProviderUnavailable);
}
