#pragma once

#include <memory>
#include <string>
#include <vector>

#include "phishmatch/pipeline.hpp"
#include "test_util.hpp"

namespace testutil {

/// The seven-domain brand fixture; paypal.com is one of them.
inline std::vector<std::string> golden_domains() {
    return {"paypal.com", "amazon.com", "amazon.fr", "al.com", "eb.com", "ebay.com", "paytm.com"};
}

inline std::shared_ptr<const phishmatch::MachineBundle> golden_bundle() {
    static auto b = std::make_shared<const phishmatch::MachineBundle>(
        phishmatch::MachineBundle::build(golden_domains(), ranked_domains(100000)));
    return b;
}

inline std::shared_ptr<phishmatch::MockProvider> table_provider() {
    std::shared_ptr<phishmatch::MockProvider> p = phishmatch::MockProvider::from_fixture(
        "paypal.com\t1580000000\t1\n"
        "securecuserver.co.uk\t377\t-1\n"
        "tinyshop.org\t250000\t3\n");
    return p;
}

inline phishmatch::Pipeline golden_pipeline(bool timing = false) {
    phishmatch::Artifacts a;
    a.bundle = golden_bundle();
    phishmatch::PipelineConfig cfg;
    cfg.timing = timing;
    return phishmatch::Pipeline(a, table_provider(), cfg);
}

inline phishmatch::VisitEvent link(std::string url, int64_t tab = 1) {
    return {std::move(url), std::string("https://mail.example.org/"), tab, 0};
}

inline phishmatch::VisitEvent typed(std::string url, int64_t tab) { return {std::move(url), std::nullopt, tab, 0}; }

}  // namespace testutil
