#include "phishmatch/fuzzy.hpp"

#include <algorithm>

#include "phishmatch/alphabet.hpp"
#include "phishmatch/artifact.hpp"
#include "phishmatch/kernels.hpp"

namespace phishmatch {

uint32_t osa_distance(std::string_view a, std::string_view b) {
    const size_t n = a.size(), m = b.size();
    std::vector<uint32_t> prev2(m + 1), prev(m + 1), cur(m + 1);
    for (size_t j = 0; j <= m; ++j) prev[j] = static_cast<uint32_t>(j);
    for (size_t i = 1; i <= n; ++i) {
        cur[0] = static_cast<uint32_t>(i);
        for (size_t j = 1; j <= m; ++j) {
            uint32_t cost = a[i - 1] == b[j - 1] ? 0 : 1;
            uint32_t v = std::min({prev[j] + 1, cur[j - 1] + 1, prev[j - 1] + cost});
            if (i > 1 && j > 1 && a[i - 1] == b[j - 2] && a[i - 2] == b[j - 1]) v = std::min(v, prev2[j - 2] + 1);
            cur[j] = v;
        }
        std::swap(prev2, prev);
        std::swap(prev, cur);
    }
    return prev[m];
}

std::vector<uint32_t> trigram_codes(std::string_view s) {
    std::vector<uint32_t> out;
    for (size_t i = 0; i + 3 <= s.size(); ++i) {
        int a = symbol_index(s[i]), b = symbol_index(s[i + 1]), c = symbol_index(s[i + 2]);
        uint32_t code = (a < 0 || b < 0 || c < 0) ? kNoTrigram : static_cast<uint32_t>((a * 38 + b) * 38 + c);
        if (std::find(out.begin(), out.end(), code) == out.end()) out.push_back(code);
    }
    return out;
}

std::vector<std::string_view> split_parts(std::string_view s, size_t k) {
    std::vector<std::string_view> out;
    size_t base = s.size() / k, extra = s.size() % k, pos = 0;
    for (size_t i = 0; i < k; ++i) {
        size_t len = base + (i < extra ? 1 : 0);
        out.push_back(s.substr(pos, len));
        pos += len;
    }
    return out;
}

void unigram_histogram(std::string_view s, uint8_t* out) {
    std::fill(out, out + kernels::kHistStride, 0);
    for (char c : s) {
        int k = symbol_index(c);
        uint8_t& slot = out[k < 0 ? kSigma : k];
        if (slot < 255) ++slot;
    }
}

TrigramIndex::TrigramIndex(std::vector<std::string> domains) : domains_(std::move(domains)) {
    std::vector<uint32_t> counts(kTrigramSpace + 1, 0);
    std::vector<std::vector<uint32_t>> codes(domains_.size());
    for (uint32_t i = 0; i < domains_.size(); ++i) {
        const auto& d = domains_[i];
        if (d.size() < kMinIndexed || d.size() > kMaxIndexed) continue;
        std::string sorted = d;
        std::sort(sorted.begin(), sorted.end());
        codes[i] = trigram_codes(sorted);
        for (uint32_t c : codes[i])
            if (c != kNoTrigram) ++counts[c];
    }
    offsets_.assign(kTrigramSpace + 1, 0);
    for (uint32_t c = 0; c < kTrigramSpace; ++c) offsets_[c + 1] = offsets_[c] + counts[c];
    postings_.resize(offsets_.back());
    std::vector<uint32_t> fill(offsets_.begin(), offsets_.end() - 1);
    // Domain ids are visited in increasing order, so every list is sorted.
    for (uint32_t i = 0; i < domains_.size(); ++i)
        for (uint32_t c : codes[i])
            if (c != kNoTrigram) postings_[fill[c]++] = i;
    build_side_tables();
}

void TrigramIndex::build_side_tables() {
    by_length_.clear();
    histograms_.assign(domains_.size() * kernels::kHistStride, 0);
    for (uint32_t i = 0; i < domains_.size(); ++i) {
        size_t len = domains_[i].size();
        if (by_length_.size() <= len) by_length_.resize(len + 1);
        by_length_[len].push_back(i);
        unigram_histogram(domains_[i], histograms_.data() + size_t{i} * kernels::kHistStride);
    }
}

std::span<const uint32_t> TrigramIndex::postings(uint32_t trigram) const {
    if (trigram >= kTrigramSpace || offsets_.empty()) return {};
    return {postings_.data() + offsets_[trigram], offsets_[trigram + 1] - offsets_[trigram]};
}

uint32_t TrigramIndex::frequency(uint32_t trigram) const { return static_cast<uint32_t>(postings(trigram).size()); }

std::span<const uint32_t> TrigramIndex::with_length(size_t len) const {
    if (len >= by_length_.size()) return {};
    return by_length_[len];
}

std::string TrigramIndex::serialize() const {
    BinaryWriter w;
    w.put_strings(domains_);
    w.put_vector(offsets_);
    w.put_vector(postings_);
    return w.take();
}

TrigramIndex TrigramIndex::deserialize(std::string_view bytes) {
    BinaryReader r(bytes);
    TrigramIndex idx;
    idx.domains_ = r.get_strings();
    idx.offsets_ = r.get_vector<uint32_t>();
    idx.postings_ = r.get_vector<uint32_t>();
    if (!r.done()) throw ArtifactCorrupt("trailing bytes in trigram section");
    if (idx.offsets_.size() != kTrigramSpace + 1 || idx.offsets_.back() != idx.postings_.size() ||
        !std::is_sorted(idx.offsets_.begin(), idx.offsets_.end()))
        throw ArtifactCorrupt("trigram offsets are inconsistent");
    for (uint32_t id : idx.postings_)
        if (id >= idx.domains_.size()) throw ArtifactCorrupt("trigram posting out of range");
    idx.build_side_tables();
    return idx;
}

CandidateSet ngram_filter(const TrigramIndex& index, std::string_view d, uint32_t e, size_t parts) {
    if (parts == 0) parts = 2 * e + 1;
    std::string sorted(d);
    std::sort(sorted.begin(), sorted.end());

    CandidateSet out;
    std::vector<uint32_t> acc, tmp;
    for (std::string_view part : split_parts(sorted, parts)) {
        auto codes = trigram_codes(part);
        if (codes.empty()) {
            out.all = true;
            out.ids.clear();
            return out;
        }
        std::sort(codes.begin(), codes.end(),
                  [&](uint32_t a, uint32_t b) { return index.frequency(a) < index.frequency(b); });
        auto first = index.postings(codes[0]);
        acc.assign(first.begin(), first.end());
        for (size_t k = 1; k < codes.size() && !acc.empty(); ++k) {
            auto next = index.postings(codes[k]);
            tmp.clear();
            std::set_intersection(acc.begin(), acc.end(), next.begin(), next.end(), std::back_inserter(tmp));
            acc.swap(tmp);
        }
        out.ids.insert(out.ids.end(), acc.begin(), acc.end());
    }
    std::sort(out.ids.begin(), out.ids.end());
    out.ids.erase(std::unique(out.ids.begin(), out.ids.end()), out.ids.end());
    return out;
}

std::vector<SimilarDomain> basic_filter(const TrigramIndex& index, std::span<const uint32_t> ids, std::string_view d,
                                        uint32_t e) {
    const auto& k = kernels::active();
    const auto& domains = index.domains();

    std::vector<uint32_t> in_len;
    in_len.reserve(ids.size());
    for (uint32_t id : ids) {
        size_t len = domains[id].size();
        if (len + e >= d.size() && len <= d.size() + e) in_len.push_back(id);
    }

    alignas(32) uint8_t query[kernels::kHistStride];
    unigram_histogram(d, query);
    std::vector<uint8_t> pass(in_len.size());
    k.histogram_within(query, index.histograms(), in_len.data(), in_len.size(), e, pass.data());

    std::vector<uint32_t> survivors;
    std::vector<std::string_view> texts;
    for (size_t i = 0; i < in_len.size(); ++i)
        if (pass[i]) {
            survivors.push_back(in_len[i]);
            texts.push_back(domains[in_len[i]]);
        }

    std::vector<uint32_t> dist(survivors.size());
    if (d.size() <= kernels::OsaPattern::kMaxLength) {
        kernels::OsaPattern pattern(d);
        k.osa_batch(pattern, texts.data(), texts.size(), dist.data());
    } else {
        for (size_t i = 0; i < texts.size(); ++i) dist[i] = osa_distance(d, texts[i]);
    }

    std::vector<SimilarDomain> out;
    for (size_t i = 0; i < survivors.size(); ++i)
        if (dist[i] <= e) out.push_back({domains[survivors[i]], dist[i], survivors[i]});
    std::sort(out.begin(), out.end(), [](const SimilarDomain& a, const SimilarDomain& b) {
        return a.distance != b.distance ? a.distance < b.distance : a.rank < b.rank;
    });
    return out;
}

std::vector<SimilarDomain> find_similar(const TrigramIndex& index, std::string_view d) {
    uint32_t e = edit_budget(d.size());
    size_t lo = d.size() > e ? d.size() - e : 0, hi = d.size() + e;

    std::vector<uint32_t> ids;
    auto add_lengths = [&](size_t from, size_t to) {
        for (size_t len = from; len <= to; ++len) {
            auto l = index.with_length(len);
            ids.insert(ids.end(), l.begin(), l.end());
        }
    };

    if (d.size() >= TrigramIndex::kMinQuery && d.size() <= TrigramIndex::kMaxQuery) {
        CandidateSet cs = ngram_filter(index, d, e);
        if (cs.all) {
            add_lengths(lo, hi);
        } else {
            ids = std::move(cs.ids);
            // Neighbours shorter than the indexed range carry no trigrams.
            if (lo < TrigramIndex::kMinIndexed) add_lengths(lo, TrigramIndex::kMinIndexed - 1);
        }
    } else {
        add_lengths(lo, hi);
    }
    return basic_filter(index, ids, d, e);
}

}  // namespace phishmatch
