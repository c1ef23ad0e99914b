#include "phishmatch/sbow.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <limits>
#include <set>

#include "phishmatch/data_paths.hpp"
#include "phishmatch/error.hpp"
#include "phishmatch/kernels.hpp"

namespace phishmatch {

namespace {

constexpr size_t kMaxWord = 24;

bool is_digit(char c) { return c >= '0' && c <= '9'; }

template <class F>
void for_each_line(std::string_view text, F f) {
    size_t lineno = 0;
    while (!text.empty()) {
        size_t nl = text.find('\n');
        std::string_view line = text.substr(0, nl);
        text = nl == std::string_view::npos ? std::string_view{} : text.substr(nl + 1);
        ++lineno;
        if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
        if (line.empty() || line.front() == '#') continue;
        f(line, lineno);
    }
}

std::vector<std::string_view> split_any(std::string_view s, std::string_view seps) {
    std::vector<std::string_view> out;
    size_t start = 0;
    for (size_t i = 0; i <= s.size(); ++i) {
        if (i == s.size() || seps.find(s[i]) != std::string_view::npos) {
            if (i > start) out.push_back(s.substr(start, i - start));
            start = i + 1;
        }
    }
    return out;
}

double parse_double(std::string_view s, size_t lineno) {
    // from_chars for double is available in libstdc++ 11.
    double v = 0;
    auto [p, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (ec != std::errc{} || p != s.data() + s.size())
        throw InvalidRecord("model line " + std::to_string(lineno) + ": bad number");
    return v;
}

std::string fmt(double v) {
    char buf[32];
    auto [p, ec] = std::to_chars(buf, buf + sizeof buf, v);
    return std::string(buf, p);
}

std::array<double, kNumeric> raw_numeric(const HostFeatures& f) {
    return {static_cast<double>(f.nchar), static_cast<double>(f.ndot), static_cast<double>(f.nhyphen)};
}

constexpr std::array<std::string_view, kNumeric> kNumericNames{"nchar", "ndot", "nhyphen"};
constexpr std::array<Part, 3> kParts{Part::Sub, Part::Dom, Part::Tld};

}  // namespace

// ---- segmentation -----------------------------------------------------------

SegmenterCorpus SegmenterCorpus::parse(std::string_view text) {
    SegmenterCorpus c;
    for_each_line(text, [&](std::string_view line, size_t lineno) {
        size_t tab = line.find('\t');
        uint64_t n = 0;
        std::string_view num = tab == std::string_view::npos ? std::string_view{} : line.substr(tab + 1);
        auto [p, ec] = std::from_chars(num.data(), num.data() + num.size(), n);
        if (tab == 0 || tab == std::string_view::npos || ec != std::errc{} || p != num.data() + num.size())
            throw InvalidRecord("unigram line " + std::to_string(lineno));
        c.add(std::string(line.substr(0, tab)), n);
    });
    return c;
}

SegmenterCorpus SegmenterCorpus::load(const std::filesystem::path& path) { return parse(read_file(path)); }

const SegmenterCorpus& SegmenterCorpus::bundled() {
    static const SegmenterCorpus c = load(data_file("unigrams.tsv"));
    return c;
}

void SegmenterCorpus::add(std::string word, uint64_t count) {
    counts_[std::move(word)] += count;
    total_ += count;
}

uint64_t SegmenterCorpus::count(std::string_view word) const {
    auto it = counts_.find(std::string(word));
    return it == counts_.end() ? 0 : it->second;
}

double SegmenterCorpus::log_prob(std::string_view word) const {
    double total = static_cast<double>(std::max<uint64_t>(total_, 2));
    uint64_t c = count(word);
    if (c == 0) return -static_cast<double>(word.size()) * std::log(total);
    return std::log(static_cast<double>(c)) - std::log(total);
}

std::vector<std::string> segment_token(std::string_view token, const SegmenterCorpus& corpus) {
    const size_t n = token.size();
    if (n == 0) return {};
    size_t longest_run = 0;
    for (size_t i = 0, run = 0; i < n; ++i) {
        run = is_digit(token[i]) ? run + 1 : 0;
        longest_run = std::max(longest_run, run);
    }
    const size_t max_len = std::max(kMaxWord, longest_run);
    auto cut_ok = [&](size_t i) { return i == 0 || i == n || !(is_digit(token[i - 1]) && is_digit(token[i])); };

    struct Best {
        double lp = -std::numeric_limits<double>::infinity();
        std::vector<std::string_view> words;
        bool set = false;
    };
    std::vector<Best> best(n + 1);
    best[0].lp = 0;
    best[0].set = true;
    for (size_t i = 1; i <= n; ++i) {
        if (!cut_ok(i)) continue;
        for (size_t j = i > max_len ? i - max_len : 0; j < i; ++j) {
            if (!best[j].set || !cut_ok(j)) continue;
            std::string_view w = token.substr(j, i - j);
            double lp = best[j].lp + corpus.log_prob(w);
            Best& b = best[i];
            bool take = !b.set;
            if (!take) {
                double tol = 1e-12 * std::max(1.0, std::abs(lp));
                if (lp > b.lp + tol) {
                    take = true;
                } else if (std::abs(lp - b.lp) <= tol) {
                    size_t words = best[j].words.size() + 1;
                    if (words != b.words.size()) {
                        take = words < b.words.size();
                    } else {
                        auto cand = best[j].words;
                        cand.push_back(w);
                        take = cand < b.words;
                    }
                }
            }
            if (take) {
                b.lp = lp;
                b.words = best[j].words;
                b.words.push_back(w);
                b.set = true;
            }
        }
    }
    return {best[n].words.begin(), best[n].words.end()};
}

// ---- features ---------------------------------------------------------------

std::string_view to_string(Part p) {
    switch (p) {
        case Part::Sub: return "sub";
        case Part::Dom: return "dom";
        case Part::Tld: return "tld";
    }
    return "sub";
}

std::string feature_key(Part p, std::string_view word) {
    std::string k(to_string(p));
    k += '\t';
    k += word;
    return k;
}

HostParts split_host(std::string_view hostname, const PublicSuffixList& psl) {
    std::string host(hostname);
    std::transform(host.begin(), host.end(), host.begin(), [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
    while (!host.empty() && host.back() == '.') host.pop_back();
    if (host.empty() || host.front() == '.' || host.find("..") != std::string::npos)
        throw MalformedUrl("unusable hostname: " + std::string(hostname));
    HostParts parts;
    if (is_ip_hostname(host)) {
        parts.dom = host;
        return parts;
    }
    const size_t labels = static_cast<size_t>(std::count(host.begin(), host.end(), '.')) + 1;
    if (labels == 1) {
        parts.dom = host;
        return parts;
    }
    size_t k = std::min(psl.suffix_labels(host), labels - 1);
    size_t cut = host.size();
    for (size_t i = 0; i < k; ++i) cut = host.rfind('.', cut - 1);
    parts.tld = host.substr(cut + 1);
    size_t dom_start = host.rfind('.', cut - 1);
    dom_start = dom_start == std::string::npos ? 0 : dom_start + 1;
    parts.dom = host.substr(dom_start, cut - dom_start);
    if (dom_start > 0) parts.sub = host.substr(0, dom_start - 1);
    return parts;
}

HostFeatures extract_features(std::string_view hostname, const SegmenterCorpus& corpus, const PublicSuffixList& psl) {
    HostParts parts = split_host(hostname, psl);
    HostFeatures f;
    auto fill = [&](const std::string& text, std::vector<std::string>& out) {
        for (auto token : split_any(text, ".-"))
            for (auto& w : segment_token(token, corpus)) out.push_back(std::move(w));
    };
    fill(parts.sub, f.sub);
    fill(parts.dom, f.dom);
    fill(parts.tld, f.tld);
    f.nchar = static_cast<uint32_t>(hostname.size());
    f.ndot = static_cast<uint32_t>(std::count(hostname.begin(), hostname.end(), '.'));
    f.nhyphen = static_cast<uint32_t>(std::count(hostname.begin(), hostname.end(), '-'));
    return f;
}

double sigmoid(double z) {
    if (z >= 0) return 1.0 / (1.0 + std::exp(-z));
    double e = std::exp(z);
    return e / (1.0 + e);
}

// ---- model ------------------------------------------------------------------

double SbowModel::score(const HostFeatures& f) const {
    double z = bias;
    for (Part p : kParts) {
        std::set<std::string_view> seen;
        for (const auto& w : f.words(p)) {
            if (!seen.insert(w).second) continue;
            if (auto it = weights.find(feature_key(p, w)); it != weights.end()) z += it->second;
        }
    }
    auto raw = raw_numeric(f);
    for (size_t k = 0; k < kNumeric; ++k) z += numeric_weight[k] * (raw[k] - numeric_mean[k]) / numeric_scale[k];
    return z;
}

std::string SbowModel::serialize() const {
    std::string out = "# sbow-model v1\n";
    out += "bias\t" + fmt(bias) + "\n";
    out += "lambda\t" + fmt(lambda) + "\n";
    out += "threshold\t" + fmt(threshold) + "\n";
    for (size_t k = 0; k < kNumeric; ++k)
        out += "numeric\t" + std::string(kNumericNames[k]) + "\t" + fmt(numeric_mean[k]) + "\t" + fmt(numeric_scale[k]) +
               "\t" + fmt(numeric_weight[k]) + "\n";
    out += "words\t" + std::to_string(weights.size()) + "\n";
    for (const auto& [key, w] : weights) out += key + "\t" + fmt(w) + "\n";
    return out;
}

SbowModel SbowModel::parse(std::string_view text) {
    if (text.substr(0, 16) != "# sbow-model v1\n") throw ArtifactVersionMismatch("not an sbow model v1 file");
    SbowModel m;
    size_t declared = std::numeric_limits<size_t>::max();
    std::array<bool, kNumeric> have{};
    for_each_line(text, [&](std::string_view line, size_t lineno) {
        auto cols = std::vector<std::string_view>();
        size_t start = 0;
        for (size_t i = 0; i <= line.size(); ++i)
            if (i == line.size() || line[i] == '\t') {
                cols.push_back(line.substr(start, i - start));
                start = i + 1;
            }
        auto bad = [&] { return InvalidRecord("model line " + std::to_string(lineno)); };
        if (cols[0] == "bias" && cols.size() == 2) {
            m.bias = parse_double(cols[1], lineno);
        } else if (cols[0] == "lambda" && cols.size() == 2) {
            m.lambda = parse_double(cols[1], lineno);
        } else if (cols[0] == "threshold" && cols.size() == 2) {
            m.threshold = parse_double(cols[1], lineno);
        } else if (cols[0] == "numeric" && cols.size() == 5) {
            auto it = std::find(kNumericNames.begin(), kNumericNames.end(), cols[1]);
            if (it == kNumericNames.end()) throw bad();
            size_t k = static_cast<size_t>(it - kNumericNames.begin());
            m.numeric_mean[k] = parse_double(cols[2], lineno);
            m.numeric_scale[k] = parse_double(cols[3], lineno);
            m.numeric_weight[k] = parse_double(cols[4], lineno);
            if (!(m.numeric_scale[k] > 0)) throw bad();
            have[k] = true;
        } else if (cols[0] == "words" && cols.size() == 2) {
            declared = static_cast<size_t>(parse_double(cols[1], lineno));
        } else if ((cols[0] == "sub" || cols[0] == "dom" || cols[0] == "tld") && cols.size() == 3 && !cols[1].empty()) {
            double w = parse_double(cols[2], lineno);
            if (w != 0.0) m.weights[std::string(cols[0]) + "\t" + std::string(cols[1])] = w;
        } else {
            throw bad();
        }
    });
    if (declared != m.weights.size() || !std::all_of(have.begin(), have.end(), [](bool b) { return b; }))
        throw ArtifactCorrupt("sbow model: header and body disagree");
    if (!(m.threshold > 0.5 && m.threshold <= 1.0)) throw InvalidRecord("sbow model: threshold out of (0.5, 1]");
    return m;
}

void SbowModel::save(const std::filesystem::path& path) const {
    std::ofstream out(path, std::ios::binary);
    out << serialize();
    if (!out) throw Error("cannot write " + path.string());
}

SbowModel SbowModel::load(const std::filesystem::path& path) { return parse(read_file(path)); }

// ---- training ---------------------------------------------------------------

Design make_design(const std::vector<HostFeatures>& features, const std::vector<int>& labels) {
    Design d;
    std::set<std::string> vocab;
    for (const auto& f : features)
        for (Part p : kParts)
            for (const auto& w : f.words(p)) vocab.insert(feature_key(p, w));
    d.vocabulary.assign(vocab.begin(), vocab.end());
    std::unordered_map<std::string, uint32_t> id;
    for (uint32_t i = 0; i < d.vocabulary.size(); ++i) id.emplace(d.vocabulary[i], i);

    const double n = static_cast<double>(std::max<size_t>(features.size(), 1));
    for (const auto& f : features) {
        auto raw = raw_numeric(f);
        for (size_t k = 0; k < kNumeric; ++k) d.mean[k] += raw[k] / n;
    }
    std::array<double, kNumeric> var{};
    for (const auto& f : features) {
        auto raw = raw_numeric(f);
        for (size_t k = 0; k < kNumeric; ++k) var[k] += (raw[k] - d.mean[k]) * (raw[k] - d.mean[k]) / n;
    }
    for (size_t k = 0; k < kNumeric; ++k) d.scale[k] = var[k] > 0 ? std::sqrt(var[k]) : 1.0;

    for (const auto& f : features) {
        std::vector<uint32_t> row;
        for (Part p : kParts)
            for (const auto& w : f.words(p)) row.push_back(id.at(feature_key(p, w)));
        std::sort(row.begin(), row.end());
        row.erase(std::unique(row.begin(), row.end()), row.end());
        d.rows.push_back(std::move(row));
        auto raw = raw_numeric(f);
        std::array<double, kNumeric> z{};
        for (size_t k = 0; k < kNumeric; ++k) z[k] = (raw[k] - d.mean[k]) / d.scale[k];
        d.numeric.push_back(z);
    }
    d.labels = labels;
    return d;
}

namespace {

double margin(const Design& d, size_t i, const std::vector<double>& theta, double bias) {
    double z = bias;
    for (uint32_t j : d.rows[i]) z += theta[j];
    const size_t base = d.vocabulary.size();
    for (size_t k = 0; k < kNumeric; ++k) z += theta[base + k] * d.numeric[i][k];
    return z;
}

// log(1 + e^z) without overflow.
double softplus(double z) { return z > 0 ? z + std::log1p(std::exp(-z)) : std::log1p(std::exp(z)); }

double l1(const std::vector<double>& theta) {
    double s = 0;
    for (double t : theta) s += std::abs(t);
    return s;
}

}  // namespace

double log_loss(const Design& d, const std::vector<double>& theta, double bias) {
    double s = 0;
    for (size_t i = 0; i < d.rows.size(); ++i) {
        double z = margin(d, i, theta, bias);
        s += softplus(z) - d.labels[i] * z;
    }
    return s / static_cast<double>(std::max<size_t>(d.rows.size(), 1));
}

std::vector<double> log_loss_gradient(const Design& d, const std::vector<double>& theta, double bias) {
    std::vector<double> g(d.params() + 1, 0.0);
    const size_t base = d.vocabulary.size();
    const double inv_n = 1.0 / static_cast<double>(std::max<size_t>(d.rows.size(), 1));
    for (size_t i = 0; i < d.rows.size(); ++i) {
        double r = (sigmoid(margin(d, i, theta, bias)) - d.labels[i]) * inv_n;
        for (uint32_t j : d.rows[i]) g[j] += r;
        for (size_t k = 0; k < kNumeric; ++k) g[base + k] += r * d.numeric[i][k];
        g.back() += r;
    }
    return g;
}

TrainResult train(const Design& d, const TrainOptions& opt) {
    bool pos = false, neg = false;
    for (int y : d.labels) (y ? pos : neg) = true;
    if (!pos || !neg) throw InvalidRecord("training set needs both classes");
    if (opt.lambda < 0) throw InvalidRecord("lambda must be non-negative");

    const auto& kern = kernels::active();
    std::vector<double> theta(d.params(), 0.0), next(theta.size());
    double bias = 0.0;
    double objective = log_loss(d, theta, bias) + opt.lambda * l1(theta);
    double step = opt.step;

    SbowModel m;
    for (size_t epoch = 0; epoch < opt.epochs; ++epoch) {
        auto g = log_loss_gradient(d, theta, bias);
        double next_bias = bias, next_obj = objective;
        bool moved = false;
        for (int tries = 0; tries < 60; ++tries) {
            for (size_t j = 0; j < theta.size(); ++j) next[j] = theta[j] - step * g[j];
            kern.soft_threshold(next.data(), next.size(), step * opt.lambda);
            next_bias = bias - step * g.back();
            next_obj = log_loss(d, next, next_bias) + opt.lambda * l1(next);
            if (next_obj <= objective) {
                moved = true;
                break;
            }
            step *= 0.5;
        }
        if (moved) {
            theta.swap(next);
            bias = next_bias;
            objective = next_obj;
        }
        m.epoch_loss.push_back(objective);
        if (!moved) break;
    }

    TrainResult r;
    const size_t base = d.vocabulary.size();
    for (size_t j = 0; j < base; ++j) {
        if (theta[j] != 0.0)
            m.weights.emplace(d.vocabulary[j], theta[j]);
        else
            ++r.zero_weights;
    }
    for (size_t k = 0; k < kNumeric; ++k) {
        m.numeric_weight[k] = theta[base + k];
        m.numeric_mean[k] = d.mean[k];
        m.numeric_scale[k] = d.scale[k];
    }
    m.bias = bias;
    m.lambda = opt.lambda;
    m.threshold = opt.threshold;
    r.model = std::move(m);
    r.theta = std::move(theta);
    return r;
}

SbowModel train(const std::vector<LabeledHost>& data, const TrainOptions& opt, const SegmenterCorpus& corpus) {
    std::vector<HostFeatures> feats;
    std::vector<int> labels;
    for (const auto& x : data) {
        feats.push_back(extract_features(x.hostname, corpus));
        labels.push_back(x.label);
    }
    return train(make_design(feats, labels), opt).model;
}

double Confusion::mcr() const {
    uint64_t n = tp + fn + tn + fp;
    return n ? 100.0 * static_cast<double>(fn + fp) / static_cast<double>(n) : 0.0;
}

double Confusion::fnr() const {
    uint64_t n = tp + fn;
    return n ? 100.0 * static_cast<double>(fn) / static_cast<double>(n) : 0.0;
}

Confusion evaluate(const SbowModel& m, const std::vector<LabeledHost>& data, const SegmenterCorpus& corpus) {
    Confusion c;
    for (const auto& x : data) {
        bool phish = m.predict_proba(extract_features(x.hostname, corpus)) >= 0.5;
        if (x.label)
            (phish ? c.tp : c.fn)++;
        else
            (phish ? c.fp : c.tn)++;
    }
    return c;
}

std::vector<LabeledHost> parse_labeled_corpus(std::string_view text) {
    std::vector<LabeledHost> out;
    for_each_line(text, [&](std::string_view line, size_t lineno) {
        size_t tab = line.find('\t');
        std::string_view label = line.substr(0, tab);
        if (tab == std::string_view::npos || (label != "0" && label != "1"))
            throw InvalidRecord("corpus line " + std::to_string(lineno));
        ParsedUrl u = parse_url(line.substr(tab + 1));
        out.push_back({u.hostname, label == "1" ? 1 : 0});
    });
    return out;
}

// ---- compiled form ------------------------------------------------------------

CompiledModel::CompiledModel(const SbowModel& m) : numeric_(m) {
    numeric_.weights.clear();
    numeric_.epoch_loss.clear();
    std::array<std::vector<std::string>, 3> words;
    std::array<std::unordered_map<std::string, double>, 3> w;
    for (const auto& [key, weight] : m.weights) {
        size_t tab = key.find('\t');
        std::string_view part = std::string_view(key).substr(0, tab);
        size_t p = part == "sub" ? 0 : part == "dom" ? 1 : 2;
        std::string word = key.substr(tab + 1);
        if (!in_alphabet(word)) continue;  // cannot occur in a hostname
        words[p].push_back(word);
        w[p][word] = weight;
    }
    for (size_t p = 0; p < 3; ++p) {
        if (words[p].empty()) continue;
        machines_[p] = KeywordMachine(words[p]);
        for (const auto& kw : machines_[p].keywords()) weights_[p].push_back(w[p].at(kw));
    }
}

std::vector<std::string> CompiledModel::matched_keys(std::string_view hostname, const PublicSuffixList& psl) const {
    HostParts parts = split_host(hostname, psl);
    std::array<const std::string*, 3> text{&parts.sub, &parts.dom, &parts.tld};
    std::vector<std::string> keys;
    for (size_t p = 0; p < 3; ++p) {
        std::vector<bool> hit(machines_[p].keywords().size(), false);
        machines_[p].for_each_match(*text[p], [&](int32_t k, uint32_t) { hit[static_cast<size_t>(k)] = true; });
        for (size_t k = 0; k < hit.size(); ++k)
            if (hit[k]) keys.push_back(feature_key(kParts[p], machines_[p].keywords()[k]));
    }
    std::sort(keys.begin(), keys.end());
    return keys;
}

double CompiledModel::score(std::string_view hostname, const PublicSuffixList& psl) const {
    HostParts parts = split_host(hostname, psl);
    std::array<const std::string*, 3> text{&parts.sub, &parts.dom, &parts.tld};
    double z = 0;
    for (size_t p = 0; p < 3; ++p) {
        std::vector<bool> hit(machines_[p].keywords().size(), false);
        machines_[p].for_each_match(*text[p], [&](int32_t k, uint32_t) { hit[static_cast<size_t>(k)] = true; });
        for (size_t k = 0; k < hit.size(); ++k)
            if (hit[k]) z += weights_[p][k];
    }
    HostFeatures numeric_only;
    numeric_only.nchar = static_cast<uint32_t>(hostname.size());
    numeric_only.ndot = static_cast<uint32_t>(std::count(hostname.begin(), hostname.end(), '.'));
    numeric_only.nhyphen = static_cast<uint32_t>(std::count(hostname.begin(), hostname.end(), '-'));
    return z + numeric_.score(numeric_only);
}

}  // namespace phishmatch
