#pragma once

#include <array>
#include <cstdint>
#include <filesystem>
#include <map>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "phishmatch/keyword_machine.hpp"
#include "phishmatch/url.hpp"

namespace phishmatch {

/// Unigram counts for word segmentation.
class SegmenterCorpus {
public:
    /// "word<TAB>count" lines.
    static SegmenterCorpus parse(std::string_view text);
    static SegmenterCorpus load(const std::filesystem::path& path);
    static const SegmenterCorpus& bundled();

    void add(std::string word, uint64_t count);

    /// log P(word); unseen words get log(1 / total^len).
    double log_prob(std::string_view word) const;
    uint64_t count(std::string_view word) const;
    uint64_t total() const { return total_; }
    size_t size() const { return counts_.size(); }

private:
    std::unordered_map<std::string, uint64_t> counts_;
    uint64_t total_ = 0;
};

/// Most likely split of `token` under the unigram model. Digit runs are never
/// cut. Ties go to fewer words, then to the lexicographically smallest split.
std::vector<std::string> segment_token(std::string_view token, const SegmenterCorpus& corpus);

enum class Part : uint8_t { Sub, Dom, Tld };
std::string_view to_string(Part p);

/// Subdomain, registrable label and public suffix of a bare hostname.
struct HostParts {
    std::string sub, dom, tld;
};
HostParts split_host(std::string_view hostname, const PublicSuffixList& psl = PublicSuffixList::bundled());

struct HostFeatures {
    std::vector<std::string> sub, dom, tld;  ///< segmented words in hostname order
    uint32_t nchar = 0;
    uint32_t ndot = 0;
    uint32_t nhyphen = 0;

    const std::vector<std::string>& words(Part p) const { return p == Part::Sub ? sub : p == Part::Dom ? dom : tld; }
};

/// Splits into subdomain / domain / TLD, tokenizes on '.' and '-', segments each token.
/// Throws MalformedUrl for an unusable hostname.
HostFeatures extract_features(std::string_view hostname, const SegmenterCorpus& corpus,
                              const PublicSuffixList& psl = PublicSuffixList::bundled());

/// "part\tword", the key of a bag-of-words weight.
std::string feature_key(Part p, std::string_view word);

inline constexpr size_t kNumeric = 3;  // nchar, ndot, nhyphen

/// Numerically stable logistic function.
double sigmoid(double z);

class SbowModel {
public:
    std::map<std::string, double> weights;  ///< nonzero bag-of-words weights
    std::array<double, kNumeric> numeric_weight{};
    std::array<double, kNumeric> numeric_mean{};
    std::array<double, kNumeric> numeric_scale{1.0, 1.0, 1.0};
    double bias = 0.0;
    double lambda = 0.0;
    double threshold = 0.9;
    std::vector<double> epoch_loss;  ///< training objective after each epoch (not serialized)

    /// θᵀx + b with binary word presence and standardized numerics.
    double score(const HostFeatures& f) const;
    double predict_proba(const HostFeatures& f) const { return sigmoid(score(f)); }

    std::string serialize() const;
    static SbowModel parse(std::string_view text);
    void save(const std::filesystem::path& path) const;
    static SbowModel load(const std::filesystem::path& path);
};

struct LabeledHost {
    std::string hostname;
    int label = 0;  ///< 1 = phishing
};

/// Encoded training set: sorted feature ids per row plus standardized numerics.
struct Design {
    std::vector<std::string> vocabulary;  ///< feature keys, sorted
    std::vector<std::vector<uint32_t>> rows;
    std::vector<std::array<double, kNumeric>> numeric;
    std::vector<int> labels;
    std::array<double, kNumeric> mean{};
    std::array<double, kNumeric> scale{1.0, 1.0, 1.0};

    size_t params() const { return vocabulary.size() + kNumeric; }
};

Design make_design(const std::vector<HostFeatures>& features, const std::vector<int>& labels);

/// Mean log-loss of parameters (words then numerics) and bias, without the penalty.
double log_loss(const Design& d, const std::vector<double>& theta, double bias);

/// Gradient of log_loss; the last entry is the bias derivative.
std::vector<double> log_loss_gradient(const Design& d, const std::vector<double>& theta, double bias);

struct TrainOptions {
    double lambda = 1e-3;
    size_t epochs = 400;
    double step = 2.0;  ///< initial step, halved whenever the objective would rise
    double threshold = 0.9;
};

struct TrainResult {
    SbowModel model;
    std::vector<double> theta;  ///< full parameter vector over the design vocabulary
    size_t zero_weights = 0;    ///< bag-of-words weights that ended at exactly zero
};

/// Proximal gradient descent on mean log-loss + λ‖θ‖₁ (bias unpenalized).
/// Throws InvalidRecord when one class is missing.
TrainResult train(const Design& d, const TrainOptions& opt);
SbowModel train(const std::vector<LabeledHost>& data, const TrainOptions& opt, const SegmenterCorpus& corpus);

struct Confusion {
    uint64_t tp = 0, fn = 0, tn = 0, fp = 0;
    double mcr() const;  ///< percent
    double fnr() const;  ///< percent
};

/// Phishing when p ≥ 0.5.
Confusion evaluate(const SbowModel& m, const std::vector<LabeledHost>& data, const SegmenterCorpus& corpus);

/// "label<TAB>url" lines; the hostname is taken from the URL.
std::vector<LabeledHost> parse_labeled_corpus(std::string_view text);

/// Deployment form: one keyword machine per hostname part over the retained
/// words. A hostname scores the weights of retained words found as substrings
/// of each part, each word counted once, plus numeric terms and bias.
class CompiledModel {
public:
    explicit CompiledModel(const SbowModel& m);

    double score(std::string_view hostname, const PublicSuffixList& psl = PublicSuffixList::bundled()) const;

    /// Retained words found in each part (sorted keys), for comparison with
    /// the segmented features.
    std::vector<std::string> matched_keys(std::string_view hostname,
                                          const PublicSuffixList& psl = PublicSuffixList::bundled()) const;

    size_t words(Part p) const { return machines_[static_cast<size_t>(p)].keywords().size(); }

private:
    SbowModel numeric_;  ///< bias, numeric weights and scaling; no word weights
    std::array<KeywordMachine, 3> machines_;
    std::array<std::vector<double>, 3> weights_;
};

}  // namespace phishmatch
