// phishmatch: build artifacts, manage whitelists, train and run the classifier.

#include <CLI11.hpp>
#include <json.hpp>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <map>
#include <sstream>

#include "phishmatch/bundle.hpp"
#include "phishmatch/data_paths.hpp"
#include "phishmatch/error.hpp"
#include "phishmatch/memory_report.hpp"
#include "phishmatch/pipeline.hpp"
#include "phishmatch/synthetic.hpp"

namespace fs = std::filesystem;
using namespace phishmatch;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitError = 1;
constexpr int kExitBlock = 2;

void write_file(const fs::path& path, const std::string& text) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw Error("cannot write " + path.string());
    out << text;
    if (!out) throw Error("write failed: " + path.string());
}

std::vector<std::string> lines_of(const std::string& text) {
    std::vector<std::string> out;
    std::istringstream in(text);
    std::string line;
    while (std::getline(in, line)) {
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (!line.empty()) out.push_back(line);
    }
    return out;
}

Timestamp now_or(const std::string& iso) {
    if (!iso.empty()) return parse_iso_time(iso);
    return std::chrono::duration_cast<std::chrono::seconds>(std::chrono::system_clock::now().time_since_epoch()).count();
}

// ---- build-machine ------------------------------------------------------------

struct BuildOpts {
    std::string csv;
    std::string reference;
    std::string out;
    size_t limit = 50000;
    size_t reference_limit = 100000;
};

int cmd_build_machine(const BuildOpts& o) {
    auto domains = load_ranked_csv(o.csv, o.limit);
    fs::path ref = o.reference.empty() ? data_file("tranco_like_100k.csv") : fs::path(o.reference);
    auto reference = load_ranked_csv(ref, o.reference_limit);
    auto bundle = MachineBundle::build(domains, reference);
    bundle.save(o.out);

    const auto& c = bundle.machine.census();
    std::cout << "domains            " << c.domains << "\n"
              << "brands             " << c.brands << "\n"
              << "single-TLD brands  " << c.single_tld_brands << "\n"
              << "multi-TLD brands   " << c.multi_tld_brands << "\n"
              << "prefix brands      " << c.prefix_brands << "\n"
              << "shareable brands   " << c.shareable_brands << "\n"
              << "shared TLD tries   " << c.shared_tlds << "\n\n";

    auto report = memory_report(domains);
    std::cout << std::left << std::setw(16) << "variant" << std::right << std::setw(12) << "states" << std::setw(14)
              << "branching" << std::setw(12) << "MB" << "\n";
    for (const VariantCost* v : report.all())
        std::cout << std::left << std::setw(16) << v->name << std::right << std::setw(12) << v->states << std::setw(14)
                  << v->branch_states << std::setw(12) << std::fixed << std::setprecision(3) << v->megabytes() << "\n";
    std::cout << "wrote " << o.out << " (" << bundle.machine.size() << " states)\n";
    return kExitOk;
}

// ---- classify -------------------------------------------------------------------

struct ClassifyOpts {
    std::vector<std::string> urls;
    std::string batch;
    std::string machine;
    std::string csv;
    size_t global_size = 50000;
    std::string model;
    std::string whitelists_dir;
    std::string provider = "mock";
    std::string fixtures;
    double threshold_ml = 0.9;
    uint64_t threshold_results = 10000;
    size_t threshold_rank = 20;
    bool fail_open = false;
    bool no_timing = false;
    bool messages = false;
};

std::shared_ptr<const MachineBundle> load_bundle(const ClassifyOpts& o) {
    if (!o.machine.empty()) {
        if (!fs::exists(o.machine)) throw ArtifactMissing("machine artifact not found: " + o.machine);
        return std::make_shared<const MachineBundle>(MachineBundle::load(o.machine));
    }
    fs::path csv = o.csv.empty() ? data_file("tranco_like_100k.csv") : fs::path(o.csv);
    auto reference = load_ranked_csv(csv);
    std::vector<std::string> domains(reference.begin(), reference.begin() + std::min(o.global_size, reference.size()));
    return std::make_shared<const MachineBundle>(MachineBundle::build(domains, reference));
}

std::shared_ptr<SearchProvider> make_provider(const ClassifyOpts& o) {
    if (o.provider == "live") return HttpProvider::from_environment();
    if (o.provider != "mock") throw Error("unknown provider: " + o.provider);
    if (o.fixtures.empty()) return std::make_shared<MockProvider>();
    return MockProvider::load(o.fixtures);
}

void load_whitelists(Pipeline& p, const std::string& dir) {
    if (dir.empty()) return;
    if (!fs::is_directory(dir)) throw ArtifactMissing("whitelists directory not found: " + dir);
    fs::path local = fs::path(dir) / "local.tsv";
    fs::path community = fs::path(dir) / "community.tsv";
    if (fs::exists(local)) p.whitelists().local = parse_whitelist(read_file(local));
    if (fs::exists(community)) p.whitelists().community = parse_community(read_file(community));
}

std::vector<StreamEvent> read_inputs(const ClassifyOpts& o) {
    std::vector<StreamEvent> events;
    auto add_line = [&](const std::string& line) {
        if (line.front() == '{') {
            events.push_back(parse_event(nlohmann::json::parse(line)));
        } else {
            // Bare URLs are treated as link clicks from an unrelated page.
            events.push_back({VisitEvent{line, std::string("about:blank"), 0, 0}, std::nullopt});
        }
    };
    for (const auto& u : o.urls) add_line(u);
    if (!o.batch.empty()) {
        std::string text = o.batch == "-" ? std::string(std::istreambuf_iterator<char>(std::cin), {}) : read_file(o.batch);
        for (const auto& line : lines_of(text)) {
            try {
                add_line(line);
            } catch (const nlohmann::json::exception& e) {
                throw InvalidRecord(std::string("bad event: ") + e.what());
            }
        }
    }
    return events;
}

int cmd_classify(const ClassifyOpts& o) {
    Artifacts a;
    a.bundle = load_bundle(o);
    if (!o.model.empty()) {
        if (!fs::exists(o.model)) throw ArtifactMissing("model not found: " + o.model);
        a.model = std::make_shared<const SbowModel>(SbowModel::load(o.model));
    }
    PipelineConfig cfg;
    cfg.ml_threshold = o.threshold_ml;
    cfg.search = {o.threshold_results, o.threshold_rank};
    cfg.fail_closed = !o.fail_open;
    cfg.timing = !o.no_timing;
    Pipeline pipeline(a, make_provider(o), cfg);
    load_whitelists(pipeline, o.whitelists_dir);

    auto events = read_inputs(o);
    std::map<std::string, uint64_t> tally;
    uint64_t blocked = 0, errors = 0;
    for (const auto& ev : events) {
        if (ev.search) {
            pipeline.record_search(*ev.search);
            continue;
        }
        Verdict v;
        try {
            v = pipeline.classify(*ev.visit);
        } catch (const MalformedUrl& ex) {
            nlohmann::ordered_json j{{"url", ev.visit->url}, {"error", ex.what()}};
            std::cout << j.dump() << "\n";
            ++tally["error"];
            ++errors;
            continue;
        }
        std::cout << v.to_json().dump() << "\n";
        if (o.messages)
            for (const auto& line : warning_message(v)) std::cerr << line << "\n";
        ++tally[std::string(to_string(v.component))];
        if (v.decision == Decision::Block) ++blocked;
    }
    uint64_t total = 0;
    for (const auto& [_, n] : tally) total += n;
    std::cerr << "verdicts " << total << " blocked " << blocked << "\n";
    for (const auto& [c, n] : tally) std::cerr << "  " << c << " " << n << "\n";
    if (errors) return kExitError;
    return blocked ? kExitBlock : kExitOk;
}

// ---- whitelists -----------------------------------------------------------------

struct WhitelistOpts {
    std::string history;
    std::string prev_local;
    std::string prev_session;
    std::vector<std::string> lists;
    std::string out;
    std::string now;
    bool relaxed = false;
    size_t k = 100;
    ScoreParams params;
};

ScoreParams params_of(const WhitelistOpts& o) {
    if (!o.params.valid()) throw Error("invalid thresholds: need A > B > V and B >= R + V");
    return o.relaxed ? o.params.relaxed() : o.params;
}

int cmd_build_local(const WhitelistOpts& o) {
    auto history = load_history(o.history);
    write_file(o.out, format_whitelist(create_local(history, params_of(o), now_or(o.now))));
    return kExitOk;
}

int cmd_update_local(const WhitelistOpts& o) {
    auto history = load_history(o.history);
    ScoredWhitelist prev = o.prev_local.empty() ? ScoredWhitelist{} : parse_whitelist(read_file(o.prev_local));
    std::unordered_set<std::string> session;
    if (!o.prev_session.empty())
        for (const auto& line : lines_of(read_file(o.prev_session))) session.insert(line);
    write_file(o.out, format_whitelist(update_local(history, prev, session, params_of(o), now_or(o.now))));
    return kExitOk;
}

int cmd_build_community(const WhitelistOpts& o) {
    std::vector<ScoredWhitelist> lists;
    for (const auto& path : o.lists) lists.push_back(parse_whitelist(read_file(path)));
    write_file(o.out, format_community(create_community(lists, o.k)));
    return kExitOk;
}

// ---- training -------------------------------------------------------------------

struct TrainOpts {
    std::string corpus;
    size_t synthetic = 0;
    uint64_t seed = 42;
    double lambda = 1e-3;
    size_t epochs = 400;
    std::string out;
    std::string model;
    std::vector<double> grid{1e-4, 3e-4, 1e-3, 3e-3, 1e-2, 3e-2};
};

std::vector<LabeledHost> corpus_of(const TrainOpts& o) {
    if (!o.corpus.empty()) return parse_labeled_corpus(read_file(o.corpus));
    if (o.synthetic == 0) throw Error("need --corpus or --synthetic N");
    return synthetic::labeled_hosts(o.synthetic, o.seed, load_ranked_csv(data_file("tranco_like_100k.csv")));
}

void print_confusion(const Confusion& c) {
    std::cout << "TP " << c.tp << " FN " << c.fn << " TN " << c.tn << " FP " << c.fp << "\n"
              << std::fixed << std::setprecision(2) << "MCR " << c.mcr() << "%\nFNR " << c.fnr() << "%\n";
}

int cmd_train(const TrainOpts& o) {
    auto data = corpus_of(o);
    TrainOptions opt;
    opt.lambda = o.lambda;
    opt.epochs = o.epochs;
    auto m = train(data, opt, SegmenterCorpus::bundled());
    m.save(o.out);
    std::cout << "words " << m.weights.size() << "\n";
    if (!m.epoch_loss.empty())
        std::cout << "objective " << std::setprecision(6) << m.epoch_loss.front() << " -> " << m.epoch_loss.back() << "\n";
    print_confusion(evaluate(m, data, SegmenterCorpus::bundled()));
    std::cout << "wrote " << o.out << "\n";
    return kExitOk;
}

int cmd_eval(const TrainOpts& o) {
    auto m = SbowModel::load(o.model);
    print_confusion(evaluate(m, corpus_of(o), SegmenterCorpus::bundled()));
    return kExitOk;
}

int cmd_sparsity(const TrainOpts& o) {
    auto data = corpus_of(o);
    std::vector<HostFeatures> feats;
    std::vector<int> labels;
    for (const auto& x : data) {
        feats.push_back(extract_features(x.hostname, SegmenterCorpus::bundled()));
        labels.push_back(x.label);
    }
    Design d = make_design(feats, labels);
    std::cout << "vocabulary " << d.vocabulary.size() << "\n" << std::left << std::setw(12) << "lambda" << "zero weights\n";
    for (double lambda : o.grid) {
        TrainOptions opt;
        opt.lambda = lambda;
        opt.epochs = o.epochs;
        auto r = train(d, opt);
        std::cout << std::left << std::setw(12) << lambda << r.zero_weights << "\n";
    }
    return kExitOk;
}

int cmd_gen_corpus(const TrainOpts& o) {
    std::ostringstream ss;
    for (const auto& x : corpus_of(o)) ss << x.label << "\thttp://" << x.hostname << "/\n";
    if (o.out.empty() || o.out == "-")
        std::cout << ss.str();
    else
        write_file(o.out, ss.str());
    return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Layered phishing URL classifier"};
    app.set_config("--config", "", "TOML/INI file with default flag values; flags on the command line win");
    app.require_subcommand(1);

    BuildOpts build;
    auto* b = app.add_subcommand("build-machine", "Compile a ranked domain list into a matcher artifact");
    b->add_option("csv", build.csv, "Ranked list, \"rank,domain\" lines")->required()->check(CLI::ExistingFile);
    b->add_option("--machine,--index,-o,--out", build.out, "Output artifact (machine and trigram index)")->required();
    b->add_option("--limit", build.limit, "Number of top domains to include");
    b->add_option("--reference", build.reference, "Ranked list for common-brand filtering (default: bundled list)")
        ->check(CLI::ExistingFile);
    b->add_option("--reference-limit", build.reference_limit, "Reference domains consulted");

    ClassifyOpts cls;
    auto* c = app.add_subcommand("classify", "Classify URLs or a JSONL event stream");
    c->add_option("url", cls.urls, "URLs to classify");
    c->add_option("--batch", cls.batch, "File with one URL or JSON event per line (- for stdin)");
    c->add_option("--machine,--index", cls.machine, "Matcher artifact from build-machine");
    c->add_option("--global-csv", cls.csv, "Ranked list to build from when no artifact is given");
    c->add_option("--global-size", cls.global_size, "Global whitelist size when building in memory");
    c->add_option("--model", cls.model, "Hostname classifier model");
    c->add_option("--whitelists-dir", cls.whitelists_dir, "Directory with local.tsv and community.tsv");
    c->add_option("--provider", cls.provider, "Search provider")->check(CLI::IsMember({"mock", "live"}));
    c->add_option("--fixtures", cls.fixtures, "Mock provider fixture file");
    c->add_option("--threshold-ml", cls.threshold_ml, "Classifier confidence for a decision")->check(CLI::Range(0.5, 1.0));
    c->add_option("--threshold-search-results", cls.threshold_results, "Minimum result count for a reputable domain");
    c->add_option("--threshold-search-rank", cls.threshold_rank, "Maximum rank of the domain in the results")
        ->check(CLI::PositiveNumber);
    c->add_flag("--fail-open", cls.fail_open, "Allow when the search provider fails");
    c->add_flag("--no-timing", cls.no_timing, "Omit elapsed_ms (for reproducible output)");
    c->add_flag("--messages", cls.messages, "Print warning messages to stderr");

    WhitelistOpts wl;
    auto* w = app.add_subcommand("whitelist", "Build and update scored whitelists");
    w->require_subcommand(1);
    auto add_params = [&](CLI::App* s) {
        s->add_option("-o,--out", wl.out, "Output file")->required();
        s->add_option("--now", wl.now, "Reference time (ISO-8601); defaults to the current time");
        s->add_flag("--relaxed", wl.relaxed, "Halve A, B and V");
        s->add_option("--A", wl.params.A, "Age threshold in days");
        s->add_option("--B", wl.params.B, "Lower age threshold in days");
        s->add_option("--V", wl.params.V, "Visit-count threshold");
        s->add_option("--R", wl.params.R, "Recency threshold in days");
    };
    auto* wb = w->add_subcommand("build-local", "Score a browsing history");
    wb->add_option("history", wl.history, "History JSONL")->required()->check(CLI::ExistingFile);
    add_params(wb);
    auto* wu = w->add_subcommand("update-local", "Rescore a history against the previous lists");
    wu->add_option("history", wl.history, "History JSONL")->required()->check(CLI::ExistingFile);
    wu->add_option("--prev-local", wl.prev_local, "Previous local whitelist")->check(CLI::ExistingFile);
    wu->add_option("--prev-session", wl.prev_session, "Previous session whitelist, one domain per line")
        ->check(CLI::ExistingFile);
    add_params(wu);
    auto* wc = w->add_subcommand("build-community", "Aggregate relaxed local whitelists");
    wc->add_option("lists", wl.lists, "Relaxed local whitelists")->required()->check(CLI::ExistingFile);
    wc->add_option("-o,--out", wl.out, "Output file")->required();
    wc->add_option("-k", wl.k, "Number of domains kept");

    TrainOpts tr;
    auto add_corpus = [&](CLI::App* s) {
        s->add_option("--corpus", tr.corpus, "Labeled corpus, \"label<TAB>url\" lines")->check(CLI::ExistingFile);
        s->add_option("--synthetic", tr.synthetic, "Use N generated hosts instead of a corpus");
        s->add_option("--seed", tr.seed, "Generator seed");
    };
    auto* t = app.add_subcommand("train", "Train the hostname classifier");
    add_corpus(t);
    t->add_option("--lambda", tr.lambda, "L1 penalty")->check(CLI::NonNegativeNumber);
    t->add_option("--epochs", tr.epochs, "Gradient steps");
    t->add_option("-o,--out,--model", tr.out, "Output model")->required();
    auto* e = app.add_subcommand("eval", "Report MCR and FNR of a model");
    add_corpus(e);
    e->add_option("--model", tr.model, "Model file")->required()->check(CLI::ExistingFile);
    auto* s = app.add_subcommand("sparsity", "Zero-weight counts over a grid of penalties");
    add_corpus(s);
    s->add_option("--lambdas", tr.grid, "Penalties")->delimiter(',');
    s->add_option("--epochs", tr.epochs, "Gradient steps");
    auto* g = app.add_subcommand("gen-corpus", "Write a generated labeled corpus");
    add_corpus(g);
    g->add_option("-o,--out", tr.out, "Output file (default stdout)");

    CLI11_PARSE(app, argc, argv);

    try {
        if (*b) return cmd_build_machine(build);
        if (*c) return cmd_classify(cls);
        if (*wb) return cmd_build_local(wl);
        if (*wu) return cmd_update_local(wl);
        if (*wc) return cmd_build_community(wl);
        if (*t) return cmd_train(tr);
        if (*e) return cmd_eval(tr);
        if (*s) return cmd_sparsity(tr);
        if (*g) return cmd_gen_corpus(tr);
    } catch (const std::exception& ex) {
        std::cerr << "error: " << ex.what() << "\n";
        return kExitError;
    }
    return kExitOk;
}
