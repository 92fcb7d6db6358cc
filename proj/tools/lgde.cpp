// lgde: dictionary expansion from word embeddings.
//
//   lgde graph build --embeddings e.txt --k 12 --delta 1 --out g.tsv
//   lgde expand lgde --graph g.tsv --seeds s.txt --t 2 --out dict.txt --report r.json
//   lgde eval --corpus test.jsonl --dictionary dict.txt [--discovered-only] [--lr]
//   lgde sweep lgde --embeddings e.txt --seeds s.txt --corpus train.jsonl --k 3:8 --t 1:6
//   lgde stats lr|mwu ...

#include <chrono>
#include <cmath>
#include <ctime>
#include <fstream>
#include <iostream>
#include <memory>
#include <optional>
#include <set>
#include <sstream>

#include <CLI11.hpp>

#include "cli_support.hpp"
#include "lgde/cknn.hpp"
#include "lgde/corpus.hpp"
#include "lgde/error.hpp"
#include "lgde/eval.hpp"
#include "lgde/expanders.hpp"
#include "lgde/parallel.hpp"
#include "lgde/report.hpp"
#include "lgde/similarity.hpp"
#include "lgde/vector_store.hpp"

namespace {

using lgde::Error;
using lgde::ErrorKind;
using lgde::json;
using lgde::cli::RunConfig;

struct Globals {
    int threads = 0;
    bool timestamps = false;
};

void require(bool ok, const std::string& what) {
    if (!ok) throw Error(ErrorKind::invalid_argument, what);
}

void write_text(const std::string& path, const std::string& text) {
    if (path.empty() || path == "-") {
        std::cout << text;
        return;
    }
    std::ofstream out(path, std::ios::binary);
    if (!out) throw Error(ErrorKind::io, "cannot write " + path);
    out << text;
    if (!out) throw Error(ErrorKind::io, "cannot write " + path);
}

std::string utc_timestamp() {
    const auto now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
    std::tm tm{};
    gmtime_r(&now, &tm);
    char buf[32];
    std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
    return buf;
}

json with_provenance(json body, const RunConfig& config, const Globals& globals) {
    body["config"] = lgde::cli::to_json(config);
    if (globals.timestamps) body["timestamp"] = utc_timestamp();
    return body;
}

std::optional<std::set<std::string>> load_stopwords(const RunConfig& c) {
    if (c.stopwords.empty()) return std::nullopt;
    const auto list = lgde::load_token_list(c.stopwords);
    return std::set<std::string>(list.begin(), list.end());
}

lgde::LabeledCorpus load_corpus(const RunConfig& c, const std::string& path) {
    return lgde::load_corpus(path, !c.no_lowercase, load_stopwords(c));
}

lgde::EmbeddingSpace load_space(const RunConfig& c) {
    require(!c.embeddings.empty(), "--embeddings is required");
    lgde::LoadOptions options;
    options.min_norm = c.min_norm;
    options.allow_duplicates = c.allow_duplicates;
    auto space = lgde::load_embeddings(c.embeddings, options);
    if (c.min_df > 0 || c.max_df_fraction < 1.0) {
        const auto& source = c.filter_corpus.empty() ? c.corpus : c.filter_corpus;
        require(!source.empty(), "vocabulary filtering needs --filter-corpus or --corpus");
        const auto corpus = load_corpus(c, source);
        space = space.subset(lgde::filter_vocabulary(corpus, std::max<std::size_t>(c.min_df, 1), c.max_df_fraction));
    }
    return space;
}

double single_value(const std::string& spec, const std::string& name) {
    require(!spec.empty(), "--" + name + " is required");
    const auto values = lgde::cli::parse_values(spec);
    require(values.size() == 1, "--" + name + " takes a single value here");
    return values.front();
}

// Parameter names used by each method, in the order they appear in grids.
std::vector<std::pair<std::string, std::string>> method_params(lgde::Method method, const RunConfig& c,
                                                               bool prebuilt_graph) {
    switch (method) {
    case lgde::Method::lgde:
        if (prebuilt_graph) return {{"t", c.t}, {"max_size", c.max_size}};
        return {{"k", c.k}, {"delta", c.delta}, {"t", c.t}, {"max_size", c.max_size}};
    case lgde::Method::threshold: return {{"epsilon", c.epsilon}};
    case lgde::Method::knn: return {{"k", c.k}};
    case lgde::Method::ikea: return {{"epsilon", c.epsilon}, {"max_iterations", c.max_iterations}};
    case lgde::Method::textrank: return {{"window", c.window}, {"top_k", c.top_k}, {"damping", c.damping}};
    }
    return {};
}

std::string cli_flag(const std::string& param) {
    std::string flag = param;
    for (auto& ch : flag) {
        if (ch == '_') ch = '-';
    }
    return "--" + flag;
}

// Holds whatever inputs a method needs and the Expander bound to them.
struct Pipeline {
    std::optional<lgde::EmbeddingSpace> space;
    std::optional<lgde::SemanticGraph> graph;
    std::optional<lgde::LabeledCorpus> corpus;
    std::set<std::string> vocabulary;
    std::unique_ptr<lgde::Expander> expander;
    bool prebuilt_graph = false;
};

std::unique_ptr<Pipeline> make_pipeline(lgde::Method method, const RunConfig& c) {
    auto p = std::make_unique<Pipeline>();
    require(!c.seeds.empty(), "--seeds is required");
    lgde::ExpanderInputs inputs;
    inputs.seed_tokens = lgde::load_token_list(c.seeds);
    switch (method) {
    case lgde::Method::lgde:
        if (!c.graph.empty()) {
            p->graph = lgde::load_edge_list(c.graph);
            inputs.graph = &*p->graph;
            p->prebuilt_graph = true;
        } else {
            require(!c.embeddings.empty(), "lgde needs --graph or --embeddings");
            p->space = load_space(c);
            inputs.space = &*p->space;
        }
        break;
    case lgde::Method::threshold:
    case lgde::Method::knn:
    case lgde::Method::ikea:
        p->space = load_space(c);
        inputs.space = &*p->space;
        break;
    case lgde::Method::textrank:
        require(!c.corpus.empty(), "textrank needs --corpus");
        p->corpus = load_corpus(c, c.corpus);
        inputs.corpus = &*p->corpus;
        if (!c.embeddings.empty()) {
            p->space = load_space(c);
            p->vocabulary = {p->space->vocabulary().tokens().begin(), p->space->vocabulary().tokens().end()};
            inputs.vocabulary = &p->vocabulary;
        }
        break;
    }
    p->expander = std::make_unique<lgde::Expander>(method, std::move(inputs));
    return p;
}

void report_unresolved(const lgde::SeedDictionary& seeds) {
    if (seeds.unresolved.empty()) return;
    std::cerr << "warning: " << seeds.unresolved.size() << " seed(s) not in vocabulary:";
    for (const auto& s : seeds.unresolved) std::cerr << ' ' << s;
    std::cerr << '\n';
}

int cmd_graph_build(const RunConfig& c, const Globals& g) {
    const auto space = load_space(c);
    const lgde::PairwiseMatrices matrices(space);
    const auto k = static_cast<std::size_t>(single_value(c.k, "k"));
    const auto graph = lgde::build_cknn(matrices, k, single_value(c.delta, "delta"));
    if (!graph.zero_distance_nodes.empty()) {
        std::cerr << "warning: " << graph.zero_distance_nodes.size()
                  << " node(s) have zero k-th neighbour distance and are isolated\n";
    }
    require(!c.out.empty(), "--out is required");
    write_text(c.out, lgde::format_edge_list(graph));
    if (!c.report.empty()) {
        json body = {{"N", graph.size()},
                     {"edges", graph.edge_count()},
                     {"isolated", graph.isolated_count()},
                     {"components", graph.component_count()}};
        write_text(c.report, with_provenance(std::move(body), c, g).dump(2) + "\n");
    }
    std::cout << "N=" << graph.size() << " edges=" << graph.edge_count() << " isolated=" << graph.isolated_count()
              << " components=" << graph.component_count() << '\n';
    return 0;
}

int cmd_expand(const RunConfig& c, const Globals& g) {
    const auto method = lgde::parse_method(c.method);
    require(method.has_value(), "unknown method '" + c.method + "'");
    auto pipeline = make_pipeline(*method, c);
    report_unresolved(pipeline->expander->seeds());

    lgde::ParamPoint point;
    for (const auto& [name, spec] : method_params(*method, c, pipeline->prebuilt_graph)) {
        point.emplace_back(name, single_value(spec, cli_flag(name).substr(2)));
    }
    const auto dict = pipeline->expander->expand(point);
    const auto text = lgde::format_dictionary(dict);
    write_text(c.out, text);
    if (!c.report.empty()) {
        json body = lgde::to_json(dict);
        body["unresolved_seeds"] = pipeline->expander->seeds().unresolved;
        write_text(c.report, with_provenance(std::move(body), c, g).dump(2) + "\n");
    }
    return 0;
}

json lr_table(const lgde::Dictionary& dict, const lgde::LabeledCorpus& corpus, bool haldane) {
    const auto table = lgde::likelihood_ratios(dict.words(), corpus, haldane);
    json rows = json::array();
    for (const auto& w : table) rows.push_back(lgde::to_json(w));
    const auto median = lgde::median_likelihood_ratio(table);
    json median_json = nullptr;
    if (median) median_json = std::isinf(*median) ? json("inf") : json(*median);
    return {{"words", std::move(rows)}, {"median_lr", median_json}};
}

int cmd_eval(const RunConfig& c, const Globals& g) {
    require(!c.corpus.empty(), "--corpus is required");
    require(!c.dictionary.empty(), "--dictionary is required");
    const auto corpus = load_corpus(c, c.corpus);
    const auto dict = lgde::to_dictionary(lgde::load_dictionary(c.dictionary));
    json body = lgde::to_json(lgde::evaluate(dict, corpus, c.discovered_only));
    if (c.lr) {
        auto scored = dict;
        if (c.discovered_only) scored.seeds.clear();
        body["likelihood_ratios"] = lr_table(scored, corpus, c.haldane);
    }
    write_text(c.out, with_provenance(std::move(body), c, g).dump(2) + "\n");
    return 0;
}

std::string sweep_tsv(const lgde::SweepResult& result) {
    std::ostringstream ss;
    const auto& first = result.entries.front().params;
    for (const auto& kv : first) ss << kv.first << '\t';
    ss << "dictionary_size\tdiscovered_size\tadmissible\tmacro_precision\tmacro_recall\tmacro_f1\n";
    char buf[32];
    auto num = [&](double x) {
        std::snprintf(buf, sizeof buf, "%.17g", x);
        return std::string(buf);
    };
    for (const auto& e : result.entries) {
        for (const auto& kv : e.params) ss << num(kv.second) << '\t';
        ss << e.dictionary_size << '\t' << e.discovered_size << '\t' << (e.admissible ? 1 : 0) << '\t'
           << num(e.report.macro_precision) << '\t' << num(e.report.macro_recall) << '\t' << num(e.report.macro_f1)
           << '\n';
    }
    return ss.str();
}

int cmd_sweep(const RunConfig& c, const Globals& g) {
    const auto method = lgde::parse_method(c.method);
    require(method.has_value(), "unknown method '" + c.method + "'");
    require(!c.corpus.empty(), "--corpus (training split) is required");
    auto pipeline = make_pipeline(*method, c);
    report_unresolved(pipeline->expander->seeds());
    const auto train = pipeline->corpus ? *pipeline->corpus : load_corpus(c, c.corpus);

    std::vector<std::pair<std::string, std::vector<double>>> axes;
    for (const auto& [name, spec] : method_params(*method, c, pipeline->prebuilt_graph)) {
        require(!spec.empty(), cli_flag(name) + " is required");
        axes.emplace_back(name, lgde::cli::parse_values(spec));
    }
    const auto grid = lgde::make_grid(axes);
    pipeline->expander->prepare(grid);

    lgde::SweepOptions options;
    options.min_discovered = c.min_discovered;
    options.max_discovered = c.max_discovered;
    options.evaluate_discovered_only = c.discovered_only;
    const auto result = lgde::sweep(*pipeline->expander, grid, train, options);

    json body = lgde::to_json(result);
    if (!c.test_corpus.empty()) {
        const auto test = load_corpus(c, c.test_corpus);
        body["test"] = lgde::to_json(lgde::evaluate(result.best_dictionary, test, c.discovered_only));
    }
    write_text(c.out, with_provenance(std::move(body), c, g).dump(2) + "\n");
    if (!c.dictionary_out.empty()) write_text(c.dictionary_out, lgde::format_dictionary(result.best_dictionary));
    if (!c.tsv.empty()) write_text(c.tsv, sweep_tsv(result));
    if (!c.out.empty() && c.out != "-") {
        const auto& best = result.entries[result.best];
        std::cout << "best:";
        for (const auto& [name, value] : best.params) std::cout << ' ' << name << '=' << value;
        std::cout << " macro_f1=" << best.report.macro_f1 << " discovered=" << best.discovered_size << '\n';
    }
    return 0;
}

int cmd_stats_lr(const RunConfig& c, const Globals& g) {
    require(!c.corpus.empty(), "--corpus is required");
    require(!c.dictionary.empty(), "--dictionary is required");
    const auto corpus = load_corpus(c, c.corpus);
    auto dict = lgde::to_dictionary(lgde::load_dictionary(c.dictionary));
    if (c.discovered_only) dict.seeds.clear();
    write_text(c.out, with_provenance(lr_table(dict, corpus, c.haldane), c, g).dump(2) + "\n");
    return 0;
}

std::vector<double> load_sample(const std::string& path) {
    std::vector<double> out;
    for (const auto& line : lgde::load_token_list(path)) {
        if (line == "inf" || line == "+inf" || line == "Infinity") {
            out.push_back(std::numeric_limits<double>::infinity());
            continue;
        }
        const auto values = lgde::cli::parse_values(line);
        require(values.size() == 1, "sample file " + path + ": one number per line");
        out.push_back(values.front());
    }
    return out;
}

int cmd_stats_mwu(const RunConfig& c, const Globals& g) {
    require(!c.sample_a.empty() && !c.sample_b.empty(), "--a and --b are required");
    const auto a = load_sample(c.sample_a);
    const auto b = load_sample(c.sample_b);
    lgde::Alternative alt = lgde::Alternative::greater;
    if (c.alternative == "less") alt = lgde::Alternative::less;
    if (c.alternative == "two-sided") alt = lgde::Alternative::two_sided;
    lgde::MwuMethod m = lgde::MwuMethod::automatic;
    if (c.mwu_method == "exact") m = lgde::MwuMethod::exact;
    if (c.mwu_method == "normal") m = lgde::MwuMethod::normal;
    const auto r = lgde::mann_whitney_u(a, b, alt, m);
    json body = lgde::to_json(r);
    body["n_a"] = a.size();
    body["n_b"] = b.size();
    if (r.zero_variance) std::cerr << "warning: all values tied, p-value set to 1\n";
    write_text(c.out, with_provenance(std::move(body), c, g).dump(2) + "\n");
    return 0;
}

void add_loading_options(CLI::App* app, RunConfig& c) {
    app->add_option("--embeddings", c.embeddings, "Embedding file (word2vec or GloVe text)");
    app->add_flag("--allow-duplicates", c.allow_duplicates, "Accept identical vectors");
    app->add_option("--min-norm", c.min_norm, "Reject vectors with smaller norm")->capture_default_str();
    app->add_option("--stopwords", c.stopwords, "Stopword file, one token per line");
    app->add_flag("--no-lowercase", c.no_lowercase, "Keep corpus case");
    app->add_option("--filter-corpus", c.filter_corpus, "Corpus for document-frequency filtering");
    app->add_option("--min-df", c.min_df, "Keep tokens in at least this many documents");
    app->add_option("--max-df-fraction", c.max_df_fraction, "Keep tokens in at most this fraction of documents");
}

void add_method_options(CLI::App* app, RunConfig& c) {
    app->add_option("--k", c.k, "Neighbour count (CkNN for lgde, kNN baseline)");
    app->add_option("--t", c.t, "Markov time");
    app->add_option("--delta", c.delta, "CkNN density parameter")->capture_default_str();
    app->add_option("--epsilon", c.epsilon, "Cosine threshold (threshold, ikea)");
    app->add_option("--window", c.window, "Co-occurrence window (textrank)")->capture_default_str();
    app->add_option("--top-k", c.top_k, "Words taken by textrank")->capture_default_str();
    app->add_option("--max-size", c.max_size, "Largest community (lgde)")->capture_default_str();
    app->add_option("--damping", c.damping, "PageRank damping (textrank)")->capture_default_str();
    app->add_option("--max-iterations", c.max_iterations, "IKEA round cap")->capture_default_str();
    app->add_option("--seeds", c.seeds, "Seed file, one token per line");
    app->add_option("--graph", c.graph, "Prebuilt edge list (lgde)");
    app->add_option("--corpus", c.corpus, "Line-JSON corpus");
}

const std::vector<std::string> kMethods = {"lgde", "threshold", "knn", "ikea", "textrank"};

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Local graph-based dictionary expansion"};
    app.require_subcommand(1);
    app.config_formatter(std::make_shared<lgde::cli::JsonConfig>());
    app.set_config("--config", "", "JSON file mirroring the command-line flags");

    Globals globals;
    RunConfig c;
    app.add_option("--threads", globals.threads, "Worker threads (0 = all cores)");
    app.add_flag("--timestamps", globals.timestamps, "Add a timestamp to reports");

    auto* graph = app.add_subcommand("graph", "Semantic graph construction");
    graph->require_subcommand(1);
    auto* build = graph->add_subcommand("build", "Build the CkNN semantic graph");
    add_loading_options(build, c);
    build->add_option("--corpus", c.corpus, "Corpus for document-frequency filtering");
    build->add_option("--k", c.k, "CkNN neighbour count")->required();
    build->add_option("--delta", c.delta, "CkNN density parameter")->capture_default_str();
    build->add_option("--out", c.out, "Edge-list output")->required();
    build->add_option("--report", c.report, "JSON summary output");

    auto* expand = app.add_subcommand("expand", "Expand a seed dictionary");
    expand->add_option("method", c.method, "lgde | threshold | knn | ikea | textrank")
        ->required()
        ->check(CLI::IsMember(kMethods));
    add_loading_options(expand, c);
    add_method_options(expand, c);
    expand->add_option("--out", c.out, "Dictionary output (default stdout)");
    expand->add_option("--report", c.report, "JSON report with provenance");

    auto* eval = app.add_subcommand("eval", "Score a dictionary as a document classifier");
    eval->add_option("--corpus", c.corpus, "Labeled line-JSON corpus")->required();
    eval->add_option("--dictionary", c.dictionary, "Dictionary file")->required();
    eval->add_option("--stopwords", c.stopwords, "Stopword file");
    eval->add_flag("--no-lowercase", c.no_lowercase, "Keep corpus case");
    eval->add_flag("--discovered-only", c.discovered_only, "Classify with discovered words only");
    eval->add_flag("--lr", c.lr, "Add the per-word likelihood-ratio table");
    eval->add_flag("--haldane", c.haldane, "Use (count + 0.5) corrected probabilities for ratios");
    eval->add_option("--out", c.out, "JSON output (default stdout)");

    auto* sweep = app.add_subcommand("sweep", "Grid search under dictionary size constraints");
    sweep->add_option("method", c.method, "lgde | threshold | knn | ikea | textrank")
        ->required()
        ->check(CLI::IsMember(kMethods));
    add_loading_options(sweep, c);
    add_method_options(sweep, c);
    sweep->add_option("--test-corpus", c.test_corpus, "Held-out corpus scored with the selected dictionary");
    sweep->add_option("--min-discovered", c.min_discovered, "Smallest admissible discovered count");
    sweep->add_option("--max-discovered", c.max_discovered, "Largest admissible discovered count");
    sweep->add_flag("--discovered-only", c.discovered_only, "Score discovered words only");
    sweep->add_option("--out", c.out, "Grid JSON output (default stdout)");
    sweep->add_option("--dictionary-out", c.dictionary_out, "Selected dictionary output");
    sweep->add_option("--tsv", c.tsv, "Grid as TSV");

    auto* stats = app.add_subcommand("stats", "Word statistics and significance tests");
    stats->require_subcommand(1);
    auto* lr = stats->add_subcommand("lr", "Likelihood ratios of dictionary words");
    lr->add_option("--corpus", c.corpus, "Labeled line-JSON corpus")->required();
    lr->add_option("--dictionary", c.dictionary, "Dictionary file")->required();
    lr->add_option("--stopwords", c.stopwords, "Stopword file");
    lr->add_flag("--no-lowercase", c.no_lowercase, "Keep corpus case");
    lr->add_flag("--discovered-only", c.discovered_only, "Only discovered words");
    lr->add_flag("--haldane", c.haldane, "Use (count + 0.5) corrected probabilities");
    lr->add_option("--out", c.out, "JSON output (default stdout)");
    auto* mwu = stats->add_subcommand("mwu", "One-sided Mann-Whitney U test (a greater than b)");
    mwu->add_option("--a", c.sample_a, "Sample A, one value per line")->required();
    mwu->add_option("--b", c.sample_b, "Sample B, one value per line")->required();
    mwu->add_option("--alternative", c.alternative, "greater | less | two-sided")
        ->check(CLI::IsMember({"greater", "less", "two-sided"}))
        ->capture_default_str();
    mwu->add_option("--method", c.mwu_method, "auto | exact | normal")
        ->check(CLI::IsMember({"auto", "exact", "normal"}))
        ->capture_default_str();
    mwu->add_option("--out", c.out, "JSON output (default stdout)");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        return app.exit(e);
    }

    try {
        lgde::set_max_threads(globals.threads);
        if (*build) {
            c.subcommand = "graph build";
            return cmd_graph_build(c, globals);
        }
        if (*expand) {
            c.subcommand = "expand";
            return cmd_expand(c, globals);
        }
        if (*eval) {
            c.subcommand = "eval";
            return cmd_eval(c, globals);
        }
        if (*sweep) {
            c.subcommand = "sweep";
            return cmd_sweep(c, globals);
        }
        if (*lr) {
            c.subcommand = "stats lr";
            return cmd_stats_lr(c, globals);
        }
        if (*mwu) {
            c.subcommand = "stats mwu";
            return cmd_stats_mwu(c, globals);
        }
    } catch (const lgde::Error& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 1;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 1;
    }
    return 1;
}
