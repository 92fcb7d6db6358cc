#include "lgde/expanders.hpp"

#include <algorithm>
#include <cmath>
#include <unordered_map>
#include <unordered_set>

#include "lgde/error.hpp"
#include "lgde/parallel.hpp"

namespace lgde {

namespace {

constexpr double kPageRankTolerance = 1e-10;
constexpr int kPageRankMaxIterations = 100000;

std::vector<char> seed_mask(std::size_t n, const std::vector<std::size_t>& indices) {
    std::vector<char> mask(n, 0);
    for (auto i : indices) mask.at(i) = 1;
    return mask;
}

void check_seeds_in(const EmbeddingSpace& space, const SeedDictionary& seeds) {
    if (seeds.seeds.empty()) throw Error(ErrorKind::unresolved_seeds, "seed dictionary is empty");
    for (std::size_t s = 0; s < seeds.size(); ++s) {
        const auto idx = space.index_of(seeds.seeds[s]);
        if (!idx || *idx != seeds.resolved_indices.at(s)) {
            throw Error(ErrorKind::invalid_argument, "seed '" + seeds.seeds[s] + "' was not resolved against this space");
        }
    }
}

// Collects discovered words (ascending vocabulary index) with their source seeds.
Dictionary assemble(Method method, const Vocabulary& vocab, const SeedDictionary& seeds,
                    const std::vector<std::vector<std::size_t>>& sources_per_node, ParamPoint params) {
    Dictionary dict;
    dict.method = method;
    dict.seeds = seeds.seeds;
    dict.params = std::move(params);
    for (std::size_t v = 0; v < sources_per_node.size(); ++v) {
        const auto& sources = sources_per_node[v];
        if (sources.empty()) continue;
        const auto& token = vocab.token(v);
        dict.discovered.push_back(token);
        Provenance p;
        for (auto s : sources) p.seeds.push_back(seeds.seeds[s]);
        dict.provenance.emplace(token, std::move(p));
    }
    return dict;
}

double param_or(const ParamPoint& point, std::string_view name, std::optional<double> fallback) {
    if (auto v = find_param(point, name)) return *v;
    if (fallback) return *fallback;
    throw Error(ErrorKind::invalid_argument, "missing parameter '" + std::string(name) + "'");
}

std::size_t as_count(double value, std::string_view name) {
    if (!(value >= 0.0) || value != std::floor(value)) {
        throw Error(ErrorKind::invalid_argument, std::string(name) + " must be a non-negative integer");
    }
    return static_cast<std::size_t>(value);
}

} // namespace

std::string_view to_string(Method method) {
    switch (method) {
    case Method::lgde: return "lgde";
    case Method::threshold: return "threshold";
    case Method::knn: return "knn";
    case Method::ikea: return "ikea";
    case Method::textrank: return "textrank";
    }
    return "unknown";
}

std::optional<Method> parse_method(std::string_view name) {
    for (auto m : {Method::lgde, Method::threshold, Method::knn, Method::ikea, Method::textrank}) {
        if (to_string(m) == name) return m;
    }
    return std::nullopt;
}

std::optional<double> find_param(const ParamPoint& point, std::string_view name) {
    for (const auto& [key, value] : point) {
        if (key == name) return value;
    }
    return std::nullopt;
}

std::vector<std::string> Dictionary::words() const {
    std::vector<std::string> out = seeds;
    out.insert(out.end(), discovered.begin(), discovered.end());
    return out;
}

std::set<std::string> Dictionary::word_set() const {
    std::set<std::string> out(seeds.begin(), seeds.end());
    out.insert(discovered.begin(), discovered.end());
    return out;
}

Dictionary expand_lgde(const SemanticGraph& graph, const WalkKernel& kernel, const SeedDictionary& seeds, int t,
                       std::size_t max_size) {
    if (seeds.seeds.empty()) throw Error(ErrorKind::unresolved_seeds, "seed dictionary is empty");
    if (kernel.size() != graph.size()) throw Error(ErrorKind::invalid_argument, "kernel does not match graph");
    const auto& vocab = graph.vocabulary();
    std::vector<std::size_t> nodes;
    for (const auto& token : seeds.seeds) {
        auto idx = vocab.index_of(token);
        if (!idx) throw Error(ErrorKind::invalid_argument, "seed '" + token + "' is not a graph node");
        nodes.push_back(*idx);
    }

    std::vector<Community> communities(nodes.size());
    parallel_for(nodes.size(), [&](std::size_t s) { communities[s] = find_community(kernel, nodes[s], t, max_size); });

    const auto is_seed = seed_mask(graph.size(), nodes);
    std::vector<std::vector<std::size_t>> sources(graph.size());
    for (std::size_t s = 0; s < communities.size(); ++s) {
        for (auto v : communities[s].members) {
            if (!is_seed[v]) sources[v].push_back(s);
        }
    }
    ParamPoint params;
    if (graph.k) params.emplace_back("k", static_cast<double>(*graph.k));
    if (graph.delta) params.emplace_back("delta", *graph.delta);
    params.emplace_back("t", t);
    params.emplace_back("max_size", static_cast<double>(max_size));
    auto dict = assemble(Method::lgde, vocab, seeds, sources, std::move(params));

    for (std::size_t s = 0; s < communities.size(); ++s) {
        const auto& c = communities[s];
        CommunityReport r;
        r.seed = seeds.seeds[s];
        r.t = c.t;
        for (auto m : c.members) r.members.push_back(vocab.token(m));
        r.sigma = c.sigma;
        r.retention = c.retention;
        r.mixing = c.mixing;
        dict.communities.push_back(std::move(r));
    }
    return dict;
}

Dictionary expand_lgde(const SemanticGraph& graph, const SeedDictionary& seeds, int t, std::size_t max_size) {
    return expand_lgde(graph, WalkKernel(graph), seeds, t, max_size);
}

Dictionary expand_threshold(const EmbeddingSpace& space, const SeedDictionary& seeds, double epsilon) {
    // Thresholds on raw cosine; -1 is accepted as the vacuous threshold.
    if (!(epsilon >= -1.0 && epsilon <= 1.0)) throw Error(ErrorKind::invalid_argument, "epsilon must lie in [-1, 1]");
    check_seeds_in(space, seeds);
    const auto is_seed = seed_mask(space.size(), seeds.resolved_indices);
    std::vector<std::vector<std::size_t>> sources(space.size());
    parallel_for(space.size(), [&](std::size_t v) {
        if (is_seed[v]) return;
        for (std::size_t s = 0; s < seeds.size(); ++s) {
            if (unit_cosine(space.row(seeds.resolved_indices[s]), space.row(v)) >= epsilon) sources[v].push_back(s);
        }
    });
    return assemble(Method::threshold, space.vocabulary(), seeds, sources, {{"epsilon", epsilon}});
}

Dictionary expand_knn(const EmbeddingSpace& space, const SeedDictionary& seeds, std::size_t k) {
    const auto n = space.size();
    if (k < 1 || k > n - 1) {
        throw Error(ErrorKind::invalid_argument, "k=" + std::to_string(k) + " outside [1, " + std::to_string(n - 1) + "]");
    }
    check_seeds_in(space, seeds);
    std::vector<std::vector<std::size_t>> nearest(seeds.size());
    parallel_for(seeds.size(), [&](std::size_t s) {
        const auto w = seeds.resolved_indices[s];
        std::vector<std::pair<double, std::size_t>> ranked;
        ranked.reserve(n - 1);
        for (std::size_t v = 0; v < n; ++v) {
            if (v != w) ranked.emplace_back(-unit_cosine(space.row(w), space.row(v)), v);
        }
        std::partial_sort(ranked.begin(), ranked.begin() + static_cast<std::ptrdiff_t>(k), ranked.end());
        for (std::size_t r = 0; r < k; ++r) nearest[s].push_back(ranked[r].second);
    });
    const auto is_seed = seed_mask(n, seeds.resolved_indices);
    std::vector<std::vector<std::size_t>> sources(n);
    for (std::size_t s = 0; s < seeds.size(); ++s) {
        for (auto v : nearest[s]) {
            if (!is_seed[v]) sources[v].push_back(s);
        }
    }
    return assemble(Method::knn, space.vocabulary(), seeds, sources, {{"k", static_cast<double>(k)}});
}

Dictionary expand_ikea(const EmbeddingSpace& space, const SeedDictionary& seeds, double epsilon, int max_iterations) {
    if (!(epsilon >= -1.0 && epsilon <= 1.0)) throw Error(ErrorKind::invalid_argument, "epsilon must lie in [-1, 1]");
    if (max_iterations < 1) throw Error(ErrorKind::invalid_argument, "max_iterations must be >= 1");
    check_seeds_in(space, seeds);
    const auto n = space.size();

    std::vector<std::size_t> members = seeds.resolved_indices;
    std::vector<char> in_dict = seed_mask(n, members);
    std::vector<int> admitted_round(n, 0);
    // Running sum of cosines to the members, accumulated in admission order.
    std::vector<double> sums(n, 0.0);
    std::size_t accumulated = 0;

    for (int round = 1; round <= max_iterations; ++round) {
        parallel_for(n, [&](std::size_t v) {
            if (in_dict[v]) return;
            for (std::size_t m = accumulated; m < members.size(); ++m) {
                sums[v] += unit_cosine(space.row(members[m]), space.row(v));
            }
        });
        accumulated = members.size();
        const double count = static_cast<double>(members.size());
        std::vector<std::size_t> admitted;
        for (std::size_t v = 0; v < n; ++v) {
            if (!in_dict[v] && sums[v] / count >= epsilon) admitted.push_back(v);
        }
        if (admitted.empty()) break;
        for (auto v : admitted) {
            in_dict[v] = 1;
            admitted_round[v] = round;
            members.push_back(v);
        }
    }

    Dictionary dict;
    dict.method = Method::ikea;
    dict.seeds = seeds.seeds;
    dict.params = {{"epsilon", epsilon}, {"max_iterations", static_cast<double>(max_iterations)}};
    for (std::size_t v = 0; v < n; ++v) {
        if (admitted_round[v] == 0) continue;
        dict.discovered.push_back(space.word(v));
        Provenance p;
        p.round = admitted_round[v];
        dict.provenance.emplace(space.word(v), std::move(p));
    }
    return dict;
}

std::vector<std::pair<std::string, double>> textrank_scores(const LabeledCorpus& corpus,
                                                             const std::vector<std::string>& seeds,
                                                             const TextRankOptions& options) {
    if (options.window < 2) throw Error(ErrorKind::invalid_argument, "window must be >= 2");
    if (!(options.damping > 0.0 && options.damping < 1.0)) {
        throw Error(ErrorKind::invalid_argument, "damping must lie in (0, 1)");
    }
    const std::set<std::string> seed_set(seeds.begin(), seeds.end());

    // Co-occurrence counts keyed by token pair (lexicographically ordered).
    std::map<std::pair<std::string, std::string>, double> counts;
    std::size_t qualifying = 0;
    for (const auto& doc : corpus.documents()) {
        const bool has_seed = std::any_of(seed_set.begin(), seed_set.end(), [&](const auto& s) { return doc.contains(s); });
        if (!has_seed) continue;
        ++qualifying;
        std::vector<const std::string*> seq;
        for (const auto& tok : doc.tokens) {
            if (!options.vocabulary || options.vocabulary->count(tok)) seq.push_back(&tok);
        }
        for (std::size_t i = 0; i < seq.size(); ++i) {
            for (std::size_t j = i + 1; j < seq.size() && j - i < options.window; ++j) {
                if (*seq[i] == *seq[j]) continue;
                const auto key = *seq[i] < *seq[j] ? std::make_pair(*seq[i], *seq[j]) : std::make_pair(*seq[j], *seq[i]);
                counts[key] += 1.0;
            }
        }
    }
    if (qualifying == 0) throw Error(ErrorKind::empty_input, "no document contains a seed word");
    if (counts.empty()) throw Error(ErrorKind::empty_input, "co-occurrence graph has no edges");

    std::map<std::string, std::size_t> node_index;
    for (const auto& [key, w] : counts) {
        node_index.emplace(key.first, 0);
        node_index.emplace(key.second, 0);
    }
    std::vector<std::string> tokens;
    for (auto& [token, idx] : node_index) {
        idx = tokens.size();
        tokens.push_back(token);
    }
    const auto n = tokens.size();
    std::vector<std::vector<std::pair<std::size_t, double>>> adj(n);
    std::vector<double> strength(n, 0.0);
    for (const auto& [key, w] : counts) {
        const auto a = node_index[key.first];
        const auto b = node_index[key.second];
        adj[a].emplace_back(b, w);
        adj[b].emplace_back(a, w);
        strength[a] += w;
        strength[b] += w;
    }

    const double d = options.damping;
    const double base = (1.0 - d) / static_cast<double>(n);
    std::vector<double> rank(n, 1.0 / static_cast<double>(n));
    std::vector<double> next(n);
    for (int iter = 0; iter < kPageRankMaxIterations; ++iter) {
        std::fill(next.begin(), next.end(), base);
        for (std::size_t u = 0; u < n; ++u) {
            const double share = d * rank[u] / strength[u];
            for (const auto& [v, w] : adj[u]) next[v] += share * w;
        }
        double diff = 0.0;
        for (std::size_t v = 0; v < n; ++v) diff += std::abs(next[v] - rank[v]);
        rank.swap(next);
        if (diff < kPageRankTolerance) break;
    }

    std::vector<std::pair<std::string, double>> out;
    out.reserve(n);
    for (std::size_t v = 0; v < n; ++v) out.emplace_back(tokens[v], rank[v]);
    return out;
}

Dictionary expand_textrank(const LabeledCorpus& corpus, const SeedDictionary& seeds, const TextRankOptions& options) {
    if (options.top_k < 1) throw Error(ErrorKind::invalid_argument, "top_k must be >= 1");
    if (seeds.seeds.empty()) throw Error(ErrorKind::unresolved_seeds, "seed dictionary is empty");
    auto scores = textrank_scores(corpus, seeds.seeds, options);
    const std::set<std::string> seed_set(seeds.seeds.begin(), seeds.seeds.end());
    std::erase_if(scores, [&](const auto& p) { return seed_set.count(p.first) > 0; });
    std::stable_sort(scores.begin(), scores.end(), [](const auto& a, const auto& b) {
        if (a.second != b.second) return a.second > b.second;
        return a.first < b.first;
    });
    if (scores.size() > options.top_k) scores.resize(options.top_k);

    Dictionary dict;
    dict.method = Method::textrank;
    dict.seeds = seeds.seeds;
    dict.params = {{"window", static_cast<double>(options.window)},
                   {"top_k", static_cast<double>(options.top_k)},
                   {"damping", options.damping}};
    for (const auto& [token, score] : scores) {
        dict.discovered.push_back(token);
        Provenance p;
        p.score = score;
        dict.provenance.emplace(token, std::move(p));
    }
    return dict;
}

Vocabulary corpus_vocabulary(const LabeledCorpus& corpus) {
    std::set<std::string> tokens;
    for (const auto& doc : corpus.documents()) tokens.insert(doc.token_set.begin(), doc.token_set.end());
    return Vocabulary(std::vector<std::string>(tokens.begin(), tokens.end()));
}

Expander::Expander(Method method, ExpanderInputs inputs) : method_(method), inputs_(std::move(inputs)) {
    switch (method_) {
    case Method::lgde:
        if (inputs_.graph) {
            fixed_graph_ = std::make_shared<const GraphEntry>(GraphEntry{*inputs_.graph, WalkKernel(*inputs_.graph)});
            seeds_ = resolve_seeds(inputs_.graph->vocabulary(), inputs_.seed_tokens);
            break;
        }
        if (!inputs_.space) throw Error(ErrorKind::invalid_argument, "lgde needs embeddings or a graph");
        if (!inputs_.matrices) {
            owned_matrices_ = std::make_shared<const PairwiseMatrices>(*inputs_.space);
            inputs_.matrices = owned_matrices_.get();
        }
        seeds_ = resolve_seeds(inputs_.space->vocabulary(), inputs_.seed_tokens);
        break;
    case Method::threshold:
    case Method::knn:
    case Method::ikea:
        if (!inputs_.space) throw Error(ErrorKind::invalid_argument, std::string(to_string(method_)) + " needs embeddings");
        seeds_ = resolve_seeds(inputs_.space->vocabulary(), inputs_.seed_tokens);
        break;
    case Method::textrank:
        if (!inputs_.corpus) throw Error(ErrorKind::invalid_argument, "textrank needs a corpus");
        seeds_ = resolve_seeds(corpus_vocabulary(*inputs_.corpus), inputs_.seed_tokens);
        break;
    }
}

std::shared_ptr<const Expander::GraphEntry> Expander::graph_for(std::size_t k, double delta) const {
    {
        std::lock_guard lock(cache_mutex_);
        auto it = cache_.find({k, delta});
        if (it != cache_.end()) return it->second;
    }
    auto graph = build_cknn(*inputs_.matrices, k, delta);
    auto kernel = WalkKernel(graph);
    auto entry = std::make_shared<const GraphEntry>(GraphEntry{std::move(graph), std::move(kernel)});
    std::lock_guard lock(cache_mutex_);
    return cache_.emplace(std::make_pair(k, delta), std::move(entry)).first->second;
}

void Expander::prepare(const std::vector<ParamPoint>& grid) {
    if (method_ != Method::lgde || fixed_graph_) return;
    std::set<std::pair<std::size_t, double>> keys;
    for (const auto& point : grid) {
        keys.emplace(as_count(param_or(point, "k", std::nullopt), "k"), param_or(point, "delta", 1.0));
    }
    const std::vector<std::pair<std::size_t, double>> todo(keys.begin(), keys.end());
    parallel_for(todo.size(), [&](std::size_t i) { graph_for(todo[i].first, todo[i].second); });
}

Dictionary Expander::expand(const ParamPoint& point) const {
    switch (method_) {
    case Method::lgde: {
        const auto t = static_cast<int>(as_count(param_or(point, "t", std::nullopt), "t"));
        const auto max_size = as_count(param_or(point, "max_size", 100.0), "max_size");
        auto entry = fixed_graph_;
        if (!entry) {
            entry = graph_for(as_count(param_or(point, "k", std::nullopt), "k"), param_or(point, "delta", 1.0));
        }
        return expand_lgde(entry->graph, entry->kernel, seeds_, t, max_size);
    }
    case Method::threshold:
        return expand_threshold(*inputs_.space, seeds_, param_or(point, "epsilon", std::nullopt));
    case Method::knn:
        return expand_knn(*inputs_.space, seeds_, as_count(param_or(point, "k", std::nullopt), "k"));
    case Method::ikea:
        return expand_ikea(*inputs_.space, seeds_, param_or(point, "epsilon", std::nullopt),
                           static_cast<int>(as_count(param_or(point, "max_iterations", 100.0), "max_iterations")));
    case Method::textrank: {
        TextRankOptions options;
        options.window = as_count(param_or(point, "window", 2.0), "window");
        options.top_k = as_count(param_or(point, "top_k", std::nullopt), "top_k");
        options.damping = param_or(point, "damping", 0.85);
        options.vocabulary = inputs_.vocabulary;
        return expand_textrank(*inputs_.corpus, seeds_, options);
    }
    }
    throw Error(ErrorKind::invalid_argument, "unknown method");
}

} // namespace lgde
