#pragma once

#include <cstddef>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "lgde/cknn.hpp"
#include "lgde/corpus.hpp"
#include "lgde/severability.hpp"
#include "lgde/similarity.hpp"
#include "lgde/vector_store.hpp"

namespace lgde {

enum class Method { lgde, threshold, knn, ikea, textrank };

std::string_view to_string(Method method);
std::optional<Method> parse_method(std::string_view name);

// Why a discovered word is in the dictionary.
struct Provenance {
    std::vector<std::string> seeds; // seeds whose community/neighbourhood produced it
    std::optional<int> round;       // IKEA admission round (1-based)
    std::optional<double> score;    // TextRank PageRank score
};

struct CommunityReport {
    std::string seed;
    int t = 1;
    std::vector<std::string> members;
    double sigma = 0.0;
    double retention = 0.0;
    double mixing = 0.0;
};

// Named parameters in a fixed order, e.g. {{"k", 5}, {"t", 2}}.
using ParamPoint = std::vector<std::pair<std::string, double>>;

std::optional<double> find_param(const ParamPoint& point, std::string_view name);

struct Dictionary {
    Method method = Method::lgde;
    std::vector<std::string> seeds;
    std::vector<std::string> discovered; // disjoint from seeds
    std::map<std::string, Provenance> provenance;
    ParamPoint params;
    std::vector<CommunityReport> communities; // LGDE only, one per seed

    std::size_t size() const { return seeds.size() + discovered.size(); }
    // Seeds first, then discovered words.
    std::vector<std::string> words() const;
    std::set<std::string> word_set() const;
    std::set<std::string> discovered_set() const { return {discovered.begin(), discovered.end()}; }
};

// Union over seeds of their severability communities at Markov time t.
Dictionary expand_lgde(const SemanticGraph& graph, const WalkKernel& kernel, const SeedDictionary& seeds, int t,
                       std::size_t max_size = 100);
Dictionary expand_lgde(const SemanticGraph& graph, const SeedDictionary& seeds, int t, std::size_t max_size = 100);

// Words with raw cosine >= epsilon to at least one seed.
Dictionary expand_threshold(const EmbeddingSpace& space, const SeedDictionary& seeds, double epsilon);

// Union of each seed's k most cosine-similar words (self excluded, ties by index).
Dictionary expand_knn(const EmbeddingSpace& space, const SeedDictionary& seeds, std::size_t k);

// Iterative thresholding on the mean cosine to the current dictionary. Every
// candidate that qualifies in a round is admitted at once.
Dictionary expand_ikea(const EmbeddingSpace& space, const SeedDictionary& seeds, double epsilon,
                       int max_iterations = 100);

struct TextRankOptions {
    std::size_t window = 2;
    std::size_t top_k = 35;
    double damping = 0.85;
    // When set, tokens outside it are dropped before windowing.
    const std::set<std::string>* vocabulary = nullptr;
};

// Weighted PageRank scores of the co-occurrence graph built from documents
// that contain at least one seed. Sorted by token.
std::vector<std::pair<std::string, double>> textrank_scores(const LabeledCorpus& corpus,
                                                             const std::vector<std::string>& seeds,
                                                             const TextRankOptions& options);

Dictionary expand_textrank(const LabeledCorpus& corpus, const SeedDictionary& seeds, const TextRankOptions& options);

// Vocabulary made of every token in the corpus, in sorted order.
Vocabulary corpus_vocabulary(const LabeledCorpus& corpus);

struct ExpanderInputs {
    std::vector<std::string> seed_tokens;
    const EmbeddingSpace* space = nullptr;         // threshold, knn, ikea, lgde (with k)
    const PairwiseMatrices* matrices = nullptr;    // lgde graph construction
    const SemanticGraph* graph = nullptr;          // lgde from a prebuilt graph
    const LabeledCorpus* corpus = nullptr;         // textrank
    const std::set<std::string>* vocabulary = nullptr; // textrank lexicon restriction
};

// Binds one method to its inputs so that a parameter point maps to a
// dictionary. LGDE graphs are cached per (k, delta); expand() is safe to call
// concurrently.
//
// Recognised parameters (defaults in brackets):
//   lgde       k, t, delta [1], max_size [100]  (k, delta ignored with a prebuilt graph)
//   threshold  epsilon
//   knn        k
//   ikea       epsilon, max_iterations [100]
//   textrank   window [2], top_k, damping [0.85]
class Expander {
public:
    Expander(Method method, ExpanderInputs inputs);

    Method method() const { return method_; }
    const SeedDictionary& seeds() const { return seeds_; }

    // Builds the graphs a grid will need, in parallel over distinct (k, delta).
    void prepare(const std::vector<ParamPoint>& grid);

    Dictionary expand(const ParamPoint& point) const;

private:
    struct GraphEntry {
        SemanticGraph graph;
        WalkKernel kernel;
    };
    std::shared_ptr<const GraphEntry> graph_for(std::size_t k, double delta) const;

    Method method_;
    ExpanderInputs inputs_;
    SeedDictionary seeds_;
    std::shared_ptr<const PairwiseMatrices> owned_matrices_;
    std::shared_ptr<const GraphEntry> fixed_graph_;
    mutable std::mutex cache_mutex_;
    mutable std::map<std::pair<std::size_t, double>, std::shared_ptr<const GraphEntry>> cache_;
};

} // namespace lgde
