#pragma once

#include <cstddef>
#include <filesystem>
#include <optional>
#include <set>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "lgde/corpus.hpp"

namespace lgde {

// Ordered list of unique tokens with an O(1) token -> index lookup.
class Vocabulary {
public:
    Vocabulary() = default;
    explicit Vocabulary(std::vector<std::string> tokens); // throws on duplicates

    std::size_t size() const { return tokens_.size(); }
    const std::string& token(std::size_t i) const { return tokens_.at(i); }
    const std::vector<std::string>& tokens() const { return tokens_; }
    std::optional<std::size_t> index_of(std::string_view token) const;
    bool contains(std::string_view token) const { return index_of(token).has_value(); }

private:
    std::vector<std::string> tokens_;
    std::unordered_map<std::string, std::size_t> index_;
};

struct LoadOptions {
    double min_norm = 1e-12;
    bool allow_duplicates = false;
};

// Unit-normalized word vectors, row-major N x dim. Immutable after construction.
class EmbeddingSpace {
public:
    // Rows are validated (shared dimension, norm >= min_norm, unique tokens,
    // optionally unique vectors) and normalized to unit length.
    EmbeddingSpace(std::vector<std::string> words, const std::vector<std::vector<double>>& rows,
                   const LoadOptions& options = {});

    std::size_t size() const { return vocab_.size(); }
    std::size_t dim() const { return dim_; }
    bool normalized() const { return true; }
    bool duplicates_allowed() const { return duplicates_allowed_; }

    const Vocabulary& vocabulary() const { return vocab_; }
    const std::string& word(std::size_t i) const { return vocab_.token(i); }
    std::optional<std::size_t> index_of(std::string_view token) const { return vocab_.index_of(token); }

    std::span<const double> row(std::size_t i) const {
        return {values_.data() + i * dim_, dim_};
    }

    // Keeps only the listed tokens, preserving row order. Rows are already
    // unit length so no renormalization happens.
    EmbeddingSpace subset(const std::set<std::string>& keep) const;

private:
    EmbeddingSpace() = default;

    Vocabulary vocab_;
    std::vector<double> values_;
    std::size_t dim_ = 0;
    bool duplicates_allowed_ = false;
};

// Accepts word2vec text (leading "N r" header) and headerless GloVe text.
EmbeddingSpace load_embeddings(const std::filesystem::path& path, const LoadOptions& options = {});
EmbeddingSpace parse_embeddings(std::string_view content, const LoadOptions& options = {});

struct SeedDictionary {
    std::vector<std::string> seeds;          // resolved, input order, deduplicated
    std::vector<std::size_t> resolved_indices;
    std::vector<std::string> unresolved;     // input order, deduplicated

    std::size_t size() const { return seeds.size(); }
};

SeedDictionary resolve_seeds(const Vocabulary& vocabulary, const std::vector<std::string>& tokens);

// Document-frequency filter: min_doc_count <= df <= max_doc_fraction * |corpus|.
std::set<std::string> filter_vocabulary(const LabeledCorpus& corpus, std::size_t min_doc_count,
                                        double max_doc_fraction);

} // namespace lgde
