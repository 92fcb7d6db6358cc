#include "lgde/vector_store.hpp"

#include <charconv>
#include <cmath>
#include <cstring>
#include <unordered_set>

#include "lgde/error.hpp"

namespace lgde {

namespace {

std::vector<std::string_view> split_fields(std::string_view line) {
    std::vector<std::string_view> fields;
    std::size_t pos = 0;
    while (pos < line.size()) {
        pos = line.find_first_not_of(" \t\r", pos);
        if (pos == std::string_view::npos) break;
        auto end = line.find_first_of(" \t\r", pos);
        if (end == std::string_view::npos) end = line.size();
        fields.push_back(line.substr(pos, end - pos));
        pos = end;
    }
    return fields;
}

bool parse_integer(std::string_view s, std::size_t& out) {
    if (s.empty()) return false;
    auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), out);
    return ec == std::errc() && ptr == s.data() + s.size();
}

bool parse_double(std::string_view s, double& out) {
    if (!s.empty() && s.front() == '+') s.remove_prefix(1);
    if (s.empty()) return false;
    auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), out);
    return ec == std::errc() && ptr == s.data() + s.size() && std::isfinite(out);
}

std::string row_key(std::span<const double> row) {
    std::string key(row.size() * sizeof(double), '\0');
    std::memcpy(key.data(), row.data(), key.size());
    return key;
}

} // namespace

Vocabulary::Vocabulary(std::vector<std::string> tokens) : tokens_(std::move(tokens)) {
    index_.reserve(tokens_.size());
    for (std::size_t i = 0; i < tokens_.size(); ++i) {
        if (!index_.emplace(tokens_[i], i).second) throw Error(ErrorKind::duplicate_token, tokens_[i]);
    }
}

std::optional<std::size_t> Vocabulary::index_of(std::string_view token) const {
    auto it = index_.find(std::string(token));
    if (it == index_.end()) return std::nullopt;
    return it->second;
}

EmbeddingSpace::EmbeddingSpace(std::vector<std::string> words, const std::vector<std::vector<double>>& rows,
                               const LoadOptions& options)
    : duplicates_allowed_(options.allow_duplicates) {
    if (words.size() != rows.size()) {
        throw Error(ErrorKind::invalid_argument, "word count does not match row count");
    }
    if (words.size() < 2) throw Error(ErrorKind::degenerate_space, "at least 2 words are required");
    vocab_ = Vocabulary(std::move(words));
    dim_ = rows.front().size();
    if (dim_ == 0) throw Error(ErrorKind::dimension_mismatch, "vectors must have at least one coordinate");

    values_.reserve(rows.size() * dim_);
    std::unordered_map<std::string, std::size_t> seen;
    for (std::size_t i = 0; i < rows.size(); ++i) {
        const auto& row = rows[i];
        if (row.size() != dim_) {
            throw Error(ErrorKind::dimension_mismatch, "word '" + vocab_.token(i) + "' has " +
                                                           std::to_string(row.size()) + " coordinates, expected " +
                                                           std::to_string(dim_));
        }
        double sq = 0.0;
        for (double x : row) sq += x * x;
        const double norm = std::sqrt(sq);
        if (!(norm >= options.min_norm)) {
            throw Error(ErrorKind::zero_norm, "word '" + vocab_.token(i) + "'");
        }
        for (double x : row) values_.push_back(x / norm);
        if (!options.allow_duplicates) {
            auto [it, inserted] = seen.emplace(row_key(this->row(i)), i);
            if (!inserted) {
                throw Error(ErrorKind::duplicate_vector,
                            "'" + vocab_.token(i) + "' duplicates '" + vocab_.token(it->second) + "'");
            }
        }
    }
}

EmbeddingSpace EmbeddingSpace::subset(const std::set<std::string>& keep) const {
    std::vector<std::string> words;
    EmbeddingSpace out;
    out.dim_ = dim_;
    out.duplicates_allowed_ = duplicates_allowed_;
    for (std::size_t i = 0; i < size(); ++i) {
        if (keep.count(word(i)) == 0) continue;
        words.push_back(word(i));
        auto r = row(i);
        out.values_.insert(out.values_.end(), r.begin(), r.end());
    }
    if (words.size() < 2) throw Error(ErrorKind::degenerate_space, "fewer than 2 words survive the filter");
    out.vocab_ = Vocabulary(std::move(words));
    return out;
}

EmbeddingSpace parse_embeddings(std::string_view content, const LoadOptions& options) {
    std::vector<std::string> words;
    std::vector<std::vector<double>> rows;
    std::optional<std::size_t> header_rows;
    std::optional<std::size_t> header_dim;
    bool first = true;
    std::size_t line_no = 0;
    std::size_t start = 0;
    while (start < content.size()) {
        auto end = content.find('\n', start);
        if (end == std::string_view::npos) end = content.size();
        const auto line = content.substr(start, end - start);
        start = end + 1;
        ++line_no;
        const auto fields = split_fields(line);
        if (fields.empty()) continue;
        if (first) {
            first = false;
            std::size_t n = 0;
            std::size_t r = 0;
            if (fields.size() == 2 && parse_integer(fields[0], n) && parse_integer(fields[1], r)) {
                header_rows = n;
                header_dim = r;
                continue;
            }
        }
        const auto where = "line " + std::to_string(line_no);
        if (fields.size() < 2) throw Error(ErrorKind::parse, where + ": expected a token followed by coordinates");
        std::vector<double> row(fields.size() - 1);
        for (std::size_t j = 1; j < fields.size(); ++j) {
            if (!parse_double(fields[j], row[j - 1])) {
                throw Error(ErrorKind::parse, where + ": bad coordinate '" + std::string(fields[j]) + "'");
            }
        }
        const std::size_t expected = header_dim ? *header_dim : (rows.empty() ? row.size() : rows.front().size());
        if (row.size() != expected) {
            throw Error(ErrorKind::dimension_mismatch, where + ": " + std::to_string(row.size()) +
                                                           " coordinates, expected " + std::to_string(expected));
        }
        words.emplace_back(fields[0]);
        rows.push_back(std::move(row));
    }
    if (header_rows && *header_rows != rows.size()) {
        throw Error(ErrorKind::parse, "header declares " + std::to_string(*header_rows) + " rows but file has " +
                                          std::to_string(rows.size()));
    }
    if (rows.empty()) throw Error(ErrorKind::empty_input, "no embedding rows");
    return EmbeddingSpace(std::move(words), rows, options);
}

EmbeddingSpace load_embeddings(const std::filesystem::path& path, const LoadOptions& options) {
    return parse_embeddings(read_file(path), options);
}

SeedDictionary resolve_seeds(const Vocabulary& vocabulary, const std::vector<std::string>& tokens) {
    if (tokens.empty()) throw Error(ErrorKind::invalid_argument, "seed list is empty");
    SeedDictionary out;
    std::unordered_set<std::string> seen;
    for (const auto& token : tokens) {
        if (!seen.insert(token).second) continue;
        if (auto idx = vocabulary.index_of(token)) {
            out.seeds.push_back(token);
            out.resolved_indices.push_back(*idx);
        } else {
            out.unresolved.push_back(token);
        }
    }
    if (out.seeds.empty()) {
        throw Error(ErrorKind::unresolved_seeds,
                    "none of " + std::to_string(out.unresolved.size()) + " seed tokens is in the vocabulary");
    }
    return out;
}

std::set<std::string> filter_vocabulary(const LabeledCorpus& corpus, std::size_t min_doc_count,
                                        double max_doc_fraction) {
    if (!(max_doc_fraction > 0.0 && max_doc_fraction <= 1.0)) {
        throw Error(ErrorKind::invalid_argument, "max_doc_fraction must lie in (0, 1]");
    }
    if (min_doc_count < 1) throw Error(ErrorKind::invalid_argument, "min_doc_count must be >= 1");
    if (corpus.empty()) throw Error(ErrorKind::empty_input, "cannot filter a vocabulary against an empty corpus");
    const auto df = document_frequencies(corpus);
    const double cap = max_doc_fraction * static_cast<double>(corpus.size());
    std::set<std::string> kept;
    for (const auto& [token, count] : df) {
        if (count >= min_doc_count && static_cast<double>(count) <= cap) kept.insert(token);
    }
    return kept;
}

} // namespace lgde
