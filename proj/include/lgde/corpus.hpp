#pragma once

#include <cstddef>
#include <filesystem>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

namespace lgde {

struct Document {
    std::string id;
    std::vector<std::string> tokens;
    std::set<std::string> token_set;
    std::optional<int> label; // 0 or 1 when present

    bool contains(const std::string& token) const { return token_set.count(token) > 0; }
};

// Tokenized documents with optional binary topic labels. Document order is
// file order; the corpus is immutable once built.
class LabeledCorpus {
public:
    LabeledCorpus() = default;

    // Validates ids (unique, non-empty) and labels (0/1) and fills token_set.
    explicit LabeledCorpus(std::vector<Document> documents);

    const std::vector<Document>& documents() const { return documents_; }
    std::size_t size() const { return documents_.size(); }
    bool empty() const { return documents_.empty(); }

    std::size_t n_true() const { return n_true_; }
    std::size_t n_false() const { return n_false_; }
    std::size_t n_labeled() const { return n_true_ + n_false_; }

private:
    std::vector<Document> documents_;
    std::size_t n_true_ = 0;
    std::size_t n_false_ = 0;
};

// Lowercases (optionally) and splits on non-alphanumeric code points.
// Underscores survive inside tokens (phrase joining) and apostrophes survive
// between two alphanumerics ("don't"). Leading/trailing underscores are cut.
std::vector<std::string> tokenize(std::string_view text, bool lowercase);

// Line-JSON: {"id": str, "text": str | "tokens": [str], "label": 0|1}
LabeledCorpus load_corpus(const std::filesystem::path& path, bool lowercase = true,
                          const std::optional<std::set<std::string>>& stopwords = std::nullopt);

LabeledCorpus parse_corpus(std::string_view content, bool lowercase = true,
                           const std::optional<std::set<std::string>>& stopwords = std::nullopt);

// One token per line; '#' comments and blank lines skipped. Order kept.
std::vector<std::string> load_token_list(const std::filesystem::path& path);
std::vector<std::string> parse_token_list(std::string_view content);

std::map<std::string, std::size_t> document_frequencies(const LabeledCorpus& corpus);

std::string read_file(const std::filesystem::path& path);

} // namespace lgde
