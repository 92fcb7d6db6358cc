#include "lgde/corpus.hpp"

#include <fstream>
#include <sstream>
#include <unordered_set>

#include <json.hpp>

#include "lgde/error.hpp"

namespace lgde {

namespace {

struct CodePoint {
    char32_t value;
    std::size_t length; // bytes consumed
};

// Malformed bytes decode as U+FFFD one byte at a time.
CodePoint decode_utf8(std::string_view s, std::size_t pos) {
    const auto b0 = static_cast<unsigned char>(s[pos]);
    if (b0 < 0x80) return {b0, 1};
    std::size_t len = 0;
    char32_t cp = 0;
    if ((b0 & 0xE0) == 0xC0) {
        len = 2;
        cp = b0 & 0x1F;
    } else if ((b0 & 0xF0) == 0xE0) {
        len = 3;
        cp = b0 & 0x0F;
    } else if ((b0 & 0xF8) == 0xF0) {
        len = 4;
        cp = b0 & 0x07;
    } else {
        return {0xFFFD, 1};
    }
    if (pos + len > s.size()) return {0xFFFD, 1};
    for (std::size_t i = 1; i < len; ++i) {
        const auto b = static_cast<unsigned char>(s[pos + i]);
        if ((b & 0xC0) != 0x80) return {0xFFFD, 1};
        cp = (cp << 6) | (b & 0x3F);
    }
    return {cp, len};
}

void append_utf8(std::string& out, char32_t cp) {
    if (cp < 0x80) {
        out.push_back(static_cast<char>(cp));
    } else if (cp < 0x800) {
        out.push_back(static_cast<char>(0xC0 | (cp >> 6)));
        out.push_back(static_cast<char>(0x80 | (cp & 0x3F)));
    } else if (cp < 0x10000) {
        out.push_back(static_cast<char>(0xE0 | (cp >> 12)));
        out.push_back(static_cast<char>(0x80 | ((cp >> 6) & 0x3F)));
        out.push_back(static_cast<char>(0x80 | (cp & 0x3F)));
    } else {
        out.push_back(static_cast<char>(0xF0 | (cp >> 18)));
        out.push_back(static_cast<char>(0x80 | ((cp >> 12) & 0x3F)));
        out.push_back(static_cast<char>(0x80 | ((cp >> 6) & 0x3F)));
        out.push_back(static_cast<char>(0x80 | (cp & 0x3F)));
    }
}

// Non-ASCII code points count as alphanumeric unless they fall in one of the
// punctuation, symbol, space or emoji blocks below.
bool is_alnum(char32_t cp) {
    if (cp < 0x80) {
        return (cp >= '0' && cp <= '9') || (cp >= 'a' && cp <= 'z') || (cp >= 'A' && cp <= 'Z');
    }
    if (cp <= 0xBF) {
        switch (cp) {
        case 0xAA: case 0xB2: case 0xB3: case 0xB5: case 0xB9: case 0xBA:
        case 0xBC: case 0xBD: case 0xBE:
            return true;
        default:
            return false;
        }
    }
    if (cp == 0xD7 || cp == 0xF7 || cp == 0xFFFD) return false;
    struct Range { char32_t lo, hi; };
    static constexpr Range separators[] = {
        {0x037E, 0x037E}, {0x0387, 0x0387}, {0x055A, 0x055F}, {0x0589, 0x058A},
        {0x05BE, 0x05BE}, {0x05C0, 0x05C0}, {0x05C3, 0x05C3}, {0x05F3, 0x05F4},
        {0x060C, 0x060D}, {0x061B, 0x061F}, {0x066A, 0x066D}, {0x06D4, 0x06D4},
        {0x0964, 0x0965}, {0x0E4F, 0x0E4F}, {0x0E5A, 0x0E5B}, {0x1680, 0x1680},
        {0x2000, 0x206F}, {0x20A0, 0x20CF}, {0x2190, 0x2BFF}, {0x2E00, 0x2E7F},
        {0x3000, 0x3004}, {0x3008, 0x3020}, {0x3030, 0x3030}, {0xFE00, 0xFE1F},
        {0xFE30, 0xFE6F}, {0xFEFF, 0xFEFF}, {0xFF00, 0xFF0F}, {0xFF1A, 0xFF20},
        {0xFF3B, 0xFF40}, {0xFF5B, 0xFF65}, {0xFFF0, 0xFFFF}, {0x1F000, 0x1FAFF},
        {0xE0000, 0xE007F},
    };
    for (const auto& r : separators) {
        if (cp >= r.lo && cp <= r.hi) return false;
    }
    return true;
}

bool is_apostrophe(char32_t cp) { return cp == U'\'' || cp == 0x2019; }

// Simple case mapping for ASCII, Latin-1, Greek and Cyrillic capitals.
char32_t to_lower(char32_t cp) {
    if (cp >= 'A' && cp <= 'Z') return cp + 32;
    if (cp < 0xC0) return cp;
    if (cp <= 0xDE && cp != 0xD7) return cp + 0x20;
    if (cp >= 0x391 && cp <= 0x3A9 && cp != 0x3A2) return cp + 0x20;
    if (cp >= 0x410 && cp <= 0x42F) return cp + 0x20;
    if (cp >= 0x400 && cp <= 0x40F) return cp + 0x50;
    return cp;
}

void flush_token(std::string& current, std::vector<std::string>& out) {
    const auto first = current.find_first_not_of('_');
    if (first != std::string::npos) {
        const auto last = current.find_last_not_of('_');
        out.emplace_back(current.substr(first, last - first + 1));
    }
    current.clear();
}

void apply_stopwords(std::vector<std::string>& tokens,
                     const std::optional<std::set<std::string>>& stopwords) {
    if (stopwords) {
        std::erase_if(tokens, [&](const std::string& t) { return stopwords->count(t) > 0; });
    }
}

std::string lowercase_utf8(std::string_view s) {
    std::string out;
    out.reserve(s.size());
    for (std::size_t pos = 0; pos < s.size();) {
        const auto cp = decode_utf8(s, pos);
        if (cp.value == 0xFFFD && cp.length == 1 && static_cast<unsigned char>(s[pos]) >= 0x80) {
            out.push_back(s[pos]);
        } else {
            append_utf8(out, to_lower(cp.value));
        }
        pos += cp.length;
    }
    return out;
}

} // namespace

std::vector<std::string> tokenize(std::string_view text, bool lowercase) {
    std::vector<CodePoint> cps;
    cps.reserve(text.size());
    for (std::size_t pos = 0; pos < text.size();) {
        auto cp = decode_utf8(text, pos);
        pos += cp.length;
        cps.push_back(cp);
    }

    std::vector<std::string> out;
    std::string current;
    for (std::size_t i = 0; i < cps.size(); ++i) {
        char32_t cp = cps[i].value;
        if (lowercase) cp = to_lower(cp);
        if (is_alnum(cp) || cp == U'_') {
            append_utf8(current, cp);
        } else if (is_apostrophe(cp) && i > 0 && i + 1 < cps.size() && is_alnum(cps[i - 1].value) &&
                   is_alnum(cps[i + 1].value)) {
            append_utf8(current, cp);
        } else {
            flush_token(current, out);
        }
    }
    flush_token(current, out);
    return out;
}

LabeledCorpus::LabeledCorpus(std::vector<Document> documents) : documents_(std::move(documents)) {
    std::unordered_set<std::string> ids;
    for (auto& doc : documents_) {
        if (doc.id.empty()) throw Error(ErrorKind::parse, "document with empty id");
        if (!ids.insert(doc.id).second) throw Error(ErrorKind::duplicate_id, doc.id);
        if (doc.label) {
            if (*doc.label == 1) {
                ++n_true_;
            } else if (*doc.label == 0) {
                ++n_false_;
            } else {
                throw Error(ErrorKind::invalid_label,
                            "document " + doc.id + " has label " + std::to_string(*doc.label));
            }
        }
        doc.token_set = std::set<std::string>(doc.tokens.begin(), doc.tokens.end());
    }
}

LabeledCorpus parse_corpus(std::string_view content, bool lowercase,
                           const std::optional<std::set<std::string>>& stopwords) {
    using nlohmann::json;
    std::vector<Document> docs;
    std::unordered_set<std::string> ids;
    std::size_t line_no = 0;
    std::size_t start = 0;
    while (start <= content.size()) {
        auto end = content.find('\n', start);
        if (end == std::string_view::npos) end = content.size();
        auto line = content.substr(start, end - start);
        start = end + 1;
        ++line_no;
        if (line.find_first_not_of(" \t\r") == std::string_view::npos) {
            if (end == content.size()) break;
            continue;
        }
        const auto where = "line " + std::to_string(line_no);
        json record;
        try {
            record = json::parse(line);
        } catch (const json::parse_error& e) {
            throw Error(ErrorKind::parse, where + ": " + e.what());
        }
        if (!record.is_object()) throw Error(ErrorKind::parse, where + ": record is not an object");
        if (!record.contains("id") || !record["id"].is_string()) {
            throw Error(ErrorKind::parse, where + ": missing string field \"id\"");
        }
        Document doc;
        doc.id = record["id"].get<std::string>();
        if (!ids.insert(doc.id).second) throw Error(ErrorKind::duplicate_id, where + ": " + doc.id);

        const bool has_text = record.contains("text");
        const bool has_tokens = record.contains("tokens");
        if (has_text == has_tokens) {
            throw Error(ErrorKind::parse, where + ": exactly one of \"text\" or \"tokens\" required");
        }
        if (has_text) {
            if (!record["text"].is_string()) throw Error(ErrorKind::parse, where + ": \"text\" must be a string");
            doc.tokens = tokenize(record["text"].get<std::string>(), lowercase);
        } else {
            const auto& arr = record["tokens"];
            if (!arr.is_array()) throw Error(ErrorKind::parse, where + ": \"tokens\" must be an array");
            for (const auto& tok : arr) {
                if (!tok.is_string()) throw Error(ErrorKind::parse, where + ": non-string token");
                auto t = tok.get<std::string>();
                if (t.empty()) continue;
                doc.tokens.push_back(lowercase ? lowercase_utf8(t) : std::move(t));
            }
        }
        if (record.contains("label") && !record["label"].is_null()) {
            const auto& label = record["label"];
            if (!label.is_number_integer() && !label.is_boolean()) {
                throw Error(ErrorKind::invalid_label, where + ": label must be 0 or 1");
            }
            const long long value = label.is_boolean() ? (label.get<bool>() ? 1 : 0) : label.get<long long>();
            if (value != 0 && value != 1) {
                throw Error(ErrorKind::invalid_label, where + ": label " + std::to_string(value));
            }
            doc.label = static_cast<int>(value);
        }
        apply_stopwords(doc.tokens, stopwords);
        docs.push_back(std::move(doc));
    }
    return LabeledCorpus(std::move(docs));
}

std::string read_file(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw Error(ErrorKind::io, "cannot open " + path.string());
    std::ostringstream ss;
    ss << in.rdbuf();
    if (in.bad()) throw Error(ErrorKind::io, "cannot read " + path.string());
    return ss.str();
}

LabeledCorpus load_corpus(const std::filesystem::path& path, bool lowercase,
                          const std::optional<std::set<std::string>>& stopwords) {
    return parse_corpus(read_file(path), lowercase, stopwords);
}

std::vector<std::string> parse_token_list(std::string_view content) {
    std::vector<std::string> out;
    std::size_t start = 0;
    while (start < content.size()) {
        auto end = content.find('\n', start);
        if (end == std::string_view::npos) end = content.size();
        auto line = content.substr(start, end - start);
        start = end + 1;
        const auto first = line.find_first_not_of(" \t\r");
        if (first == std::string_view::npos) continue;
        const auto last = line.find_last_not_of(" \t\r");
        line = line.substr(first, last - first + 1);
        if (line.front() == '#') continue;
        out.emplace_back(line);
    }
    return out;
}

std::vector<std::string> load_token_list(const std::filesystem::path& path) {
    return parse_token_list(read_file(path));
}

std::map<std::string, std::size_t> document_frequencies(const LabeledCorpus& corpus) {
    if (corpus.empty()) throw Error(ErrorKind::empty_input, "corpus has no documents");
    std::map<std::string, std::size_t> df;
    for (const auto& doc : corpus.documents()) {
        for (const auto& token : doc.token_set) ++df[token];
    }
    return df;
}

} // namespace lgde
