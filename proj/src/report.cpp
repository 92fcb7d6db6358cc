#include "lgde/report.hpp"

#include <cmath>

#include "lgde/corpus.hpp"

namespace lgde {

namespace {

json ratio_json(double x, bool defined) {
    if (!defined) return nullptr;
    if (std::isinf(x)) return "inf";
    return x;
}

std::string_view trim(std::string_view s) {
    const auto first = s.find_first_not_of(" \t\r");
    if (first == std::string_view::npos) return {};
    const auto last = s.find_last_not_of(" \t\r");
    return s.substr(first, last - first + 1);
}

} // namespace

json to_json(const Provenance& p) {
    json j = json::object();
    if (!p.seeds.empty()) j["seeds"] = p.seeds;
    if (p.round) j["round"] = *p.round;
    if (p.score) j["score"] = *p.score;
    return j;
}

json to_json(const CommunityReport& c) {
    return {{"seed", c.seed},   {"t", c.t},         {"members", c.members},
            {"sigma", c.sigma}, {"retention", c.retention}, {"mixing", c.mixing}};
}

json to_json(const ParamPoint& p) {
    json j = json::object();
    for (const auto& [key, value] : p) j[key] = value;
    return j;
}

json to_json(const Dictionary& d) {
    json j;
    j["method"] = std::string(to_string(d.method));
    j["params"] = to_json(d.params);
    j["seeds"] = d.seeds;
    j["discovered"] = d.discovered;
    json prov = json::object();
    for (const auto& [token, p] : d.provenance) prov[token] = to_json(p);
    j["provenance"] = std::move(prov);
    if (!d.communities.empty()) {
        json cs = json::array();
        for (const auto& c : d.communities) cs.push_back(to_json(c));
        j["communities"] = std::move(cs);
    }
    return j;
}

json to_json(const EvalReport& r) {
    auto scores = [](const ClassScores& s) {
        return json{{"precision", s.precision}, {"recall", s.recall}, {"f1", s.f1}};
    };
    return {{"macro_precision", r.macro_precision},
            {"macro_recall", r.macro_recall},
            {"macro_f1", r.macro_f1},
            {"class_1", scores(r.positive)},
            {"class_0", scores(r.negative)},
            {"confusion", {{"tp", r.confusion.tp}, {"fp", r.confusion.fp}, {"tn", r.confusion.tn}, {"fn", r.confusion.fn}}},
            {"dictionary_size", r.dictionary_size},
            {"discovered_size", r.discovered_size}};
}

json to_json(const WordLikelihood& w) {
    return {{"token", w.token},
            {"count_true", w.count_true},
            {"count_false", w.count_false},
            {"p_true", w.p_true},
            {"p_false", w.p_false},
            {"lr", ratio_json(w.lr, w.defined)}};
}

json to_json(const MannWhitneyResult& r) {
    return {{"u", r.u}, {"p_value", r.p_value}, {"exact", r.exact}, {"zero_variance", r.zero_variance}};
}

json to_json(const SweepEntry& e) {
    return {{"params", to_json(e.params)},
            {"dictionary_size", e.dictionary_size},
            {"discovered_size", e.discovered_size},
            {"admissible", e.admissible},
            {"report", to_json(e.report)}};
}

json to_json(const SweepResult& s) {
    json grid = json::array();
    for (const auto& e : s.entries) grid.push_back(to_json(e));
    return {{"grid", std::move(grid)},
            {"best_index", s.best},
            {"best", to_json(s.entries.at(s.best))},
            {"best_dictionary", to_json(s.best_dictionary)}};
}

std::string format_dictionary(const Dictionary& d) {
    std::string out = "# seeds\n";
    for (const auto& s : d.seeds) out += s + '\n';
    out += "# discovered\n";
    for (const auto& w : d.discovered) out += w + '\n';
    return out;
}

DictionaryFile parse_dictionary(std::string_view content) {
    DictionaryFile out;
    bool in_discovered = false;
    std::size_t start = 0;
    while (start < content.size()) {
        auto end = content.find('\n', start);
        if (end == std::string_view::npos) end = content.size();
        const auto line = trim(content.substr(start, end - start));
        start = end + 1;
        if (line.empty()) continue;
        if (line.front() == '#') {
            const auto marker = trim(line.substr(1));
            if (marker == "discovered") in_discovered = true;
            if (marker == "seeds") in_discovered = false;
            continue;
        }
        (in_discovered ? out.discovered : out.seeds).emplace_back(line);
    }
    return out;
}

DictionaryFile load_dictionary(const std::filesystem::path& path) { return parse_dictionary(read_file(path)); }

Dictionary to_dictionary(const DictionaryFile& file) {
    Dictionary d;
    d.seeds = file.seeds;
    const std::set<std::string> seeds(file.seeds.begin(), file.seeds.end());
    std::set<std::string> seen;
    for (const auto& w : file.discovered) {
        if (!seeds.count(w) && seen.insert(w).second) d.discovered.push_back(w);
    }
    return d;
}

} // namespace lgde
