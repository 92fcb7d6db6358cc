#include "cli_support.hpp"

#include <charconv>
#include <cmath>
#include <cstdio>
#include <cstdlib>

#include "lgde/error.hpp"

namespace lgde::cli {

namespace {

double parse_number(std::string_view s) {
    const auto first = s.find_first_not_of(" \t");
    const auto last = s.find_last_not_of(" \t");
    if (first == std::string_view::npos) throw Error(ErrorKind::invalid_argument, "empty value");
    s = s.substr(first, last - first + 1);
    double v = 0.0;
    auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (ec != std::errc() || ptr != s.data() + s.size() || !std::isfinite(v)) {
        throw Error(ErrorKind::invalid_argument, "not a number: '" + std::string(s) + "'");
    }
    return v;
}

double round_digits(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.12g", v);
    return std::strtod(buf, nullptr);
}

nlohmann::json optional_string(const std::string& s) {
    if (s.empty()) return nullptr;
    return s;
}

void collect(const nlohmann::json& j, const std::string& name, std::vector<std::string> prefix,
             std::vector<CLI::ConfigItem>& out) {
    if (j.is_object()) {
        if (!name.empty()) prefix.push_back(name);
        for (auto it = j.begin(); it != j.end(); ++it) collect(*it, it.key(), prefix, out);
        return;
    }
    if (name.empty()) throw CLI::ConversionError("top-level JSON config must be an object");
    CLI::ConfigItem item;
    item.name = name;
    item.parents = prefix;
    if (j.is_boolean()) {
        item.inputs = {j.get<bool>() ? "true" : "false"};
    } else if (j.is_number()) {
        item.inputs = {j.dump()};
    } else if (j.is_string()) {
        item.inputs = {j.get<std::string>()};
    } else if (j.is_array()) {
        for (const auto& v : j) item.inputs.push_back(v.is_string() ? v.get<std::string>() : v.dump());
    } else if (j.is_null()) {
        return;
    } else {
        throw CLI::ConversionError("unsupported JSON value for " + name);
    }
    out.push_back(std::move(item));
}

} // namespace

std::vector<double> parse_values(std::string_view spec) {
    std::vector<double> out;
    if (spec.find(':') != std::string_view::npos) {
        std::vector<double> parts;
        std::size_t start = 0;
        for (;;) {
            const auto colon = spec.find(':', start);
            parts.push_back(parse_number(spec.substr(start, colon - start)));
            if (colon == std::string_view::npos) break;
            start = colon + 1;
        }
        if (parts.size() < 2 || parts.size() > 3) {
            throw Error(ErrorKind::invalid_argument, "range must be lo:hi or lo:hi:step");
        }
        const double lo = parts[0];
        const double hi = parts[1];
        const double step = parts.size() == 3 ? parts[2] : 1.0;
        if (!(step > 0.0) || hi < lo) throw Error(ErrorKind::invalid_argument, "empty or invalid range '" + std::string(spec) + "'");
        const auto count = static_cast<std::size_t>(std::floor((hi - lo) / step + 1e-9)) + 1;
        if (count > 1000000) throw Error(ErrorKind::invalid_argument, "range has too many values");
        for (std::size_t i = 0; i < count; ++i) out.push_back(round_digits(lo + static_cast<double>(i) * step));
        return out;
    }
    std::size_t start = 0;
    for (;;) {
        const auto comma = spec.find(',', start);
        out.push_back(parse_number(spec.substr(start, comma - start)));
        if (comma == std::string_view::npos) break;
        start = comma + 1;
    }
    return out;
}

nlohmann::json to_json(const RunConfig& c) {
    nlohmann::json j;
    j["subcommand"] = c.subcommand;
    j["method"] = optional_string(c.method);
    j["inputs"] = {{"embeddings", optional_string(c.embeddings)},
                   {"seeds", optional_string(c.seeds)},
                   {"corpus", optional_string(c.corpus)},
                   {"test_corpus", optional_string(c.test_corpus)},
                   {"graph", optional_string(c.graph)},
                   {"stopwords", optional_string(c.stopwords)},
                   {"dictionary", optional_string(c.dictionary)},
                   {"filter_corpus", optional_string(c.filter_corpus)},
                   {"sample_a", optional_string(c.sample_a)},
                   {"sample_b", optional_string(c.sample_b)}};
    j["outputs"] = {{"out", optional_string(c.out)},
                    {"report", optional_string(c.report)},
                    {"dictionary_out", optional_string(c.dictionary_out)},
                    {"tsv", optional_string(c.tsv)}};
    j["loading"] = {{"allow_duplicates", c.allow_duplicates},
                    {"min_norm", c.min_norm},
                    {"lowercase", !c.no_lowercase},
                    {"min_df", c.min_df},
                    {"max_df_fraction", c.max_df_fraction}};
    j["params"] = {{"k", optional_string(c.k)},
                   {"t", optional_string(c.t)},
                   {"delta", optional_string(c.delta)},
                   {"epsilon", optional_string(c.epsilon)},
                   {"window", optional_string(c.window)},
                   {"top_k", optional_string(c.top_k)},
                   {"max_size", optional_string(c.max_size)},
                   {"damping", optional_string(c.damping)},
                   {"max_iterations", optional_string(c.max_iterations)}};
    j["evaluation"] = {{"min_discovered", c.min_discovered},
                       {"max_discovered", c.max_discovered == std::numeric_limits<std::size_t>::max()
                                              ? nlohmann::json(nullptr)
                                              : nlohmann::json(c.max_discovered)},
                       {"discovered_only", c.discovered_only},
                       {"lr", c.lr},
                       {"haldane", c.haldane},
                       {"alternative", c.alternative},
                       {"mwu_method", c.mwu_method}};
    return j;
}

std::string JsonConfig::to_config(const CLI::App* app, bool default_also, bool, std::string) const {
    nlohmann::json j = nlohmann::json::object();
    for (const CLI::Option* opt : app->get_options({})) {
        if (opt->get_lnames().empty() || !opt->get_configurable()) continue;
        const auto& name = opt->get_lnames().front();
        if (opt->count() > 0) {
            const auto results = opt->results();
            j[name] = results.size() == 1 ? nlohmann::json(results.front()) : nlohmann::json(results);
        } else if (default_also && !opt->get_default_str().empty()) {
            j[name] = opt->get_default_str();
        }
    }
    for (const CLI::App* sub : app->get_subcommands({})) {
        auto nested = nlohmann::json::parse(to_config(sub, default_also, false, ""));
        if (!nested.empty()) j[sub->get_name()] = std::move(nested);
    }
    return j.dump(2);
}

std::vector<CLI::ConfigItem> JsonConfig::from_config(std::istream& input) const {
    nlohmann::json j;
    try {
        input >> j;
    } catch (const nlohmann::json::exception& e) {
        throw CLI::ConversionError(std::string("config is not valid JSON: ") + e.what());
    }
    std::vector<CLI::ConfigItem> out;
    collect(j, "", {}, out);
    return out;
}

} // namespace lgde::cli
