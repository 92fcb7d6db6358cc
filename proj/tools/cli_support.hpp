#pragma once

#include <cstddef>
#include <istream>
#include <limits>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

namespace lgde::cli {

// "5", "1,2,5", "3:8" (step 1) or "0.5:0.9:0.1" (inclusive). Range values are
// rounded to 12 significant digits so 0.1 steps print cleanly.
std::vector<double> parse_values(std::string_view spec);

// Every parameter of a run. Method parameters are kept as strings because the
// sweep accepts value lists where expand accepts a single value.
struct RunConfig {
    std::string subcommand;
    std::string method;

    std::string embeddings;
    std::string seeds;
    std::string corpus;
    std::string test_corpus;
    std::string graph;
    std::string stopwords;
    std::string dictionary;
    std::string filter_corpus;
    std::string sample_a;
    std::string sample_b;

    std::string out;
    std::string report;
    std::string dictionary_out;
    std::string tsv;

    bool allow_duplicates = false;
    double min_norm = 1e-12;
    bool no_lowercase = false;
    std::size_t min_df = 0;
    double max_df_fraction = 1.0;

    std::string k;
    std::string t;
    std::string delta = "1";
    std::string epsilon;
    std::string window = "2";
    std::string top_k = "35";
    std::string max_size = "100";
    std::string damping = "0.85";
    std::string max_iterations = "100";

    std::size_t min_discovered = 0;
    std::size_t max_discovered = std::numeric_limits<std::size_t>::max();
    bool discovered_only = false;
    bool lr = false;
    bool haldane = false;
    std::string alternative = "greater";
    std::string mwu_method = "auto";
};

nlohmann::json to_json(const RunConfig& config);

// Reads CLI11 configuration from JSON: nested objects address subcommands,
// e.g. {"threads": 2, "expand": {"t": 2}}. Command-line flags take precedence.
class JsonConfig : public CLI::Config {
public:
    std::string to_config(const CLI::App* app, bool default_also, bool write_description,
                          std::string prefix) const override;
    std::vector<CLI::ConfigItem> from_config(std::istream& input) const override;
};

} // namespace lgde::cli
