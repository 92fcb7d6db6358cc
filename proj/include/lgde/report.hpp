#pragma once

#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "lgde/eval.hpp"
#include "lgde/expanders.hpp"
#include "lgde/severability.hpp"

namespace lgde {

using nlohmann::json;

json to_json(const Provenance& p);
json to_json(const CommunityReport& c);
json to_json(const ParamPoint& p);
json to_json(const Dictionary& d);
json to_json(const EvalReport& r);
json to_json(const WordLikelihood& w);
json to_json(const MannWhitneyResult& r);
json to_json(const SweepEntry& e);
json to_json(const SweepResult& s);

// Dictionary text file: "# seeds" section then "# discovered" section,
// one token per line. Read back as a plain token list it yields the full
// dictionary, since both markers are comments.
std::string format_dictionary(const Dictionary& d);

struct DictionaryFile {
    std::vector<std::string> seeds;
    std::vector<std::string> discovered;
};

// Lines before a "# discovered" marker are seeds; other comments are ignored.
DictionaryFile parse_dictionary(std::string_view content);
DictionaryFile load_dictionary(const std::filesystem::path& path);

// Dictionary view of a dictionary file, for evaluation.
Dictionary to_dictionary(const DictionaryFile& file);

} // namespace lgde
