#include <gtest/gtest.h>

#include <cmath>
#include <sstream>

#include "cli_support.hpp"
#include "lgde/error.hpp"
#include "lgde/report.hpp"

using namespace lgde;

TEST(DictionaryFile, RoundTrip) {
    Dictionary d;
    d.seeds = {"s1", "s2"};
    d.discovered = {"x", "y"};
    const auto text = format_dictionary(d);
    EXPECT_EQ(text, "# seeds\ns1\ns2\n# discovered\nx\ny\n");
    const auto back = parse_dictionary(text);
    EXPECT_EQ(back.seeds, d.seeds);
    EXPECT_EQ(back.discovered, d.discovered);
    EXPECT_EQ(parse_token_list(text), (std::vector<std::string>{"s1", "s2", "x", "y"}));
}

TEST(DictionaryFile, PlainListIsAllSeeds) {
    const auto f = parse_dictionary("a\nb\n");
    EXPECT_EQ(f.seeds, (std::vector<std::string>{"a", "b"}));
    const auto d = to_dictionary(parse_dictionary("# seeds\na\n# discovered\na\nb\nb\n"));
    EXPECT_EQ(d.discovered, (std::vector<std::string>{"b"}));
}

TEST(Json, LikelihoodSentinels) {
    WordLikelihood w;
    w.token = "x";
    w.lr = std::numeric_limits<double>::infinity();
    EXPECT_EQ(to_json(w)["lr"], "inf");
    w.defined = false;
    EXPECT_TRUE(to_json(w)["lr"].is_null());
}

TEST(Json, DictionaryFields) {
    Dictionary d;
    d.method = Method::knn;
    d.seeds = {"a"};
    d.discovered = {"b"};
    d.params = {{"k", 3}};
    d.provenance["b"].seeds = {"a"};
    const auto j = to_json(d);
    EXPECT_EQ(j["method"], "knn");
    EXPECT_EQ(j["params"]["k"], 3.0);
    EXPECT_EQ(j["provenance"]["b"]["seeds"][0], "a");
    EXPECT_FALSE(j.contains("communities"));
}

TEST(ParseValues, Forms) {
    using lgde::cli::parse_values;
    EXPECT_EQ(parse_values("5"), (std::vector<double>{5}));
    EXPECT_EQ(parse_values("1,2,5"), (std::vector<double>{1, 2, 5}));
    EXPECT_EQ(parse_values("3:6"), (std::vector<double>{3, 4, 5, 6}));
    EXPECT_EQ(parse_values("0.5:0.9:0.1"), (std::vector<double>{0.5, 0.6, 0.7, 0.8, 0.9}));
    EXPECT_EQ(parse_values("-1"), (std::vector<double>{-1}));
    EXPECT_THROW(parse_values("a"), Error);
    EXPECT_THROW(parse_values("3:1"), Error);
    EXPECT_THROW(parse_values("1:2:0"), Error);
    EXPECT_THROW(parse_values("1,,2"), Error);
}

TEST(JsonConfig, NestedSubcommands) {
    lgde::cli::JsonConfig cfg;
    std::istringstream in(R"({"threads": 2, "expand": {"t": 3, "allow-duplicates": true, "k": "1,2"}})");
    const auto items = cfg.from_config(in);
    ASSERT_EQ(items.size(), 4u);
    bool saw_t = false;
    for (const auto& it : items) {
        if (it.name == "t") {
            saw_t = true;
            EXPECT_EQ(it.parents, (std::vector<std::string>{"expand"}));
            EXPECT_EQ(it.inputs, (std::vector<std::string>{"3"}));
        }
        if (it.name == "threads") EXPECT_TRUE(it.parents.empty());
    }
    EXPECT_TRUE(saw_t);
    std::istringstream bad("[1,2]");
    EXPECT_THROW(cfg.from_config(bad), CLI::ConversionError);
}

TEST(RunConfigJson, Stable) {
    lgde::cli::RunConfig c;
    c.subcommand = "expand";
    c.method = "lgde";
    c.t = "2";
    const auto j = lgde::cli::to_json(c);
    EXPECT_EQ(j["params"]["t"], "2");
    EXPECT_TRUE(j["params"]["k"].is_null());
    EXPECT_TRUE(j["evaluation"]["max_discovered"].is_null());
    EXPECT_FALSE(j.contains("threads"));
}
