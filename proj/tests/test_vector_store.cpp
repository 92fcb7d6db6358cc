#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "lgde/error.hpp"
#include "lgde/vector_store.hpp"
#include "oracles.hpp"

using namespace lgde;

namespace {

ErrorKind kind_of(const std::function<void()>& f) {
    try {
        f();
    } catch (const Error& e) {
        return e.kind();
    }
    ADD_FAILURE() << "expected lgde::Error";
    return ErrorKind::invalid_argument;
}

} // namespace

TEST(EmbeddingSpace, NormalizesRows) {
    EmbeddingSpace s({"a", "b", "c"}, {{2, 0}, {0, 3}, {1, 1}});
    EXPECT_EQ(s.size(), 3u);
    EXPECT_EQ(s.dim(), 2u);
    EXPECT_DOUBLE_EQ(s.row(0)[0], 1.0);
    EXPECT_DOUBLE_EQ(s.row(1)[1], 1.0);
    EXPECT_NEAR(s.row(2)[0], 0.70710678118654752, 1e-15);
    EXPECT_NEAR(s.row(2)[1], 0.70710678118654752, 1e-15);
}

TEST(EmbeddingSpace, UnitNormsAndIdempotence) {
    std::mt19937_64 rng(3);
    const auto rows = oracle::random_rows(rng, 40, 7);
    EmbeddingSpace s(oracle::names(40), rows);
    std::vector<std::vector<double>> again;
    for (std::size_t i = 0; i < s.size(); ++i) {
        double n = 0.0;
        for (double x : s.row(i)) n += x * x;
        EXPECT_NEAR(std::sqrt(n), 1.0, 1e-9);
        again.emplace_back(s.row(i).begin(), s.row(i).end());
    }
    EmbeddingSpace t(oracle::names(40), again);
    for (std::size_t i = 0; i < s.size(); ++i) {
        for (std::size_t d = 0; d < s.dim(); ++d) EXPECT_NEAR(t.row(i)[d], s.row(i)[d], 1e-12);
    }
}

TEST(EmbeddingSpace, Errors) {
    EXPECT_EQ(kind_of([] { EmbeddingSpace({"a", "b"}, {{1, 0}, {1, 0, 0}}); }), ErrorKind::dimension_mismatch);
    EXPECT_EQ(kind_of([] { EmbeddingSpace({"a", "b"}, {{1, 0}, {0, 0}}); }), ErrorKind::zero_norm);
    EXPECT_EQ(kind_of([] { EmbeddingSpace({"a", "a"}, {{1, 0}, {0, 1}}); }), ErrorKind::duplicate_token);
    EXPECT_EQ(kind_of([] { EmbeddingSpace({"a", "b"}, {{1, 0}, {2, 0}}); }), ErrorKind::duplicate_vector);
    EXPECT_EQ(kind_of([] { EmbeddingSpace({"a"}, {{1, 0}}); }), ErrorKind::degenerate_space);
    LoadOptions dup;
    dup.allow_duplicates = true;
    EXPECT_NO_THROW(EmbeddingSpace({"a", "b"}, {{1, 0}, {2, 0}}, dup));
}

TEST(EmbeddingSpace, MinNorm) {
    LoadOptions o;
    o.min_norm = 0.5;
    EXPECT_THROW(EmbeddingSpace({"a", "b"}, {{1, 0}, {0.1, 0}}, o), Error);
}

TEST(LoadEmbeddings, Word2VecHeader) {
    const auto s = parse_embeddings("3 2\nx 1 0\ny 0 2\nz 1 1\n");
    EXPECT_EQ(s.size(), 3u);
    EXPECT_EQ(s.word(1), "y");
    EXPECT_EQ(*s.index_of("z"), 2u);
}

TEST(LoadEmbeddings, HeaderlessGlove) {
    const auto s = parse_embeddings("x 1 0 0\ny 0 2 0\n");
    EXPECT_EQ(s.size(), 2u);
    EXPECT_EQ(s.dim(), 3u);
}

TEST(LoadEmbeddings, HeaderCountMismatch) {
    EXPECT_THROW(parse_embeddings("4 2\nx 1 0\ny 0 2\n"), Error);
    EXPECT_THROW(parse_embeddings("2 3\nx 1 0\ny 0 2\n"), Error);
}

TEST(LoadEmbeddings, RaggedRows) {
    EXPECT_EQ(kind_of([] { parse_embeddings("x 1 0\ny 0 2 1\n"); }), ErrorKind::dimension_mismatch);
}

TEST(LoadEmbeddings, RoundTripLookup) {
    const auto s = parse_embeddings("great_replacement 3 4\nhello 0 1\n");
    const auto i = *s.index_of("great_replacement");
    EXPECT_NEAR(s.row(i)[0], 0.6, 1e-15);
    EXPECT_NEAR(s.row(i)[1], 0.8, 1e-15);
}

TEST(LoadEmbeddings, MissingFile) {
    EXPECT_EQ(kind_of([] { load_embeddings("/nonexistent/file.txt"); }), ErrorKind::io);
}

TEST(ResolveSeeds, OrderDedupUnresolved) {
    Vocabulary v({"a", "b", "c"});
    const auto s = resolve_seeds(v, {"c", "x", "a", "c", "y", "x"});
    EXPECT_EQ(s.seeds, (std::vector<std::string>{"c", "a"}));
    EXPECT_EQ(s.resolved_indices, (std::vector<std::size_t>{2, 0}));
    EXPECT_EQ(s.unresolved, (std::vector<std::string>{"x", "y"}));
}

TEST(ResolveSeeds, AllPresent) {
    Vocabulary v({"a", "b"});
    EXPECT_TRUE(resolve_seeds(v, {"a", "b"}).unresolved.empty());
}

TEST(ResolveSeeds, CountsAtScale) {
    std::vector<std::string> vocab;
    std::vector<std::string> wanted;
    for (int i = 0; i < 109; ++i) {
        vocab.push_back("in" + std::to_string(i));
        wanted.push_back("in" + std::to_string(i));
    }
    for (int i = 0; i < 106; ++i) wanted.push_back("out" + std::to_string(i));
    const auto s = resolve_seeds(Vocabulary(vocab), wanted);
    EXPECT_EQ(s.size(), 109u);
    EXPECT_EQ(s.unresolved.size(), 106u);
}

TEST(ResolveSeeds, NoneResolve) {
    Vocabulary v({"a"});
    EXPECT_EQ(kind_of([&] { resolve_seeds(v, {"x"}); }), ErrorKind::unresolved_seeds);
}

namespace {

LabeledCorpus df_corpus(std::size_t n_docs, std::size_t with_token) {
    std::vector<Document> docs;
    for (std::size_t i = 0; i < n_docs; ++i) {
        Document d;
        d.id = std::to_string(i);
        d.tokens = {"common"};
        if (i < with_token) d.tokens.push_back("target");
        docs.push_back(d);
    }
    return LabeledCorpus(docs);
}

} // namespace

TEST(FilterVocabulary, Boundaries) {
    EXPECT_TRUE(filter_vocabulary(df_corpus(100, 15), 15, 0.8).count("target"));
    EXPECT_FALSE(filter_vocabulary(df_corpus(100, 14), 15, 0.8).count("target"));
    EXPECT_FALSE(filter_vocabulary(df_corpus(100, 15), 15, 0.8).count("common"));
    EXPECT_TRUE(filter_vocabulary(df_corpus(100, 80), 1, 0.8).count("target"));
    EXPECT_FALSE(filter_vocabulary(df_corpus(100, 81), 1, 0.8).count("target"));
}

TEST(FilterVocabulary, Monotone) {
    std::mt19937_64 rng(11);
    std::vector<Document> docs;
    for (int i = 0; i < 60; ++i) {
        Document d;
        d.id = std::to_string(i);
        for (int j = 0; j < 5; ++j) d.tokens.push_back("t" + std::to_string(rng() % 30));
        docs.push_back(d);
    }
    LabeledCorpus c(docs);
    for (std::size_t lo = 1; lo < 10; ++lo) {
        const auto a = filter_vocabulary(c, lo, 0.5);
        const auto b = filter_vocabulary(c, lo + 1, 0.5);
        const auto narrower = filter_vocabulary(c, lo, 0.3);
        for (const auto& t : b) EXPECT_TRUE(a.count(t));
        for (const auto& t : narrower) EXPECT_TRUE(a.count(t));
    }
}

TEST(FilterVocabulary, Errors) {
    EXPECT_THROW(filter_vocabulary(LabeledCorpus{}, 1, 0.8), Error);
    EXPECT_THROW(filter_vocabulary(df_corpus(3, 1), 0, 0.8), Error);
    EXPECT_THROW(filter_vocabulary(df_corpus(3, 1), 1, 0.0), Error);
}

TEST(EmbeddingSpace, Subset) {
    EmbeddingSpace s({"a", "b", "c"}, {{1, 0}, {0, 1}, {1, 1}});
    const auto t = s.subset({"c", "a"});
    EXPECT_EQ(t.vocabulary().tokens(), (std::vector<std::string>{"a", "c"}));
    EXPECT_DOUBLE_EQ(t.row(1)[0], s.row(2)[0]);
}
