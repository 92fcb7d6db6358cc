#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "lgde/cknn.hpp"
#include "lgde/error.hpp"
#include "lgde/similarity.hpp"
#include "oracles.hpp"

using namespace lgde;

namespace {

// Three unit vectors at 120 degrees: all pairwise distances equal.
EmbeddingSpace equilateral() {
    const double h = std::sqrt(3.0) / 2.0;
    return EmbeddingSpace({"a", "b", "c"}, {{1, 0}, {-0.5, h}, {-0.5, -h}});
}

} // namespace

TEST(KthNeighbor, OrderStatistic) {
    // cosines chosen so that tau row 0 = {0.2, 0.5, 0.9, 1.0}·(max) after scaling
    EmbeddingSpace s({"a", "b", "c", "d"}, {{1, 0}, {0.8, 0.6}, {0, 1}, {-1, 0}});
    PairwiseMatrices m(s);
    EXPECT_DOUBLE_EQ(kth_neighbor_distance(m, 0, 1).distance, m.tau(0, 1));
    EXPECT_EQ(kth_neighbor_distance(m, 0, 2).index, 2u);
    EXPECT_DOUBLE_EQ(kth_neighbor_distance(m, 0, 3).distance, 1.0);
    EXPECT_THROW(kth_neighbor_distance(m, 0, 0), Error);
    EXPECT_THROW(kth_neighbor_distance(m, 0, 4), Error);
}

TEST(KthNeighbor, TiesByIndex) {
    auto s = equilateral();
    PairwiseMatrices m(s);
    EXPECT_EQ(kth_neighbor_distance(m, 0, 1).index, 1u);
    EXPECT_EQ(kth_neighbor_distance(m, 0, 2).index, 2u);
    EXPECT_EQ(kth_neighbor_distance(m, 2, 1).index, 0u);
}

TEST(BuildCknn, EquidistantStrict) {
    PairwiseMatrices m(equilateral());
    EXPECT_EQ(build_cknn(m, 1, 1.0).edge_count(), 0u);
    const auto g = build_cknn(m, 1, 1.5);
    EXPECT_EQ(g.edge_count(), 3u);
    EXPECT_EQ(connected_component_of(g, 1), (std::vector<std::size_t>{0, 1, 2}));
}

TEST(BuildCknn, MatchesOracle) {
    std::mt19937_64 rng(41);
    auto s = oracle::random_space(rng, 50, 10);
    PairwiseMatrices m(s);
    const auto g = build_cknn(m, 5, 1.0);
    EXPECT_EQ(oracle::edge_set(g), oracle::cknn_edges(s, 5, 1.0));
    for (const auto& e : g.edges()) EXPECT_NEAR(e.weight, 1.0 - m.tau(e.a, e.b), 1e-12);
    EXPECT_EQ(*g.k, 5u);
    EXPECT_EQ(*g.delta, 1.0);
}

TEST(BuildCknn, Monotone) {
    std::mt19937_64 rng(43);
    auto s = oracle::random_space(rng, 40, 4);
    PairwiseMatrices m(s);
    for (std::size_t k = 1; k < 8; ++k) {
        const auto a = oracle::edge_set(build_cknn(m, k, 1.0));
        const auto b = oracle::edge_set(build_cknn(m, k + 1, 1.0));
        const auto c = oracle::edge_set(build_cknn(m, k, 1.3));
        for (const auto& e : a) {
            EXPECT_TRUE(b.count(e));
            EXPECT_TRUE(c.count(e));
        }
    }
}

TEST(BuildCknn, Duplicates) {
    LoadOptions o;
    o.allow_duplicates = true;
    EmbeddingSpace dup({"a", "b", "c", "d"}, {{1, 0}, {1, 0}, {0, 1}, {-1, 0.2}}, o);
    PairwiseMatrices m(dup);
    const auto g = build_cknn(m, 1, 1.0);
    EXPECT_EQ(g.zero_distance_nodes, (std::vector<std::size_t>{0, 1}));
    EXPECT_EQ(g.degree(0), 0u);
    EXPECT_EQ(g.degree(1), 0u);

    EmbeddingSpace strict({"a", "b", "c"}, {{1, 0}, {0, 1}, {-1, 0.2}});
    EXPECT_NO_THROW(build_cknn(PairwiseMatrices(strict), 1, 1.0));
}

TEST(BuildCknn, ZeroDistanceWithoutPermission) {
    // a and b coincide only after normalization, so the loader must catch it
    EXPECT_THROW(EmbeddingSpace({"a", "b", "c"}, {{1, 0}, {2, 0}, {0, 1}}), Error);
}

TEST(BuildCknn, BadArguments) {
    PairwiseMatrices m(equilateral());
    EXPECT_THROW(build_cknn(m, 0, 1.0), Error);
    EXPECT_THROW(build_cknn(m, 3, 1.0), Error);
    EXPECT_THROW(build_cknn(m, 1, 0.0), Error);
}

TEST(Components, BridgedTriangles) {
    const auto g = oracle::make_graph(
        7, {{0, 1, 1}, {1, 2, 1}, {0, 2, 1}, {3, 4, 1}, {4, 5, 1}, {3, 5, 1}, {2, 3, 0.5}});
    for (std::size_t i = 0; i < 6; ++i) {
        EXPECT_EQ(connected_component_of(g, i), (std::vector<std::size_t>{0, 1, 2, 3, 4, 5}));
    }
    EXPECT_EQ(connected_component_of(g, 6), (std::vector<std::size_t>{6}));
    EXPECT_EQ(g.isolated_count(), 1u);
    EXPECT_EQ(g.component_count(), 2u);
}

TEST(SemanticGraph, Validation) {
    EXPECT_THROW(oracle::make_graph(3, {{0, 0, 1}}), Error);
    EXPECT_THROW(oracle::make_graph(3, {{0, 3, 1}}), Error);
    EXPECT_THROW(oracle::make_graph(3, {{0, 1, 1}, {1, 0, 0.5}}), Error);
    const auto g = oracle::make_graph(3, {{0, 1, 0.5}, {1, 0, 0.5}});
    EXPECT_EQ(g.edge_count(), 1u);
    EXPECT_EQ(*g.weight(1, 0), 0.5);
    EXPECT_FALSE(g.has_edge(0, 2));
}

TEST(EdgeList, RoundTrip) {
    std::mt19937_64 rng(47);
    auto s = oracle::random_space(rng, 30, 5);
    PairwiseMatrices m(s);
    const auto g = build_cknn(m, 4, 1.0);
    const auto text = format_edge_list(g);
    EXPECT_EQ(text.rfind("# N=30 k=4 delta=1\n", 0), 0u);
    const auto back = parse_edge_list(text);
    EXPECT_EQ(back.size(), g.size());
    EXPECT_EQ(back.vocabulary().tokens(), g.vocabulary().tokens());
    const auto e1 = g.edges();
    const auto e2 = back.edges();
    ASSERT_EQ(e1.size(), e2.size());
    for (std::size_t i = 0; i < e1.size(); ++i) {
        EXPECT_EQ(e1[i].a, e2[i].a);
        EXPECT_EQ(e1[i].b, e2[i].b);
        EXPECT_EQ(e1[i].weight, e2[i].weight);
    }
    EXPECT_EQ(format_edge_list(back), text);
}

TEST(EdgeList, PlainTsvWithoutNodeLines) {
    const auto g = parse_edge_list("x\ty\t0.5\ny\tz\t0.25\n");
    EXPECT_EQ(g.size(), 3u);
    EXPECT_EQ(*g.weight(*g.vocabulary().index_of("z"), *g.vocabulary().index_of("y")), 0.25);
    EXPECT_THROW(parse_edge_list("x\ty\n"), Error);
    EXPECT_THROW(parse_edge_list("x\ty\tnope\n"), Error);
}
