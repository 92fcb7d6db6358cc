#pragma once

#include <cstddef>
#include <filesystem>
#include <optional>
#include <ostream>
#include <string>
#include <string_view>
#include <vector>

#include "lgde/similarity.hpp"
#include "lgde/vector_store.hpp"

namespace lgde {

struct Neighbor {
    std::size_t index;
    double weight;
};

struct WeightedEdge {
    std::size_t a;
    std::size_t b;
    double weight;
};

// Sparse undirected weighted graph over a vocabulary. Adjacency lists are
// sorted by neighbour index; no self-loops, symmetric weights.
class SemanticGraph {
public:
    // Edges are deduplicated per unordered pair; a repeated pair with a
    // different weight, a self-loop or an out-of-range index throws.
    SemanticGraph(Vocabulary vocabulary, const std::vector<WeightedEdge>& edges);

    std::size_t size() const { return adjacency_.size(); }
    const Vocabulary& vocabulary() const { return vocab_; }
    const std::vector<Neighbor>& neighbors(std::size_t i) const { return adjacency_.at(i); }
    std::size_t degree(std::size_t i) const { return adjacency_.at(i).size(); }
    std::size_t edge_count() const { return edge_count_; }
    std::optional<double> weight(std::size_t i, std::size_t j) const;
    bool has_edge(std::size_t i, std::size_t j) const { return weight(i, j).has_value(); }

    // Edges with a < b, ordered by (a, b).
    std::vector<WeightedEdge> edges() const;

    std::size_t isolated_count() const;
    std::size_t component_count() const;

    // Construction metadata; unset for graphs built from explicit edges.
    std::optional<std::size_t> k;
    std::optional<double> delta;
    // Nodes whose k-th neighbour distance was zero (duplicate vectors).
    std::vector<std::size_t> zero_distance_nodes;

private:
    Vocabulary vocab_;
    std::vector<std::vector<Neighbor>> adjacency_;
    std::size_t edge_count_ = 0;
};

struct KthNeighbor {
    std::size_t index;
    double distance;
    bool zero_distance() const { return distance == 0.0; }
};

// k-th smallest tau in row i, self excluded, ties by ascending index.
KthNeighbor kth_neighbor_distance(const PairwiseMatrices& m, std::size_t i, std::size_t k);

// Continuous k-nearest-neighbour backbone weighted by normalized similarity:
// edge (i, j) iff tau(i,j) < delta * sqrt(d_k(i) * d_k(j)), weight s(i,j).
SemanticGraph build_cknn(const PairwiseMatrices& m, std::size_t k, double delta);

// Breadth-first component of i, sorted ascending.
std::vector<std::size_t> connected_component_of(const SemanticGraph& graph, std::size_t i);

// TSV edge list: "#node\t<token>" lines fix the node order, then
// "token_i\ttoken_j\tweight" with 17 significant digits.
void write_edge_list(std::ostream& out, const SemanticGraph& graph);
std::string format_edge_list(const SemanticGraph& graph);
SemanticGraph parse_edge_list(std::string_view content);
SemanticGraph load_edge_list(const std::filesystem::path& path);

} // namespace lgde
