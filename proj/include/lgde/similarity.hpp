#pragma once

#include <cstddef>
#include <ostream>
#include <span>
#include <vector>

#include "lgde/vector_store.hpp"

namespace lgde {

// <u,v> / (|u| |v|), clamped to [-1, 1].
double cosine_similarity(std::span<const double> u, std::span<const double> v);

// Dot product clamped to [-1, 1]; rows of an EmbeddingSpace are unit length.
double unit_cosine(std::span<const double> u, std::span<const double> v);

// Dense symmetric N x N normalized cosine distances (tau) and similarities (s = 1 - tau).
class PairwiseMatrices {
public:
    explicit PairwiseMatrices(const EmbeddingSpace& space);

    std::size_t size() const { return n_; }
    double tau(std::size_t i, std::size_t j) const { return tau_[i * n_ + j]; }
    double s(std::size_t i, std::size_t j) const { return 1.0 - tau_[i * n_ + j]; }
    std::span<const double> tau_row(std::size_t i) const { return {tau_.data() + i * n_, n_}; }

    // max over all pairs of (1 - cos); tau = (1 - cos) / max_raw_distance.
    double max_raw_distance() const { return max_raw_; }
    bool duplicates_allowed() const { return duplicates_allowed_; }
    const Vocabulary& vocabulary() const { return vocab_; }

private:
    std::size_t n_ = 0;
    std::vector<double> tau_;
    double max_raw_ = 0.0;
    bool duplicates_allowed_ = false;
    Vocabulary vocab_;
};

enum class MatrixKind { tau, similarity };

// Debug export: header row of tokens, then one row per token.
void write_matrix_tsv(std::ostream& out, const PairwiseMatrices& m, MatrixKind kind);

} // namespace lgde
