#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <vector>

#include "lgde/cknn.hpp"

namespace lgde {

// Row-stochastic random-walk transition matrix of a SemanticGraph:
// P(i, j) = A(i, j) / sum_j' A(i, j'). Nodes without positive-weight edges
// have no row and are reported as isolated.
class WalkKernel {
public:
    explicit WalkKernel(const SemanticGraph& graph);

    std::size_t size() const { return rows_.size(); }
    // (index, probability) pairs sorted by index; empty for isolated nodes.
    const std::vector<Neighbor>& row(std::size_t i) const { return rows_.at(i); }
    bool is_isolated(std::size_t i) const { return rows_.at(i).empty(); }
    const std::vector<std::size_t>& isolated() const { return isolated_; }
    double probability(std::size_t i, std::size_t j) const;

private:
    std::vector<std::vector<Neighbor>> rows_;
    std::vector<std::size_t> isolated_;
};

inline WalkKernel walk_kernel(const SemanticGraph& graph) { return WalkKernel(graph); }

struct SeverabilityScore {
    double sigma = 0.0;
    double retention = 0.0;
    double mixing = 0.0;
    // Q^t has no surviving mass left to define a quasi-stationary
    // distribution; mixing is reported as 0.
    bool nilpotent = false;
    // Power iteration for the quasi-stationary distribution hit its cap.
    bool converged = true;
};

// Severability of a connected node set C at Markov time t:
//   retention = 1^T Q^t 1 / |C|
//   mixing    = 1 - mean_i TV(qbar, q_i^(t) / (q_i^(t) 1))
//   sigma     = (retention + mixing) / 2
// where Q is P restricted to C and qbar its quasi-stationary distribution.
SeverabilityScore severability_score(const WalkKernel& kernel, std::span<const std::size_t> members, int t);

// Quasi-stationary distribution of a dense |C| x |C| substochastic matrix,
// by shifted left power iteration from the uniform vector. Returns nullopt
// when Q annihilates the iterate (nilpotent).
struct QuasiStationary {
    std::vector<double> distribution;
    bool converged = true;
};
std::optional<QuasiStationary> quasi_stationary(const std::vector<double>& q, std::size_t c);

struct Community {
    std::vector<std::size_t> members; // sorted ascending, contains seed
    std::size_t seed = 0;
    int t = 1;
    double sigma = 0.0;
    double retention = 0.0;
    double mixing = 0.0;
};

// Scores closer than this are treated as ties by the optimizers.
inline constexpr double kScoreTolerance = 1e-12;

// Greedy add-then-prune local search from {seed}. Each round adds the
// boundary node with the largest strict improvement (ties: lowest index), then
// removes non-seed members one at a time while that strictly improves sigma
// and keeps the set connected. Stops when nothing improves or |C| == max_size.
Community find_community(const WalkKernel& kernel, std::size_t seed, int t, std::size_t max_size);

// Exhaustive search over connected sets containing seed (component <= 16 nodes).
// Ties go to the lexicographically smallest member list.
Community brute_force_community(const WalkKernel& kernel, std::size_t seed, int t, std::size_t max_size);

inline constexpr std::size_t kBruteForceLimit = 16;

// Connectivity of a sorted node set through positive transition probabilities.
bool is_connected(const WalkKernel& kernel, std::span<const std::size_t> sorted_members);

} // namespace lgde
