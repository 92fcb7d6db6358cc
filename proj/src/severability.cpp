#include "lgde/severability.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <string>

#include "lgde/error.hpp"

namespace lgde {

namespace {

constexpr double kPowerTolerance = 1e-12;
constexpr int kPowerMaxIterations = 100000;
constexpr double kUnderflowMass = 1e-300;

std::size_t position_of(std::span<const std::size_t> sorted, std::size_t v) {
    auto it = std::lower_bound(sorted.begin(), sorted.end(), v);
    if (it == sorted.end() || *it != v) return sorted.size();
    return static_cast<std::size_t>(it - sorted.begin());
}

std::vector<std::size_t> component_in_kernel(const WalkKernel& kernel, std::size_t seed) {
    std::vector<char> seen(kernel.size(), 0);
    std::deque<std::size_t> queue{seed};
    seen[seed] = 1;
    std::vector<std::size_t> out;
    while (!queue.empty()) {
        const auto v = queue.front();
        queue.pop_front();
        out.push_back(v);
        for (const auto& nb : kernel.row(v)) {
            if (!seen[nb.index]) {
                seen[nb.index] = 1;
                queue.push_back(nb.index);
            }
        }
    }
    std::sort(out.begin(), out.end());
    return out;
}

Community make_community(std::vector<std::size_t> members, std::size_t seed, int t, const SeverabilityScore& s) {
    Community c;
    c.members = std::move(members);
    c.seed = seed;
    c.t = t;
    c.sigma = s.sigma;
    c.retention = s.retention;
    c.mixing = s.mixing;
    return c;
}

void check_seed(const WalkKernel& kernel, std::size_t seed, int t, std::size_t max_size) {
    if (seed >= kernel.size()) throw Error(ErrorKind::invalid_argument, "seed index out of range");
    if (t < 1) throw Error(ErrorKind::invalid_argument, "Markov time t must be >= 1");
    if (max_size < 1) throw Error(ErrorKind::invalid_argument, "max_size must be >= 1");
}

} // namespace

WalkKernel::WalkKernel(const SemanticGraph& graph) : rows_(graph.size()) {
    for (std::size_t i = 0; i < graph.size(); ++i) {
        double strength = 0.0;
        for (const auto& nb : graph.neighbors(i)) strength += nb.weight;
        if (strength > 0.0) {
            for (const auto& nb : graph.neighbors(i)) {
                if (nb.weight > 0.0) rows_[i].push_back({nb.index, nb.weight / strength});
            }
        }
        if (rows_[i].empty()) isolated_.push_back(i);
    }
}

double WalkKernel::probability(std::size_t i, std::size_t j) const {
    const auto& r = rows_.at(i);
    auto it = std::lower_bound(r.begin(), r.end(), j, [](const Neighbor& nb, std::size_t idx) { return nb.index < idx; });
    return (it != r.end() && it->index == j) ? it->weight : 0.0;
}

bool is_connected(const WalkKernel& kernel, std::span<const std::size_t> sorted_members) {
    if (sorted_members.empty()) return false;
    std::vector<char> seen(sorted_members.size(), 0);
    std::vector<std::size_t> stack{0};
    seen[0] = 1;
    std::size_t reached = 1;
    while (!stack.empty()) {
        const auto a = stack.back();
        stack.pop_back();
        for (const auto& nb : kernel.row(sorted_members[a])) {
            const auto b = position_of(sorted_members, nb.index);
            if (b < sorted_members.size() && !seen[b]) {
                seen[b] = 1;
                ++reached;
                stack.push_back(b);
            }
        }
    }
    return reached == sorted_members.size();
}

namespace {

// A nonnegative Q is nilpotent iff its support digraph has no cycle.
bool support_is_acyclic(const std::vector<double>& q, std::size_t c) {
    std::vector<std::size_t> indegree(c, 0);
    for (std::size_t a = 0; a < c; ++a) {
        for (std::size_t b = 0; b < c; ++b) indegree[b] += q[a * c + b] > 0.0;
    }
    std::vector<std::size_t> ready;
    for (std::size_t b = 0; b < c; ++b) {
        if (indegree[b] == 0) ready.push_back(b);
    }
    std::size_t removed = 0;
    while (!ready.empty()) {
        const std::size_t a = ready.back();
        ready.pop_back();
        ++removed;
        for (std::size_t b = 0; b < c; ++b) {
            if (q[a * c + b] > 0.0 && --indegree[b] == 0) ready.push_back(b);
        }
    }
    return removed == c;
}

} // namespace

std::optional<QuasiStationary> quasi_stationary(const std::vector<double>& q, std::size_t c) {
    if (support_is_acyclic(q, c)) return std::nullopt;
    // The iterate is averaged with its normalized image under Q, i.e. the map
    // x -> (x + xQ / |xQ|) / 2. It shares Q's left Perron vector but damps the
    // oscillation that plain power iteration shows on periodic (bipartite) Q.
    std::vector<double> x(c, 1.0 / static_cast<double>(c));
    std::vector<double> y(c);
    double prev_diff = 0.0;
    bool converged = false;
    for (int iter = 0; iter < kPowerMaxIterations; ++iter) {
        std::fill(y.begin(), y.end(), 0.0);
        for (std::size_t a = 0; a < c; ++a) {
            const double xa = x[a];
            if (xa == 0.0) continue;
            const double* qa = q.data() + a * c;
            for (std::size_t b = 0; b < c; ++b) y[b] += xa * qa[b];
        }
        double mass = 0.0;
        for (double v : y) mass += v;
        if (!(mass >= kUnderflowMass)) return std::nullopt;

        double total = 0.0;
        for (std::size_t b = 0; b < c; ++b) {
            y[b] = 0.5 * (x[b] + y[b] / mass);
            total += y[b];
        }
        double diff = 0.0;
        for (std::size_t b = 0; b < c; ++b) {
            y[b] /= total;
            diff += std::abs(y[b] - x[b]);
        }
        x.swap(y);

        // Stop once the step is below tolerance and the geometric tail
        // estimate of the remaining error is too, or the step hits rounding.
        const double ratio = (iter > 0 && prev_diff > 0.0) ? std::min(diff / prev_diff, 0.999999) : 0.5;
        prev_diff = diff;
        if (diff < kPowerTolerance && (diff * ratio / (1.0 - ratio) < 0.1 * kPowerTolerance ||
                                       diff <= 1e-16 * static_cast<double>(c))) {
            converged = true;
            break;
        }
    }
    return QuasiStationary{std::move(x), converged};
}

SeverabilityScore severability_score(const WalkKernel& kernel, std::span<const std::size_t> members, int t) {
    if (members.empty()) throw Error(ErrorKind::invalid_argument, "community has no members");
    if (t < 1) throw Error(ErrorKind::invalid_argument, "Markov time t must be >= 1");
    std::vector<std::size_t> nodes(members.begin(), members.end());
    std::sort(nodes.begin(), nodes.end());
    if (std::adjacent_find(nodes.begin(), nodes.end()) != nodes.end()) {
        throw Error(ErrorKind::invalid_argument, "community members repeat");
    }
    if (nodes.back() >= kernel.size()) throw Error(ErrorKind::invalid_argument, "member index out of range");
    if (!is_connected(kernel, nodes)) {
        throw Error(ErrorKind::disconnected_members, std::to_string(nodes.size()) + " members do not form a connected set");
    }

    const std::size_t c = nodes.size();
    // Sparse rows of Q (positions within `nodes`) and its dense copy.
    std::vector<std::vector<std::pair<std::size_t, double>>> q_rows(c);
    std::vector<double> q_dense(c * c, 0.0);
    for (std::size_t a = 0; a < c; ++a) {
        for (const auto& nb : kernel.row(nodes[a])) {
            const auto b = position_of(nodes, nb.index);
            if (b < c) {
                q_rows[a].emplace_back(b, nb.weight);
                q_dense[a * c + b] = nb.weight;
            }
        }
    }

    // power = Q^t, accumulated as power <- power * Q.
    std::vector<double> power = q_dense;
    std::vector<double> next(c * c);
    for (int step = 1; step < t; ++step) {
        std::fill(next.begin(), next.end(), 0.0);
        for (std::size_t r = 0; r < c; ++r) {
            const double* pr = power.data() + r * c;
            double* nr = next.data() + r * c;
            for (std::size_t a = 0; a < c; ++a) {
                const double v = pr[a];
                if (v == 0.0) continue;
                for (const auto& [b, p] : q_rows[a]) nr[b] += v * p;
            }
        }
        power.swap(next);
    }

    std::vector<double> row_mass(c, 0.0);
    double total = 0.0;
    for (std::size_t r = 0; r < c; ++r) {
        for (std::size_t b = 0; b < c; ++b) row_mass[r] += power[r * c + b];
        total += row_mass[r];
    }

    SeverabilityScore score;
    score.retention = std::clamp(total / static_cast<double>(c), 0.0, 1.0);

    const auto qbar = quasi_stationary(q_dense, c);
    if (!qbar) {
        score.nilpotent = true;
        score.mixing = 0.0;
    } else {
        score.converged = qbar->converged;
        double tv_sum = 0.0;
        for (std::size_t r = 0; r < c; ++r) {
            if (row_mass[r] == 0.0) {
                tv_sum += 1.0;
                continue;
            }
            double l1 = 0.0;
            for (std::size_t b = 0; b < c; ++b) {
                l1 += std::abs(qbar->distribution[b] - power[r * c + b] / row_mass[r]);
            }
            tv_sum += 0.5 * l1;
        }
        score.mixing = std::clamp(1.0 - tv_sum / static_cast<double>(c), 0.0, 1.0);
    }
    score.sigma = 0.5 * (score.retention + score.mixing);
    return score;
}

Community find_community(const WalkKernel& kernel, std::size_t seed, int t, std::size_t max_size) {
    check_seed(kernel, seed, t, max_size);
    if (kernel.is_isolated(seed)) return make_community({seed}, seed, t, SeverabilityScore{});

    std::vector<std::size_t> members{seed};
    SeverabilityScore current = severability_score(kernel, members, t);

    auto with = [](const std::vector<std::size_t>& base, std::size_t v) {
        auto out = base;
        out.insert(std::upper_bound(out.begin(), out.end(), v), v);
        return out;
    };
    auto without = [](const std::vector<std::size_t>& base, std::size_t v) {
        auto out = base;
        out.erase(std::lower_bound(out.begin(), out.end(), v));
        return out;
    };

    while (members.size() < max_size) {
        std::vector<std::size_t> boundary;
        for (auto m : members) {
            for (const auto& nb : kernel.row(m)) boundary.push_back(nb.index);
        }
        std::sort(boundary.begin(), boundary.end());
        boundary.erase(std::unique(boundary.begin(), boundary.end()), boundary.end());
        std::erase_if(boundary, [&](std::size_t v) { return std::binary_search(members.begin(), members.end(), v); });

        std::optional<std::size_t> best;
        SeverabilityScore best_score;
        for (auto v : boundary) {
            const auto s = severability_score(kernel, with(members, v), t);
            if (!best || s.sigma > best_score.sigma + kScoreTolerance) {
                best = v;
                best_score = s;
            }
        }
        if (!best || !(best_score.sigma > current.sigma + kScoreTolerance)) break;
        members = with(members, *best);
        current = best_score;

        for (;;) {
            std::optional<std::size_t> drop;
            SeverabilityScore drop_score;
            for (auto u : members) {
                if (u == seed) continue;
                auto candidate = without(members, u);
                if (!is_connected(kernel, candidate)) continue;
                const auto s = severability_score(kernel, candidate, t);
                if (s.sigma > current.sigma + kScoreTolerance &&
                    (!drop || s.sigma > drop_score.sigma + kScoreTolerance)) {
                    drop = u;
                    drop_score = s;
                }
            }
            if (!drop) break;
            members = without(members, *drop);
            current = drop_score;
        }
    }
    return make_community(std::move(members), seed, t, current);
}

Community brute_force_community(const WalkKernel& kernel, std::size_t seed, int t, std::size_t max_size) {
    check_seed(kernel, seed, t, max_size);
    if (kernel.is_isolated(seed)) return make_community({seed}, seed, t, SeverabilityScore{});

    const auto component = component_in_kernel(kernel, seed);
    if (component.size() > kBruteForceLimit) {
        throw Error(ErrorKind::component_too_large, "component of seed has " + std::to_string(component.size()) +
                                                        " nodes, enumeration limit is " +
                                                        std::to_string(kBruteForceLimit));
    }
    std::vector<std::size_t> others;
    for (auto v : component) {
        if (v != seed) others.push_back(v);
    }

    std::vector<std::size_t> best_members;
    SeverabilityScore best_score;
    bool have_best = false;
    const std::size_t subsets = std::size_t{1} << others.size();
    for (std::size_t mask = 0; mask < subsets; ++mask) {
        std::vector<std::size_t> members{seed};
        for (std::size_t b = 0; b < others.size(); ++b) {
            if (mask & (std::size_t{1} << b)) members.push_back(others[b]);
        }
        if (members.size() > max_size) continue;
        std::sort(members.begin(), members.end());
        if (!is_connected(kernel, members)) continue;
        const auto s = severability_score(kernel, members, t);
        const bool better = !have_best || s.sigma > best_score.sigma + kScoreTolerance ||
                            (std::abs(s.sigma - best_score.sigma) <= kScoreTolerance && members < best_members);
        if (better) {
            best_members = std::move(members);
            best_score = s;
            have_best = true;
        }
    }
    return make_community(std::move(best_members), seed, t, best_score);
}

} // namespace lgde
