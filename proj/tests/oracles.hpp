#pragma once

// Independent reference implementations used by the unit and acceptance
// tests. Nothing here calls into the library's algorithms; only its plain
// data types are shared.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <map>
#include <numeric>
#include <random>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include <Eigen/Dense>

#include "lgde/cknn.hpp"
#include "lgde/corpus.hpp"
#include "lgde/vector_store.hpp"

namespace oracle {

using EdgeSet = std::set<std::pair<std::size_t, std::size_t>>;
using Rows = std::vector<std::vector<double>>;

inline std::vector<std::string> names(std::size_t n, const std::string& prefix = "w") {
    std::vector<std::string> out;
    for (std::size_t i = 0; i < n; ++i) out.push_back(prefix + std::to_string(i));
    return out;
}

inline Rows random_rows(std::mt19937_64& rng, std::size_t n, std::size_t dim) {
    std::normal_distribution<double> g(0.0, 1.0);
    Rows rows(n, std::vector<double>(dim));
    for (auto& r : rows) {
        for (auto& x : r) x = g(rng);
    }
    return rows;
}

inline lgde::EmbeddingSpace random_space(std::mt19937_64& rng, std::size_t n, std::size_t dim) {
    return lgde::EmbeddingSpace(names(n), random_rows(rng, n, dim));
}

inline double dot(const lgde::EmbeddingSpace& s, std::size_t i, std::size_t j) {
    double d = 0.0;
    const auto a = s.row(i);
    const auto b = s.row(j);
    for (std::size_t x = 0; x < a.size(); ++x) d += a[x] * b[x];
    return std::clamp(d, -1.0, 1.0);
}

// Cosine recomputed from the raw (unnormalized) input rows in long double.
inline long double raw_cosine(const std::vector<double>& a, const std::vector<double>& b) {
    long double ab = 0, aa = 0, bb = 0;
    for (std::size_t i = 0; i < a.size(); ++i) {
        ab += static_cast<long double>(a[i]) * b[i];
        aa += static_cast<long double>(a[i]) * a[i];
        bb += static_cast<long double>(b[i]) * b[i];
    }
    return ab / std::sqrt(aa * bb);
}

inline std::vector<std::vector<double>> tau_matrix(const lgde::EmbeddingSpace& s) {
    const auto n = s.size();
    std::vector<std::vector<double>> raw(n, std::vector<double>(n, 0.0));
    double mx = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = 0; j < n; ++j) {
            if (i == j) continue;
            raw[i][j] = 1.0 - dot(s, std::min(i, j), std::max(i, j));
            mx = std::max(mx, raw[i][j]);
        }
    }
    for (auto& r : raw) {
        for (auto& x : r) x /= mx;
    }
    return raw;
}

// k-th smallest off-diagonal entry of each row by full sort.
inline std::vector<double> kth_distances(const std::vector<std::vector<double>>& d, std::size_t k) {
    std::vector<double> out;
    for (std::size_t i = 0; i < d.size(); ++i) {
        std::vector<double> row;
        for (std::size_t j = 0; j < d.size(); ++j) {
            if (j != i) row.push_back(d[i][j]);
        }
        std::sort(row.begin(), row.end());
        out.push_back(row[k - 1]);
    }
    return out;
}

inline EdgeSet cknn_rule(const std::vector<std::vector<double>>& d, std::size_t k, double delta) {
    const auto dk = kth_distances(d, k);
    EdgeSet out;
    for (std::size_t i = 0; i < d.size(); ++i) {
        for (std::size_t j = i + 1; j < d.size(); ++j) {
            if (d[i][j] < delta * std::sqrt(dk[i] * dk[j])) out.insert({i, j});
        }
    }
    return out;
}

inline EdgeSet cknn_edges(const lgde::EmbeddingSpace& s, std::size_t k, double delta) {
    return cknn_rule(tau_matrix(s), k, delta);
}

// Same rule on plain Euclidean distances between the unit rows.
inline EdgeSet euclidean_cknn_edges(const lgde::EmbeddingSpace& s, std::size_t k, double delta) {
    const auto n = s.size();
    std::vector<std::vector<double>> d(n, std::vector<double>(n, 0.0));
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = 0; j < n; ++j) {
            double acc = 0.0;
            for (std::size_t x = 0; x < s.dim(); ++x) {
                const double diff = s.row(i)[x] - s.row(j)[x];
                acc += diff * diff;
            }
            d[i][j] = std::sqrt(acc);
        }
    }
    return cknn_rule(d, k, delta);
}

inline EdgeSet edge_set(const lgde::SemanticGraph& g) {
    EdgeSet out;
    for (const auto& e : g.edges()) out.insert({e.a, e.b});
    return out;
}

// ---- graphs -------------------------------------------------------------

inline lgde::SemanticGraph make_graph(std::size_t n, const std::vector<lgde::WeightedEdge>& edges) {
    return lgde::SemanticGraph(lgde::Vocabulary(names(n, "v")), edges);
}

// Two m-cliques {0..m-1}, {m..2m-1} joined by the edge (m-1, m).
inline lgde::SemanticGraph barbell(std::size_t m) {
    std::vector<lgde::WeightedEdge> e;
    for (std::size_t side = 0; side < 2; ++side) {
        const std::size_t off = side * m;
        for (std::size_t i = 0; i < m; ++i) {
            for (std::size_t j = i + 1; j < m; ++j) e.push_back({off + i, off + j, 1.0});
        }
    }
    e.push_back({m - 1, m, 1.0});
    return make_graph(2 * m, e);
}

// Connected random graph on n nodes (random tree plus extra edges); weights
// in [0.05, 1] or all ones.
inline std::vector<lgde::WeightedEdge> random_connected_edges(std::mt19937_64& rng, std::size_t n, std::size_t offset,
                                                              bool unit_weights) {
    std::uniform_real_distribution<double> w(0.05, 1.0);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    std::set<std::pair<std::size_t, std::size_t>> seen;
    std::vector<lgde::WeightedEdge> out;
    auto add = [&](std::size_t a, std::size_t b) {
        if (a == b) return;
        if (a > b) std::swap(a, b);
        if (!seen.insert({a, b}).second) return;
        out.push_back({offset + a, offset + b, unit_weights ? 1.0 : w(rng)});
    };
    for (std::size_t i = 1; i < n; ++i) add(i, std::uniform_int_distribution<std::size_t>(0, i - 1)(rng));
    const double p = u(rng) * 0.5;
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = i + 1; j < n; ++j) {
            if (u(rng) < p) add(i, j);
        }
    }
    return out;
}

inline Eigen::MatrixXd adjacency(const lgde::SemanticGraph& g) {
    Eigen::MatrixXd a = Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(g.size()), static_cast<Eigen::Index>(g.size()));
    for (const auto& e : g.edges()) {
        a(static_cast<Eigen::Index>(e.a), static_cast<Eigen::Index>(e.b)) = e.weight;
        a(static_cast<Eigen::Index>(e.b), static_cast<Eigen::Index>(e.a)) = e.weight;
    }
    return a;
}

// Random connected node subset grown from start by repeatedly adding a
// random boundary node.
inline std::vector<std::size_t> random_connected_subset(std::mt19937_64& rng, const Eigen::MatrixXd& a,
                                                        std::size_t start, std::size_t size) {
    std::vector<std::size_t> members{start};
    std::set<std::size_t> in{start};
    while (members.size() < size) {
        std::vector<std::size_t> boundary;
        for (auto m : members) {
            for (Eigen::Index j = 0; j < a.cols(); ++j) {
                if (a(static_cast<Eigen::Index>(m), j) > 0 && !in.count(static_cast<std::size_t>(j))) {
                    boundary.push_back(static_cast<std::size_t>(j));
                }
            }
        }
        if (boundary.empty()) break;
        const auto pick = boundary[std::uniform_int_distribution<std::size_t>(0, boundary.size() - 1)(rng)];
        members.push_back(pick);
        in.insert(pick);
    }
    std::sort(members.begin(), members.end());
    return members;
}

struct DenseSeverability {
    double sigma;
    double retention;
    double mixing;
};

// Dense recomputation: explicit Q^t and the Perron left eigenvector of Q.
inline DenseSeverability dense_severability(const Eigen::MatrixXd& a, const std::vector<std::size_t>& c, int t) {
    const auto n = static_cast<Eigen::Index>(c.size());
    const Eigen::VectorXd deg = a.rowwise().sum();
    Eigen::MatrixXd q(n, n);
    for (Eigen::Index i = 0; i < n; ++i) {
        for (Eigen::Index j = 0; j < n; ++j) {
            const auto ci = static_cast<Eigen::Index>(c[static_cast<std::size_t>(i)]);
            const auto cj = static_cast<Eigen::Index>(c[static_cast<std::size_t>(j)]);
            q(i, j) = a(ci, cj) / deg(ci);
        }
    }
    Eigen::MatrixXd qt = Eigen::MatrixXd::Identity(n, n);
    for (int s = 0; s < t; ++s) qt = qt * q;

    Eigen::EigenSolver<Eigen::MatrixXd> es(q.transpose());
    Eigen::Index best = 0;
    for (Eigen::Index i = 1; i < n; ++i) {
        if (es.eigenvalues()(i).real() > es.eigenvalues()(best).real()) best = i;
    }
    Eigen::VectorXd qbar = es.eigenvectors().col(best).real();
    qbar /= qbar.sum();
    qbar = qbar.cwiseAbs();

    const double dn = static_cast<double>(n);
    const double retention = qt.sum() / dn;
    double tv_sum = 0.0;
    for (Eigen::Index i = 0; i < n; ++i) {
        const Eigen::VectorXd row = qt.row(i).transpose() / qt.row(i).sum();
        tv_sum += 0.5 * (row - qbar).cwiseAbs().sum();
    }
    const double mixing = 1.0 - tv_sum / dn;
    return {(retention + mixing) / 2.0, retention, mixing};
}

// ---- baseline expanders -------------------------------------------------

inline std::set<std::string> threshold(const std::vector<std::string>& words, const Rows& rows,
                                       const std::vector<std::size_t>& seeds, double eps) {
    std::set<std::string> out;
    const std::set<std::size_t> seed_set(seeds.begin(), seeds.end());
    for (std::size_t v = 0; v < words.size(); ++v) {
        if (seed_set.count(v)) continue;
        for (auto s : seeds) {
            if (raw_cosine(rows[s], rows[v]) >= eps) {
                out.insert(words[v]);
                break;
            }
        }
    }
    return out;
}

inline std::set<std::string> knn(const std::vector<std::string>& words, const Rows& rows,
                                 const std::vector<std::size_t>& seeds, std::size_t k) {
    std::set<std::string> out;
    const std::set<std::size_t> seed_set(seeds.begin(), seeds.end());
    for (auto s : seeds) {
        std::vector<std::size_t> others;
        for (std::size_t v = 0; v < words.size(); ++v) {
            if (v != s) others.push_back(v);
        }
        std::stable_sort(others.begin(), others.end(), [&](std::size_t x, std::size_t y) {
            return raw_cosine(rows[s], rows[x]) > raw_cosine(rows[s], rows[y]);
        });
        for (std::size_t r = 0; r < k; ++r) {
            if (!seed_set.count(others[r])) out.insert(words[others[r]]);
        }
    }
    return out;
}

// Step-by-step simulation; returns word -> admission round.
inline std::map<std::string, int> ikea(const std::vector<std::string>& words, const Rows& rows,
                                       const std::vector<std::size_t>& seeds, double eps, int max_iterations) {
    std::set<std::size_t> dict(seeds.begin(), seeds.end());
    std::map<std::string, int> out;
    for (int round = 1; round <= max_iterations; ++round) {
        std::vector<std::size_t> add;
        for (std::size_t v = 0; v < words.size(); ++v) {
            if (dict.count(v)) continue;
            long double total = 0;
            for (auto m : dict) total += raw_cosine(rows[m], rows[v]);
            if (total / static_cast<long double>(dict.size()) >= eps) add.push_back(v);
        }
        if (add.empty()) break;
        for (auto v : add) {
            dict.insert(v);
            out[words[v]] = round;
        }
    }
    return out;
}

// ---- TextRank -----------------------------------------------------------

// Dense PageRank of the seed-document co-occurrence graph, solved directly:
// (I - d W D^-1) r = (1 - d)/n 1.
inline std::map<std::string, double> pagerank(const lgde::LabeledCorpus& corpus, const std::set<std::string>& seeds,
                                              std::size_t window, double damping) {
    std::map<std::pair<std::string, std::string>, double> w;
    for (const auto& doc : corpus.documents()) {
        bool hit = false;
        for (const auto& s : seeds) hit = hit || doc.contains(s);
        if (!hit) continue;
        const auto& tok = doc.tokens;
        for (std::size_t i = 0; i < tok.size(); ++i) {
            for (std::size_t j = i + 1; j < tok.size() && j <= i + window - 1; ++j) {
                if (tok[i] == tok[j]) continue;
                w[{std::min(tok[i], tok[j]), std::max(tok[i], tok[j])}] += 1.0;
            }
        }
    }
    std::map<std::string, Eigen::Index> idx;
    for (const auto& [p, x] : w) {
        idx.emplace(p.first, 0);
        idx.emplace(p.second, 0);
    }
    Eigen::Index n = 0;
    for (auto& [tok, i] : idx) i = n++;
    Eigen::MatrixXd m = Eigen::MatrixXd::Zero(n, n);
    for (const auto& [p, x] : w) {
        m(idx[p.first], idx[p.second]) += x;
        m(idx[p.second], idx[p.first]) += x;
    }
    const Eigen::VectorXd strength = m.colwise().sum();
    for (Eigen::Index j = 0; j < n; ++j) m.col(j) /= strength(j);
    const Eigen::MatrixXd sys = Eigen::MatrixXd::Identity(n, n) - damping * m;
    const Eigen::VectorXd rhs = Eigen::VectorXd::Constant(n, (1.0 - damping) / static_cast<double>(n));
    const Eigen::VectorXd r = sys.partialPivLu().solve(rhs);
    std::map<std::string, double> out;
    for (const auto& [tok, i] : idx) out[tok] = r(i);
    return out;
}

// ---- statistics ---------------------------------------------------------

inline double u_statistic(const std::vector<double>& a, const std::vector<double>& b) {
    double u = 0.0;
    for (double x : a) {
        for (double y : b) u += x > y ? 1.0 : (x == y ? 0.5 : 0.0);
    }
    return u;
}

// P(U >= observed) over every relabeling of the pooled values.
inline double mwu_exact_greater(const std::vector<double>& a, const std::vector<double>& b) {
    std::vector<double> pool(a);
    pool.insert(pool.end(), b.begin(), b.end());
    const double observed = u_statistic(a, b);
    std::vector<int> pick(pool.size(), 0);
    std::fill(pick.begin(), pick.begin() + static_cast<std::ptrdiff_t>(a.size()), 1);
    std::sort(pick.begin(), pick.end());
    double total = 0.0;
    double hits = 0.0;
    do {
        std::vector<double> x, y;
        for (std::size_t i = 0; i < pool.size(); ++i) (pick[i] ? x : y).push_back(pool[i]);
        total += 1.0;
        if (u_statistic(x, y) >= observed - 1e-9) hits += 1.0;
    } while (std::next_permutation(pick.begin(), pick.end()));
    return hits / total;
}

} // namespace oracle
