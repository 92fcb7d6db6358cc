#include "lgde/cknn.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <deque>
#include <sstream>
#include <unordered_map>

#include "lgde/error.hpp"

namespace lgde {

SemanticGraph::SemanticGraph(Vocabulary vocabulary, const std::vector<WeightedEdge>& edges)
    : vocab_(std::move(vocabulary)), adjacency_(vocab_.size()) {
    const auto n = vocab_.size();
    for (const auto& e : edges) {
        if (e.a >= n || e.b >= n) throw Error(ErrorKind::invalid_argument, "edge endpoint out of range");
        if (e.a == e.b) throw Error(ErrorKind::invalid_argument, "self-loop on '" + vocab_.token(e.a) + "'");
        if (!(e.weight >= 0.0) || !std::isfinite(e.weight)) {
            throw Error(ErrorKind::invalid_argument, "edge weight must be finite and non-negative");
        }
        adjacency_[e.a].push_back({e.b, e.weight});
        adjacency_[e.b].push_back({e.a, e.weight});
    }
    for (std::size_t i = 0; i < n; ++i) {
        auto& adj = adjacency_[i];
        std::sort(adj.begin(), adj.end(), [](const Neighbor& x, const Neighbor& y) { return x.index < y.index; });
        std::vector<Neighbor> unique;
        unique.reserve(adj.size());
        for (const auto& nb : adj) {
            if (!unique.empty() && unique.back().index == nb.index) {
                if (unique.back().weight != nb.weight) {
                    throw Error(ErrorKind::invalid_argument, "conflicting weights for edge '" + vocab_.token(i) +
                                                                 "' - '" + vocab_.token(nb.index) + "'");
                }
                continue;
            }
            unique.push_back(nb);
        }
        adj = std::move(unique);
        edge_count_ += adj.size();
    }
    edge_count_ /= 2;
}

std::optional<double> SemanticGraph::weight(std::size_t i, std::size_t j) const {
    const auto& adj = adjacency_.at(i);
    auto it = std::lower_bound(adj.begin(), adj.end(), j,
                               [](const Neighbor& nb, std::size_t idx) { return nb.index < idx; });
    if (it == adj.end() || it->index != j) return std::nullopt;
    return it->weight;
}

std::vector<WeightedEdge> SemanticGraph::edges() const {
    std::vector<WeightedEdge> out;
    out.reserve(edge_count_);
    for (std::size_t i = 0; i < adjacency_.size(); ++i) {
        for (const auto& nb : adjacency_[i]) {
            if (nb.index > i) out.push_back({i, nb.index, nb.weight});
        }
    }
    return out;
}

std::size_t SemanticGraph::isolated_count() const {
    return static_cast<std::size_t>(
        std::count_if(adjacency_.begin(), adjacency_.end(), [](const auto& adj) { return adj.empty(); }));
}

std::size_t SemanticGraph::component_count() const {
    std::vector<char> seen(size(), 0);
    std::size_t components = 0;
    for (std::size_t s = 0; s < size(); ++s) {
        if (seen[s]) continue;
        ++components;
        for (auto v : connected_component_of(*this, s)) seen[v] = 1;
    }
    return components;
}

KthNeighbor kth_neighbor_distance(const PairwiseMatrices& m, std::size_t i, std::size_t k) {
    const auto n = m.size();
    if (i >= n) throw Error(ErrorKind::invalid_argument, "node index out of range");
    if (k < 1 || k > n - 1) {
        throw Error(ErrorKind::invalid_argument, "k=" + std::to_string(k) + " outside [1, " + std::to_string(n - 1) + "]");
    }
    const auto row = m.tau_row(i);
    std::vector<std::pair<double, std::size_t>> others;
    others.reserve(n - 1);
    for (std::size_t j = 0; j < n; ++j) {
        if (j != i) others.emplace_back(row[j], j);
    }
    std::nth_element(others.begin(), others.begin() + static_cast<std::ptrdiff_t>(k - 1), others.end());
    const auto& kth = others[k - 1];
    return {kth.second, kth.first};
}

SemanticGraph build_cknn(const PairwiseMatrices& m, std::size_t k, double delta) {
    const auto n = m.size();
    if (k < 1 || k > n - 1) {
        throw Error(ErrorKind::invalid_argument, "k=" + std::to_string(k) + " outside [1, " + std::to_string(n - 1) + "]");
    }
    if (!(delta > 0.0) || !std::isfinite(delta)) throw Error(ErrorKind::invalid_argument, "delta must be positive");

    std::vector<double> kth(n);
    const auto sn = static_cast<long long>(n);
#pragma omp parallel for schedule(dynamic, 16)
    for (long long i = 0; i < sn; ++i) {
        kth[static_cast<std::size_t>(i)] = kth_neighbor_distance(m, static_cast<std::size_t>(i), k).distance;
    }

    std::vector<std::size_t> zero_nodes;
    for (std::size_t i = 0; i < n; ++i) {
        if (kth[i] == 0.0) zero_nodes.push_back(i);
    }
    if (!zero_nodes.empty() && !m.duplicates_allowed()) {
        std::string names;
        for (std::size_t z = 0; z < zero_nodes.size() && z < 10; ++z) {
            names += (z ? ", " : "") + m.vocabulary().token(zero_nodes[z]);
        }
        throw Error(ErrorKind::zero_kth_distance, std::to_string(zero_nodes.size()) + " node(s): " + names);
    }

    std::vector<std::vector<WeightedEdge>> per_row(n);
#pragma omp parallel for schedule(dynamic, 16)
    for (long long si = 0; si < sn; ++si) {
        const auto i = static_cast<std::size_t>(si);
        const auto row = m.tau_row(i);
        for (std::size_t j = i + 1; j < n; ++j) {
            if (row[j] < delta * std::sqrt(kth[i] * kth[j])) per_row[i].push_back({i, j, m.s(i, j)});
        }
    }
    std::vector<WeightedEdge> edges;
    for (auto& r : per_row) edges.insert(edges.end(), r.begin(), r.end());

    SemanticGraph graph(m.vocabulary(), edges);
    graph.k = k;
    graph.delta = delta;
    graph.zero_distance_nodes = std::move(zero_nodes);
    return graph;
}

std::vector<std::size_t> connected_component_of(const SemanticGraph& graph, std::size_t i) {
    if (i >= graph.size()) throw Error(ErrorKind::invalid_argument, "node index out of range");
    std::vector<char> seen(graph.size(), 0);
    std::deque<std::size_t> queue{i};
    seen[i] = 1;
    std::vector<std::size_t> out;
    while (!queue.empty()) {
        const auto v = queue.front();
        queue.pop_front();
        out.push_back(v);
        for (const auto& nb : graph.neighbors(v)) {
            if (!seen[nb.index]) {
                seen[nb.index] = 1;
                queue.push_back(nb.index);
            }
        }
    }
    std::sort(out.begin(), out.end());
    return out;
}

namespace {

std::string format_double(double x) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.17g", x);
    return buf;
}

} // namespace

void write_edge_list(std::ostream& out, const SemanticGraph& graph) {
    out << "# N=" << graph.size();
    if (graph.k) out << " k=" << *graph.k;
    if (graph.delta) out << " delta=" << format_double(*graph.delta);
    out << '\n';
    const auto& vocab = graph.vocabulary();
    for (const auto& token : vocab.tokens()) out << "#node\t" << token << '\n';
    for (const auto& e : graph.edges()) {
        out << vocab.token(e.a) << '\t' << vocab.token(e.b) << '\t' << format_double(e.weight) << '\n';
    }
}

std::string format_edge_list(const SemanticGraph& graph) {
    std::ostringstream ss;
    write_edge_list(ss, graph);
    return ss.str();
}

SemanticGraph parse_edge_list(std::string_view content) {
    std::vector<std::string> tokens;
    std::unordered_map<std::string, std::size_t> index;
    auto intern = [&](std::string_view t) {
        auto [it, inserted] = index.emplace(std::string(t), tokens.size());
        if (inserted) tokens.emplace_back(t);
        return it->second;
    };

    std::optional<std::size_t> k;
    std::optional<double> delta;
    std::optional<std::size_t> declared_n;
    std::vector<WeightedEdge> edges;
    std::size_t line_no = 0;
    std::size_t start = 0;
    while (start < content.size()) {
        auto end = content.find('\n', start);
        if (end == std::string_view::npos) end = content.size();
        auto line = content.substr(start, end - start);
        start = end + 1;
        ++line_no;
        if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
        if (line.empty()) continue;
        const auto where = "line " + std::to_string(line_no);
        if (line.starts_with("#node\t")) {
            const auto token = line.substr(6);
            if (token.empty()) throw Error(ErrorKind::parse, where + ": empty node token");
            if (index.count(std::string(token))) throw Error(ErrorKind::duplicate_token, std::string(token));
            intern(token);
            continue;
        }
        if (line.front() == '#') {
            std::istringstream ss{std::string(line.substr(1))};
            std::string field;
            while (ss >> field) {
                const auto eq = field.find('=');
                if (eq == std::string::npos) continue;
                const auto key = field.substr(0, eq);
                const auto value = field.substr(eq + 1);
                try {
                    if (key == "N") declared_n = std::stoull(value);
                    if (key == "k") k = std::stoull(value);
                    if (key == "delta") delta = std::stod(value);
                } catch (const std::exception&) {
                    throw Error(ErrorKind::parse, where + ": bad header field '" + field + "'");
                }
            }
            continue;
        }
        const auto t1 = line.find('\t');
        const auto t2 = t1 == std::string_view::npos ? t1 : line.find('\t', t1 + 1);
        if (t2 == std::string_view::npos || line.find('\t', t2 + 1) != std::string_view::npos) {
            throw Error(ErrorKind::parse, where + ": expected token_i<TAB>token_j<TAB>weight");
        }
        double w = 0.0;
        const auto ws = line.substr(t2 + 1);
        auto [ptr, ec] = std::from_chars(ws.data(), ws.data() + ws.size(), w);
        if (ec != std::errc() || ptr != ws.data() + ws.size()) {
            throw Error(ErrorKind::parse, where + ": bad weight '" + std::string(ws) + "'");
        }
        const auto a = intern(line.substr(0, t1));
        const auto b = intern(line.substr(t1 + 1, t2 - t1 - 1));
        edges.push_back({a, b, w});
    }
    if (declared_n && *declared_n != tokens.size()) {
        throw Error(ErrorKind::parse, "header declares N=" + std::to_string(*declared_n) + " but " +
                                          std::to_string(tokens.size()) + " nodes were read");
    }
    SemanticGraph graph(Vocabulary(std::move(tokens)), edges);
    graph.k = k;
    graph.delta = delta;
    return graph;
}

SemanticGraph load_edge_list(const std::filesystem::path& path) { return parse_edge_list(read_file(path)); }

} // namespace lgde
