#pragma once

// Constructed embedding spaces and corpora shared by the tests.

#include <cmath>
#include <cstddef>
#include <fstream>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "lgde/corpus.hpp"

namespace fixture {

struct Space {
    std::vector<std::string> words;
    std::vector<std::vector<double>> rows;
};

inline std::vector<double> axis_combo(std::size_t dim, const std::vector<std::pair<std::size_t, double>>& parts) {
    std::vector<double> r(dim, 0.0);
    for (const auto& [i, x] : parts) r[i] += x;
    return r;
}

// Seed w, intermediate u and target v with cos(w,u) = cos(u,v) = 0.62 and
// cos(w,v) = 0.50, six distractors at cosine 0.55 from w, and a close partner
// for each distractor (cosine 0.9 to it, 0.495 to w).
inline Space chain() {
    const std::size_t dim = 24;
    const double s1 = std::sqrt(1.0 - 0.62 * 0.62);
    const double a = (0.62 - 0.62 * 0.5) / s1;
    const double b = std::sqrt(1.0 - 0.25 - a * a);
    Space s;
    s.words = {"w", "u", "v"};
    s.rows = {axis_combo(dim, {{0, 1.0}}), axis_combo(dim, {{0, 0.62}, {1, s1}}),
              axis_combo(dim, {{0, 0.5}, {1, a}, {2, b}})};
    const double dc = 0.55;
    for (std::size_t i = 0; i < 6; ++i) {
        s.words.push_back("d" + std::to_string(i));
        s.rows.push_back(axis_combo(dim, {{0, dc}, {3 + i, std::sqrt(1.0 - dc * dc)}}));
    }
    for (std::size_t i = 0; i < 6; ++i) {
        auto r = s.rows[3 + i];
        for (auto& x : r) x *= 0.9;
        r[9 + i] = std::sqrt(1.0 - 0.81);
        s.words.push_back("p" + std::to_string(i));
        s.rows.push_back(r);
    }
    return s;
}

// Synthetic topic-classification benchmark. Topic documents use words spread
// along an arc leaving the seed direction, so the far end of the arc is only
// reachable through a chain of close neighbours. Off-topic documents use
// "confounder" words that sit closer to the seeds than most of the arc but
// belong to their own tight clusters.
struct Benchmark {
    Space space;
    std::vector<std::string> seeds;
    std::vector<lgde::Document> train;
    std::vector<lgde::Document> test;
};

inline std::vector<double> unit(std::vector<double> v) {
    double n = 0.0;
    for (double x : v) n += x * x;
    n = std::sqrt(n);
    for (double& x : v) x /= n;
    return v;
}

inline Benchmark benchmark(std::uint64_t seed = 7, std::size_t n_docs = 500) {
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> g(0.0, 1.0);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    const std::size_t dim = 64;
    const double pi = std::acos(-1.0);
    Benchmark b;
    auto& s = b.space;

    auto noisy = [&](std::vector<double> base, double scale) {
        for (auto& x : base) x += scale * g(rng) / std::sqrt(static_cast<double>(dim));
        return unit(std::move(base));
    };
    auto arc = [&](double deg, std::size_t from, std::size_t to) {
        const double th = deg * pi / 180.0;
        return axis_combo(dim, {{from, std::cos(th)}, {to, std::sin(th)}});
    };

    for (std::size_t i = 0; i < 2; ++i) {
        s.words.push_back("seed" + std::to_string(i));
        s.rows.push_back(noisy(arc(3.0 * static_cast<double>(i), 0, 1), 0.05));
        b.seeds.push_back(s.words.back());
    }
    std::vector<std::size_t> topic;
    for (std::size_t j = 1; j <= 10; ++j) {
        for (std::size_t r = 0; r < 2; ++r) {
            topic.push_back(s.words.size());
            s.words.push_back("topic" + std::to_string(j) + (r ? "b" : "a"));
            s.rows.push_back(noisy(arc(9.0 * static_cast<double>(j), 0, 1), 0.12));
        }
    }
    std::vector<std::size_t> confound;
    for (std::size_t i = 0; i < 8; ++i) {
        const std::size_t axis = 2 + i;
        const auto centre = arc(22.0, 0, axis);
        confound.push_back(s.words.size());
        s.words.push_back("conf" + std::to_string(i));
        s.rows.push_back(noisy(centre, 0.05));
        for (std::size_t p = 0; p < 3; ++p) {
            confound.push_back(s.words.size());
            s.words.push_back("conf" + std::to_string(i) + "_" + std::to_string(p));
            auto r = centre;
            r[axis + 8] += 0.35;
            r[20 + 3 * i + p] += 0.25;
            s.rows.push_back(noisy(r, 0.05));
        }
    }
    std::vector<std::size_t> filler;
    for (std::size_t i = 0; i < 150; ++i) {
        filler.push_back(s.words.size());
        s.words.push_back("fill" + std::to_string(i));
        std::vector<double> r(dim);
        for (auto& x : r) x = g(rng);
        r[0] = 0.0;
        r[1] = 0.0;
        s.rows.push_back(unit(r));
    }

    auto pick = [&](const std::vector<std::size_t>& from) {
        return s.words[from[std::uniform_int_distribution<std::size_t>(0, from.size() - 1)(rng)]];
    };
    for (std::size_t d = 0; d < n_docs; ++d) {
        lgde::Document doc;
        doc.id = "doc" + std::to_string(d);
        const bool positive = u(rng) < 0.4;
        doc.label = positive ? 1 : 0;
        for (int f = 0; f < 8; ++f) doc.tokens.push_back(pick(filler));
        if (positive) {
            if (u(rng) < 0.25) doc.tokens.push_back(b.seeds[d % 2]);
            doc.tokens.push_back(pick(topic));
            if (u(rng) < 0.5) doc.tokens.push_back(pick(topic));
        } else if (u(rng) < 0.6) {
            doc.tokens.push_back(pick(confound));
            if (u(rng) < 0.1) doc.tokens.push_back(b.seeds[d % 2]);
        }
        std::shuffle(doc.tokens.begin(), doc.tokens.end(), rng);
        (d % 2 == 0 ? b.train : b.test).push_back(std::move(doc));
    }
    return b;
}

inline std::string embedding_text(const Space& s) {
    std::ostringstream out;
    out.precision(17);
    out << s.words.size() << ' ' << s.rows.front().size() << '\n';
    for (std::size_t i = 0; i < s.words.size(); ++i) {
        out << s.words[i];
        for (double x : s.rows[i]) out << ' ' << x;
        out << '\n';
    }
    return out.str();
}

inline std::string corpus_text(const std::vector<lgde::Document>& docs) {
    std::string out;
    for (const auto& d : docs) {
        nlohmann::json j = {{"id", d.id}, {"tokens", d.tokens}};
        j["label"] = d.label ? nlohmann::json(*d.label) : nlohmann::json(nullptr);
        out += j.dump() + "\n";
    }
    return out;
}

inline void write_file(const std::string& path, const std::string& text) {
    std::ofstream(path, std::ios::binary) << text;
}

} // namespace fixture
