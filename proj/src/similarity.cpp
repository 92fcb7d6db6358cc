#include "lgde/similarity.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>

#include "lgde/error.hpp"

namespace lgde {

double cosine_similarity(std::span<const double> u, std::span<const double> v) {
    if (u.size() != v.size()) throw Error(ErrorKind::dimension_mismatch, "cosine of vectors of different length");
    double dot = 0.0;
    double uu = 0.0;
    double vv = 0.0;
    for (std::size_t i = 0; i < u.size(); ++i) {
        dot += u[i] * v[i];
        uu += u[i] * u[i];
        vv += v[i] * v[i];
    }
    if (uu == 0.0 || vv == 0.0) throw Error(ErrorKind::zero_norm, "cosine of a zero vector");
    return std::clamp(dot / (std::sqrt(uu) * std::sqrt(vv)), -1.0, 1.0);
}

double unit_cosine(std::span<const double> u, std::span<const double> v) {
    double dot = 0.0;
    for (std::size_t i = 0; i < u.size(); ++i) dot += u[i] * v[i];
    return std::clamp(dot, -1.0, 1.0);
}

PairwiseMatrices::PairwiseMatrices(const EmbeddingSpace& space)
    : n_(space.size()), tau_(n_ * n_, 0.0), duplicates_allowed_(space.duplicates_allowed()),
      vocab_(space.vocabulary()) {
    const auto n = static_cast<long long>(n_);
#pragma omp parallel for schedule(dynamic, 16)
    for (long long i = 0; i < n; ++i) {
        const auto ui = static_cast<std::size_t>(i);
        const auto row_i = space.row(ui);
        for (std::size_t j = ui + 1; j < n_; ++j) {
            const double raw = 1.0 - unit_cosine(row_i, space.row(j));
            tau_[ui * n_ + j] = raw;
            tau_[j * n_ + ui] = raw;
        }
    }
    max_raw_ = *std::max_element(tau_.begin(), tau_.end());
    if (!(max_raw_ > 0.0)) {
        throw Error(ErrorKind::degenerate_space, "all vectors coincide, normalized distances are undefined");
    }
    for (double& x : tau_) x /= max_raw_;
}

void write_matrix_tsv(std::ostream& out, const PairwiseMatrices& m, MatrixKind kind) {
    const auto& vocab = m.vocabulary();
    out << "token";
    for (const auto& t : vocab.tokens()) out << '\t' << t;
    out << '\n';
    char buf[32];
    for (std::size_t i = 0; i < m.size(); ++i) {
        out << vocab.token(i);
        for (std::size_t j = 0; j < m.size(); ++j) {
            const double x = kind == MatrixKind::tau ? m.tau(i, j) : m.s(i, j);
            std::snprintf(buf, sizeof buf, "%.17g", x);
            out << '\t' << buf;
        }
        out << '\n';
    }
}

} // namespace lgde
