#include "lgde/eval.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "lgde/error.hpp"
#include "lgde/parallel.hpp"

namespace lgde {

namespace {

ClassScores class_scores(std::size_t hits, std::size_t predicted, std::size_t actual) {
    if (predicted == 0) {
        if (actual == 0) return {1.0, 1.0, 1.0};
        return {0.0, 0.0, 0.0};
    }
    ClassScores s;
    s.precision = static_cast<double>(hits) / static_cast<double>(predicted);
    s.recall = actual > 0 ? static_cast<double>(hits) / static_cast<double>(actual) : 0.0;
    s.f1 = (s.precision + s.recall) > 0.0 ? 2.0 * s.precision * s.recall / (s.precision + s.recall) : 0.0;
    return s;
}

std::vector<double> param_values(const ParamPoint& p) {
    std::vector<double> out;
    out.reserve(p.size());
    for (const auto& kv : p) out.push_back(kv.second);
    return out;
}

// Tail probabilities of the rank sum of a random subset of size m drawn from
// the pooled (doubled, integral) ranks: returns counts indexed by sum.
std::vector<double> subset_sum_counts(const std::vector<long long>& ranks2, std::size_t m) {
    const long long total = std::accumulate(ranks2.begin(), ranks2.end(), 0LL);
    const auto width = static_cast<std::size_t>(total) + 1;
    // dp[j * width + s]: number of j-subsets with doubled rank sum s.
    std::vector<double> dp((m + 1) * width, 0.0);
    dp[0] = 1.0;
    for (std::size_t i = 0; i < ranks2.size(); ++i) {
        const auto r = static_cast<std::size_t>(ranks2[i]);
        for (std::size_t j = std::min(m, i + 1); j >= 1; --j) {
            const double* from = dp.data() + (j - 1) * width;
            double* to = dp.data() + j * width;
            for (std::size_t s = width; s-- > r;) to[s] += from[s - r];
        }
    }
    return {dp.begin() + static_cast<std::ptrdiff_t>(m * width), dp.end()};
}

} // namespace

std::vector<int> classify(const std::set<std::string>& words, const LabeledCorpus& corpus) {
    std::vector<int> out;
    out.reserve(corpus.size());
    for (const auto& doc : corpus.documents()) {
        const bool hit = std::any_of(doc.token_set.begin(), doc.token_set.end(),
                                     [&](const std::string& t) { return words.count(t) > 0; });
        out.push_back(hit ? 1 : 0);
    }
    return out;
}

EvalReport macro_metrics(std::span<const int> predictions, std::span<const int> labels) {
    if (predictions.size() != labels.size()) {
        throw Error(ErrorKind::invalid_argument, "predictions and labels differ in length");
    }
    if (labels.empty()) throw Error(ErrorKind::empty_input, "no labeled documents to score");
    EvalReport r;
    for (std::size_t i = 0; i < labels.size(); ++i) {
        const int y = labels[i];
        const int f = predictions[i];
        if ((y != 0 && y != 1) || (f != 0 && f != 1)) {
            throw Error(ErrorKind::invalid_label, "labels and predictions must be 0 or 1");
        }
        if (f == 1 && y == 1) ++r.confusion.tp;
        if (f == 1 && y == 0) ++r.confusion.fp;
        if (f == 0 && y == 0) ++r.confusion.tn;
        if (f == 0 && y == 1) ++r.confusion.fn;
    }
    const auto& c = r.confusion;
    r.positive = class_scores(c.tp, c.tp + c.fp, c.tp + c.fn);
    r.negative = class_scores(c.tn, c.tn + c.fn, c.tn + c.fp);
    r.macro_precision = 0.5 * (r.positive.precision + r.negative.precision);
    r.macro_recall = 0.5 * (r.positive.recall + r.negative.recall);
    r.macro_f1 = 0.5 * (r.positive.f1 + r.negative.f1);
    return r;
}

EvalReport evaluate(const Dictionary& dictionary, const LabeledCorpus& corpus, bool discovered_only) {
    const auto words = discovered_only ? dictionary.discovered_set() : dictionary.word_set();
    const auto all = classify(words, corpus);
    std::vector<int> predictions;
    std::vector<int> labels;
    for (std::size_t i = 0; i < corpus.size(); ++i) {
        const auto& label = corpus.documents()[i].label;
        if (!label) continue;
        predictions.push_back(all[i]);
        labels.push_back(*label);
    }
    auto report = macro_metrics(predictions, labels);
    report.dictionary_size = dictionary.size();
    report.discovered_size = dictionary.discovered.size();
    return report;
}

std::vector<WordLikelihood> likelihood_ratios(const std::vector<std::string>& words, const LabeledCorpus& corpus,
                                              bool haldane) {
    if (corpus.n_true() == 0 || corpus.n_false() == 0) {
        throw Error(ErrorKind::missing_label_class, "likelihood ratios need documents of both labels");
    }
    const auto n_true = static_cast<double>(corpus.n_true());
    const auto n_false = static_cast<double>(corpus.n_false());
    std::vector<WordLikelihood> out;
    out.reserve(words.size());
    for (const auto& word : words) {
        WordLikelihood w;
        w.token = word;
        for (const auto& doc : corpus.documents()) {
            if (!doc.label || !doc.contains(word)) continue;
            if (*doc.label == 1) {
                ++w.count_true;
            } else {
                ++w.count_false;
            }
        }
        if (haldane) {
            w.p_true = (static_cast<double>(w.count_true) + 0.5) / (n_true + 1.0);
            w.p_false = (static_cast<double>(w.count_false) + 0.5) / (n_false + 1.0);
        } else {
            w.p_true = static_cast<double>(w.count_true) / n_true;
            w.p_false = static_cast<double>(w.count_false) / n_false;
        }
        if (w.p_false > 0.0) {
            w.lr = w.p_true / w.p_false;
        } else if (w.p_true > 0.0) {
            w.lr = std::numeric_limits<double>::infinity();
        } else {
            w.defined = false;
            w.lr = std::numeric_limits<double>::quiet_NaN();
        }
        out.push_back(std::move(w));
    }
    return out;
}

std::optional<double> median_likelihood_ratio(const std::vector<WordLikelihood>& table) {
    std::vector<double> values;
    for (const auto& w : table) {
        if (w.defined) values.push_back(w.lr);
    }
    if (values.empty()) return std::nullopt;
    std::sort(values.begin(), values.end());
    const auto n = values.size();
    if (n % 2 == 1) return values[n / 2];
    const double lo = values[n / 2 - 1];
    const double hi = values[n / 2];
    if (std::isinf(hi)) return std::isinf(lo) ? lo : hi;
    return 0.5 * (lo + hi);
}

MannWhitneyResult mann_whitney_u(std::span<const double> a, std::span<const double> b, Alternative alternative,
                                 MwuMethod method) {
    if (a.empty() || b.empty()) throw Error(ErrorKind::empty_input, "Mann-Whitney U needs two non-empty samples");
    const std::size_t na = a.size();
    const std::size_t nb = b.size();
    const std::size_t n = na + nb;

    std::vector<std::pair<double, int>> pooled;
    pooled.reserve(n);
    for (double x : a) pooled.emplace_back(x, 0);
    for (double x : b) pooled.emplace_back(x, 1);
    for (const auto& p : pooled) {
        if (std::isnan(p.first)) throw Error(ErrorKind::invalid_argument, "sample contains NaN");
    }
    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::stable_sort(order.begin(), order.end(),
                     [&](std::size_t x, std::size_t y) { return pooled[x].first < pooled[y].first; });

    // Doubled midranks keep everything integral: ties over positions
    // [i, j) (1-based i+1..j) share rank (i + 1 + j) / 2.
    std::vector<long long> ranks2(n);
    double tie_term = 0.0;
    for (std::size_t i = 0; i < n;) {
        std::size_t j = i + 1;
        while (j < n && pooled[order[j]].first == pooled[order[i]].first) ++j;
        const auto r2 = static_cast<long long>(i + 1 + j);
        for (std::size_t p = i; p < j; ++p) ranks2[order[p]] = r2;
        const auto t = static_cast<double>(j - i);
        tie_term += t * t * t - t;
        i = j;
    }

    long long sum_a2 = 0;
    for (std::size_t i = 0; i < na; ++i) sum_a2 += ranks2[i];
    MannWhitneyResult result;
    const double dna = static_cast<double>(na);
    const double dnb = static_cast<double>(nb);
    result.u = static_cast<double>(sum_a2) / 2.0 - dna * (dna + 1.0) / 2.0;

    if (tie_term == static_cast<double>(n) * n * n - static_cast<double>(n)) {
        // A single tie group: no ordering information at all.
        result.zero_variance = true;
        result.p_value = 1.0;
        return result;
    }

    const bool exact = method == MwuMethod::exact || (method == MwuMethod::automatic && na * nb <= kExactMwuLimit);
    result.exact = exact;
    if (exact) {
        // Count subsets of the smaller group; map its sums back to group a.
        const bool use_a = na <= nb;
        const std::size_t m = use_a ? na : nb;
        const auto counts = subset_sum_counts(ranks2, m);
        const long long total2 = std::accumulate(ranks2.begin(), ranks2.end(), 0LL);
        double all = 0.0;
        double ge = 0.0; // P(S_a >= observed)
        double le = 0.0; // P(S_a <= observed)
        for (std::size_t s = 0; s < counts.size(); ++s) {
            if (counts[s] == 0.0) continue;
            const long long sa = use_a ? static_cast<long long>(s) : total2 - static_cast<long long>(s);
            all += counts[s];
            if (sa >= sum_a2) ge += counts[s];
            if (sa <= sum_a2) le += counts[s];
        }
        ge /= all;
        le /= all;
        switch (alternative) {
        case Alternative::greater: result.p_value = ge; break;
        case Alternative::less: result.p_value = le; break;
        case Alternative::two_sided: result.p_value = std::min(1.0, 2.0 * std::min(ge, le)); break;
        }
        return result;
    }

    const double dn = static_cast<double>(n);
    const double mean = dna * dnb / 2.0;
    const double var = dna * dnb / 12.0 * ((dn + 1.0) - tie_term / (dn * (dn - 1.0)));
    const double sd = std::sqrt(var);
    switch (alternative) {
    case Alternative::greater:
        result.p_value = 0.5 * std::erfc((result.u - mean - 0.5) / sd / std::sqrt(2.0));
        break;
    case Alternative::less:
        result.p_value = 0.5 * std::erfc(-(result.u - mean + 0.5) / sd / std::sqrt(2.0));
        break;
    case Alternative::two_sided:
        result.p_value = std::min(1.0, std::erfc((std::abs(result.u - mean) - 0.5) / sd / std::sqrt(2.0)));
        break;
    }
    result.p_value = std::clamp(result.p_value, 0.0, 1.0);
    return result;
}

SweepResult sweep(const std::vector<ParamPoint>& grid, const std::function<Dictionary(const ParamPoint&)>& expand,
                  const LabeledCorpus& corpus, const SweepOptions& options) {
    if (grid.empty()) throw Error(ErrorKind::empty_input, "parameter grid is empty");
    if (options.min_discovered > options.max_discovered) {
        throw Error(ErrorKind::invalid_argument, "min_discovered exceeds max_discovered");
    }
    SweepResult result;
    result.entries.resize(grid.size());
    std::vector<Dictionary> dictionaries(grid.size());
    parallel_for(grid.size(), [&](std::size_t i) {
        auto dict = expand(grid[i]);
        auto& e = result.entries[i];
        e.params = grid[i];
        e.dictionary_size = dict.size();
        e.discovered_size = dict.discovered.size();
        e.admissible = e.discovered_size >= options.min_discovered && e.discovered_size <= options.max_discovered;
        e.report = evaluate(dict, corpus, options.evaluate_discovered_only);
        dictionaries[i] = std::move(dict);
    });

    std::optional<std::size_t> best;
    for (std::size_t i = 0; i < result.entries.size(); ++i) {
        const auto& e = result.entries[i];
        if (!e.admissible) continue;
        if (!best) {
            best = i;
            continue;
        }
        const auto& b = result.entries[*best];
        if (e.report.macro_f1 != b.report.macro_f1) {
            if (e.report.macro_f1 > b.report.macro_f1) best = i;
        } else if (e.dictionary_size != b.dictionary_size) {
            if (e.dictionary_size < b.dictionary_size) best = i;
        } else if (param_values(e.params) < param_values(b.params)) {
            best = i;
        }
    }
    if (!best) {
        std::set<std::size_t> sizes;
        for (const auto& e : result.entries) sizes.insert(e.discovered_size);
        std::string listing;
        for (auto s : sizes) listing += (listing.empty() ? "" : ", ") + std::to_string(s);
        throw Error(ErrorKind::no_admissible_point,
                    "no grid point discovers between " + std::to_string(options.min_discovered) + " and " +
                        std::to_string(options.max_discovered) + " words; attained sizes: " + listing);
    }
    result.best = *best;
    result.best_dictionary = std::move(dictionaries[*best]);
    return result;
}

SweepResult sweep(const Expander& expander, const std::vector<ParamPoint>& grid, const LabeledCorpus& corpus,
                  const SweepOptions& options) {
    return sweep(grid, [&](const ParamPoint& p) { return expander.expand(p); }, corpus, options);
}

std::vector<ParamPoint> make_grid(const std::vector<std::pair<std::string, std::vector<double>>>& axes) {
    std::vector<ParamPoint> grid{ParamPoint{}};
    for (const auto& [name, values] : axes) {
        if (values.empty()) throw Error(ErrorKind::empty_input, "no values for parameter '" + name + "'");
        std::vector<ParamPoint> next;
        next.reserve(grid.size() * values.size());
        for (const auto& point : grid) {
            for (double v : values) {
                auto p = point;
                p.emplace_back(name, v);
                next.push_back(std::move(p));
            }
        }
        grid = std::move(next);
    }
    return grid;
}

} // namespace lgde
