#pragma once

#include <cstddef>
#include <functional>
#include <limits>
#include <optional>
#include <set>
#include <span>
#include <string>
#include <vector>

#include "lgde/corpus.hpp"
#include "lgde/expanders.hpp"

namespace lgde {

struct Confusion {
    std::size_t tp = 0;
    std::size_t fp = 0;
    std::size_t tn = 0;
    std::size_t fn = 0;

    std::size_t total() const { return tp + fp + tn + fn; }
};

struct ClassScores {
    double precision = 0.0;
    double recall = 0.0;
    double f1 = 0.0;
};

struct EvalReport {
    double macro_precision = 0.0;
    double macro_recall = 0.0;
    double macro_f1 = 0.0;
    ClassScores positive; // class 1
    ClassScores negative; // class 0
    Confusion confusion;  // with class 1 as the positive class
    std::size_t dictionary_size = 0;
    std::size_t discovered_size = 0;
};

// f_W(d) = 1 iff the document shares a token with the word set. One entry
// per corpus document, labeled or not.
std::vector<int> classify(const std::set<std::string>& words, const LabeledCorpus& corpus);

// Per-class precision/recall/F1 for classes 1 and 0, averaged unweighted.
// A class nobody predicts gets precision 0 and F1 0, except when the class
// also has no true members, in which case all three scores are 1.
EvalReport macro_metrics(std::span<const int> predictions, std::span<const int> labels);

// Classifies with the full dictionary (or only its discovered words) and
// scores the labeled documents.
EvalReport evaluate(const Dictionary& dictionary, const LabeledCorpus& corpus, bool discovered_only = false);

struct WordLikelihood {
    std::string token;
    double p_true = 0.0;
    double p_false = 0.0;
    std::size_t count_true = 0;
    std::size_t count_false = 0;
    // p_true / p_false; +inf when only true documents contain the word.
    double lr = 0.0;
    // False when neither class contains the word (ratio undefined).
    bool defined = true;
};

// Haldane-style correction uses (count + 0.5) / (n + 1) for both probabilities.
std::vector<WordLikelihood> likelihood_ratios(const std::vector<std::string>& words, const LabeledCorpus& corpus,
                                              bool haldane = false);

// Median over defined ratios (+inf sorts above every finite value); nullopt
// when none is defined.
std::optional<double> median_likelihood_ratio(const std::vector<WordLikelihood>& table);

enum class Alternative { greater, less, two_sided };
enum class MwuMethod { automatic, exact, normal };

struct MannWhitneyResult {
    double u = 0.0;       // U statistic of sample a
    double p_value = 1.0;
    bool exact = false;
    bool zero_variance = false; // every value tied; p forced to 1
};

// Rank-sum test with midranks for ties. The exact null distribution is used
// when n_a * n_b <= 400 (automatic), otherwise a tie-corrected normal
// approximation with continuity correction.
MannWhitneyResult mann_whitney_u(std::span<const double> a, std::span<const double> b,
                                 Alternative alternative = Alternative::greater,
                                 MwuMethod method = MwuMethod::automatic);

inline constexpr std::size_t kExactMwuLimit = 400;

struct SweepOptions {
    std::size_t min_discovered = 0;
    std::size_t max_discovered = std::numeric_limits<std::size_t>::max();
    bool evaluate_discovered_only = false;
};

struct SweepEntry {
    ParamPoint params;
    std::size_t dictionary_size = 0;
    std::size_t discovered_size = 0;
    bool admissible = false;
    EvalReport report;
};

struct SweepResult {
    std::vector<SweepEntry> entries; // grid order
    std::size_t best = 0;            // index into entries
    Dictionary best_dictionary;
};

// Evaluates every grid point on the corpus, keeps those whose discovered
// count lies in [min_discovered, max_discovered], and picks the highest macro
// F1. Ties: smaller dictionary, then lexicographically smaller parameters.
SweepResult sweep(const std::vector<ParamPoint>& grid, const std::function<Dictionary(const ParamPoint&)>& expand,
                  const LabeledCorpus& corpus, const SweepOptions& options);

SweepResult sweep(const Expander& expander, const std::vector<ParamPoint>& grid, const LabeledCorpus& corpus,
                  const SweepOptions& options);

// Cartesian product of named value lists, first name varying slowest.
std::vector<ParamPoint> make_grid(const std::vector<std::pair<std::string, std::vector<double>>>& axes);

} // namespace lgde
