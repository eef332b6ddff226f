#pragma once

#include <cstddef>
#include <vector>

#include "iqrip/distribution.hpp"

namespace iqrip {

class ToyModel;  // see iqrip/toy_lm.hpp

/// One generated sample. `prompt` is the seed context the tokens were
/// conditioned on (kept so the sample can be re-scored with the exact
/// generation-time contexts); the per-step sequences are optional and, when
/// present, match `tokens` in length.
struct Sample {
    std::vector<TokenId> prompt;
    std::vector<TokenId> tokens;
    std::vector<double> step_logprobs;             ///< nats; empty = absent
    std::vector<Distribution> step_distributions;  ///< model's raw per-step
                                                   ///< distributions; empty = absent
};

/// A low-entropy stretch of one sample: token positions [start, end) covered
/// by consecutive windows whose frequency entropy sits below the detection
/// threshold.
struct LoopSpan {
    std::size_t sample_index = 0;
    std::size_t start = 0;
    std::size_t end = 0;
};

/// Corpus-level evaluation summary.
struct MetricsReport {
    double perplexity = 0.0;
    double self_bleu4 = 0.0;
    double self_bleu5 = 0.0;
    double zipf = 0.0;
    double h_rep = 0.0;
    std::vector<LoopSpan> loop_spans;
};

/// Per-appearance trace of one token inside detected loops: how its predicted
/// probability, rank, and the step distribution's entropy evolve as the loop
/// repeats.
struct TrajectoryPoint {
    std::size_t appearance = 0;  ///< 0-based appearance index, strictly increasing
    double prob = 0.0;           ///< model probability of the token at that step
    std::size_t rank = 0;        ///< 1-based rank in the step distribution
    double entropy = 0.0;        ///< entropy of the step distribution, nats
};
struct Trajectory {
    TokenId word = 0;
    std::vector<TrajectoryPoint> points;
};

/// Entropy (nats) of the token-frequency distribution of one window:
/// p(w) = count(w) / window length, h_rep = -sum p ln p. A window of one
/// repeated token scores 0; a window of all-distinct tokens scores
/// ln(window length).
double h_rep(const std::vector<TokenId>& window);

/// Mean h_rep over all stride-1 sliding windows of length `window_len`.
/// A sample shorter than the window is scored as a single whole-sample
/// window. Empty input is an error.
double sample_h_rep(const std::vector<TokenId>& tokens, std::size_t window_len);

/// Find repetitive stretches: window positions with h_rep < threshold,
/// maximal consecutive runs merged. Each returned span is the token range
/// [first window start, last window start + window_len). `sample_index` of
/// the returned spans is left 0; callers tag it.
std::vector<LoopSpan> detect_loops(const std::vector<TokenId>& tokens,
                                   std::size_t window_len = 200,
                                   double threshold = 2.0);

/// Within each sample's detected loop spans, trace every token appearing more
/// than `min_count` times: one point per appearance carrying the step
/// distribution's probability for that token, its rank, and the
/// distribution's entropy. Samples must carry step_distributions.
std::vector<Trajectory> extract_trajectories(const std::vector<Sample>& samples,
                                             std::size_t window_len = 200,
                                             std::size_t min_count = 30);

/// Zipf coefficient of the pooled corpus: pool token frequencies across all
/// samples, sort descending, and fit ln(frequency) against ln(rank) by least
/// squares over every rank (all tokens with frequency >= 1). Returns the
/// negated slope, so a steeper (more repetitive) frequency decay gives a
/// larger coefficient. Fewer than two distinct tokens is an error.
double zipf_coefficient(const std::vector<Sample>& samples);

/// Mean over samples of BLEU of each sample against the others:
/// uniform n-gram weights up to max_ngram (4 or 5), reference n-gram counts
/// clipped by the per-gram maximum over the references, closest-reference
/// brevity penalty (ties to the shorter reference), and an epsilon floor of
/// 1e-9 on zero n-gram matches. `ref_count` = 0 scores against all other
/// samples; otherwise against the next `ref_count` samples cyclically.
/// Requires at least 2 samples. Scores are computed independently per sample
/// (in parallel) and reduced in index order, so results are
/// schedule-independent.
double self_bleu(const std::vector<Sample>& samples, int max_ngram,
                 std::size_t ref_count);

/// exp of the mean per-token negative log likelihood (nats) of the pooled
/// samples under the model, each sample scored autoregressively from its own
/// prompt. A zero-probability token would be an infinite-perplexity error,
/// which the toy model's smoothing rules out.
double perplexity(const ToyModel& model, const std::vector<Sample>& samples);

}  // namespace iqrip
